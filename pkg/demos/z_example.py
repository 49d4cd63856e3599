"""
An unbounded example with no cyclic obstruction
===============================================

Spacers are driven by a pairing function, so every prime eventually
breaks the divisibility condition. The weak mixing verdict stays
Unknown here; the known answer is attached for reference.
"""

from rankone import family_spec
from rankone.factors import has_finite_factor, z_spacer_at
from rankone.mixing import decide_weak_mixing
from rankone.oracle import check_lemma_suite
from rankone.params import length_of

z = family_spec("z_example")
print([length_of(z, n) for n in range(7)])
print([z_spacer_at(z, m) for m in range(6)])

for p in (2, 3, 5, 7):
    v = has_finite_factor(z, p)
    print(p, v.status.value, v.certificate.payload["witnesses"][:3])

print(decide_weak_mixing(z).to_dict())

# consecutive distinct n-block lengths stay at least |v_n| apart
rep = check_lemma_suite(z, 2, 6)
print(rep.lemmas["vndifference"].notes)
