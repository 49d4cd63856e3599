"""
Cyclic factors of a bounded rank-one subshift
=============================================

The periodic schedule [(2,[1]), (2,[3])] keeps every block length even,
so Z/2Z is a factor. The factor map reads off -k mod 2 from an anchor.
"""

from rankone import odd_pair
from rankone.factors import factor_map_eval, has_finite_factor, mef, p_max
from rankone.parser import expected_occurrences
from rankone.words import build_word

op = odd_pair()
print(p_max(op))
print(mef(op).to_dict())

for p in (2, 3, 4):
    v = has_finite_factor(op, p)
    print(p, v.status.value, v.certificate.rule)

# shifting a window by one moves the factor value by one
text = build_word(op, 5)
for o in range(6):
    w = text[o : o + 12]
    print(o, w, factor_map_eval(op, 2, expected_occurrences(w, op, 0, 5)))
