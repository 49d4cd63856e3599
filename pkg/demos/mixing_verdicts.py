"""
Weak mixing and mixing verdicts for the built-in families
=========================================================

Verdicts are three-valued. Each decided verdict carries a certificate
that the oracle replays independently.
"""

from rankone import family_spec
from rankone.mixing import decide_mixing, decide_weak_mixing, empirical_mixing_report
from rankone.oracle import verify_certificate

for name in ["chacon", "staircase", "even_staircase", "z_example", "xp:2", "yp:2"]:
    fam, _, p = name.partition(":")
    spec = family_spec(fam, int(p) if p else None)
    wm, mx = decide_weak_mixing(spec), decide_mixing(spec)
    replay = [verify_certificate(spec, v).passed for v in (wm, mx) if v.status.value != "Unknown"]
    print(f"{name:15s} weak={wm.status.value:8s} mixing={mx.status.value:8s} replays={replay}")
    if wm.known:
        print("   known:", wm.known)

# saturation of 0-block lengths: evidence inside a finite word only
rep = empirical_mixing_report(family_spec("xp", 2), 0, 10**4, 4)
print(rep.saturation_start, rep.length_residues, rep.label)
rep = empirical_mixing_report(family_spec("yp", 2), 0, 1000, 3)
print(rep.saturation_start, rep.residue_obstructions)
