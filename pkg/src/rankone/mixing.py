"""Three-valued weak-mixing and mixing verdicts.

Bounded spacers are decided exactly (weak mixing iff p_max = 1, never
mixing).  Unbounded spacers only get verdicts from sufficient conditions
whose hypotheses are certified; everything else is Unknown.
"""

from __future__ import annotations

from dataclasses import dataclass

from .blocks import block_lengths, up_down_gcd
from .factors import divisibility_obstruction, divisors, p_max
from .params import (
    ParamSpec,
    eventual_spacer_set,
    family_info,
    is_bounded,
    known_verdicts,
    length_of,
    level_spacer_values,
    require_valid,
)
from .verdict import Verdict

SUCCESSOR_LEVELS = 4
CENSUS_HORIZON = 50
EVIDENCE_LABEL = "within v_M: evidence, not proof"


class VerdictConflict(AssertionError):
    """A derived verdict disagrees with an uncontested literature verdict."""


def _attach_known(spec, verdict: Verdict, key: str) -> Verdict:
    known = known_verdicts(spec).get(key)
    if known is None:
        return verdict
    if verdict.status != "Unknown" and verdict.is_proved != known["value"]:
        if not known.get("contested"):
            raise VerdictConflict(f"derived {key} verdict {verdict.status} contradicts {known}")
        known = dict(known, contradicted_by_derivation=True)
    return verdict.with_known(known)


def _successor_pairs(spec, levels):
    """Spacers a, a - 1 present together at each of the given levels."""
    out = []
    for m in levels:
        vals = level_spacer_values(spec, m, cap=None)
        if isinstance(vals, range) and vals.step == 1 and len(vals) >= 2:
            out.append({"level": m, "spacers": [vals.start + 1, vals.start]})
            continue
        s = set(vals)
        hit = next((a for a in sorted(s) if a - 1 in s), None)
        if hit is None:
            return None
        out.append({"level": m, "spacers": [hit, hit - 1]})
    return out


def _obstruction_payload(cert):
    keep = ("p", "level", "residue", "common_gap")
    return {k: cert.payload[k] for k in keep if k in cert.payload}


def decide_weak_mixing(spec: ParamSpec) -> Verdict:
    require_valid(spec)
    if is_bounded(spec).is_proved:
        p, cert = p_max(spec)
        if p == 1:
            g = up_down_gcd(eventual_spacer_set(spec).finite)
            v = Verdict.proved("bounded_p_max_one", p_max=1, gap_gcd=g, refuted_divisors=divisors(g)[1:])
        else:
            v = Verdict.refuted("bounded_p_max", p_max=p, **_obstruction_payload(cert))
        return _attach_known(spec, v, "weak_mixing")

    obs = divisibility_obstruction(spec)
    if obs.is_proved:
        v = Verdict.refuted("divisibility_obstruction", **_obstruction_payload(obs.certificate))
        return _attach_known(spec, v, "weak_mixing")
    info = family_info(spec.tail)
    k = len(spec.prefix)
    if info.successor_pairs:
        pairs = _successor_pairs(spec, range(k, k + SUCCESSOR_LEVELS))
        if pairs:
            v = Verdict.proved("successor_pairs", pairs=pairs, recurs="at every level from the tail on")
            return _attach_known(spec, v, "weak_mixing")
    density = info.eventual.density
    if density > 0.5:
        v = Verdict.proved("density_above_half", density=str(density), descriptor=info.descriptor)
        return _attach_known(spec, v, "weak_mixing")
    return _attach_known(spec, Verdict.unknown(density=str(density)), "weak_mixing")


def decide_mixing(spec: ParamSpec) -> Verdict:
    require_valid(spec)
    bounded = is_bounded(spec)
    if bounded.is_proved:
        v = Verdict.refuted("bounded_never_mixing", bound=bounded.certificate.payload["bound"])
        return _attach_known(spec, v, "mixing")

    obs = divisibility_obstruction(spec)
    if obs.is_proved:
        v = Verdict.refuted("divisibility_obstruction", **_obstruction_payload(obs.certificate))
        return _attach_known(spec, v, "mixing")
    info = family_info(spec.tail)
    threshold = info.eventual.cofinite_threshold
    if threshold is not None:
        v = Verdict.proved(
            "cofinite_spacers", threshold=threshold, census_horizon=max(CENSUS_HORIZON, threshold + 1)
        )
        weak = decide_weak_mixing(spec)
        if weak.is_refuted:
            raise VerdictConflict("mixing proved while weak mixing refuted")
        return _attach_known(spec, v, "mixing")
    return _attach_known(spec, Verdict.unknown(), "mixing")


@dataclass(frozen=True)
class SaturationReport:
    level: int
    max_len: int
    context: int
    largest_hole: int | None
    saturation_start: int | None
    residue_obstructions: dict
    level_lengths: tuple[int, ...]
    audit_modulus: int
    length_residues: tuple[int, ...]
    label: str = EVIDENCE_LABEL

    def to_dict(self):
        return {
            "level": self.level,
            "max_len": self.max_len,
            "context": self.context,
            "largest_hole": self.largest_hole,
            "saturation_start": self.saturation_start,
            "residue_obstructions": {str(k): v for k, v in self.residue_obstructions.items()},
            "level_lengths": list(self.level_lengths),
            "audit_modulus": self.audit_modulus,
            "length_residues": list(self.length_residues),
            "label": self.label,
        }


def _audit_modulus(spec) -> int:
    fam = spec.family
    if fam in ("xp", "yp"):
        return spec.tail.p
    return 2


def empirical_mixing_report(spec: ParamSpec, n: int, L: int, M: int | None = None) -> SaturationReport:
    """Saturation of n-block lengths up to L inside v_M.

    A shared residue mod some p >= 2 rules out saturation, so no start is
    reported in that case even if the top of the range happens to be hit.
    """
    ls = block_lengths(spec, n, L, M)
    mod = _audit_modulus(spec)
    lens = tuple(length_of(spec, k, cap=None) for k in range(ls.context + 1))
    return SaturationReport(
        level=n,
        max_len=L,
        context=ls.context,
        largest_hole=ls.largest_hole,
        saturation_start=None if ls.shared_residues else ls.saturation_start,
        residue_obstructions=dict(ls.shared_residues),
        level_lengths=lens,
        audit_modulus=mod,
        length_residues=tuple(x % mod for x in lens),
    )

