"""Finite cyclic factors, p_max and the maximal equicontinuous factor.

``Z/pZ`` is a factor (bounded spacers) iff some level n has
``p | |v_n| + a_{m,i}`` for every later spacer.  Eventually periodic
schedules get exact answers by residue cycle detection; formula families
get exact answers only where a family argument is encoded.
"""

from __future__ import annotations

from dataclasses import dataclass

from .blocks import up_down_gcd
from .errors import BudgetExceeded, IllDefinedFactorMap, NoAnchoredOccurrence, UnboundedSpacer
from .params import (
    ParamSpec,
    cantor_pair,
    eventual_spacer_set,
    family_info,
    is_bounded,
    length_of,
    level_summary,
    periodic_view,
    prime_index,
    require_valid,
    z_spacer,
)
from .parser import Decomposition
from .verdict import Certificate, Verdict

VERIFY_HORIZON = 24
Z_WITNESS_LEVELS = 6


def divisors(g: int) -> list[int]:
    return [d for d in range(1, g + 1) if g % d == 0]


def smallest_prime_factor(p: int) -> int:
    return next(d for d in range(2, p + 1) if p % d == 0)


def _periodic_decision(spec, p, prefix, period) -> Verdict:
    k = len(prefix)
    residues = {}
    for j, lv in enumerate(period):
        for a in lv.spacers:
            residues.setdefault(a % p, (a, k + j))
    if len(residues) > 1:
        (r1, (a1, l1)), (r2, (a2, l2)) = sorted(residues.items())[:2]
        return Verdict.refuted(
            "spacer_residues_differ", p=p, spacers=[a1, a2], levels=[l1, l2], period_start=k
        )
    (c,) = residues
    n1 = k
    while n1 > 0 and all(a % p == c for a in prefix[n1 - 1].spacers):
        n1 -= 1
    Lmod = spec.seed_zeros % p
    for n in range(n1):
        q, total, _ = level_summary(spec, n)
        Lmod = (q * Lmod + total) % p
    seen = {}
    trail = []
    n = n1
    while True:
        state = (n - k) % len(period) if n >= k else ("prefix", n)
        if (state, Lmod) in seen:
            break
        seen[(state, Lmod)] = n
        trail.append(Lmod)
        if (Lmod + c) % p == 0:
            return Verdict.proved("residue_cycle", p=p, level=n, residue=c)
        q, total, _ = level_summary(spec, n)
        Lmod = (q * Lmod + total) % p
        n += 1
    return Verdict.refuted(
        "length_residue_unreachable", p=p, residue=c, from_level=n1, needed=(-c) % p, residues_seen=sorted(set(trail))
    )


def _z_witnesses(spec, p, levels):
    q = smallest_prime_factor(p)
    k = len(spec.prefix)
    out = []
    for n in range(levels + 1):
        Ln = length_of(spec, n, cap=None)
        top = max(n, k)
        if Ln % q:
            out.append({"n": n, "m": top, "i": 1})
        else:
            out.append({"n": n, "m": cantor_pair(top, prime_index(q)), "i": 2})
    return q, out


def has_finite_factor(spec: ParamSpec, p: int, horizon: int = VERIFY_HORIZON) -> Verdict:
    """Decide whether every spacer from some level n on satisfies ``p | |v_n| + a``.

    For unbounded spacer parameters the payload is flagged ``obstruction``:
    the condition then forces all n-block lengths into pZ but is not a factor.
    """
    if p < 2:
        raise ValueError("p must be >= 2")
    require_valid(spec)
    pv = periodic_view(spec)
    if pv is not None:
        return _periodic_decision(spec, p, *pv)
    info = family_info(spec.tail)
    k = len(spec.prefix)
    obstruction = not info.bounded
    if info.id == "z_example":
        q, wit = _z_witnesses(spec, p, Z_WITNESS_LEVELS)
        return Verdict.refuted("pairing_diagonal", p=p, prime=q, witnesses=wit, obstruction=obstruction)
    if info.common_gap is not None:
        g = info.common_gap
        if g % p:
            return Verdict.refuted("two_spacers_every_level", p=p, spacers=[0, g], from_level=k, obstruction=obstruction)
        for n in range(k, k + horizon + 1):
            try:
                L = length_of(spec, n)
            except BudgetExceeded:
                break
            if L % p == 0:
                return Verdict.proved(
                    "all_spacers_multiple", p=p, level=n, residue=0, common_gap=g, obstruction=obstruction
                )
        return Verdict.unknown("no_level_found_within_horizon", p=p, horizon=horizon)
    return Verdict.unknown(p=p)


def p_max(spec: ParamSpec) -> tuple[int, Certificate | None]:
    """Largest p with Z/pZ a factor, with its certificate (None when p_max = 1)."""
    require_valid(spec)
    if not is_bounded(spec).is_proved:
        raise UnboundedSpacer("p_max is only defined for bounded spacer parameters")
    g = up_down_gcd(eventual_spacer_set(spec).finite)
    for p in reversed(divisors(g)):
        if p == 1:
            break
        v = has_finite_factor(spec, p)
        if v.is_proved:
            return p, v.certificate
    return 1, None


@dataclass(frozen=True)
class MEFReport:
    kind: str  # "trivial" or "cyclic"
    p_max: int | None
    certificate: Certificate | None
    divisors: tuple[int, ...]
    reason: str

    def to_dict(self):
        return {
            "kind": self.kind,
            "p_max": self.p_max,
            "certificate": self.certificate.to_dict() if self.certificate else None,
            "divisors": list(self.divisors),
            "reason": self.reason,
        }


def mef(spec: ParamSpec) -> MEFReport:
    require_valid(spec)
    if not is_bounded(spec).is_proved:
        return MEFReport("trivial", None, None, (), "unbounded spacer parameter")
    p, cert = p_max(spec)
    divs = tuple(d for d in divisors(p) if d >= 2 and has_finite_factor(spec, d).is_proved)
    if p == 1:
        return MEFReport("trivial", 1, None, (), "bounded, p_max = 1")
    return MEFReport("cyclic", p, cert, divs, f"bounded, Z/{p}Z")


def divisibility_obstruction(spec: ParamSpec) -> Verdict:
    """Largest p >= 2 forcing every n-block length (some n) into pZ.

    Proved carries ``p`` and ``level``; Refuted means no such p exists;
    Unknown means the encoded rules could not decide.
    """
    require_valid(spec)
    if is_bounded(spec).is_proved:
        p, cert = p_max(spec)
        if p >= 2:
            return Verdict.proved("p_max", **cert.payload)
        return Verdict.refuted("p_max_is_one", p_max=1)
    info = family_info(spec.tail)
    if info.id == "z_example":
        return Verdict.refuted("pairing_diagonal_all_p", note="refuted for every p by the diagonal pairing")
    if info.common_gap is None:
        return Verdict.unknown()
    undecided = []
    for p in reversed(divisors(info.common_gap)):
        if p == 1:
            break
        v = has_finite_factor(spec, p)
        if v.is_proved:
            return Verdict.proved("all_spacers_multiple", **v.certificate.payload)
        if not v.is_refuted:
            undecided.append(p)
    if undecided:
        return Verdict.unknown("undecided_divisors", candidates=undecided)
    return Verdict.refuted("common_gap_divisors_fail", common_gap=info.common_gap)


def factor_map_eval(spec: ParamSpec, p: int, decomposition: Decomposition) -> int:
    """``-k mod p`` for any anchored position k of the decomposition."""
    v = has_finite_factor(spec, p)
    if not v.is_proved:
        raise ValueError(f"Z/{p}Z condition is not proved for this spec")
    n = v.certificate.payload["level"]
    if decomposition.level != n:
        raise ValueError(f"decomposition must be at the witnessing level {n}")
    if not decomposition.anchors:
        raise NoAnchoredOccurrence("window has no expected occurrence of v_n")
    vals = {(-k) % p for k in decomposition.anchors}
    if len(vals) > 1:
        raise IllDefinedFactorMap(f"anchors give residues {sorted(vals)}")
    return vals.pop()


def z_spacer_at(spec: ParamSpec, m: int) -> int:
    """a_m for the Z family at global level m (exact, uncapped)."""
    return z_spacer(m, length_of(spec, m, cap=None))
