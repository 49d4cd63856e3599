"""Cutting and spacer parameters of a rank-one subshift.

A :class:`ParamSpec` describes the generating words ``v_0 = 0^s`` and

    v_{n+1} = v_n 1^{a_{n,1}} v_n 1^{a_{n,2}} ... v_n 1^{a_{n,q_n-1}} v_n

through an explicit prefix of levels followed by an infinite tail, either a
periodically repeated list of levels or one of the built-in formula families.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

import numpy as np

from .errors import BudgetExceeded, SpecError
from .verdict import Verdict

DEFAULT_LENGTH_CAP = 2**63 - 1
GAP_BUDGET = 10**7

FAMILY_IDS = ("chacon", "staircase", "even_staircase", "z_example", "xp", "yp")


@dataclass(frozen=True)
class LevelParams:
    q: int
    spacers: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "spacers", tuple(int(a) for a in self.spacers))

    def problems(self, where="") -> list[str]:
        out = []
        if self.q < 2:
            out.append(f"{where}q >= 2 required (got {self.q})")
        if len(self.spacers) != self.q - 1:
            out.append(f"{where}expected {self.q - 1} spacers, got {len(self.spacers)}")
        if any(a < 0 for a in self.spacers):
            out.append(f"{where}spacers must be non-negative")
        return out


@dataclass(frozen=True)
class Periodic:
    levels: tuple[LevelParams, ...]

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(self.levels))


@dataclass(frozen=True)
class Family:
    id: str
    p: int | None = None


TailRule = Union[Periodic, Family]


@dataclass(frozen=True)
class ParamSpec:
    seed_zeros: int = 1
    prefix: tuple[LevelParams, ...] = ()
    tail: TailRule = field(default_factory=lambda: Family("chacon"))

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))

    @property
    def family(self) -> str | None:
        return self.tail.id if isinstance(self.tail, Family) else None

    def describe(self) -> str:
        if isinstance(self.tail, Family):
            name = self.tail.id if self.tail.p is None else f"{self.tail.id}:{self.tail.p}"
        else:
            name = "periodic" + str([(lv.q, list(lv.spacers)) for lv in self.tail.levels])
        extra = f", prefix={len(self.prefix)}" if self.prefix else ""
        return f"{name} (seed 0^{self.seed_zeros}{extra})"


# ---------------------------------------------------------------------------
# Sets of naturals


@dataclass(frozen=True)
class NatSet:
    """``finite`` union the progression ``start, start+step, ...`` (if step)."""

    finite: frozenset[int] = frozenset()
    start: int | None = None
    step: int | None = None

    def __contains__(self, a: int) -> bool:
        if a in self.finite:
            return True
        return self.step is not None and a >= self.start and (a - self.start) % self.step == 0

    @property
    def is_finite(self) -> bool:
        return self.step is None

    def upto(self, n: int) -> list[int]:
        vals = set(v for v in self.finite if v <= n)
        if self.step is not None:
            vals.update(range(self.start, n + 1, self.step))
        return sorted(vals)

    @property
    def cofinite_threshold(self) -> int | None:
        """Least M with every a >= M in the set, or None."""
        if self.step != 1:
            return None
        m = self.start
        while m - 1 in self.finite:
            m -= 1
        return m

    @property
    def density(self) -> Fraction:
        return Fraction(0) if self.step is None else Fraction(1, self.step)

    def to_dict(self) -> dict:
        d = {"finite": sorted(self.finite)}
        if self.step is not None:
            d["progression"] = {"start": self.start, "step": self.step}
        return d


# ---------------------------------------------------------------------------
# Built-in families


@dataclass(frozen=True)
class FamilyInfo:
    id: str
    bounded: bool
    descriptor: str
    # Values occurring at infinitely many levels.
    eventual: NatSet
    # Every level with |v_m| >= 2 has spacers 0 and common_gap; all spacers
    # are multiples of common_gap.  None when no such structure is encoded.
    common_gap: int | None
    successor_pairs: bool
    known_verdicts: dict
    bound: int | None = None


def family_info(fam: Family) -> FamilyInfo:
    fid, p = fam.id, fam.p
    if fid == "chacon":
        return FamilyInfo(
            fid, True, "{0, 1}", NatSet(frozenset({0, 1})), None, True,
            {"mixing": {"value": False, "source": "bounded spacers are never mixing"}},
            bound=1,
        )
    if fid == "staircase":
        return FamilyInfo(
            fid, False, "all naturals (cofinite)", NatSet(start=0, step=1), 1, True,
            {
                "mixing": {"value": True, "source": "staircase example: this subshift is mixing"},
                "weak_mixing": {"value": True, "source": "implied by mixing"},
            },
        )
    if fid == "even_staircase":
        return FamilyInfo(
            fid, False, "all even numbers", NatSet(start=0, step=2), 2, False,
            {
                "weak_mixing": {"value": False, "source": "density-1/2 example: not weakly mixing"},
                "mixing": {"value": False, "source": "implied by failure of weak mixing"},
            },
        )
    if fid == "z_example":
        return FamilyInfo(
            fid, False, "{0} plus one strictly growing spacer per level",
            NatSet(frozenset({0})), None, False,
            {
                "weak_mixing": {"value": False, "source": "Z example: not weakly mixing"},
                "mixing": {"value": False, "source": "implied by failure of weak mixing"},
            },
        )
    if fid in ("xp", "yp"):
        if p is None or p < 2:
            raise SpecError(f"family {fid} needs p >= 2", field="tail.p")
        known = (
            {
                "mixing": {
                    "value": True,
                    "source": "known result: X_p is mixing",
                    # assumes |v_n| = 1 mod p, which fails here from n = 1 on
                    "contested": True,
                },
            }
            if fid == "xp"
            else {
                "weak_mixing": {"value": False, "source": "Y_p: not weakly mixing"},
                "mixing": {"value": False, "source": "Y_p: block lengths are multiples of p"},
            }
        )
        return FamilyInfo(
            fid, False, f"all multiples of {p}", NatSet(start=0, step=p), p, False, known
        )
    raise SpecError(f"unknown family {fid!r}", field="tail.id")


def family_spec(name: str, p: int | None = None, seed_zeros: int | None = None) -> ParamSpec:
    """Canonical spec of a built-in family.

    >>> family_spec("chacon").seed_zeros
    1
    """
    if ":" in name:
        name, ps = name.split(":", 1)
        p = int(ps)
    name = name.lower()
    if name not in FAMILY_IDS:
        raise SpecError(f"unknown family {name!r}", field="tail.id")
    if seed_zeros is None:
        seed_zeros = {"even_staircase": 2, "yp": p}.get(name, 1)
    return ParamSpec(seed_zeros, (), Family(name, p if name in ("xp", "yp") else None))


def periodic_spec(levels, seed_zeros=1, prefix=()) -> ParamSpec:
    def lv(x):
        return x if isinstance(x, LevelParams) else LevelParams(x[0], tuple(x[1]))

    return ParamSpec(seed_zeros, tuple(lv(x) for x in prefix), Periodic(tuple(lv(x) for x in levels)))


def odd_pair() -> ParamSpec:
    """Alternating levels (2,[1]) and (2,[3]), seed ``0``."""
    return periodic_spec([(2, [1]), (2, [3])])


def is_canonical_family(spec: ParamSpec) -> bool:
    if not isinstance(spec.tail, Family) or spec.prefix:
        return False
    try:
        return family_spec(spec.tail.id, spec.tail.p) == spec
    except SpecError:
        return False


def known_verdicts(spec: ParamSpec) -> dict:
    """Literature verdicts; only attached to the exact canonical family."""
    if not is_canonical_family(spec):
        return {}
    return family_info(spec.tail).known_verdicts


def periodic_view(spec: ParamSpec):
    """``(prefix, period)`` for specs with an eventually periodic schedule."""
    if isinstance(spec.tail, Periodic):
        return spec.prefix, spec.tail.levels
    if spec.tail.id == "chacon":
        return spec.prefix, (LevelParams(3, (0, 1)),)
    return None


# ---------------------------------------------------------------------------
# Primes and pairing (used by the Z family)


@lru_cache(maxsize=None)
def nth_prime(k: int) -> int:
    """0-indexed: nth_prime(0) == 2."""
    if k == 0:
        return 2
    c = nth_prime(k - 1) + 1
    while any(c % d == 0 for d in range(2, math.isqrt(c) + 1)):
        c += 1
    return c


def prime_index(p: int) -> int:
    k = 0
    while nth_prime(k) < p:
        k += 1
    if nth_prime(k) != p:
        raise ValueError(f"{p} is not prime")
    return k


def cantor_pair(a: int, b: int) -> int:
    return (a + b) * (a + b + 1) // 2 + b


def cantor_unpair(z: int) -> tuple[int, int]:
    w = (math.isqrt(8 * z + 1) - 1) // 2
    b = z - w * (w + 1) // 2
    return w - b, b


def z_spacer(n: int, length: int) -> int:
    """Least a > 3*length with a = 1 mod the prime indexed by the second coordinate of n."""
    p = nth_prime(cantor_unpair(n)[1])
    a = 3 * length + 1
    return a + (1 - a) % p


# ---------------------------------------------------------------------------
# Level structure


def _family_level(fam: Family, n: int, length: int):
    """(q, spacer values as a sequence, spacer sum, max spacer) at level n."""
    fid, p, L = fam.id, fam.p, length
    if fid == "chacon":
        return 3, (0, 1), 1, 1
    if fid == "staircase":
        return L + 2, range(L + 1), L * (L + 1) // 2, L
    if fid == "even_staircase":
        return 2 * L + 1, _EvenStairSpacers(L), L * (L + 1), 2 * L
    if fid == "z_example":
        a = z_spacer(n, L)
        return 3, (0, a), a, a
    if fid in ("xp", "yp"):
        return L + 1, range(0, (L - 1) * p + 1, p), p * L * (L - 1) // 2, (L - 1) * p
    raise SpecError(f"unknown family {fid!r}", field="tail.id")


class _EvenStairSpacers:
    """The spacer list 0, 2, 0, 4, ..., 0, 2L without materializing it."""

    def __init__(self, L):
        self.L = L

    def __len__(self):
        return 2 * self.L

    def __iter__(self):
        for i in range(1, self.L + 1):
            yield 0
            yield 2 * i

    def values(self):
        return range(0, 2 * self.L + 1, 2)


class _LengthTable:
    """Exact |v_n| by the recurrence |v_{n+1}| = q_n |v_n| + sum_i a_{n,i}."""

    def __init__(self, spec: ParamSpec):
        self.spec = spec
        self.lengths = [spec.seed_zeros]

    def level(self, n: int):
        spec = self.spec
        if n < len(spec.prefix):
            lv = spec.prefix[n]
            return lv.q, lv.spacers, sum(lv.spacers), max(lv.spacers, default=0)
        if isinstance(spec.tail, Periodic):
            lv = spec.tail.levels[(n - len(spec.prefix)) % len(spec.tail.levels)]
            return lv.q, lv.spacers, sum(lv.spacers), max(lv.spacers, default=0)
        return _family_level(spec.tail, n, self.get(n, None))

    def get(self, n: int, cap):
        while len(self.lengths) <= n:
            k = len(self.lengths) - 1
            L = self.lengths[k]
            if cap is not None and L > cap:
                raise BudgetExceeded(f"|v_{k}| exceeds the length cap {cap}")
            q, _, total, _ = self.level(k)
            self.lengths.append(q * L + total)
        L = self.lengths[n]
        if cap is not None and L > cap:
            raise BudgetExceeded(f"|v_{n}| = {L} exceeds the length cap {cap}")
        return L


@lru_cache(maxsize=256)
def _table(spec: ParamSpec) -> _LengthTable:
    return _LengthTable(spec)


def length_of(spec: ParamSpec, n: int, cap: int | None = DEFAULT_LENGTH_CAP) -> int:
    if n < 0:
        raise ValueError("level must be >= 0")
    return _table(spec).get(n, cap)


def level_summary(spec: ParamSpec, n: int, cap: int | None = DEFAULT_LENGTH_CAP):
    """``(q_n, sum of spacers, max spacer)`` without materializing the spacer list."""
    if spec.family is not None and n >= len(spec.prefix):
        length_of(spec, n, cap)
    q, _, total, mx = _table(spec).level(n)
    return q, total, mx


def level_spacer_values(spec: ParamSpec, n: int, cap: int | None = DEFAULT_LENGTH_CAP):
    """Distinct spacer values of level n as a (possibly lazy) sorted sequence."""
    if spec.family is not None and n >= len(spec.prefix):
        length_of(spec, n, cap)
    _, sp, _, _ = _table(spec).level(n)
    if isinstance(sp, _EvenStairSpacers):
        return sp.values()
    if isinstance(sp, range):
        return sp
    return sorted(set(sp))


def level_params(
    spec: ParamSpec, n: int, cap: int | None = DEFAULT_LENGTH_CAP, budget: int = GAP_BUDGET
) -> LevelParams:
    """Exact ``(q_n, spacers)`` at level n."""
    if n < 0:
        raise ValueError("level must be >= 0")
    q, _, _ = level_summary(spec, n, cap)
    if q - 1 > budget:
        raise BudgetExceeded(f"level {n} has {q - 1} spacers, over budget {budget}")
    _, sp, _, _ = _table(spec).level(n)
    return LevelParams(q, tuple(sp))


def level_spacer_array(spec: ParamSpec, n: int, budget: int = GAP_BUDGET) -> np.ndarray:
    q, _, _ = level_summary(spec, n)
    if q - 1 > budget:
        raise BudgetExceeded(f"level {n} has {q - 1} spacers, over budget {budget}")
    _, sp, _, _ = _table(spec).level(n)
    if isinstance(sp, _EvenStairSpacers):
        arr = np.zeros(2 * sp.L, dtype=np.int64)
        arr[1::2] = np.arange(2, 2 * sp.L + 1, 2)
        return arr
    if isinstance(sp, range):
        return np.arange(sp.start, sp.stop, sp.step, dtype=np.int64)
    return np.asarray(sp, dtype=np.int64)


# ---------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[str, ...] = ()
    degenerate: bool = False

    def to_dict(self):
        return {"ok": self.ok, "violations": list(self.violations), "degenerate": self.degenerate}


def validate(spec: ParamSpec) -> ValidationReport:
    v = []
    if not isinstance(spec.seed_zeros, int) or spec.seed_zeros < 1:
        v.append("seed_zeros >= 1 required")
    for i, lv in enumerate(spec.prefix):
        v += lv.problems(f"prefix[{i}]: ")
    degenerate = False
    if isinstance(spec.tail, Periodic):
        if not spec.tail.levels:
            v.append("tail.levels must be non-empty")
        for i, lv in enumerate(spec.tail.levels):
            v += lv.problems(f"tail.levels[{i}]: ")
        if not v:
            # one eventual spacer value makes V eventually (v_k 1^c)^infinity
            degenerate = len({a for lv in spec.tail.levels for a in lv.spacers}) == 1
    elif isinstance(spec.tail, Family):
        if spec.tail.id not in FAMILY_IDS:
            v.append(f"unknown family {spec.tail.id!r}")
        elif spec.tail.id in ("xp", "yp") and (spec.tail.p is None or spec.tail.p < 2):
            v.append(f"family {spec.tail.id} needs p >= 2")
    else:
        v.append("tail must be periodic or family")
    if degenerate:
        v.append("degenerate: all eventual spacers equal, V is periodic")
    return ValidationReport(not v, tuple(v), degenerate)


def require_valid(spec: ParamSpec, allow_degenerate=False) -> None:
    from .errors import DegenerateSpec

    rep = validate(spec)
    if rep.ok:
        return
    if rep.degenerate and len(rep.violations) == 1:
        if allow_degenerate:
            return
        raise DegenerateSpec(rep.violations[0])
    raise SpecError("; ".join(rep.violations))


# ---------------------------------------------------------------------------
# Boundedness and the spacer set


def eventual_spacer_set(spec: ParamSpec) -> NatSet:
    """Spacer values that occur at infinitely many levels."""
    if isinstance(spec.tail, Periodic):
        return NatSet(frozenset(a for lv in spec.tail.levels for a in lv.spacers))
    return family_info(spec.tail).eventual


def is_bounded(spec: ParamSpec) -> Verdict:
    if isinstance(spec.tail, Periodic):
        B = max((a for lv in spec.prefix + spec.tail.levels for a in lv.spacers), default=0)
        return Verdict.proved("periodic_max_spacer", bound=B)
    info = family_info(spec.tail)
    if info.bounded:
        B = max([info.bound] + [a for lv in spec.prefix for a in lv.spacers])
        return Verdict.proved("family_finite_spacer_alphabet", bound=B, family=info.id)
    return Verdict.refuted("family_spacers_grow_with_length", family=info.id, descriptor=info.descriptor)


@dataclass(frozen=True)
class SpacerCensus:
    horizon: int
    values: tuple[int, ...]  # A intersected with [0, N]
    density_at_horizon: Fraction
    density_lower: float
    density_upper: float
    eventual: NatSet
    complement: tuple[int, ...]  # b_0 < b_1 < ... below N
    levels_scanned: int

    def to_dict(self):
        return {
            "horizon": self.horizon,
            "values": list(self.values),
            "density_at_horizon": float(self.density_at_horizon),
            "density_at_horizon_exact": str(self.density_at_horizon),
            "density_lower": self.density_lower,
            "density_upper": self.density_upper,
            "eventual": self.eventual.to_dict(),
            "complement": list(self.complement),
            "levels_scanned": self.levels_scanned,
        }


def _collect_levels_upto(spec: ParamSpec, N: int):
    """Spacer values <= N over all levels, plus number of levels scanned.

    Periodic tails: prefix plus one period is exhaustive.  Families: every
    built-in family has nested per-level spacer sets below the current
    maximum, so scanning stops once a level's largest spacer exceeds N.
    """
    found: set[int] = set()
    k = len(spec.prefix)
    for lv in spec.prefix:
        found.update(a for a in lv.spacers if a <= N)
    if isinstance(spec.tail, Periodic):
        for lv in spec.tail.levels:
            found.update(a for a in lv.spacers if a <= N)
        return found, k + len(spec.tail.levels)
    n = k
    while True:
        vals = level_spacer_values(spec, n, cap=None)
        if isinstance(vals, range):
            found.update(range(vals.start, min(vals.stop, N + 1), vals.step))
        else:
            found.update(a for a in vals if a <= N)
        n += 1
        if level_summary(spec, n - 1, cap=None)[2] > N or spec.tail.id == "chacon":
            return found, n


def spacer_census(spec: ParamSpec, N: int) -> SpacerCensus:
    if N < 1:
        raise ValueError("horizon must be >= 1")
    found, scanned = _collect_levels_upto(spec, N)
    ind = np.zeros(N + 1, dtype=np.int64)
    ind[sorted(found)] = 1
    running = np.cumsum(ind) / np.arange(1, N + 2)
    lo_k = N // 2
    return SpacerCensus(
        horizon=N,
        values=tuple(sorted(found)),
        density_at_horizon=Fraction(len(found), N + 1),
        density_lower=float(running[lo_k:].min()),
        density_upper=float(running[lo_k:].max()),
        eventual=eventual_spacer_set(spec),
        complement=tuple(b for b in range(N + 1) if b not in found),
        levels_scanned=scanned,
    )


# ---------------------------------------------------------------------------
# JSON config


def _level_from(d, path) -> LevelParams:
    if not isinstance(d, dict):
        raise SpecError("level must be an object", field=path)
    for key in ("q", "spacers"):
        if key not in d:
            raise SpecError(f"missing key {key!r}", field=path)
    q, sp = d["q"], d["spacers"]
    if not isinstance(q, int) or isinstance(q, bool):
        raise SpecError("q must be an integer", field=f"{path}.q")
    if not isinstance(sp, list) or not all(isinstance(a, int) and not isinstance(a, bool) for a in sp):
        raise SpecError("spacers must be a list of integers", field=f"{path}.spacers")
    return LevelParams(q, tuple(sp))


def spec_from_dict(d: dict) -> ParamSpec:
    if not isinstance(d, dict):
        raise SpecError("spec must be a JSON object")
    seed = d.get("seed_zeros", 1)
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 1:
        raise SpecError("seed_zeros must be an integer >= 1", field="seed_zeros")
    prefix = d.get("prefix", [])
    if not isinstance(prefix, list):
        raise SpecError("prefix must be a list", field="prefix")
    levels = tuple(_level_from(x, f"prefix[{i}]") for i, x in enumerate(prefix))
    tail = d.get("tail")
    if not isinstance(tail, dict) or "kind" not in tail:
        raise SpecError("tail must be an object with a 'kind'", field="tail")
    if tail["kind"] == "periodic":
        lv = tail.get("levels")
        if not isinstance(lv, list) or not lv:
            raise SpecError("periodic tail needs a non-empty 'levels' list", field="tail.levels")
        rule: TailRule = Periodic(tuple(_level_from(x, f"tail.levels[{i}]") for i, x in enumerate(lv)))
    elif tail["kind"] == "family":
        fid = tail.get("id")
        if fid not in FAMILY_IDS:
            raise SpecError(f"unknown family {fid!r}", field="tail.id")
        p = tail.get("p")
        if fid in ("xp", "yp") and (not isinstance(p, int) or p < 2):
            raise SpecError("p must be an integer >= 2", field="tail.p")
        rule = Family(fid, p if fid in ("xp", "yp") else None)
    else:
        raise SpecError(f"unknown tail kind {tail['kind']!r}", field="tail.kind")
    return ParamSpec(seed, levels, rule)


def spec_to_dict(spec: ParamSpec) -> dict:
    def lv(x):
        return {"q": x.q, "spacers": list(x.spacers)}

    if isinstance(spec.tail, Periodic):
        tail = {"kind": "periodic", "levels": [lv(x) for x in spec.tail.levels]}
    else:
        tail = {"kind": "family", "id": spec.tail.id}
        if spec.tail.p is not None:
            tail["p"] = spec.tail.p
    return {"seed_zeros": spec.seed_zeros, "prefix": [lv(x) for x in spec.prefix], "tail": tail}


def load_spec(text: str) -> ParamSpec:
    """Parse a JSON spec document; errors carry line or field anchors."""
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecError(e.msg, line=e.lineno) from None
    return spec_from_dict(d)


def iter_levels(spec: ParamSpec, start: int, stop: int) -> Iterable[LevelParams]:
    for n in range(start, stop):
        yield level_params(spec, n)
