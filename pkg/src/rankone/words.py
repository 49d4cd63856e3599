"""Generating words, their lengths and gap sequences.

Large words are never built; everything at scale goes through exact lengths
and the gaps between consecutive expected occurrences of ``v_n`` in ``v_m``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import BudgetExceeded
from .params import (
    DEFAULT_LENGTH_CAP,
    GAP_BUDGET,
    ParamSpec,
    length_of,
    level_spacer_array,
    level_summary,
)

WORD_BUDGET = 10**7


def word_length(spec: ParamSpec, n: int, cap: int | None = DEFAULT_LENGTH_CAP) -> int:
    return length_of(spec, n, cap)


def q_between(spec: ParamSpec, n: int, m: int, cap: int | None = DEFAULT_LENGTH_CAP) -> int:
    """Number of expected occurrences of v_n in v_m."""
    if not 0 <= n <= m:
        raise ValueError("need 0 <= n <= m")
    out = 1
    for k in range(n, m):
        out *= level_summary(spec, k, cap)[0]
        if cap is not None and out > cap:
            raise BudgetExceeded(f"q_{n}^({m}) exceeds cap {cap}")
    return out


@lru_cache(maxsize=64)
def _build(spec: ParamSpec, n: int) -> str:
    if n == 0:
        return "0" * spec.seed_zeros
    prev = _build(spec, n - 1)
    sp = level_spacer_array(spec, n - 1)
    parts = [prev]
    for a in sp.tolist():
        parts.append("1" * a)
        parts.append(prev)
    return "".join(parts)


def build_word(spec: ParamSpec, n: int, budget: int = WORD_BUDGET) -> str:
    """The explicit word v_n."""
    L = length_of(spec, n)
    if L > budget:
        raise BudgetExceeded(f"|v_{n}| = {L} exceeds word budget {budget}")
    return _build(spec, n)


@dataclass(frozen=True)
class GapSequence:
    """Spacer runs between consecutive expected occurrences of v_base in v_top."""

    base: int
    top: int
    values: np.ndarray = field(repr=False, compare=False)
    runs: tuple[tuple[int, int], ...] = field(default=())

    @classmethod
    def from_values(cls, base, top, values):
        values = np.asarray(values, dtype=np.int64)
        values.setflags(write=False)
        return cls(base, top, values, rle(values))

    def __len__(self):
        return int(self.values.size)

    def tolist(self) -> list[int]:
        return self.values.tolist()

    def to_dict(self):
        return {"base": self.base, "top": self.top, "count": len(self), "runs": [list(r) for r in self.runs]}


def rle(values) -> tuple[tuple[int, int], ...]:
    """Run-length encode as ``((value, count), ...)``."""
    v = np.asarray(values)
    if v.size == 0:
        return ()
    starts = np.flatnonzero(np.concatenate(([True], v[1:] != v[:-1])))
    counts = np.diff(np.concatenate((starts, [v.size])))
    return tuple(zip(v[starts].tolist(), counts.tolist()))


def un_rle(runs) -> np.ndarray:
    if not runs:
        return np.zeros(0, dtype=np.int64)
    vals, counts = zip(*runs)
    return np.repeat(np.asarray(vals, dtype=np.int64), counts)


@lru_cache(maxsize=32)
def _gaps(spec: ParamSpec, n: int, m: int) -> np.ndarray:
    if m == n:
        g = np.zeros(0, dtype=np.int64)
    else:
        prev = _gaps(spec, n, m - 1)
        sp = level_spacer_array(spec, m - 1)
        q = sp.size + 1
        # rows: [Gaps(n, m-1), a_{m-1,i}]; the last row's spacer slot is dropped
        rows = np.empty((q, prev.size + 1), dtype=np.int64)
        rows[:, : prev.size] = prev
        rows[:-1, prev.size] = sp
        g = rows.reshape(-1)[:-1]
    g.setflags(write=False)
    return g


def gap_sequence(spec: ParamSpec, n: int, m: int, budget: int = GAP_BUDGET) -> GapSequence:
    if not 0 <= n <= m:
        raise ValueError("need 0 <= n <= m")
    count = q_between(spec, n, m) - 1
    if count > budget:
        raise BudgetExceeded(f"{count} gaps between levels {n} and {m}, over budget {budget}")
    return GapSequence.from_values(n, m, _gaps(spec, n, m))


def gap_values(spec: ParamSpec, n: int, m: int, budget: int = GAP_BUDGET) -> np.ndarray:
    """Read-only gap array (no run-length encoding)."""
    if q_between(spec, n, m) - 1 > budget:
        raise BudgetExceeded(f"gap count between levels {n} and {m} over budget {budget}")
    return _gaps(spec, n, m)


def expected_positions(spec: ParamSpec, n: int, m: int, budget: int = GAP_BUDGET) -> np.ndarray:
    """Start indices of the expected occurrences of v_n inside v_m."""
    g = gap_values(spec, n, m, budget)
    L = length_of(spec, n)
    pos = np.zeros(g.size + 1, dtype=np.int64)
    np.cumsum(g + L, out=pos[1:])
    return pos


def _covering_level(spec: ParamSpec, length: int, budget: int) -> int:
    n = 0
    while length_of(spec, n) < length:
        n += 1
    if length_of(spec, n) > budget:
        raise BudgetExceeded(f"need |v_{n}| >= {length}, over word budget {budget}")
    return n


def infinite_prefix(spec: ParamSpec, length: int, budget: int = WORD_BUDGET) -> str:
    """First ``length`` symbols of V."""
    return build_word(spec, _covering_level(spec, length, budget), budget)[:length]


def dual_suffix(spec: ParamSpec, length: int, budget: int = WORD_BUDGET) -> str:
    """Last ``length`` symbols of the dual word V*."""
    if length == 0:
        return ""
    return build_word(spec, _covering_level(spec, length, budget), budget)[-length:]
