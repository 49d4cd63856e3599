"""n-blocks: length sets, difference sets and witness pairs.

An n-block is ``v_n 1^{k_0} v_n 1^{k_1} ... v_n 1^{k_r}`` cut out of V so that
expected occurrences of v_n start at its first symbol and right after its
last.  Inside v_M its length is a window sum of ``|v_n| + gap`` terms, so
length sets reduce to difference sets of expected start positions.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .errors import BudgetExceeded, NeedTwoDistinctValues, NotConstructible
from .params import (
    GAP_BUDGET,
    ParamSpec,
    Periodic,
    eventual_spacer_set,
    is_bounded,
    length_of,
    level_spacer_values,
)
from .words import WORD_BUDGET, build_word, expected_positions, gap_values, q_between

P_CAP = 64
SEARCH_COST = 2 * 10**10  # positions times span, in bits


@dataclass(frozen=True)
class Block:
    """An n-block given by the gap following each of its expected v_n."""

    level: int
    gaps: tuple[int, ...]
    unit: int  # |v_n|

    @property
    def parts(self) -> int:
        return len(self.gaps)

    @property
    def total_length(self) -> int:
        return self.parts * self.unit + sum(self.gaps)

    def __len__(self):
        return self.total_length

    def render(self, spec: ParamSpec, budget: int = WORD_BUDGET) -> str:
        if self.total_length > budget:
            raise BudgetExceeded(f"block of length {self.total_length} over budget {budget}")
        v = build_word(spec, self.level, budget)
        return "".join(v + "1" * g for g in self.gaps)

    def startswith(self, other: "Block") -> bool:
        return other.level == self.level and self.gaps[: other.parts] == other.gaps

    def to_dict(self):
        return {"level": self.level, "parts": self.parts, "gaps": list(self.gaps), "length": self.total_length}


# ---------------------------------------------------------------------------
# Difference sets of start positions


def _bits_from_positions(pos: np.ndarray, size: int) -> int:
    ind = np.zeros(size, dtype=np.uint8)
    ind[pos] = 1
    return int.from_bytes(np.packbits(ind, bitorder="little").tobytes(), "little")


def _positions_from_bits(x: int, size: int) -> np.ndarray:
    nbytes = max(1, (size + 7) // 8)
    raw = np.frombuffer(x.to_bytes(nbytes, "little"), dtype=np.uint8)
    return np.flatnonzero(np.unpackbits(raw, bitorder="little")[:size])


def positive_differences(pos: np.ndarray, L: int) -> np.ndarray:
    """Sorted distinct values ``pos[j] - pos[i] <= L`` over ``i < j``.

    ``pos`` must be strictly increasing.  Picks between a width-by-width
    window scan and a big-integer shift-or depending on estimated cost.
    """
    pos = np.asarray(pos, dtype=np.int64)
    N = pos.size
    if N < 2 or L < 1:
        return np.zeros(0, dtype=np.int64)
    span = int(pos[-1] - pos[0])
    min_step = int(np.diff(pos).min())
    widths = min(N - 1, L // min_step)
    cost_scan = widths * N
    cost_shift = N * (span // 64 + 1) * 4
    if cost_scan <= cost_shift:
        mask = np.zeros(L + 1, dtype=bool)
        for k in range(1, widths + 1):
            s = pos[k:] - pos[:-k]
            small = s[s <= L]
            if small.size == 0:
                break
            mask[small] = True
        return np.flatnonzero(mask)
    base = pos - pos[0]
    S = _bits_from_positions(base, span + 1)
    lim = min(L, span)
    keep = (1 << (lim + 1)) - 1
    acc = 0
    for p in base.tolist():
        acc |= (S >> p) & keep
    acc &= ~1
    return _positions_from_bits(acc, lim + 1)


# ---------------------------------------------------------------------------
# Length sets


@dataclass(frozen=True)
class LengthSet:
    level: int
    context: int
    max_len: int
    lengths: tuple[int, ...]
    largest_hole: int | None  # largest 1 <= h <= max_len not achieved
    saturation_start: int | None  # least H with [H, max_len] all achieved
    shared_residues: dict = field(default_factory=dict)  # p -> common residue

    def __contains__(self, h):
        return h in self._set

    @property
    def _set(self):
        return frozenset(self.lengths)

    def to_dict(self, with_lengths=True):
        d = {
            "level": self.level,
            "context": self.context,
            "max_len": self.max_len,
            "count": len(self.lengths),
            "largest_hole": self.largest_hole,
            "saturation_start": self.saturation_start,
            "shared_residues": {str(k): v for k, v in self.shared_residues.items()},
            "scope": f"blocks occurring inside v_{self.context}",
        }
        if with_lengths:
            d["lengths"] = list(self.lengths)
        return d


def default_context(spec: ParamSpec, n: int, L: int, budget: int = GAP_BUDGET) -> int:
    """Least M with |v_{M-1}| >= L + |v_n|, padded by one period or two levels.

    The padding is dropped level by level when it would exceed the gap budget.
    """
    target = L + length_of(spec, n)
    M = n + 1
    while length_of(spec, M - 1) < target:
        M += 1
    base = M
    pad = len(spec.tail.levels) if isinstance(spec.tail, Periodic) else 2
    for extra in range(pad, -1, -1):
        try:
            if q_between(spec, n, base + extra) - 1 <= budget:
                return base + extra
        except BudgetExceeded:
            continue
    raise BudgetExceeded(f"context for n={n}, L={L} exceeds the gap budget")


def _shared_residues(lengths: np.ndarray, p_cap: int) -> dict:
    if lengths.size < 2:
        return {}
    out = {}
    for p in range(2, p_cap + 1):
        r = lengths % p
        if (r == r[0]).all():
            out[p] = int(r[0])
    return out


def block_lengths(
    spec: ParamSpec,
    n: int,
    L: int,
    M: int | None = None,
    budget: int = GAP_BUDGET,
    p_cap: int = P_CAP,
) -> LengthSet:
    """All n-block lengths <= L among blocks inside v_M."""
    if M is None:
        M = default_context(spec, n, L, budget)
    if M < n:
        raise ValueError("context level must be >= n")
    pos = expected_positions(spec, n, M, budget)
    lengths = positive_differences(pos, L)
    present = np.zeros(L + 1, dtype=bool)
    present[lengths] = True
    holes = np.flatnonzero(~present[1:]) + 1
    largest_hole = int(holes[-1]) if holes.size else None
    if largest_hole is None:
        sat = 1
    elif largest_hole < L:
        sat = largest_hole + 1
    else:
        sat = None
    return LengthSet(
        level=n,
        context=M,
        max_len=L,
        lengths=tuple(lengths.tolist()),
        largest_hole=largest_hole,
        saturation_start=sat,
        shared_residues=_shared_residues(lengths, p_cap),
    )


def difference_set(spec: ParamSpec, n: int, L: int, M: int | None = None, budget: int = GAP_BUDGET) -> frozenset[int]:
    """``{a - b : a > b}`` over the block lengths of :func:`block_lengths`."""
    ls = np.asarray(block_lengths(spec, n, L, M, budget).lengths, dtype=np.int64)
    return frozenset(positive_differences(ls, L).tolist())


# ---------------------------------------------------------------------------
# Up-down gcd


def up_down_gcd(values) -> int:
    """Least positive sum of terms ``a_plus - a_minus`` drawn from ``values``.

    Equals the gcd of all pairwise differences.
    """
    vals = sorted(set(int(v) for v in values))
    if len(vals) < 2:
        raise NeedTwoDistinctValues("need at least two distinct values")
    return reduce(math.gcd, (v - vals[0] for v in vals[1:]))


def signed_steps(values, target: int) -> list[tuple[int, int]]:
    """Fewest pairs ``(a_plus, a_minus)`` whose differences sum to ``target``.

    Breadth-first search over partial sums; ``target`` must be a multiple of
    the up-down gcd.
    """
    vals = sorted(set(values))
    d = up_down_gcd(vals)
    if target % d:
        raise NotConstructible(f"{target} is not a multiple of the up-down gcd {d}")
    moves = {}
    for a in vals:
        for b in vals:
            if a != b:
                moves.setdefault(a - b, (a, b))
    bound = abs(target) + (vals[-1] - vals[0])
    prev = {0: None}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        if x == target:
            break
        for delta in sorted(moves):
            y = x + delta
            if abs(y) <= bound and y not in prev:
                prev[y] = (x, moves[delta])
                queue.append(y)
    steps = []
    x = target
    while prev[x] is not None:
        x, pair = prev[x]
        steps.append(pair)
    return steps[::-1]


def eventual_spacers(spec: ParamSpec, horizon: int = 64) -> frozenset[int]:
    """Spacer values occurring at infinitely many levels.

    Infinite sets (progressions) are truncated at ``horizon``.
    """
    return frozenset(eventual_spacer_set(spec).upto(horizon))


# ---------------------------------------------------------------------------
# Witness pairs


@dataclass(frozen=True)
class WitnessPair:
    alpha: Block
    beta: Block
    difference: int
    context: int  # both blocks occur as blocks inside v_context
    prefix: Block | None = None

    def __iter__(self):
        yield self.alpha
        yield self.beta

    def to_dict(self):
        return {
            "alpha": self.alpha.to_dict(),
            "beta": self.beta.to_dict(),
            "difference": self.difference,
            "context": self.context,
            "prefix": self.prefix.to_dict() if self.prefix else None,
        }


def _first_index(arr: np.ndarray, value: int) -> int:
    hit = np.flatnonzero(arr == value)
    return int(hit[0]) if hit.size else -1


def _find_run(hay: np.ndarray, needle: tuple[int, ...]) -> int:
    """First i with hay[i:i+len(needle)] == needle and room for a following gap."""
    k = len(needle)
    if k == 0:
        return 0
    if hay.size < k + 1:
        return -1
    win = np.lib.stride_tricks.sliding_window_view(hay[:-1], k)
    hit = np.flatnonzero((win == np.asarray(needle)).all(axis=1))
    return int(hit[0]) if hit.size else -1


class _Builder:
    """One side of the iterative construction: ``head 1^s tail``.

    ``head`` is an end segment of v_lo (its internal gaps), ``tail`` an
    initial segment of v_lo (gap after each of its parts).
    """

    def __init__(self, head, s, tail):
        self.head, self.s, self.tail = list(head), s, list(tail)

    def step(self, U, S, omit_value, new_s):
        i = _first_index(S, omit_value)
        after = []
        for t in range(i + 1, S.size):
            after.append(int(S[t]))
            after.extend(U)
        before = []
        for t in range(i):
            before.extend(U)
            before.append(int(S[t]))
        self.head = self.head + after
        self.tail = before + self.tail
        self.s = new_s

    def gaps(self):
        return tuple(self.head) + (self.s,) + tuple(self.tail)


def _levels_covering(spec, lo, values, max_levels=64):
    """Least hi > lo with every value among the spacers of levels lo..hi-1."""
    need = set(values)
    for hi in range(lo + 1, lo + max_levels + 1):
        need -= set(a for a in need if a in level_spacer_values(spec, hi - 1))
        if not need:
            return hi
    raise NotConstructible(f"spacer values {sorted(values)} not found above level {lo}")


def _updown_pair(spec, n, target, prefix, budget, word_budget):
    E = eventual_spacer_set(spec)
    if E.is_finite:
        vals = sorted(E.finite)
    else:
        vals = E.upto(max(E.start + E.step, 1))
    vals = sorted(set(vals))
    if len(vals) < 2:
        raise NotConstructible("fewer than two distinct spacer values recur")
    steps = signed_steps(vals, target)
    unit = length_of(spec, n)
    if prefix is None:
        lo = n
        head = list(gap_values(spec, n, lo, budget))
        tail = []
    else:
        if prefix.level != n:
            raise NotConstructible("prefix block must be at the witness level")
        lo = n
        while True:
            G = gap_values(spec, n, lo, budget)
            i = _find_run(G, prefix.gaps)
            if i >= 0:
                break
            lo += 1
        head = G[i:].tolist()
        tail = G[:i].tolist()
    alpha = _Builder(head, 0, tail)
    beta = _Builder(head, 0, tail)
    for plus, minus in steps:
        hi = _levels_covering(spec, lo, (plus, minus))
        U = gap_values(spec, n, lo, budget).tolist()
        S = gap_values(spec, lo, hi, budget)
        new_s = int(level_spacer_values(spec, hi)[0])
        alpha.step(U, S, minus, new_s)
        beta.step(U, S, plus, new_s)
        lo = hi
        if (len(alpha.head) + len(alpha.tail)) * unit > word_budget:
            raise BudgetExceeded("witness blocks outgrew the word budget")
    a = Block(n, alpha.gaps(), unit)
    b = Block(n, beta.gaps(), unit)
    return a, b, lo + 1


def _window_with_length(pos, gaps, length, n, unit):
    idx = np.searchsorted(pos, pos + length)
    ok = np.flatnonzero((idx < pos.size) & (pos[np.minimum(idx, pos.size - 1)] == pos + length))
    i = int(ok[0])
    return Block(n, tuple(gaps[i : int(idx[i])].tolist()), unit)


def _search_pair(spec, n, target, budget):
    """Two n-blocks inside some v_M whose lengths differ by ``target``, or None."""
    unit = length_of(spec, n)
    M = n + 1
    while q_between(spec, n, M) - 1 <= budget and q_between(spec, n, M) * length_of(spec, M) <= SEARCH_COST:
        pos = expected_positions(spec, n, M, budget)
        lens = positive_differences(pos, int(pos[-1]))
        hit = np.flatnonzero(np.isin(lens + target, lens))
        if hit.size:
            b = int(lens[hit[0]])
            gaps = gap_values(spec, n, M, budget)
            return (
                _window_with_length(pos, gaps, b + target, n, unit),
                _window_with_length(pos, gaps, b, n, unit),
                M,
            )
        M += 1
    return None


def _lift(block: Block, spec: ParamSpec, n: int, budget) -> Block:
    """Re-express a block at level block.level as a level-n block."""
    U = gap_values(spec, n, block.level, budget).tolist()
    gaps = []
    for g in block.gaps:
        gaps.extend(U)
        gaps.append(g)
    return Block(n, tuple(gaps), length_of(spec, n))


def witness_difference(
    spec: ParamSpec,
    n: int,
    h: int,
    prefix: Block | None = None,
    unit: str = "updown",
    budget: int = GAP_BUDGET,
    word_budget: int = WORD_BUDGET,
    search: bool = True,
) -> WitnessPair:
    """n-blocks alpha, beta with ``|alpha| - |beta| = h * d``.

    ``unit="updown"``: d is the up-down gcd of the recurring spacers.
    ``unit="pmax"``: d is p_max (bounded spacers only).  Small contexts are
    searched directly first; otherwise the pair is built at a level where all
    spacers share a residue, using a stripped prefix block.
    With ``prefix`` both blocks start with it (updown route only).
    """
    if h < 1:
        raise ValueError("h must be >= 1")
    E = eventual_spacer_set(spec)
    vals = sorted(E.finite) if E.is_finite else E.upto(E.start + E.step)
    if len(set(vals)) < 2:
        raise NotConstructible("fewer than two distinct spacer values recur")
    d = up_down_gcd(vals)
    if unit == "updown":
        a, b, ctx = _updown_pair(spec, n, h * d, prefix, budget, word_budget)
        return WitnessPair(a, b, h * d, ctx, prefix)
    if unit != "pmax":
        raise ValueError(f"unknown unit {unit!r}")
    if prefix is not None:
        raise NotConstructible("prefix blocks are only supported for the updown route")
    if not is_bounded(spec).is_proved:
        raise NotConstructible("p_max route needs bounded spacers")
    from .factors import p_max

    p, cert = p_max(spec)
    found = _search_pair(spec, n, h * p, budget) if search else None
    if found is not None:
        return WitnessPair(found[0], found[1], h * p, found[2])
    if p == d:
        a, b, ctx = _updown_pair(spec, n, h * d, None, budget, word_budget)
        return WitnessPair(a, b, h * d, ctx)
    nw = cert.payload["level"] if cert is not None else 0
    top = max(n, nw, len(spec.prefix))
    a0 = min(vals)
    base = length_of(spec, top)
    l, rem = divmod(base + a0, p)
    assert rem == 0
    r = d // p
    t = next(t for t in range(r) if (t * l + h) % r == 0)
    s = (t * l + h) // r
    if t == 0:
        a, b, ctx = _updown_pair(spec, top, s * d, None, budget, word_budget)
    else:
        M = top
        while q_between(spec, top, M) <= t:
            M += 1
        gamma = Block(top, tuple(gap_values(spec, top, M, budget)[:t].tolist()), base)
        k, rem = divmod(gamma.total_length - t * l * p, d)
        assert rem == 0
        a_full, b, ctx = _updown_pair(spec, top, (s + k) * d, gamma, budget, word_budget)
        a = Block(top, a_full.gaps[t:], base)
    a, b = _lift(a, spec, n, budget), _lift(b, spec, n, budget)
    assert a.total_length - b.total_length == h * p
    return WitnessPair(a, b, h * p, ctx)
