"""Factor recognition and expected-occurrence decomposition of finite windows."""

from __future__ import annotations

import bisect
from dataclasses import dataclass

import numpy as np

from .errors import AmbiguousAnchor, BudgetExceeded, NotAFactor
from .params import ParamSpec, length_of
from .words import WORD_BUDGET, build_word, expected_positions


@dataclass(frozen=True)
class Decomposition:
    """Expected occurrences of v_level fully inside ``window``.

    ``lead_gap`` counts the 1s before the first anchor, ``trail_gap`` the 1s
    after the last anchored occurrence; both may be truncated runs.
    """

    level: int
    window: str
    anchors: tuple[int, ...]
    lead_gap: int
    trail_gap: int
    context: int

    def shifted(self, k: int) -> tuple[int, ...]:
        return tuple(a - k for a in self.anchors)

    def to_dict(self):
        return {
            "level": self.level,
            "window": self.window,
            "anchors": list(self.anchors),
            "lead_gap": self.lead_gap,
            "trail_gap": self.trail_gap,
            "context": self.context,
        }


def occurrences(word: str, text: str) -> list[int]:
    """All (possibly overlapping) start indices of ``word`` in ``text``."""
    if not word:
        return list(range(len(text) + 1))
    out = []
    i = text.find(word)
    while i != -1:
        out.append(i)
        i = text.find(word, i + 1)
    return out


def is_factor(w: str, spec: ParamSpec, M: int, budget: int = WORD_BUDGET) -> bool:
    if len(w) > length_of(spec, M):
        return False
    return w in build_word(spec, M, budget)


def _default_context(spec: ParamSpec, w: str, n: int, budget: int) -> int:
    M = n + 1
    while length_of(spec, M) < 2 * len(w) + length_of(spec, n):
        M += 1
        if length_of(spec, M) > budget:
            raise BudgetExceeded("no context level within the word budget")
    return M


def _leading_ones(s: str) -> int:
    return len(s) - len(s.lstrip("1"))


def _decompose_at(w, starts, unit, offset, n, M) -> Decomposition:
    end = offset + len(w)
    i = bisect.bisect_left(starts, offset)
    j = bisect.bisect_right(starts, end - unit)
    anchors = tuple(int(p - offset) for p in starts[i:j])
    if anchors:
        lead = anchors[0]
        trail = _leading_ones(w[anchors[-1] + unit :])
    else:
        lead = trail = _leading_ones(w) if set(w) <= {"1"} else 0
    return Decomposition(n, w, anchors, lead, trail, M)


def _decompose(w, spec, n, M, budget) -> Decomposition:
    text = build_word(spec, M, budget)
    offs = occurrences(w, text)
    if not offs:
        raise NotAFactor(f"{w!r} does not occur in v_{M}")
    starts = expected_positions(spec, n, M).tolist()
    unit = length_of(spec, n)
    first = _decompose_at(w, starts, unit, offs[0], n, M)
    for o in offs[1:]:
        other = _decompose_at(w, starts, unit, o, n, M)
        if other.anchors != first.anchors:
            raise AmbiguousAnchor(
                f"window of length {len(w)} decomposes differently at offsets {offs[0]} and {o} "
                f"(anchors {first.anchors[:6]} vs {other.anchors[:6]})"
            )
    return first


def expected_occurrences(
    w: str, spec: ParamSpec, n: int, M: int | None = None, budget: int = WORD_BUDGET
) -> Decomposition:
    """Decompose ``w`` into expected occurrences of v_n.

    With ``M`` given, all occurrences of ``w`` in v_M must agree.  Without it,
    the context grows until two consecutive levels give the same answer.
    """
    if M is not None:
        if M < n:
            raise ValueError("context level must be >= n")
        return _decompose(w, spec, n, M, budget)
    M = _default_context(spec, w, n, budget)
    prev = None
    while True:
        try:
            cur = _decompose(w, spec, n, M, budget)
        except NotAFactor:
            cur = None
        if prev is not None and cur is not None and cur.anchors == prev.anchors:
            return prev
        if length_of(spec, M + 1) > budget:
            if cur is None:
                raise NotAFactor(f"{w!r} is not a factor of any v_m within budget")
            return cur
        prev = cur
        M += 1


def is_n_block(w: str, spec: ParamSpec, n: int, M: int | None = None, budget: int = WORD_BUDGET) -> bool:
    """True iff some occurrence of w in v_M starts at an expected v_n and is
    immediately followed by another expected v_n."""
    unit = length_of(spec, n)
    if len(w) < unit or not w.startswith("0"):
        return False
    if M is None:
        M = _default_context(spec, w, n, budget)
    text = build_word(spec, M, budget)
    starts = expected_positions(spec, n, M)
    mask = np.zeros(len(text) + 1, dtype=bool)
    mask[starts] = True
    offs = occurrences(w, text)
    if not offs:
        raise NotAFactor(f"{w!r} does not occur in v_{M}")
    return any(mask[o] and mask[o + len(w)] for o in offs)
