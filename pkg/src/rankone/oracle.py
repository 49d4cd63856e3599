"""Brute-force verification on explicit strings.

Nothing here touches the gap-sequence machinery: words are expanded by a
separate recursion, expected positions are tracked alongside, and length
sets come from an FFT autocorrelation of the position indicator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceeded, ReplayBudgetExceeded
from .params import ParamSpec, is_bounded, length_of, level_params, z_spacer
from .verdict import Verdict

STRING_BUDGET = 10**6
PAIR_BUDGET = 2 * 10**6
REPLAY_LEVELS = 12
WINDOW_SAMPLE = 400


class _Expansion:
    """Words v_0..v_M and expected positions of v_n, built side by side."""

    def __init__(self, spec: ParamSpec, M: int, budget: int = STRING_BUDGET):
        self.spec = spec
        self.words = ["0" * spec.seed_zeros]
        self.spacers = []
        for k in range(M):
            try:
                lv = level_params(spec, k, cap=budget, budget=budget)
            except BudgetExceeded as e:
                raise ReplayBudgetExceeded(str(e)) from e
            sp = list(lv.spacers)
            size = len(self.words[-1]) * lv.q + sum(sp)
            if size > budget:
                raise ReplayBudgetExceeded(f"|v_{k + 1}| = {size} exceeds string budget {budget}")
            self.spacers.append(sp)
            prev = self.words[-1]
            self.words.append(prev + "".join("1" * a + prev for a in sp))

    def positions(self, n: int, m: int) -> np.ndarray:
        pos = np.zeros(1, dtype=np.int64)
        for k in range(n, m):
            step = len(self.words[k])
            offs = [0]
            for a in self.spacers[k]:
                offs.append(offs[-1] + step + a)
            pos = (np.asarray(offs, dtype=np.int64)[:, None] + pos[None, :]).reshape(-1)
        return pos


def expand(spec: ParamSpec, M: int, budget: int = STRING_BUDGET) -> str:
    return _Expansion(spec, M, budget).words[M]


def _autocorr_lengths(pos: np.ndarray) -> np.ndarray:
    if pos.size < 2:
        return np.zeros(0, dtype=np.int64)
    N = int(pos[-1]) + 1
    x = np.zeros(N, dtype=np.float64)
    x[pos] = 1.0
    size = 1 << (2 * N - 1).bit_length()
    f = np.fft.rfft(x, size)
    c = np.fft.irfft(f * np.conj(f), size)[:N]
    return np.flatnonzero(c[1:] > 0.5) + 1


def string_block_lengths(spec: ParamSpec, n: int, M: int, budget: int = STRING_BUDGET) -> frozenset[int]:
    """Every n-block length among blocks inside v_M."""
    ex = _Expansion(spec, M, budget)
    return frozenset(_autocorr_lengths(ex.positions(n, M)).tolist())


def enumerate_blocks_string(
    spec: ParamSpec, n: int, M: int, max_len: int | None = None, budget: int = STRING_BUDGET
) -> set[tuple[int, str]]:
    """``(length, word)`` for every n-block inside v_M (optionally capped)."""
    if M < n:
        raise ValueError("need M >= n")
    ex = _Expansion(spec, M, budget)
    text = ex.words[M]
    pos = ex.positions(n, M).tolist()
    out = set()
    pairs = 0
    for i, t in enumerate(pos):
        for s1 in pos[i + 1 :]:
            if max_len is not None and s1 - t > max_len:
                break
            pairs += 1
            if pairs > PAIR_BUDGET:
                raise BudgetExceeded("too many block pairs; pass max_len")
            out.add((s1 - t, text[t:s1]))
    return out


# ---------------------------------------------------------------------------
# Lemma checks


@dataclass
class LemmaCheck:
    name: str
    checked: int = 0
    skipped: int = 0
    counterexample: dict | None = None
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.counterexample is None

    def fail(self, **payload):
        if self.counterexample is None:
            self.counterexample = payload

    def to_dict(self):
        return {
            "name": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "skipped": self.skipped,
            "counterexample": self.counterexample,
            "notes": self.notes,
        }


@dataclass
class CheckReport:
    spec: str
    n_max: int
    M_max: int
    lemmas: dict

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.lemmas.values())

    def to_dict(self):
        return {
            "spec": self.spec,
            "n_max": self.n_max,
            "M_max": self.M_max,
            "passed": self.passed,
            "lemmas": {k: v.to_dict() for k, v in self.lemmas.items()},
        }


def _spacer_bound(spec):
    b = is_bounded(spec)
    return b.certificate.payload["bound"] if b.is_proved else None


def _window_gaps(pos, i, r, Ln):
    return [int(pos[i + t + 1] - pos[i + t]) - Ln for t in range(r)]


def _sample(count, k=WINDOW_SAMPLE):
    if count <= k:
        return range(count)
    return sorted(set(np.linspace(0, count - 1, k).astype(int).tolist()))


def check_lemma_suite(spec: ParamSpec, n_max: int, M_max: int, budget: int = STRING_BUDGET) -> CheckReport:
    """Run the block lemmas on explicit strings for n <= n_max, n <= m < M <= M_max."""
    ex = _Expansion(spec, M_max, budget)
    names = ["vmsamelength", "singlespacerdifference", "vklengthinblocks", "vkmisses", "vnblockswitness"]
    fam = spec.family
    if fam == "z_example":
        names.append("vndifference")
    checks = {k: LemmaCheck(k) for k in names}
    B = _spacer_bound(spec)
    M = M_max
    text = ex.words[M]
    for n in range(n_max + 1):
        if n > M:
            break
        vn = ex.words[n]
        Ln = len(vn)
        pos = ex.positions(n, M)
        lengths = _autocorr_lengths(pos)
        length_set = set(lengths.tolist())

        c = checks["vnblockswitness"]
        for p in pos.tolist():
            c.checked += 1
            if text[p : p + Ln] != vn:
                c.fail(n=n, position=p, reason="no copy of v_n at an expected position")
                break
        for i in _sample(pos.size - 1):
            t, s1 = int(pos[i]), int(pos[i + 1])
            c.checked += 1
            if text[s1 : s1 + Ln] != vn or (s1 - t) not in length_set:
                c.fail(n=n, start=t, end=s1, reason="block length missing")

        for m in range(n, M):
            r = len(ex.positions(n, m))
            Lm = len(ex.words[m])
            own_gaps = [int(d) - Ln for d in np.diff(ex.positions(n, m))]
            later = set()
            for k in range(m, M):
                later.update(ex.spacers[k])
            c1, c2 = checks["vmsamelength"], checks["singlespacerdifference"]
            seen = set()
            for i in _sample(pos.size - r):
                g = tuple(_window_gaps(pos, i, r, Ln))
                if g in seen:
                    continue
                seen.add(g)
                c1.checked += 1
                ok = any(
                    g[j] in later and list(g[j + 1 :] + g[:j]) == own_gaps for j in range(r)
                )
                if not ok:
                    c1.fail(n=n, m=m, gaps=list(g), expected=own_gaps)
                c2.checked += 1
                length = int(pos[i + r] - pos[i])
                if length - Lm not in later:
                    c2.fail(n=n, m=m, start=int(pos[i]), length=length, excess=length - Lm)

            c3, c4 = checks["vklengthinblocks"], checks["vkmisses"]
            if B is None or Ln <= B:
                c3.skipped += 1
                c4.skipped += 1
                continue
            lo = np.searchsorted(pos, pos + Lm, side="left")
            hi = np.searchsorted(pos, pos + Lm + Ln, side="left")
            for i in np.flatnonzero(hi > lo).tolist():
                for j in range(lo[i], hi[i]):
                    c3.checked += 1
                    if j - i != r:
                        c3.fail(n=n, m=m, start=int(pos[i]), length=int(pos[j] - pos[i]), count=j - i, expected=r)
            for d in range(Ln):
                c4.checked += 1
                if Lm + d in length_set and d > B:
                    c4.fail(n=n, m=m, d=d, bound=B)

        if "vndifference" in checks:
            c = checks["vndifference"]
            c.checked += 1
            if lengths.size >= 2:
                gap = int(np.diff(lengths).min())
                c.notes.append({"n": n, "min_difference": gap, "unit": Ln})
                if gap < Ln:
                    c.fail(n=n, min_difference=gap, unit=Ln)
    return CheckReport(spec.describe(), n_max, M_max, checks)


# ---------------------------------------------------------------------------
# Certificate replay


@dataclass(frozen=True)
class ReplayResult:
    rule: str
    passed: bool
    detail: dict

    def __bool__(self):
        return self.passed

    def to_dict(self):
        return {"rule": self.rule, "passed": self.passed, "detail": self.detail}


def _replay_divisibility(spec, pay, budget):
    p, n = pay["p"], pay["level"]
    c = pay.get("residue", 0)
    Ln = length_of(spec, n, cap=None)
    if (Ln + c) % p:
        return False, {"reason": "|v_n| + c not divisible by p", "length": Ln}
    checked = []
    for m in range(n, n + REPLAY_LEVELS):
        try:
            lv = level_params(spec, m, cap=None, budget=budget)
        except BudgetExceeded:
            break
        bad = next((a for a in lv.spacers if (Ln + a) % p), None)
        if bad is not None:
            return False, {"reason": "spacer breaks divisibility", "level": m, "spacer": bad}
        checked.append(m)
    M = n
    while M < n + 5 and length_of(spec, M + 1, cap=None) <= budget:
        M += 1
    lens = string_block_lengths(spec, n, M, budget)
    off = sorted(h for h in lens if h % p)
    if off:
        return False, {"reason": "block length outside pZ", "length": off[0], "context": M}
    return len(checked) >= 2, {"levels_checked": checked, "string_context": M, "block_lengths": len(lens)}


def _oracle_n_block(word, ex, n, M):
    text = ex.words[M]
    pos = set(ex.positions(n, M).tolist())
    start = text.find(word)
    while start != -1:
        if start in pos and start + len(word) in pos:
            return True
        start = text.find(word, start + 1)
    return False


def _replay_witnesses(spec, levels, hs, budget):
    """Differences h (p_max = 1) at small levels, each checked on the expanded word.

    Minimal witnesses above level 0 can outgrow the budget; those are
    recorded as skipped, but level 0 must always replay.
    """
    from .blocks import witness_difference

    out = []
    for n in levels:
        for h in hs:
            try:
                pair = witness_difference(spec, n, h, unit="pmax")
                ex = _Expansion(spec, pair.context, budget)
            except BudgetExceeded:
                if n == 0:
                    return False, out + [{"n": n, "h": h, "ok": False, "skipped": "budget"}]
                out.append({"n": n, "h": h, "ok": None, "skipped": "budget"})
                continue
            a, b = (blk.render(spec) for blk in pair)
            ok = (
                len(a) - len(b) == pair.difference
                and pair.difference == h
                and _oracle_n_block(a, ex, n, pair.context)
                and _oracle_n_block(b, ex, n, pair.context)
            )
            out.append({"n": n, "h": h, "ok": ok})
            if not ok:
                return False, out
    return True, out


def _replay_refuted_divisors(spec, divs):
    from .factors import has_finite_factor

    res = {d: has_finite_factor(spec, d).status.value for d in divs}
    return all(v == "Refuted" for v in res.values()), res


def _level_spacers(spec, m, budget):
    return set(level_params(spec, m, cap=None, budget=budget).spacers)


def verify_certificate(spec: ParamSpec, verdict: Verdict, budget: int = STRING_BUDGET) -> ReplayResult:
    """Replay a Proved/Refuted certificate from scratch."""
    if verdict.status.value == "Unknown":
        raise ValueError("Unknown verdicts carry nothing to replay")
    rule = verdict.certificate.rule
    pay = verdict.certificate.payload
    try:
        ok, detail = _dispatch(spec, rule, pay, budget)
    except BudgetExceeded as e:
        raise ReplayBudgetExceeded(str(e)) from e
    return ReplayResult(rule, bool(ok), detail)


def _dispatch(spec, rule, pay, budget):
    if rule in ("residue_cycle", "all_spacers_multiple", "divisibility_obstruction", "p_max"):
        return _replay_divisibility(spec, pay, budget)
    if rule == "bounded_p_max":
        ok, detail = _replay_divisibility(spec, pay, budget)
        from .blocks import up_down_gcd
        from .params import eventual_spacer_set

        g = up_down_gcd(eventual_spacer_set(spec).finite)
        bigger = [d for d in range(pay["p_max"] + 1, g + 1) if g % d == 0]
        ok2, res = _replay_refuted_divisors(spec, bigger)
        detail["larger_divisors"] = res
        return ok and ok2 and g % pay["p_max"] == 0, detail
    if rule in ("bounded_p_max_one", "p_max_is_one"):
        ok1, res = _replay_refuted_divisors(spec, pay.get("refuted_divisors", []))
        ok2, wit = _replay_witnesses(spec, range(3), range(1, 6), budget)
        return ok1 and ok2, {"refuted_divisors": res, "witnesses": wit}
    if rule == "successor_pairs":
        for item in pay["pairs"]:
            a, b = item["spacers"]
            sp = _level_spacers(spec, item["level"], budget)
            if a - b != 1 or a not in sp or b not in sp:
                return False, {"bad_pair": item}
        return True, {"pairs": len(pay["pairs"])}
    if rule == "cofinite_spacers":
        t, N = pay["threshold"], pay["census_horizon"]
        found = set()
        m = 0
        while True:
            sp = _level_spacers(spec, m, budget)
            found.update(a for a in sp if a <= N)
            m += 1
            if max(sp, default=0) > N or m > 64:
                break
        missing = [a for a in range(t, N + 1) if a not in found]
        return not missing, {"missing": missing, "levels_scanned": m}
    if rule == "density_above_half":
        return _replay_density(spec, budget)
    if rule == "bounded_never_mixing":
        B = pay["bound"]
        over = [(m, a) for m in range(REPLAY_LEVELS) for a in _level_spacers(spec, m, budget) if a > B]
        return not over, {"bound": B, "violations": over[:5]}
    if rule == "spacer_residues_differ":
        p = pay["p"]
        a, b = pay["spacers"]
        la, lb = pay["levels"]
        ok = a % p != b % p and a in _level_spacers(spec, la, budget) and b in _level_spacers(spec, lb, budget)
        return ok, {"residues": [a % p, b % p]}
    if rule == "two_spacers_every_level":
        p = pay["p"]
        g = pay["spacers"][1]
        k = pay["from_level"]
        levels = range(k, k + 6)
        ok = g % p != 0 and all({0, g} <= _level_spacers(spec, m, budget) for m in levels)
        return ok, {"levels_checked": list(levels)}
    if rule == "length_residue_unreachable":
        return _replay_unreachable(spec, pay)
    if rule == "pairing_diagonal":
        return _replay_pairing(spec, pay)
    raise ValueError(f"no replay for rule {rule!r}")


def _replay_density(spec, budget):
    N = 10**4
    found = set()
    for m in range(64):
        sp = _level_spacers(spec, m, budget)
        found.update(a for a in sp if a <= N)
        if max(sp, default=0) > N:
            break
    dens = len(found) / (N + 1)
    return dens > 0.5, {"density": dens, "horizon": N}


def _replay_unreachable(spec, pay):
    from .params import periodic_view

    p, c, n1 = pay["p"], pay["residue"], pay["from_level"]
    prefix, period = periodic_view(spec)
    steps = (len(prefix) + len(period) + 1) * p * 2
    for m in range(n1, n1 + steps):
        lv = level_params(spec, m, cap=None)
        if any(a % p != c for a in lv.spacers):
            return False, {"reason": "spacer outside residue class", "level": m}
    hits = [m for m in range(n1, n1 + steps) if (length_of(spec, m, cap=None) + c) % p == 0]
    return not hits, {"levels_checked": steps, "hits": hits[:3]}


def _replay_pairing(spec, pay):
    q = pay["prime"]
    if pay["p"] % q or any(q % d == 0 for d in range(2, math.isqrt(q) + 1)):
        return False, {"reason": "bad prime"}
    rows = []
    for w in pay["witnesses"]:
        n, m, i = w["n"], w["m"], w["i"]
        if m < n:
            return False, {"bad_witness": w}
        a = 0 if i == 1 else z_spacer(m, length_of(spec, m, cap=None))
        Ln = length_of(spec, n, cap=None)
        ok = (Ln + a) % q != 0
        rows.append({"n": n, "m": m, "i": i, "ok": ok})
        if not ok:
            return False, {"witnesses": rows}
    return bool(rows), {"witnesses": rows}
