"""Command-line front end (``python3 -m rankone``).

Exit codes: 0 success, 1 invalid input, 2 budget exhausted, 3 verification
failure.  JSON is the machine format; ``--text`` is a lossy summary.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__
from .blocks import Block, block_lengths, witness_difference
from .errors import BudgetExceeded, RankOneError, SpecError
from .factors import divisibility_obstruction, mef
from .mixing import decide_mixing, decide_weak_mixing, empirical_mixing_report
from .oracle import STRING_BUDGET, check_lemma_suite, verify_certificate
from .params import (
    GAP_BUDGET,
    family_spec,
    is_bounded,
    length_of,
    load_spec,
    spacer_census,
    spec_to_dict,
    validate,
)
from .parser import expected_occurrences
from .words import WORD_BUDGET, build_word, gap_sequence

EXIT_OK, EXIT_INVALID, EXIT_BUDGET, EXIT_VERIFY = 0, 1, 2, 3
REPORT_MAX_LEN = 200
CENSUS_HORIZON = 200


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _budget(args) -> int:
    if args.budget is not None:
        return args.budget
    env = os.environ.get("RANKONE_BUDGET")
    return int(env) if env else GAP_BUDGET


def _spec(args):
    if args.family:
        name, _, p = args.family.partition(":")
        return family_spec(name, int(p) if p else None, args.seed)
    if not args.spec:
        raise SpecError("give a spec file or --family")
    with open(args.spec, encoding="utf-8") as fh:
        return load_spec(fh.read())


def _verdicts(spec):
    return {"weak_mixing": decide_weak_mixing(spec), "mixing": decide_mixing(spec)}


def cmd_report(spec, args):
    v = validate(spec)
    out = {"validation": v.to_dict()}
    if not v.ok or v.degenerate:
        out["error"] = "spec rejected before analysis"
        return out, EXIT_INVALID
    verdicts = _verdicts(spec)
    m = mef(spec)
    bounded = is_bounded(spec)
    L = args.max_len or REPORT_MAX_LEN
    n = args.level or 0
    emp = empirical_mixing_report(spec, n, L, args.context)
    out.update(
        bounded=bounded.to_dict(),
        p_max=m.p_max,
        obstruction=None if bounded.is_proved else divisibility_obstruction(spec).to_dict(),
        mef=m.to_dict(),
        weak_mixing=verdicts["weak_mixing"].to_dict(),
        mixing=verdicts["mixing"].to_dict(),
        census=spacer_census(spec, CENSUS_HORIZON).to_dict(),
        empirical=[emp.to_dict()],
    )
    return out, EXIT_OK


def cmd_word(spec, args):
    n = args.level or 0
    w = build_word(spec, n, args.budget or WORD_BUDGET)
    return {"level": n, "length": len(w), "word": w}, EXIT_OK


def cmd_gaps(spec, args):
    n = args.level or 0
    M = args.context if args.context is not None else n + 1
    return gap_sequence(spec, n, M, _budget(args)).to_dict(), EXIT_OK


def cmd_blocks(spec, args):
    n = args.level or 0
    ls = block_lengths(spec, n, args.max_len or 40, args.context, _budget(args))
    out = ls.to_dict()
    res = ls.shared_residues
    if res:
        p = max(res)
        out["note"] = f"every length found is {res[p]} mod {p}: residue obstruction within v_{ls.context}"
    return out, EXIT_OK


def _parse_gaps(text):
    return tuple(int(x) for x in text.split(",") if x.strip())


def cmd_witness(spec, args):
    n = args.level or 0
    prefix = None
    if args.prefix is not None:
        prefix = Block(n, _parse_gaps(args.prefix), length_of(spec, n))
    pair = witness_difference(spec, n, args.diff, prefix=prefix, unit=args.unit, budget=_budget(args))
    a, b = (blk.render(spec) for blk in pair)
    out = pair.to_dict()
    out.update(alpha_word=a, beta_word=b, alpha_length=len(a), beta_length=len(b))
    return out, EXIT_OK


def cmd_parse(spec, args):
    if args.window is None:
        raise SpecError("parse needs --window", field="window")
    d = expected_occurrences(args.window, spec, args.level or 0, args.context)
    return d.to_dict(), EXIT_OK


def cmd_factors(spec, args):
    m = mef(spec)
    out = {
        "p_max": m.p_max,
        "divisors": list(m.divisors),
        "certificate": m.certificate.to_dict() if m.certificate else None,
        "mef": m.to_dict(),
    }
    if m.p_max is None:
        out["obstruction"] = divisibility_obstruction(spec).to_dict()
    return out, EXIT_OK


def _default_verify_context(spec, budget):
    M = 1
    while M < 8 and length_of(spec, M + 1, cap=None) <= budget:
        M += 1
    return M


def cmd_verify(spec, args):
    budget = STRING_BUDGET
    M = args.context if args.context is not None else _default_verify_context(spec, budget)
    n_max = min(args.level if args.level is not None else 2, M)
    suite = check_lemma_suite(spec, n_max, M, budget)
    replays = {}
    for key, v in _verdicts(spec).items():
        if v.status.value == "Unknown":
            replays[key] = {"status": "Unknown", "replayed": False}
            continue
        r = verify_certificate(spec, v)
        replays[key] = {"status": v.status.value, "replayed": True, **r.to_dict()}
    ok = suite.passed and all(r.get("passed", True) for r in replays.values())
    out = {"passed": ok, "lemmas": suite.to_dict(), "certificates": replays}
    return out, EXIT_OK if ok else EXIT_VERIFY


COMMANDS = {
    "report": cmd_report,
    "word": cmd_word,
    "gaps": cmd_gaps,
    "blocks": cmd_blocks,
    "witness": cmd_witness,
    "parse": cmd_parse,
    "factors": cmd_factors,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rankone", description="Rank-one subshift analysis")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("spec", nargs="?", help="JSON spec file")
        p.add_argument("--family", help="chacon|staircase|even_staircase|z_example|xp:p|yp:p")
        p.add_argument("--seed", type=int, default=None, help="seed length |v_0| for --family")
        p.add_argument("--level", type=int, default=None)
        p.add_argument("--context", type=int, default=None)
        p.add_argument("--max-len", type=int, default=None)
        p.add_argument("--budget", type=int, default=None)
        fmt = p.add_mutually_exclusive_group()
        fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
        fmt.add_argument("--text", dest="fmt", action="store_const", const="text")
        if name == "witness":
            p.add_argument("--diff", type=int, required=True)
            p.add_argument("--prefix", help="comma-separated gaps of a shared leading block")
            p.add_argument("--unit", choices=("updown", "pmax"), default="updown")
        if name == "parse":
            p.add_argument("--window")
    return ap


def render_text(command, body) -> str:
    lines = [f"# {command}: {body['spec']['describe']}"]
    for key in sorted(k for k in body if k not in ("spec", "tool", "timing")):
        val = body[key]
        if isinstance(val, dict) and "status" in val:
            cert = (val.get("certificate") or {}).get("rule")
            lines.append(f"{key}: {val['status']} ({cert})")
        elif isinstance(val, (dict, list)):
            lines.append(f"{key}: {json.dumps(val, sort_keys=True)[:160]}")
        else:
            lines.append(f"{key}: {val}")
    return "\n".join(lines)


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        spec = _spec(args)
        body, code = COMMANDS[args.command](spec, args)
    except SpecError as e:
        print(dumps({"error": str(e), "kind": "invalid_spec"}), file=out)
        return EXIT_INVALID
    except BudgetExceeded as e:
        print(dumps({"error": str(e), "kind": "budget"}), file=out)
        return EXIT_BUDGET
    except (RankOneError, ValueError) as e:
        print(dumps({"error": str(e), "kind": type(e).__name__}), file=out)
        return EXIT_INVALID
    except OSError as e:
        print(dumps({"error": str(e), "kind": "io"}), file=out)
        return EXIT_INVALID
    body = dict(body)
    body["spec"] = {"describe": spec.describe(), "params": spec_to_dict(spec)}
    body["tool"] = {"name": "rankone", "version": __version__}
    body["budgets"] = {"gap": _budget(args), "word": WORD_BUDGET, "string": STRING_BUDGET}
    body["timing"] = {"seconds": round(time.perf_counter() - t0, 6)}
    if args.fmt == "text":
        print(render_text(args.command, body), file=out)
    else:
        print(dumps(body), file=out)
    return code


def main():
    sys.exit(run())
