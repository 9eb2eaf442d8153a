"""``vasslyze`` command line: analyze, simulate, verify, gen.

Exit codes: analyze returns 0 (terminating), 2 (non-terminating) or 1 (usage
or input error). verify returns 0 when every witness re-validates, 3 when
some check fails and 1 for unreadable or malformed input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import List, Optional

from . import __version__
from .decompose import TERMINATING, _aggregate, _classify_scc
from .gen import random_vass_text
from .graph import sccs
from .model import VassError, parse_vass
from .oracle import DEFAULT_MEMO_CAP, DEFAULT_STEP_CAP, termination_curve
from .report import SchemaError, check_report, report_to_json

EXIT_OK, EXIT_ERROR, EXIT_NONTERM, EXIT_INVALID = 0, 1, 2, 3


def _load(path: str):
    with open(path, encoding="utf-8") as fh:
        return parse_vass(fh.read())


def analyze_to_json(v, jobs: int = 1) -> dict:
    start = time.perf_counter()
    parts = sccs(v)
    comps, per = [], []
    if jobs > 1 and len(parts) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            comps = list(pool.map(_classify_scc, parts))
        per = [None] * len(comps)
    else:
        for p in parts:
            t0 = time.perf_counter()
            comps.append(_classify_scc(p))
            per.append(time.perf_counter() - t0)
    report = _aggregate(comps)
    return report_to_json(v, report, {"total": time.perf_counter() - start, "sccs": per})


def _text(doc: dict, per_scc: bool) -> str:
    lines = []
    if doc["verdict"] == TERMINATING:
        sym = "Theta" if doc["bound_kind"] == "theta" else "Omega"
        lines.append(f"terminating: {sym}(n^{doc['k']})")
    else:
        lines.append("non-terminating")
    for i, s in enumerate(doc["sccs"]):
        if not per_scc and doc["verdict"] == TERMINATING:
            break
        head = f"scc {i} states={' '.join(s['states'])} transitions={s['transitions']}"
        lines.append(head)
        if s["verdict"] == TERMINATING:
            lines.append(f"  k={s['k']} {s['bound_kind']} depth={s['depth']}")
            lin = s["linear"]
            if lin["bounded"]:
                lines.append(f"  L(n) ~ {lin['c']} n")
        else:
            lines.append(f"  non-terminating; offending transitions {s['offending']}")
            for item in s["witness"] or []:
                lines.append(f"  cycle {item['cycle']} x{item['multiplicity']}")
        for key in ("rf", "positive_qrf"):
            if s[key] is not None:
                c = ", ".join(s[key]["c"])
                w = ", ".join(f"{q}: {x}" for q, x in s[key]["w"].items())
                lines.append(f"  {key}: c=({c}) w={{{w}}}")
    return "\n".join(lines)


def cmd_analyze(args) -> int:
    try:
        v = _load(args.path)
    except (OSError, VassError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    doc = analyze_to_json(v, args.jobs)
    if args.text:
        print(_text(doc, args.scc))
    else:
        print(json.dumps(doc, indent=2))
    return EXIT_OK if doc["verdict"] == TERMINATING else EXIT_NONTERM


def _env_cap() -> int:
    raw = os.environ.get("VASSLYZE_CAP")
    return int(raw) if raw else DEFAULT_STEP_CAP


def cmd_simulate(args) -> int:
    try:
        v = _load(args.path)
    except (OSError, VassError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    cap = args.cap if args.cap is not None else _env_cap()
    curve = termination_curve(v, args.n_max, cap, memo_cap=args.memo_cap)
    text = curve.to_csv()
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        with open(args.report, encoding="utf-8") as fh:
            doc = json.load(fh)
        v = _load(args.path)
        problems = check_report(doc, v)
    except (OSError, VassError, json.JSONDecodeError, SchemaError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    for p in problems:
        print(p, file=sys.stderr)
    if problems:
        return EXIT_INVALID
    print("ok")
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.dim < 1 or args.states < 1 or args.max_update < 1:
        print("error: --dim, --states and --max-update must be >= 1", file=sys.stderr)
        return EXIT_ERROR
    sys.stdout.write(random_vass_text(args.dim, args.states, args.max_update, args.seed))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vasslyze", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="classify termination complexity")
    a.add_argument("path")
    fmt = a.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON report (default)")
    fmt.add_argument("--text", action="store_true", help="human-readable summary")
    a.add_argument("--scc", action="store_true", help="per-SCC breakdown in text mode")
    a.add_argument("--jobs", type=int, default=1, help="analyse SCCs in parallel")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("simulate", help="brute-force L(n) for small n")
    s.add_argument("path")
    s.add_argument("--n-max", type=int, default=12)
    s.add_argument("--cap", type=int, default=None, help="step cap (default $VASSLYZE_CAP or 10^6)")
    s.add_argument("--memo-cap", type=int, default=DEFAULT_MEMO_CAP)
    s.add_argument("--csv", default=None, help="write CSV here instead of stdout")
    s.set_defaults(func=cmd_simulate)

    vf = sub.add_parser("verify", help="re-check the witnesses in a report")
    vf.add_argument("report")
    vf.add_argument("path")
    vf.set_defaults(func=cmd_verify)

    g = sub.add_parser("gen", help="random strongly connected VASS")
    g.add_argument("--dim", type=int, default=2)
    g.add_argument("--states", type=int, default=2)
    g.add_argument("--max-update", type=int, default=2)
    g.add_argument("--seed", type=int, default=0)
    g.set_defaults(func=cmd_gen)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_OK
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
