"""Command-line front end.

::

    charstack run problem.json [--format json|table] [--parallel] [--timing]
    charstack scan --family diagonal --count 50 --seed 1 --group SL:3

Exit codes: 0 success, 1 criteria disagreement in a scan, 2 unreadable or
invalid problem file, 3 a task failed a mathematical precondition.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .problem import Problem, ProblemError, load_problem, run_task
from .scan import FAMILIES, parse_group, strict_scan

EXIT_OK, EXIT_DISAGREE, EXIT_INPUT, EXIT_MATH = 0, 1, 2, 3


def _timed(problem: Problem, index: int, timing: bool) -> dict:
    start = time.perf_counter()
    record = run_task(problem, index)
    if timing:
        record["seconds"] = round(time.perf_counter() - start, 4)
    return record


def _worker(args: tuple[str, int, bool]) -> dict:
    text, index, timing = args
    return _timed(load_problem(text), index, timing)


def execute(problem: Problem, parallel: bool = False, timing: bool = False) -> list[dict]:
    indices = range(len(problem.tasks))
    if parallel and len(problem.tasks) > 1:
        with ProcessPoolExecutor() as pool:
            # map keeps input order
            return list(pool.map(_worker, [(problem.text, i, timing) for i in indices]))
    return [_timed(problem, i, timing) for i in indices]


def build_report(text: str, records: list[dict]) -> dict:
    return {
        "tool": "charstack",
        "version": __version__,
        "spec_version": 1,
        "input_sha256": hashlib.sha256(text.encode("utf-8")).hexdigest(),
        "results": records,
    }


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


# -- table rendering -----------------------------------------------------------

def _yes_no(flag) -> str:
    return "YES" if flag else "NO"


def _dims(label: str, dims) -> tuple[str, str]:
    return label, " ".join(str(d) for d in dims)


def _pair_rows(r: dict) -> list[tuple[str, str]]:
    rows = [("commuting", _yes_no(r["commuting"])),
            ("semisimple", " ".join(_yes_no(f) for f in r["semisimple_flags"])),
            ("unipotent", " ".join(_yes_no(f) for f in r["unipotent_flags"]))]
    if not r["commuting"]:
        return rows
    flags = (r["strict_direct"], r["strict_complex"], r["strict_phi"])
    if len(set(flags)) == 1:
        rows.append(("strict", f"{_yes_no(flags[0])} (all 3 criteria)"))
    else:
        rows.append(("strict", "DISAGREE direct={} complex={} phi={}".format(*map(_yes_no, flags))))
    rows.append(_dims("H^-1..H^2", r["h_dims"]))
    rows.append(("dim ker u ∩ ker v", str(r["joint_centralizer_dim"])))
    rows.append(("dim ker φ", str(r["phi_kernel_dim"])))
    return rows


def _complex_rows(r: dict) -> list[tuple[str, str]]:
    lo, hi = r["degrees"]
    return [_dims(f"dims C^{lo}..C^{hi}", r["dims"]),
            _dims(f"H^{lo}..H^{hi}", r["h_dims"]),
            ("euler characteristic", str(r["euler_characteristic"]))]


def _scan_rows(r: dict) -> list[tuple[str, str]]:
    rows = [("family", r["family"]), ("group", r["group"]),
            ("strict", r["strict_fraction"]),
            ("criteria agree", f"{r['agreement_count']}/{r['count']}"),
            ("semisimple member strict",
             f"{r['semisimple_member_strict']}/{r['semisimple_member_count']}")]
    for key, count in r["h_dims_histogram"].items():
        rows.append((f"pairs with H^-1..H^2 = {key}", str(count)))
    return rows


def _result_rows(kind: str, r: dict) -> list[tuple[str, str]]:
    if kind == "classify_pair":
        return _pair_rows(r)
    if kind == "strict_scan":
        return _scan_rows(r)
    if kind == "tangent":
        return _complex_rows(r) + [("expected euler", str(r["expected_euler_characteristic"]))]
    if kind in ("sphere", "double_point_leaf"):
        return _complex_rows(r)
    if kind == "restriction":
        return [_dims("source H^-1..H^1", r["source_h_dims"]),
                _dims("target H^-1..H^0", r["target_h_dims"]),
                _dims("induced ranks", r["induced_ranks"])]
    if kind == "relative":
        return _complex_rows(r) + [_dims("absolute H^-1..H^1", r["absolute_h_dims"]),
                                   ("lefschetz", _yes_no(r["lefschetz_holds"]))]
    if kind in ("goldman", "bivector"):
        rows = [("dim", str(r["dim"])), ("rank", str(r["rank"])),
                ("antisymmetric", _yes_no(r["antisymmetric"]))]
        if "matrix" in r:
            rows += [("", " ".join(f"{x:>4}" for x in row)) for row in r["matrix"]]
        return rows
    if kind == "leaf":
        return [_dims("H^-1..H^1", r["h_dims"]), ("duality", _yes_no(r["duality_holds"]))]
    return [(k, json.dumps(v)) for k, v in r.items()]  # pragma: no cover


def render_table(report: dict) -> str:
    lines = [f"charstack {report['version']}  input sha256 {report['input_sha256'][:16]}"]
    for rec in report["results"]:
        title = f"[{rec['index']}] {rec['kind']}"
        if "name" in rec:
            title += f" {rec['name']}"
        lines.append(title)
        if rec["status"] == "ok":
            rows = _result_rows(rec["kind"], rec["result"])
        else:
            rows = [("error", f"{rec['error']['type']}: {rec['error']['message']}")]
        if "seconds" in rec:
            rows.append(("seconds", str(rec["seconds"])))
        lines += [f"  {k}: {v}" if k else f"    {v}" for k, v in rows]
    return "\n".join(lines) + "\n"


# -- commands ------------------------------------------------------------------

def cmd_run(args) -> int:
    try:
        with open(args.problem, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.problem}: {exc.strerror}", file=sys.stderr)
        return EXIT_INPUT
    try:
        problem = load_problem(text)
    except ProblemError as exc:
        print(f"error: {args.problem}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    records = execute(problem, parallel=args.parallel, timing=args.timing)
    report = build_report(text, records)
    sys.stdout.write(dump_json(report) if args.format == "json" else render_table(report))
    failed = [r for r in records if r["status"] != "ok"]
    for r in failed:
        label = r["kind"] + (f" {r['name']!r}" if "name" in r else "")
        print(f"error: task {r['index']} ({label}): {r['error']['type']}: {r['error']['message']}",
              file=sys.stderr)
    return EXIT_MATH if failed else EXIT_OK


def cmd_scan(args) -> int:
    try:
        ctx = parse_group(args.group)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        summary = strict_scan(args.family, args.count, args.seed, ctx)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MATH
    data = summary.to_json(include_pairs=args.pairs)
    if args.format == "json":
        sys.stdout.write(dump_json(data))
    else:
        sys.stdout.write("".join(f"{k}: {v}\n" for k, v in _scan_rows(data)))
    if not summary.all_agree:
        print("error: strictness criteria disagree on some pairs", file=sys.stderr)
        return EXIT_DISAGREE
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="charstack",
        description="Exact tangent-complex computations for G-local systems and commuting pairs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute the tasks of a JSON problem file")
    run.add_argument("problem", help="path to the problem file")
    run.add_argument("--format", choices=("json", "table"), default="json")
    run.add_argument("--parallel", action="store_true", help="run tasks in worker processes")
    run.add_argument("--timing", action="store_true",
                     help="record per-task wall time (makes output non-reproducible)")
    run.set_defaults(func=cmd_run)

    scan = sub.add_parser("scan", help="classify seeded random commuting pairs")
    scan.add_argument("--family", choices=FAMILIES, required=True)
    scan.add_argument("--count", type=int, required=True)
    scan.add_argument("--seed", type=int, required=True)
    scan.add_argument("--group", default="SL:2", help="KIND:n, e.g. SL:4 (default SL:2)")
    scan.add_argument("--format", choices=("json", "table"), default="json")
    scan.add_argument("--pairs", action="store_true", help="include every pair report")
    scan.set_defaults(func=cmd_scan)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
