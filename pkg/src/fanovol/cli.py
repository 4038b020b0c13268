"""Command-line front end.

Every subcommand prints exact values (integers and "p/q" strings) as a
plain table or as JSON. The exit code is 0 exactly when every check the
command performs passes; errors go to stderr as a JSON object.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .arith import bound_B, format_rational, sylvester, theorem_bound
from .bounds import BoundReport, bulk_check_two_simplices, external_data_path, load_barycentric_file, scan_exceptions
from .classify import CASES, ClassificationReport, classify, staged_verify_dim5, verify_theorem
from .construct import GluingSpec, glue
from .polytope import (
    RationalPolytope,
    dual,
    interior_lattice_points,
    is_canonical_fano,
    is_minimal,
    is_reflexive,
    lattice_points,
    normalized_volume,
    volume,
)


class CliError(Exception):
    def __init__(self, kind: str, message: str, code: int = 2):
        super().__init__(message)
        self.kind = kind
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError("usage", message)


def _emit(args, payload, table: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(table)


def _read_text(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise CliError("io", str(exc)) from None


def _load_json(path: str):
    text = _read_text(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError("malformed-json", f"{path}: {exc}") from None


def _load_polytopes(path: str) -> list[RationalPolytope]:
    """A polytope object, a list of them, or one object per line."""
    text = _read_text(path)
    try:
        data = json.loads(text)
        items = data if isinstance(data, list) else [data]
    except json.JSONDecodeError:
        try:
            items = [json.loads(line) for line in text.splitlines() if line.strip()]
        except json.JSONDecodeError as exc:
            raise CliError("malformed-json", f"{path}: {exc}") from None
    out = []
    for item in items:
        if isinstance(item, dict) and "polytope" in item:
            item = item["polytope"]
        try:
            out.append(RationalPolytope.from_dict(item))
        except (KeyError, TypeError, ValueError) as exc:
            raise CliError("invalid-polytope", str(exc)) from None
    return out


def _load_polytope(path: str) -> RationalPolytope:
    ps = _load_polytopes(path)
    if len(ps) != 1:
        raise CliError("invalid-polytope", f"expected one polytope, found {len(ps)}")
    return ps[0]


def _fmt_point(p) -> str:
    return "(" + ",".join(format_rational(x) for x in p) + ")"


# -- subcommands --------------------------------------------------------------------


def cmd_sylvester(args) -> int:
    if args.n < 1:
        raise CliError("precondition", "--n must be >= 1")
    values = [sylvester(i) for i in range(1, args.n + 1)]
    payload = {"n": args.n, "sylvester": [str(v) for v in values]}
    _emit(args, payload, "\n".join(f"s_{i} = {v}" for i, v in enumerate(values, start=1)))
    return 0


def cmd_bound(args) -> int:
    if args.d < 1:
        raise CliError("precondition", "--d must be >= 1")
    b = theorem_bound(args.d)
    payload = {
        "d": args.d,
        "bound": str(b),
        "volume_bound": format_rational(Fraction(b, math.factorial(args.d))),
        "B": str(bound_B(args.d)),
    }
    _emit(args, payload, str(b))
    return 0


def cmd_scan(args) -> int:
    if args.t_min > args.t_max or args.d_min > args.d_max or args.t_min < 1:
        raise CliError("precondition", "empty or invalid scan range")
    rows = scan_exceptions(range(args.d_min, args.d_max + 1), range(args.t_min, args.t_max + 1))
    payload = [{"d": d, "t": len(dims), "dims": list(dims)} for d, dims in rows]
    table = "\n".join(f"t={len(dims)} d={d} dims={dims}" for d, dims in rows) or "no exceptions"
    _emit(args, payload, table)
    return 0


def cmd_construct(args) -> int:
    data = _load_json(args.spec)
    try:
        spec = GluingSpec.from_dict(data)
        res = glue(spec)
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError("precondition", str(exc)) from None
    prof = res.profile
    payload = {
        "polytope": res.polytope.to_dict(),
        "spec": spec.to_dict(),
        "profile": {"d": prof.d, "t": prof.t, "dims": list(prof.dims), "shared": list(prof.shared)},
        "simplices": [[list(p) for p in s] for s in res.simplices],
    }
    table = "\n".join(
        [f"d={prof.d} t={prof.t} dims={prof.dims} r_i={prof.shared}"]
        + [_fmt_point(v) for v in res.polytope.vertices]
    )
    _emit(args, payload, table)
    return 0


def cmd_dual(args) -> int:
    P = _load_polytope(args.input)
    D = dual(P)
    _emit(args, D.to_dict(), "\n".join(_fmt_point(v) for v in D.vertices))
    return 0


def cmd_volume(args) -> int:
    P = _load_polytope(args.input)
    v, nv = volume(P), normalized_volume(P)
    payload = {"dim": P.dim, "volume": format_rational(v), "normalized_volume": format_rational(nv)}
    _emit(args, payload, f"volume {format_rational(v)}\nnormalized {format_rational(nv)}")
    return 0


def cmd_points(args) -> int:
    P = _load_polytope(args.input)
    pts = lattice_points(P)
    inner = interior_lattice_points(P) if P.full_dim else ()
    payload = {"count": len(pts), "points": [list(p) for p in pts], "interior": [list(p) for p in inner]}
    _emit(args, payload, "\n".join(_fmt_point(p) for p in pts) + f"\n{len(pts)} points, {len(inner)} interior")
    return 0


def cmd_check(args) -> int:
    P = _load_polytope(args.input)
    canonical = P.full_dim and P.is_lattice and is_canonical_fano(P)
    payload = {
        "dim": P.dim,
        "n_vertices": P.n_vertices,
        "lattice": P.is_lattice,
        "canonical": canonical,
        "minimal": canonical and is_minimal(P),
        "reflexive": canonical and is_reflexive(P),
    }
    _emit(args, payload, "\n".join(f"{k}: {v}" for k, v in payload.items()))
    return 0 if canonical else 1


def cmd_classify(args) -> int:
    if args.jobs < 1:
        raise CliError("precondition", "--jobs must be >= 1")
    try:
        report = classify(args.case, jobs=args.jobs)
    except ValueError as exc:
        raise CliError("precondition", str(exc)) from None
    if args.out:
        Path(args.out).write_text(report.to_jsonl())
    _emit(args, report.summary(), report.table())
    return 0 if report.passed else 1


def cmd_verify(args) -> int:
    checks = verify_theorem(_load_polytopes(args.input))
    rows = [c.to_dict() for c in checks]
    table = "\n".join(
        f"#{c.index} d={c.d} Vol(P*)={r['dual_volume']} bound={r['bound']} ok={c.ok}"
        + (f" equality extremal={c.extremal}" if c.equality else "")
        + (f" error={c.error}" if c.error else "")
        for c, r in zip(checks, rows)
    )
    _emit(args, rows, table)
    return 0 if all(c.ok for c in checks) else 1


def _report_lines(reports: list[BoundReport]) -> str:
    return "\n".join(f"{r.case}: {format_rational(r.lhs)} < {format_rational(r.rhs)} {r.holds}" for r in reports)


def cmd_staged(args) -> int:
    try:
        report = ClassificationReport.from_jsonl(_read_text(args.report))
    except json.JSONDecodeError as exc:
        raise CliError("malformed-json", str(exc)) from None
    except (KeyError, ValueError) as exc:
        raise CliError("invalid-report", str(exc)) from None
    reports = staged_verify_dim5(report)
    ok = all(r.holds for r in reports)
    worst = max((r.lhs for r in reports), default=0)
    payload = {"checks": len(reports), "passed": ok, "max_lhs": format_rational(worst), "rhs": str(bound_B(5))}
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
        if args.verbose:
            for r in reports:
                print(r.to_json())
    else:
        print(f"{len(reports)} checks, max lhs {format_rational(worst)} < {bound_B(5)}: {ok}")
        if args.verbose:
            print(_report_lines(reports))
    return 0 if ok else 1


def cmd_bulk(args) -> int:
    root = external_data_path()
    a = args.data_a or (root and root / f"barycentric_dim{args.d - 1}.txt")
    b = args.data_b or (root and root / f"barycentric_dim{args.d - 2}.txt")
    if not a or not b:
        raise CliError("missing-data", "pass --data-a/--data-b or set FANO_DATA_DIR")
    try:
        va, vb = load_barycentric_file(a), load_barycentric_file(b)
    except (OSError, ValueError) as exc:
        raise CliError("io", str(exc)) from None
    reports = bulk_check_two_simplices(args.d, va, vb)
    if args.format == "json":
        for r in reports:
            print(r.to_json())
    else:
        print(_report_lines(reports))
    return 0 if all(r.holds for r in reports) else 1


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=["json", "table"], default="table")
    p = _Parser(prog="fanovol", description="Exact dual-volume toolkit for canonical Fano polytopes")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("sylvester", parents=[fmt], help="Sylvester numbers s_1..s_n")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_sylvester)

    s = sub.add_parser("bound", parents=[fmt], help="the bound 2(s_d - 1)^2")
    s.add_argument("--d", type=int, required=True)
    s.set_defaults(func=cmd_bound)

    s = sub.add_parser("scan", parents=[fmt], help="exceptions of the multinomial product bound")
    s.add_argument("--t-min", type=int, default=3)
    s.add_argument("--t-max", type=int, default=13)
    s.add_argument("--d-min", type=int, default=4)
    s.add_argument("--d-max", type=int, default=13)
    s.set_defaults(func=cmd_scan)

    s = sub.add_parser("construct", parents=[fmt], help="glue a polytope from a spec file")
    s.add_argument("--spec", required=True)
    s.set_defaults(func=cmd_construct)

    for name, func, text in [
        ("dual", cmd_dual, "dual polytope"),
        ("volume", cmd_volume, "relative and normalised volume"),
        ("points", cmd_points, "lattice points"),
        ("check", cmd_check, "canonical / minimal / reflexive predicates"),
    ]:
        s = sub.add_parser(name, parents=[fmt], help=text)
        s.add_argument("--in", dest="input", required=True)
        s.set_defaults(func=func)

    s = sub.add_parser("classify", parents=[fmt], help="run a classification case")
    s.add_argument("--case", required=True, choices=sorted(CASES))
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("verify", parents=[fmt], help="check Vol(P*) against the bound")
    s.add_argument("--in", dest="input", required=True)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("staged-dim5", parents=[fmt], help="staged dimension-5 checks from a report")
    s.add_argument("--report", required=True)
    s.add_argument("--verbose", action="store_true")
    s.set_defaults(func=cmd_staged)

    s = sub.add_parser("bulk-check", parents=[fmt], help="int5 bound over external barycentric data")
    s.add_argument("--d", type=int, required=True, choices=[4, 5])
    s.add_argument("--data-a", type=Path)
    s.add_argument("--data-b", type=Path)
    s.set_defaults(func=cmd_bulk)
    return p


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except CliError as exc:
        print(json.dumps({"error": exc.kind, "message": str(exc)}), file=sys.stderr)
        return exc.code
    except ValueError as exc:
        print(json.dumps({"error": "precondition", "message": str(exc)}), file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
