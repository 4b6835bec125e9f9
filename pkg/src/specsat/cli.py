"""Command-line interface: ``specsat <subcommand> ...``.

Exit status: 0 on success or an observation-only report, 1 when a verify
campaign falsified an assertable claim, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Sequence

from . import __version__
from .counting import (c_n_F, count_copies, count_copies_through_edge, covering_number,
                       named_pattern)
from .errors import SpecsatError
from .families import (PartitionedGraph, descriptor, enumerate_all_graphs, enumerate_family,
                       l_graph, sidecar, t_star_graph, turan, y_graph)
from .graph import Graph
from .graph6 import emit_graph6, parse_graph6, read_graph6_lines
from .harness import (STATUS_FAIL, VerificationReport, load_config, verify_covering,
                      verify_first_key, verify_l_vs_t, verify_min_max, verify_move_one,
                      verify_ning_zhai_exhaustive, verify_shift, verify_supersat_family,
                      verify_t_variant, verify_tightness)
from .spectral import DEFAULT_TOL, embedded_spec_of, spectral_radius, zhang_lambda

FAMILIES = {"turan": None, "Y": y_graph, "L": l_graph, "T": t_star_graph}
THEOREMS = ("min-max", "tightness", "ning-zhai", "supersat", "covering", "t-variant",
            "first-key", "move-one", "shift", "l-vs-t")

CHECK_COLUMNS = ["theorem", "status", "name", "verdict", "relation", "probe",
                 "lhs_lo", "lhs_hi", "rhs_lo", "rhs_hi", "margin", "params"]


class UsageError(Exception):
    pass


# -- shared plumbing ------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    g = p.add_argument_group("common options")
    g.add_argument("--format", choices=("json", "csv", "graph6"), default=None,
                   help="output format (default depends on the subcommand)")
    g.add_argument("--out", default=None, help="write output to this path instead of stdout")
    g.add_argument("--tol", type=float, default=None,
                   help=f"width of certified spectral intervals (default: config value, else {DEFAULT_TOL:g})")
    g.add_argument("--jobs", type=int, default=None,
                   help="worker processes for campaigns (default: config value, else 1)")
    g.add_argument("--config", default=None,
                   help="battery config JSON overriding the packaged one (also $SPECSAT_CONFIG)")
    g.add_argument("--no-timing", action="store_true", help="omit wallclock_ms from reports")
    return p


def _family_args(p: argparse.ArgumentParser, required: bool = False):
    p.add_argument("--family", choices=sorted(FAMILIES), required=required,
                   help="turan = T(n,r); Y = q-edge matching in a largest part; "
                        "L = q-edge star (triangle when q = 3) in a smallest part; "
                        "T = q-edge star in a largest part")
    p.add_argument("--n", type=int, help="number of vertices")
    p.add_argument("--r", type=int, help="number of parts")
    p.add_argument("--q", type=int, default=0, help="number of added class-edges (default 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specsat", allow_abbrev=False,
        description="Certified spectral radii, exact copy counts and verification campaigns "
                    "for Turán graphs with a few added or deleted edges.")
    parser.add_argument("--version", action="version", version=f"specsat {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="SUBCOMMAND")
    common = _common()

    p = sub.add_parser("construct", parents=[common], allow_abbrev=False,
                       help="build a named family member",
                       description="Build T(n,r), Y(n,r,q), L(n,r,q) or the largest-part star "
                                   "graph T(n,r,q).  graph6 output writes the graph on the output "
                                   "stream and its part/perturbation sidecar to --sidecar "
                                   "(default <out>.sidecar.json, or stderr when writing to stdout).")
    _family_args(p, required=True)
    p.add_argument("--sidecar", default=None, help="path for the JSON sidecar in graph6 mode")

    p = sub.add_parser("spectrum", parents=[common], allow_abbrev=False,
                       help="certified largest adjacency eigenvalue",
                       description="Largest adjacency eigenvalue by shifted power iteration with a "
                                   "Collatz-Wielandt enclosing interval.  Input: a named family, a "
                                   "--graph6 string, or --input FILE ('-' for stdin) of graph6 lines. "
                                   "--walk-series also solves the walk-series characteristic equation "
                                   "for family members with only added class-edges.")
    _family_args(p)
    p.add_argument("--graph6", default=None, help="a single graph6 string")
    p.add_argument("--input", default=None, help="file of graph6 lines, '-' for stdin")
    p.add_argument("--walk-series", action="store_true",
                   help="also report the root of the walk-series equation (families only)")

    p = sub.add_parser("count", parents=[common], allow_abbrev=False,
                       help="copies of a pattern, c(n,F), covering number",
                       description="Exact number of (not necessarily induced) copies of a pattern F. "
                                   "--edge restricts to copies through one host edge; --cover adds "
                                   "the minimum number of vertices meeting every copy; --c-n N "
                                   "prints the fewest copies one added edge creates in T(N, chi(F)-1).")
    _family_args(p)
    p.add_argument("--pattern", required=True,
                   help="K<k> clique, C<k> cycle, B<k> book, W<k> wheel, P<k> path, S<k> star")
    p.add_argument("--graph6", default=None, help="host graph as a graph6 string")
    p.add_argument("--input", default=None, help="file of graph6 host graphs, '-' for stdin")
    p.add_argument("--edge", default=None, help="host edge u,v for copies through that edge")
    p.add_argument("--cover", action="store_true", help="also compute the covering number")
    p.add_argument("--c-n", type=int, default=None, dest="c_n",
                   help="compute c(N, F) instead of counting in a host")

    p = sub.add_parser("enumerate", parents=[common], allow_abbrev=False,
                       help="isomorphism classes of T(n,r) plus q edges, or all small graphs",
                       description="List one representative per isomorphism class of graphs obtained "
                                   "from T(n,r) by adding q edges (q <= 6), or with --all every "
                                   "graph on n <= 8 vertices up to isomorphism.")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--all", action="store_true", help="all graphs on n vertices")

    p = sub.add_parser("verify", parents=[common], allow_abbrev=False,
                       help="run a verification campaign",
                       description="Run one campaign and write its JSON report.  Theorems: "
                                   "min-max (Y minimises and L maximises lambda over T(n,r)+q edges); "
                                   "tightness (for q >= 2 sqrt(n) the (q-1)-star beats the q-matching); "
                                   "ning-zhai (exhaustive triangle statement on n <= 8 vertices); "
                                   "supersat (copies in every family member plus a perturbed scan); "
                                   "covering (covering number and copies of Y, L, T with s edges); "
                                   "t-variant (copies and lambda chain of the largest-part star); "
                                   "first-key (perturbation estimate battery); move-one (moving one "
                                   "vertex between parts); shift (same with embedded graphs); "
                                   "l-vs-t (L against the largest-part star).")
    p.add_argument("--theorem", choices=THEOREMS, required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--s", type=int, default=None, help="covering campaign: edges added")
    p.add_argument("--pattern", default="K3", help="pattern for supersat/covering/t-variant (default K3)")
    p.add_argument("--enforce-scale", action="store_true",
                   help="treat 'n sufficiently large' scale hypotheses as gating")

    p = sub.add_parser("report", parents=[common], allow_abbrev=False,
                       help="flatten or merge report JSON files",
                       description="Flatten the checks of one or more report JSON files into CSV "
                                   "rows (default) or merge them into one JSON list.")
    p.add_argument("reports", nargs="+", help="report JSON files")
    return parser


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _need(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError(f"missing required option(s): {', '.join(missing)}")


def _family_graph(args) -> PartitionedGraph:
    _need(args, "n", "r")
    if args.family == "turan":
        if args.q:
            raise UsageError("--q does not apply to the turan family")
        return turan(args.n, args.r)
    return FAMILIES[args.family](args.n, args.r, args.q)


def _hosts(args) -> list[tuple[str, Graph | PartitionedGraph]]:
    given = [x for x in (args.family, args.graph6, args.input) if x is not None]
    if len(given) != 1:
        raise UsageError("give exactly one of --family, --graph6, --input")
    if args.family:
        pg = _family_graph(args)
        return [(pg.label, pg)]
    if args.graph6:
        return [(args.graph6.strip(), parse_graph6(args.graph6))]
    stream = sys.stdin if args.input == "-" else open(args.input)
    try:
        return [(emit_graph6(g), g) for g in read_graph6_lines(stream)]
    finally:
        if stream is not sys.stdin:
            stream.close()


def _rows_csv(rows: list[dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for row in rows:
        w.writerow({k: (json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v)
                    for k, v in row.items()})
    return buf.getvalue()


# -- subcommands ------------------------------------------------------------------

def cmd_construct(args, cfg) -> int:
    pg = _family_graph(args)
    fmt = args.format or "graph6"
    if fmt == "graph6":
        _emit(args, emit_graph6(pg.graph) + "\n")
        side = json.dumps(sidecar(pg), sort_keys=True)
        path = args.sidecar or (args.out + ".sidecar.json" if args.out else None)
        if path:
            with open(path, "w") as fh:
                fh.write(side + "\n")
        else:
            sys.stderr.write(side + "\n")
    elif fmt == "json":
        _emit(args, _dump({"graph6": emit_graph6(pg.graph), "sidecar": sidecar(pg)}))
    else:
        _emit(args, _rows_csv([{"u": u, "v": v} for u, v in pg.graph.edges()], ["u", "v"]))
    return 0


def cmd_spectrum(args, cfg) -> int:
    tol = args.tol
    rows = []
    for name, g in _hosts(args):
        graph = g.graph if isinstance(g, PartitionedGraph) else g
        res = spectral_radius(graph, tol)
        row = {"graph": name, "n": graph.n, "m": graph.m, **res.to_json()}
        if args.walk_series:
            if not isinstance(g, PartitionedGraph):
                raise UsageError("--walk-series needs --family")
            row["walk_series_lambda"] = zhang_lambda(embedded_spec_of(g))
        rows.append(row)
    fmt = args.format or "json"
    if fmt == "graph6":
        raise UsageError("spectrum output is json or csv")
    if fmt == "csv":
        flat = [dict(r, interval_lo=r["interval"][0], interval_hi=r["interval"][1]) for r in rows]
        cols = ["graph", "n", "m", "lambda", "interval_lo", "interval_hi", "residual",
                "iterations", "converged"] + (["walk_series_lambda"] if args.walk_series else [])
        _emit(args, _rows_csv(flat, cols))
    else:
        _emit(args, _dump(rows[0] if len(rows) == 1 else rows))
    return 0


def cmd_count(args, cfg) -> int:
    F = named_pattern(args.pattern)
    fmt = args.format or "json"
    if fmt == "graph6":
        raise UsageError("count output is json or csv")
    if args.c_n is not None:
        rows = [{"pattern": F.name, "n": args.c_n, "c": c_n_F(args.c_n, F)}]
        cols = ["pattern", "n", "c"]
    else:
        rows = []
        edge = None
        if args.edge:
            try:
                u, v = (int(x) for x in args.edge.split(","))
            except ValueError:
                raise UsageError("--edge expects u,v") from None
            edge = (u, v)
        for name, g in _hosts(args):
            row = {"graph": name, "pattern": F.name}
            if edge is not None:
                row["copies_through_edge"] = count_copies_through_edge(F, g, edge)
                row["edge"] = list(edge)
            else:
                row["copies"] = count_copies(F, g)
            if args.cover:
                row["covering_number"] = covering_number(F, g)
            rows.append(row)
        cols = ["graph", "pattern"] + [k for k in ("copies", "copies_through_edge", "edge",
                                                   "covering_number") if k in rows[0]]
    if fmt == "csv":
        _emit(args, _rows_csv(rows, cols))
    else:
        _emit(args, _dump(rows[0] if len(rows) == 1 else rows))
    return 0


def cmd_enumerate(args, cfg) -> int:
    fmt = args.format or "graph6"
    if args.all:
        graphs = list(enumerate_all_graphs(args.n))
        if fmt == "graph6":
            _emit(args, "".join(emit_graph6(g) + "\n" for g in graphs))
        elif fmt == "json":
            _emit(args, _dump([{"graph6": emit_graph6(g), "m": g.m} for g in graphs]))
        else:
            _emit(args, _rows_csv([{"graph6": emit_graph6(g), "m": g.m} for g in graphs],
                                  ["graph6", "m"]))
        return 0
    _need(args, "r", "q")
    members = enumerate_family(args.n, args.r, args.q, on_mismatch="merge")
    if fmt == "graph6":
        _emit(args, "".join(emit_graph6(pg.graph) + "\n" for pg in members))
    else:
        rows = [{"descriptor": str(descriptor(pg)), "graph6": emit_graph6(pg.graph),
                 "sidecar": sidecar(pg)} for pg in members]
        if fmt == "json":
            _emit(args, _dump(rows))
        else:
            _emit(args, _rows_csv(rows, ["descriptor", "graph6", "sidecar"]))
    return 0


def _run_campaign(args, cfg) -> VerificationReport:
    t, tol, jobs = args.theorem, args.tol, args.jobs
    if t == "min-max":
        _need(args, "n", "r", "q")
        return verify_min_max(args.n, args.r, args.q, tol, jobs, cfg)
    if t == "tightness":
        _need(args, "n", "r", "q")
        return verify_tightness(args.n, args.r, args.q, tol, cfg)
    if t == "ning-zhai":
        _need(args, "n")
        return verify_ning_zhai_exhaustive(args.n, tol, cfg)
    if t == "supersat":
        _need(args, "n", "r", "q")
        return verify_supersat_family(args.n, args.r, args.q, named_pattern(args.pattern),
                                      tol, jobs, cfg)
    if t == "covering":
        _need(args, "n", "r", "s")
        return verify_covering(args.n, args.r, args.s, named_pattern(args.pattern), tol, cfg)
    if t == "t-variant":
        _need(args, "n", "r", "q")
        return verify_t_variant(args.n, args.r, args.q, named_pattern(args.pattern), tol,
                                jobs, cfg)
    if t == "first-key":
        return verify_first_key(tol, cfg, args.enforce_scale)
    if t == "move-one":
        return verify_move_one(args.n, tol, cfg)
    if t == "shift":
        return verify_shift(tol, cfg, args.enforce_scale)
    _need(args, "n", "r", "q")
    return verify_l_vs_t(args.n, args.r, args.q, tol, cfg)


def flatten_checks(report: dict) -> list[dict]:
    rows = []
    for c in report.get("checks", []):
        lhs = c.get("lhs") or [None, None]
        rhs = c.get("rhs") or [None, None]
        rows.append({"theorem": report.get("theorem"), "status": report.get("status"),
                     "name": c.get("name"), "verdict": c.get("verdict"),
                     "relation": c.get("relation", "<="), "probe": c.get("probe", False),
                     "lhs_lo": lhs[0], "lhs_hi": lhs[1], "rhs_lo": rhs[0], "rhs_hi": rhs[1],
                     "margin": c.get("margin"), "params": c.get("params", {})})
    return rows


def cmd_verify(args, cfg) -> int:
    rep = _run_campaign(args, cfg)
    fmt = args.format or "json"
    if fmt == "graph6":
        _emit(args, "".join(w["graph6"] + "\n" for w in rep.witnesses if w.get("graph6")))
    elif fmt == "csv":
        _emit(args, _rows_csv(flatten_checks(rep.to_json()), CHECK_COLUMNS))
    else:
        _emit(args, rep.dumps(timing=not args.no_timing) + "\n")
    return 1 if rep.status == STATUS_FAIL else 0


def cmd_report(args, cfg) -> int:
    reports = []
    for path in args.reports:
        with open(path) as fh:
            data = json.load(fh)
        reports.extend(data if isinstance(data, list) else [data])
    if args.no_timing:
        for r in reports:
            r.pop("wallclock_ms", None)
    fmt = args.format or "csv"
    if fmt == "json":
        _emit(args, _dump(reports))
    elif fmt == "csv":
        rows = [row for r in reports for row in flatten_checks(r)]
        _emit(args, _rows_csv(rows, CHECK_COLUMNS))
    else:
        raise UsageError("report output is csv or json")
    return 0


COMMANDS = {"construct": cmd_construct, "spectrum": cmd_spectrum, "count": cmd_count,
            "enumerate": cmd_enumerate, "verify": cmd_verify, "report": cmd_report}


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = load_config(args.config)
        # precedence: flag > config > built-in default
        if args.tol is None:
            args.tol = float(cfg.get("tol", DEFAULT_TOL))
        if args.jobs is None:
            args.jobs = int(cfg.get("jobs", 1))
        if not (args.tol > 0 and math.isfinite(args.tol)):
            raise UsageError("--tol must be a positive number")
        if args.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        return COMMANDS[args.command](args, cfg)
    except (UsageError, SpecsatError, OSError, json.JSONDecodeError) as exc:
        print(f"specsat {args.command}: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
