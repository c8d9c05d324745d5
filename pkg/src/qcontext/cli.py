"""Command-line interface: ``qcontext <command> ...``.

Exit codes
----------
0  success
2  invalid input (bad flags, malformed files, configurations without contexts)
3  capability refusal (qubit count out of range, exact search over budget)
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import analysis
from .exact import DEFAULT_BUDGET, exact_degree, lower_bound_full, polarity_count
from .exceptions import BudgetExceededError, CapabilityError, EmptyConfigurationError, QContextError
from .io import GEOMETRIES, load_record, make_configuration, record_from_result, save_record, xor_cnf
from .polar_space import (QuadricKind, build_space, iter_quadrics, negative_line_distribution, quadric_family_size,
                          quadric_point_count)
from .solver import SolverParams, solve

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_REFUSED = 3

logger = logging.getLogger("qcontext")


def _add_geometry(p: argparse.ArgumentParser, custom: bool = False) -> None:
    p.add_argument("--qubits", "-n", type=int, required=True)
    choices = GEOMETRIES if custom else GEOMETRIES[:3]
    p.add_argument("--geometry", "-g", choices=choices, default="full")
    p.add_argument("--index", help="quadric index observable, e.g. XYYZ (default: canonical choice)")


def cmd_space(args) -> int:
    space = build_space(args.qubits)
    rows = {"qubits": args.qubits, "p": space.n_points, "l": space.n_lines, "l_neg": space.n_negative}
    print(f"N={args.qubits} p={space.n_points} l={space.n_lines} l-={space.n_negative}")
    if args.quadrics:
        kind = QuadricKind(args.quadrics)
        if kind is QuadricKind.ELLIPTIC and args.qubits < 2:
            raise CapabilityError("elliptic quadrics need at least two qubits")
        dist = negative_line_distribution(space, kind)
        q_lines = next(iter_quadrics(space, kind)).n_lines
        rows["quadrics"] = {"kind": kind.value, "count": quadric_family_size(args.qubits, kind),
                            "p": quadric_point_count(args.qubits, kind), "l": q_lines,
                            "l_neg_distribution": dist}
        print(f"{kind.value} quadrics: {rows['quadrics']['count']}  p={rows['quadrics']['p']} l={q_lines}")
        for neg, count in dist.items():
            print(f"  l-={neg}: {count} quadrics")
    if args.json:
        print(json.dumps(rows))
    return EXIT_OK


def cmd_solve(args) -> int:
    space = build_space(args.qubits)
    config = make_configuration(space, args.geometry, args.index)
    if config.n_contexts == 0:
        print("error: no contexts (paper: N/A)", file=sys.stderr)
        return EXIT_INVALID
    params = SolverParams(theta=args.theta, gamma=args.gamma, max_iterations=args.iterations,
                          restarts=args.restarts, seed=args.seed, target_distance=args.target,
                          time_budget=args.time_budget)
    result = solve(config, params, n_jobs=args.threads)
    index = args.index
    if index is None and args.geometry != "full":
        from .io import default_quadric_index

        index = str(default_quadric_index(space, args.geometry))
    print(f"best_distance {result.best_distance}")
    print(f"contexts {config.n_contexts} negative {config.n_negative}")
    print(f"restart {result.restart_index_of_best} iteration {result.iterations_to_best} "
          f"runtime_ms {result.runtime_ms}{' (time budget hit)' if result.timed_out else ''}")
    if args.out:
        save_record(record_from_result("solve", config, result, args.geometry, index), args.out)
    if args.trace_csv:
        Path(args.trace_csv).write_text(result.convergence_csv())
    return EXIT_OK


def cmd_exact(args) -> int:
    space = build_space(args.qubits)
    config = make_configuration(space, args.geometry, args.index)
    try:
        d = exact_degree(config, budget=args.budget, n_jobs=args.threads or 1)
    except BudgetExceededError as exc:
        print(f"refused: incidence rank {exc.rank} needs 2^{exc.rank} codewords (budget {exc.budget})",
              file=sys.stderr)
        return EXIT_REFUSED
    print(d)
    return EXIT_OK


def cmd_bounds(args) -> int:
    lb = lower_bound_full(args.qubits)
    s = polarity_count(args.qubits)
    print(f"lower_bound {lb}")
    print(f"symplectic_polarities {s}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    record = load_record(args.record)
    uns = record.unsatisfied()
    show_all = not (args.profiles or args.graphs or args.restrict_criteria)
    report: dict = {"qubits": record.qubits, "geometry": record.geometry, "best_distance": record.best_distance}
    if args.profiles or show_all:
        dp = analysis.degree_profile(uns)
        lp = analysis.line_type_profile(uns)
        report["degree_profile"] = dp.to_dict()
        report["line_types"] = lp.to_dict()
        print(f"degrees: {dp}")
        print(f"line types: {lp or 'none'}")
    if args.graphs or show_all:
        rep = analysis.known_structure_report(uns)
        report["structure"] = rep
        print(f"reference profile: {rep['reference_profile'] or 'none recognised'}")
        for key, value in rep["checks"].items():
            print(f"  {key}: {json.dumps(value)}")
    if args.restrict_criteria:
        rep = analysis.restriction_criteria_report(uns)
        report["restriction"] = rep
        for kind, r in rep.items():
            if "n_matching" in r:
                print(f"{kind} sections matching: {r['n_matching']}/{r['n_quadrics']} "
                      f"(holds for all: {str(r['holds_for_all']).lower()})")
            else:
                print(f"{kind} sections: {r['n_quadrics']} quadrics, {len(r['profiles'])} distinct profiles")
    if args.json:
        Path(args.json).write_text(json.dumps(report, indent=2) + "\n")
    return EXIT_OK


def cmd_export_xor(args) -> int:
    if args.record:
        record = load_record(args.record)
        config = record.configuration()
        geometry = record.geometry
    else:
        if args.qubits is None:
            raise QContextError("export-xor needs --qubits or --record")
        config = make_configuration(build_space(args.qubits), args.geometry, args.index)
        geometry = args.geometry
    text = xor_cnf(config, geometry)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcontext", description=__doc__.splitlines()[0],
                                     epilog="exit codes: 0 ok, 2 invalid input, 3 capability refusal")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("space", help="point/line/negative-line counts")
    p.add_argument("--qubits", "-n", type=int, required=True)
    p.add_argument("--quadrics", choices=[k.value for k in QuadricKind])
    p.add_argument("--json", action="store_true", help="also print a JSON line")
    p.set_defaults(func=cmd_space)

    p = sub.add_parser("solve", help="heuristic upper bound on the degree of contextuality")
    _add_geometry(p)
    p.add_argument("--theta", type=float, default=0.8)
    p.add_argument("--gamma", type=float, default=0.9)
    p.add_argument("--iterations", type=int, default=1000)
    p.add_argument("--restarts", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--target", type=int, help="stop once this distance is reached")
    p.add_argument("--time-budget", type=float, help="wall-clock limit in seconds")
    p.add_argument("--threads", type=int, help="worker threads (default: $QCONTEXT_THREADS or 1)")
    p.add_argument("--out", help="write the run record as JSON (.gz for gzip)")
    p.add_argument("--trace-csv", help="write iteration,best_distance rows")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("exact", help="exact degree by exhaustive coset search")
    _add_geometry(p)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="maximum number of codewords")
    p.add_argument("--threads", type=int)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("bounds", help="closed-form lower bound and polarity count")
    p.add_argument("--qubits", "-n", type=int, required=True)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("analyze", help="profiles and structure of a stored run")
    p.add_argument("record")
    p.add_argument("--profiles", action="store_true")
    p.add_argument("--graphs", action="store_true")
    p.add_argument("--restrict-criteria", action="store_true")
    p.add_argument("--json", help="write the report as JSON to this path")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("export-xor", help="write the MAX-XOR-SAT instance")
    p.add_argument("--qubits", "-n", type=int)
    p.add_argument("--geometry", "-g", choices=GEOMETRIES[:3], default="full")
    p.add_argument("--index")
    p.add_argument("--record", help="take the configuration from a run record")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export_xor)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except EmptyConfigurationError:
        print("error: no contexts (paper: N/A)", file=sys.stderr)
        return EXIT_INVALID
    except CapabilityError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except (QContextError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
