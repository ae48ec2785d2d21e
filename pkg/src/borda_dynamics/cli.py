"""Command line interface: enumerate, simulate, verify, export-dot.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 step budget
exceeded.  All output is deterministic byte-for-byte given the same inputs
and seeds.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .dynamics import report_to_json_dict, write_trajectory_csv
from .errors import BudgetExceededError, ScenarioFormatError
from .influence import network_to_dot
from .move_graph import build_cover_graph, move_graph_to_dot
from .scenarios import load_scenario
from .verifiers import load_suite, run_suite
from .weak_orders import antipode, borda_scores, format_order

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_BUDGET = 3


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _dump_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def cmd_enumerate(args) -> int:
    graph = build_cover_graph(args.m)
    if args.dot:
        _write(args.out, move_graph_to_dot(graph))
        return EXIT_OK
    lines = ["id,order,scores,antipode,degree"]
    for w in graph.orders:
        scores = ";".join(str(s) for s in borda_scores(w))
        lines.append(
            f"{w.canonical_id},{format_order(w)},{scores},"
            f"{format_order(antipode(w))},{graph.degree(w)}"
        )
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_simulate(args) -> int:
    sc = load_scenario(args.scenario)
    report = sc.run()
    doc = report_to_json_dict(report, sc.network.names, sc.alt_names, label=sc.label)
    _write(args.report, _dump_json(doc))
    if args.csv is not None:
        if args.csv == "-":
            write_trajectory_csv(report, sc.network.names, sys.stdout, sc.alt_names)
        else:
            with open(args.csv, "w", newline="") as handle:
                write_trajectory_csv(report, sc.network.names, handle, sc.alt_names)
    return EXIT_OK


def cmd_verify(args) -> int:
    entries = load_suite(args.suite)
    results, all_matched = run_suite(entries)
    _write(args.out, _dump_json(results))
    return EXIT_OK if all_matched else EXIT_VERIFY_FAILED


def cmd_export_dot(args) -> int:
    if args.move_graph is not None:
        _write(args.out, move_graph_to_dot(build_cover_graph(args.move_graph)))
    else:
        sc = load_scenario(args.scenario)
        _write(args.out, network_to_dot(sc.network))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="borda-dynamics",
        description="Bounded Borda preference dynamics on influence networks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_enum = sub.add_parser("enumerate", help="list all weak orders with scores and degrees")
    p_enum.add_argument("m", type=int, help="number of alternatives (2..6)")
    p_enum.add_argument("--dot", action="store_true", help="emit the move graph in DOT form")
    p_enum.add_argument("--out", default=None, help="output path (default stdout)")
    p_enum.set_defaults(func=cmd_enumerate)

    p_sim = sub.add_parser("simulate", help="run a scenario file to its cycle")
    p_sim.add_argument("scenario", help="scenario JSON path")
    p_sim.add_argument("--csv", default=None, help="write the trajectory CSV here ('-' = stdout)")
    p_sim.add_argument("--report", default=None, help="write the orbit report here (default stdout)")
    p_sim.set_defaults(func=cmd_simulate)

    p_ver = sub.add_parser("verify", help="run a suite manifest of verifiers")
    p_ver.add_argument("suite", help="suite manifest JSON path")
    p_ver.add_argument("--out", default=None, help="outcomes JSON path (default stdout)")
    p_ver.set_defaults(func=cmd_verify)

    p_dot = sub.add_parser("export-dot", help="export a move graph or a scenario network")
    group = p_dot.add_mutually_exclusive_group(required=True)
    group.add_argument("--move-graph", type=int, default=None, metavar="M",
                       help="export the move graph for M alternatives")
    group.add_argument("--scenario", default=None, help="export a scenario's influence network")
    p_dot.add_argument("--out", default=None, help="output path (default stdout)")
    p_dot.set_defaults(func=cmd_export_dot)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ScenarioFormatError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except FileNotFoundError as exc:
        print(f"input error: missing file {exc.filename}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except (ValueError, KeyError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
