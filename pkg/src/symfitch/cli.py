"""Command-line interface.

Exit codes: 0 = Fitch map, 1 = not a Fitch map, 2 = invalid input,
3 = resource limit.  Machine-readable JSON goes to stdout, human-readable
summaries to stderr.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
import time
import warnings
from typing import Any, Sequence

from . import io
from .compat import DEFAULT_MAX_LEAVES, FITCH, NOT_FITCH, UNDECIDED, RecognitionResult, recognize
from .errors import NotFitchError, PreconditionError, ResourceLimitError, ValidationError
from .model import LabeledTree, explain
from .mono import is_restricted_fitch, least_resolved_trees
from .reduction import format_quartets, parse_quartets, random_labeled_tree, random_quartet_set, reduce_quartets_to_map

EXIT_CODES = {FITCH: 0, NOT_FITCH: 1, UNDECIDED: 3}
EXIT_INVALID = 2


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


def _emit(obj: Any) -> None:
    sys.stdout.write(io.dump_json(obj))


def _write_tree(tree: LabeledTree, path: str, fmt: str) -> None:
    if fmt == "newick":
        text = io.to_newick(tree) + "\n"
    elif fmt == "dot":
        text = io.to_dot(tree)
    else:
        text = io.dump_json(io.tree_to_json(tree))
    with open(path, "w") as fh:
        fh.write(text)


def _fmt(args: argparse.Namespace) -> str:
    return "newick" if args.newick else "dot" if args.dot else "json"


def _load_map(path: str):
    return io.map_from_json(io.load_json(path))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_recognize(args: argparse.Namespace) -> int:
    emap = _load_map(args.map)
    result = recognize(emap, max_leaves=args.max_leaves, time_budget=args.time_budget, jobs=args.jobs)
    if result.witness is not None and args.witness:
        _write_tree(result.witness, args.witness, _fmt(args))
    if args.plot:
        from .plotting import report_figure, save_figure

        save_figure(report_figure(emap, result, os.path.basename(args.map)), args.plot)
    _emit(io.verdict_to_json(result, args.witness))
    _say(_summary(args.map, result))
    return EXIT_CODES[result.decision]


def _summary(name: str, result: RecognitionResult) -> str:
    if result.decision == FITCH:
        return f"{name}: symmetrized Fitch map (witness has {len(result.witness.vertices)} vertices)"
    if result.decision == NOT_FITCH:
        r = result.reason
        if r["kind"] == "non-partition":
            return f"{name}: not Fitch; neighborhoods of color {r['color']} overlap at {r['leaf']}"
        if "subsplits" in r:
            return f"{name}: not Fitch; incompatible subsplits {r['subsplits'][0]} and {r['subsplits'][1]}"
        return f"{name}: not Fitch; exhaustive search found no tree ({r['nodes']} nodes)"
    return f"{name}: undecided ({result.detail})"


def cmd_explain(args: argparse.Namespace) -> int:
    tree = io.tree_from_json(io.load_json(args.tree))
    emap = explain(tree, args.colors.split(",") if args.colors else None)
    _emit(io.map_to_json(emap))
    return 0


def cmd_mono(args: argparse.Namespace) -> int:
    emap = _load_map(args.map)
    decision = is_restricted_fitch(emap)
    if not decision.accepted:
        if decision.two_colors:
            (x1, y1, m1), (x2, y2, m2) = decision.two_colors
            reason = {"kind": "two-colors", "colors": [m1, m2], "pairs": [[x1, y1], [x2, y2]]}
        else:
            reason = {"kind": "k1-plus-k2", "color": decision.color, "triple": list(decision.k1_plus_k2)}
        _emit({"decision": NOT_FITCH, "reason": reason})
        _say(f"{args.map}: not a monochromatic Fitch map; {decision.reason()}")
        return 1
    out: dict[str, Any] = {"decision": FITCH}
    if emap.n >= 3:
        fam = least_resolved_trees(emap)
        tree = fam.representative
        out["family"] = {
            "color": fam.color,
            "parts": [sorted(p) for p in fam.parts],
            "parts_ge_two": [sorted(p) for p in fam.parts_ge_two],
            "constraints": list(fam.constraints),
            "vertex_count": fam.vertex_count,
            "diameter": tree.diameter(),
        }
    else:
        a, b = emap.leaves
        tree = LabeledTree(emap.leaves, (emap.leaves,), emap.leaves, {(a, b): emap[a, b]})
    out["witness"] = io.tree_to_json(tree)
    if args.witness:
        _write_tree(tree, args.witness, _fmt(args))
        out["witness_file"] = args.witness
    _emit(out)
    _say(f"{args.map}: monochromatic Fitch map; least-resolved representative has {len(tree.vertices)} vertices")
    return 0


def cmd_reduce(args: argparse.Namespace) -> int:
    with open(args.quartets) as fh:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            qs = parse_quartets(fh.read(), args.leaves or ())
    for w in caught:
        _say(f"warning: {w.message}")
    _emit(io.map_to_json(reduce_quartets_to_map(qs)))
    return 0


def cmd_gen(args: argparse.Namespace) -> int:
    if args.kind == "tree":
        colors = args.colors.split(",") if args.colors else []
        tree = random_labeled_tree(args.n, colors, args.density, args.seed)
        text = io.dump_json(io.tree_to_json(tree))
    else:
        text = format_quartets(random_quartet_set(args.n, args.k, args.seed))
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    """Recognize several maps; write a delimited table and one figure per map."""
    from .plotting import report_figure, save_figure

    os.makedirs(args.out, exist_ok=True)
    delim = "," if args.format == "csv" else "\t"
    table = os.path.join(args.out, f"report.{args.format}")
    worst = 0
    with open(table, "w", newline="") as fh:
        writer = csv.writer(fh, delimiter=delim, lineterminator="\n")
        writer.writerow(["file", "leaves", "colors", "decision", "reason", "witness_vertices", "seconds", "figure"])
        for path in args.maps:
            stem = os.path.splitext(os.path.basename(path))[0]
            try:
                emap = _load_map(path)
            except (ValidationError, OSError) as exc:
                writer.writerow([path, "", "", "invalid", str(exc), "", "", ""])
                worst = max(worst, EXIT_INVALID)
                continue
            t0 = time.perf_counter()
            result = recognize(emap, max_leaves=args.max_leaves, time_budget=args.time_budget)
            dt = time.perf_counter() - t0
            fig_path = os.path.join(args.out, f"{stem}.png")
            save_figure(report_figure(emap, result, stem), fig_path)
            reason = _summary(stem, result).split(": ", 1)[1] if result.decision != FITCH else ""
            writer.writerow([
                path,
                emap.n,
                len(emap.colors),
                result.decision,
                reason,
                len(result.witness.vertices) if result.witness else "",
                f"{dt:.4f}",
                os.path.basename(fig_path),
            ])
            worst = max(worst, EXIT_CODES[result.decision])
    _say(f"wrote {table}")
    return worst


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-leaves", type=int, default=DEFAULT_MAX_LEAVES, help="exact-search leaf cap (default %(default)s)")
    p.add_argument("--time-budget", type=float, default=None, metavar="SECONDS", help="exact-search time budget")


def _export_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--witness", metavar="FILE", help="write the explaining tree here")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--newick", action="store_true", help="write the witness as Newick")
    fmt.add_argument("--dot", action="store_true", help="write the witness as Graphviz DOT")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="symfitch", description="Recognize and build symmetrized Fitch maps.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("recognize", help="decide whether a map is a symmetrized Fitch map")
    p.add_argument("map")
    _export_flags(p)
    _solver_flags(p)
    p.add_argument("--jobs", type=int, default=1, help="worker processes for the exact search")
    p.add_argument("--plot", metavar="PNG", help="render color graphs and witness to an image")
    p.set_defaults(func=cmd_recognize)

    p = sub.add_parser("explain", help="compute the map explained by a labeled tree")
    p.add_argument("tree")
    p.add_argument("--colors", help="comma-separated color universe (default: colors used on edges)")
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("mono", help="decide a map with at most one color per pair; build a least-resolved tree")
    p.add_argument("map")
    _export_flags(p)
    p.set_defaults(func=cmd_mono)

    p = sub.add_parser("reduce", help="turn a quartet file into a symmetric map")
    p.add_argument("quartets")
    p.add_argument("--leaves", nargs="+", help="extra leaves for the ground set")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("gen", help="generate random instances")
    gsub = p.add_subparsers(dest="kind", required=True)
    g = gsub.add_parser("tree", help="random edge-labeled binary tree (JSON)")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--colors", default="1", help="comma-separated colors (default: %(default)s)")
    g.add_argument("--density", type=float, default=0.3)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("-o", "--output")
    g = gsub.add_parser("quartets", help="random quartet set (text)")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("report", help="recognize maps; write a table and figures")
    p.add_argument("maps", nargs="+")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--format", choices=("tsv", "csv"), default="tsv")
    _solver_flags(p)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        import logging

        logging.basicConfig(level=logging.DEBUG, stream=sys.stderr)
    try:
        return args.func(args)
    except (ValidationError, PreconditionError, NotFitchError, OSError) as exc:
        _say(f"error: {exc}")
        return EXIT_INVALID
    except ResourceLimitError as exc:
        _say(f"resource limit: {exc}")
        return 3


if __name__ == "__main__":
    sys.exit(main())
