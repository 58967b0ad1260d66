"""Command-line front end.

::

    jwa aggregate EVIDENCE.csv WEIGHTS.toml [--operator jwa|lwa|...|all] [--display]
    jwa explain EVIDENCE.csv WEIGHTS.toml [--display]
    jwa experiment [--config CFG.toml] [--replications N] [--seed S] ... [--plot-dir DIR]

Exit status is 0 on success, 1 for invalid input and 2 for I/O failures.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from . import operators as ops
from .errors import AggregationError
from .files import experiment_plan, read_evidence, read_experiment_config, read_weight_spec
from .plot import write_panels
from .simulation import run_experiment

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2


def _number(x: float, display: bool) -> str:
    return f"{x:.2f}" if display else format(x, ".17g")


def _vector(values, display: bool) -> str:
    return ";".join(_number(float(v), display) for v in values)


def _names(indices, sources) -> str:
    return ";".join(sources[i] for i in indices)


def _ties(perm: ops.RankPermutation, sources) -> str:
    return "|".join(_names(g, sources) for g in perm.tie_groups)


def _load(args):
    evidence = read_evidence(args.evidence)
    spec = read_weight_spec(args.weights, evidence.sources)
    return evidence, spec


def cmd_aggregate(args, out) -> int:
    evidence, spec = _load(args)
    tags = ops.OPERATORS if args.operator == "all" else (args.operator,)
    header = ["row", *tags]
    if "jwa" in tags:
        header += ["jwa_permutation", "jwa_joint_weights"]
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for i, x in enumerate(evidence.X, start=1):
        results = {t: ops.aggregate(t, x, spec.linear, spec.order, spec.alpha) for t in tags}
        row = [i] + [_number(results[t].value, args.display) for t in tags]
        if "jwa" in tags:
            res = results["jwa"]
            row += [_names(res.permutation.order, evidence.sources), _vector(res.effective_weights, args.display)]
        writer.writerow(row)
    return EXIT_OK


def cmd_explain(args, out) -> int:
    evidence, spec = _load(args)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["row", "permutation", "tie_groups", "linear_weights_ranked", "order_weights",
                     "joint_weights", *ops.OPERATORS])
    for i, x in enumerate(evidence.X, start=1):
        perm, joint = ops.joint_weights(x, spec.linear, spec.order)
        values = [ops.aggregate(t, x, spec.linear, spec.order, spec.alpha).value for t in ops.OPERATORS]
        writer.writerow([
            i,
            _names(perm.order, evidence.sources),
            _ties(perm, evidence.sources),
            _vector(spec.linear.reorder(perm.order), args.display),
            _vector(spec.order, args.display),
            _vector(joint, args.display),
            *(_number(v, args.display) for v in values),
        ])
    return EXIT_OK


def _id_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _float_list(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]


def cmd_experiment(args, out) -> int:
    data = read_experiment_config(args.config) if args.config else {}
    plan = experiment_plan(
        data,
        sets=args.sets,
        deltas=args.deltas,
        replications=args.replications,
        trials=args.trials,
        seed=args.seed,
        alpha=args.alpha,
        sdowa=True if args.sdowa else None,
    )
    table = run_experiment(plan.base, plan.sets, plan.deltas, workers=args.workers)
    text = table.to_csv()
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    if args.plot_dir:
        for path in write_panels(table, args.plot_dir):
            print(f"wrote {path}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jwa", description="Joint weighted averaging of sources and evidence.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, helptext in (("aggregate", "aggregate each evidence row"),
                           ("explain", "show ranked, order and joint weights per row")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("evidence", help="CSV with one column per source (optional 'y' column)")
        p.add_argument("weights", help="TOML with linear_weights, order_weights and optional alpha")
        if name == "aggregate":
            p.add_argument("--operator", choices=(*ops.OPERATORS, "all"), default="jwa")
        p.add_argument("--display", action="store_true", help="round numbers to 2 decimals")

    p = sub.add_parser("experiment", help="run the simulated source-vs-evidence experiment")
    p.add_argument("--config", help="TOML file with experiment parameters")
    p.add_argument("--sets", type=_id_list, help="comma-separated validity set ids")
    p.add_argument("--deltas", type=_float_list, help="comma-separated bias magnitudes")
    p.add_argument("--replications", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--sdowa", action="store_true", help="include SDOWA in the roster")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output", "-o", help="results CSV path (default stdout)")
    p.add_argument("--plot-dir", help="write one SVG panel per delta here")
    return parser


COMMANDS = {"aggregate": cmd_aggregate, "explain": cmd_explain, "experiment": cmd_experiment}


def main(argv=None, out=None) -> int:
    args = build_parser().parse_args(argv)
    out = sys.stdout if out is None else out
    try:
        return COMMANDS[args.command](args, out)
    except AggregationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
