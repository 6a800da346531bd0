"""Command-line interface.

Subcommands::

    covertnet plan         --input net.json --output plan.json [overrides]
    covertnet experiment   --input spec.json --output results.csv [overrides]
    covertnet verify       --input plan.json --network net.json [--output report.json]
    covertnet export-graph --input plan.json --network net.json --output graph.txt

Exit codes: 0 success, 2 configuration or validation problem,
3 no feasible route, 4 verification failure.  Errors are written to
stderr as a one-line JSON object.  All numeric output uses 17
significant digits so reruns with identical inputs are byte-identical.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from . import harness
from .errors import CovertNetError, InvalidRoutePlan, NoFeasiblePath
from .fileio import (
    dumps_json,
    format_float,
    load_network,
    load_plan,
    save_plan,
    write_graph_description,
    write_text,
)
from .metrics import CovertBudget
from .model import build_network, validate_route_plan
from .routing import brute_force_best_route, het_opt, per_link_dep, single_mode_baseline
from .verify import verify_plan

_PLAN_ALGORITHMS = ("het-opt", "per-link-dep", "brute-force")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="covertnet",
        description="Plan covert routes and run Monte Carlo capacity experiments.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, output_required=True):
        sp.add_argument("--input", required=True, help="input file")
        sp.add_argument("--output", required=output_required, help="output file")

    sp = sub.add_parser("plan", help="compute a route plan for a network file")
    common(sp)
    sp.add_argument("--epsilon", type=float, default=0.01, help="end-to-end KL budget (nats)")
    sp.add_argument("--blocklength", type=int, default=500, help="codeword blocklength n")
    sp.add_argument("--alpha", type=float, default=None, help="override the path-loss exponent")
    sp.add_argument("--csi", choices=("known", "linear-tau", "squared-tau"), default="known")
    sp.add_argument(
        "--algorithms",
        default="het-opt",
        help=f"planning algorithm, one of {', '.join(_PLAN_ALGORITHMS)} or mode-<m>",
    )
    sp.add_argument("--adversary-mode", choices=("single", "multi"), default=None)
    sp.add_argument("--max-hops", type=int, default=10, help="hop budget for per-link-dep")
    sp.add_argument("--seed", type=int, default=None, help="accepted for interface parity; planning is deterministic")

    sp = sub.add_parser("experiment", help="run a Monte Carlo sweep from a spec file")
    common(sp)
    sp.add_argument("--seed", type=int, default=None, help="override the master seed")
    sp.add_argument("--trials", type=int, default=None)
    sp.add_argument("--epsilon", type=float, default=None)
    sp.add_argument("--blocklength", type=int, default=None)
    sp.add_argument("--alpha", default=None, help="comma-separated path-loss exponents")
    sp.add_argument("--adversaries", type=int, default=None, help="override the adversary count")
    sp.add_argument("--placement", choices=("random", "intelligent"), default=None)
    sp.add_argument("--csi", choices=("known", "linear-tau", "squared-tau"), default=None)
    sp.add_argument("--algorithms", default=None, help="comma-separated algorithm names")
    sp.add_argument("--max-hops", type=int, default=None)
    sp.add_argument("--threads", type=int, default=1, help="worker processes (results identical for any value)")

    sp = sub.add_parser("verify", help="re-check a plan against its network")
    sp.add_argument("--input", required=True, help="plan file")
    sp.add_argument("--network", required=True, help="network file")
    sp.add_argument("--output", default=None, help="report file (default: stdout)")

    sp = sub.add_parser("export-graph", help="emit a plain-text drawing description")
    sp.add_argument("--input", required=True, help="plan file")
    sp.add_argument("--network", required=True, help="network file")
    sp.add_argument("--output", required=True, help="graph description file")

    return p


def cmd_plan(args) -> int:
    net = load_network(args.input)
    if args.alpha is not None:
        net = build_network(
            net.nodes, net.adversaries, net.gains, args.alpha, net.source, net.dest
        )
    budget = CovertBudget(args.epsilon, args.blocklength)
    alg = args.algorithms
    if "," in alg:
        raise ValueError("plan takes exactly one algorithm")
    if alg == "het-opt":
        plan = het_opt(net, budget, args.adversary_mode, args.csi)
    elif alg == "per-link-dep":
        plan = per_link_dep(net, budget, args.max_hops, args.adversary_mode, args.csi)
    elif alg == "brute-force":
        plan = brute_force_best_route(net, budget, args.adversary_mode, args.csi)
    elif alg.startswith("mode-"):
        plan = single_mode_baseline(net, int(alg.split("-")[1]) - 1, budget, args.adversary_mode, args.csi)
    else:
        raise ValueError(f"unknown algorithm {alg!r}")
    save_plan(plan, args.output)
    print(f"capacity_nats={format_float(plan.path_capacity)} hops={plan.hops}")
    return 0


def cmd_experiment(args) -> int:
    spec = harness.load_spec(args.input)
    updates = {}
    if args.seed is not None:
        updates["master_seed"] = args.seed
    if args.trials is not None:
        updates["trials"] = args.trials
    if args.epsilon is not None or args.blocklength is not None:
        updates["budget"] = CovertBudget(
            args.epsilon if args.epsilon is not None else spec.budget.epsilon,
            args.blocklength if args.blocklength is not None else spec.budget.n,
        )
    if args.alpha is not None:
        updates["alpha"] = tuple(float(a) for a in args.alpha.split(","))
    if args.adversaries is not None:
        updates["n_adversaries"] = args.adversaries
    if args.placement is not None:
        updates["placement"] = args.placement
    if args.csi is not None:
        updates["csi_variant"] = args.csi
    if args.algorithms is not None:
        updates["algorithms"] = tuple(args.algorithms.split(","))
    if args.max_hops is not None:
        updates["max_hops"] = args.max_hops
    if updates:
        spec = replace(spec, **updates)

    out = Path(args.output)
    records = []
    with open(out, "w", encoding="utf-8", newline="") as f:
        f.write(",".join(harness.RECORD_COLUMNS) + "\n")
        for batch in harness.iter_experiment_batches(spec, threads=args.threads):
            harness.write_records_csv(f, batch, header=False)
            f.flush()
            records.extend(batch)
    summary = harness.summarize(records)
    summary_path = out.with_suffix(".summary.csv")
    with open(summary_path, "w", encoding="utf-8", newline="") as f:
        harness.write_summary_csv(f, summary)
    print(f"records={len(records)} summary_rows={len(summary)} summary_file={summary_path}")
    return 0


def cmd_verify(args) -> int:
    plan = load_plan(args.input)
    net = load_network(args.network)
    report = verify_plan(net, plan)
    text = dumps_json(report.to_dict()) + "\n"
    if args.output:
        write_text(args.output, text)
    else:
        sys.stdout.write(text)
    status = "pass" if report.passed else "FAIL"
    print(f"verification={status} checks={len(report.checks)}", file=sys.stderr)
    return 0 if report.passed else 4


def cmd_export_graph(args) -> int:
    plan = load_plan(args.input)
    net = load_network(args.network)
    try:
        validate_route_plan(net, plan)
    except InvalidRoutePlan as e:
        raise ValueError(f"plan does not match network: {e}") from e
    write_graph_description(net, plan, args.output)
    return 0


_DISPATCH = {
    "plan": cmd_plan,
    "experiment": cmd_experiment,
    "verify": cmd_verify,
    "export-graph": cmd_export_graph,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _DISPATCH[args.command](args)
    except NoFeasiblePath as e:
        _emit_error(e)
        return 3
    except (CovertNetError, ValueError, KeyError, OSError) as e:
        _emit_error(e)
        return 2


def _emit_error(e: Exception) -> None:
    sys.stderr.write(dumps_json({"error": type(e).__name__, "message": str(e)}, indent=None) + "\n")


def entry() -> None:  # console-script wrapper
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
