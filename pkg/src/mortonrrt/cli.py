"""Command line: ``gen``, ``plan``, ``bench`` and ``profile``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from contextlib import contextmanager

from mortonrrt.bench import (
    REF_STORE_SHARE,
    QUICK_TRIALS,
    SuiteConfig,
    emit_csv,
    format_report,
    geomean,
    profile_rows,
    run_suite,
    summarize,
)
from mortonrrt.cost import CostModel
from mortonrrt.memostore import NN_POLICIES, StoreConfig
from mortonrrt.morton import QuantConfig
from mortonrrt.planner import PlannerConfig, Variant, plan
from mortonrrt.scenario import (
    ScenarioError,
    dumps_scenario,
    generate_synthetic,
    load_scenario,
)

log = logging.getLogger("mortonrrt")


@contextmanager
def _sink(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _costs(args) -> CostModel:
    return CostModel.from_file(args.cost_model) if args.cost_model else CostModel.default()


def _store_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k", type=int, default=QuantConfig.mask_bits, help="masked low bits of the Morton code")
    p.add_argument("--scale", type=int, default=QuantConfig.scale, help="grid subunits per map unit")
    p.add_argument("--store-capacity", type=int, default=StoreConfig.capacity_bytes, help="store size in bytes")
    p.add_argument("--cost-model", metavar="FILE", help="JSON cost model overriding the defaults")
    p.add_argument("--nn-policy", choices=NN_POLICIES, default=StoreConfig.nn_policy,
                   help="which entry of a hit line morton_nn returns")
    p.add_argument("--no-endpoint-probe", dest="probe_endpoint", action="store_false",
                   help="trust a NO_COLLISION store answer without testing the new node")


def _suite_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--edge", type=int, nargs="+", default=[100, 200])
    p.add_argument("--timesteps", type=int, nargs="+", default=[10, 100])
    p.add_argument("--obstacles", type=int, nargs="+", default=[5, 10, 20])
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--quick", action="store_true", help=f"{QUICK_TRIALS} trials per configuration")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iters", type=int, default=SuiteConfig.max_iters)
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--out", metavar="FILE", help="CSV destination (default stdout)")
    _store_flags(p)


def _suite_config(args, variants) -> SuiteConfig:
    return SuiteConfig(
        edge_lengths=tuple(args.edge),
        timestep_counts=tuple(args.timesteps),
        obstacle_counts=tuple(args.obstacles),
        trials=QUICK_TRIALS if args.quick else args.trials,
        seed=args.seed,
        variants=tuple(variants),
        k=args.k,
        scale=args.scale,
        store_capacity=args.store_capacity,
        max_iters=args.max_iters,
        nn_policy=args.nn_policy,
        probe_endpoint=args.probe_endpoint,
    )


def _progress(rows):
    r = rows[0]
    log.info("%s trial %d done", r.config, r.trial)


def cmd_gen(args) -> int:
    s = generate_synthetic(args.edge, args.timesteps, args.obstacles, args.seed, radius=args.radius)
    with _sink(args.out) as fh:
        fh.write(dumps_scenario(s))
    return 0


def cmd_plan(args) -> int:
    s = load_scenario(args.scenario)
    store = StoreConfig(
        capacity_bytes=args.store_capacity, quant=QuantConfig(args.scale, args.k), nn_policy=args.nn_policy
    )
    cfg = PlannerConfig(
        probe_endpoint=args.probe_endpoint,
        variant=Variant(args.variant),
        seed=args.seed,
        step=args.step,
        goal_bias=args.goal_bias,
        max_iters=args.max_iters,
        store=store,
        costs=_costs(args),
    )
    res = plan(s, cfg)
    st = res.stats
    doc = {
        "variant": cfg.variant.value,
        "seed": cfg.seed,
        "success": res.success,
        "path": [list(p) for p in res.path] if res.path else None,
        "stats": {
            "nodes": st.N,
            "obstacles": st.L_count,
            "iterations": st.iterations,
            "alpha": st.alpha,
            "beta": st.beta,
            "nn_store_hits": st.nn_store_hits,
            "col_store_hits": st.col_store_hits,
            "counts": st.counts,
            "modeled_ops": st.modeled_ops,
            "modeled_cycles": st.modeled_cycles,
            "store_ops": st.store_ops,
            "path_len": st.path_len if res.success else None,
            "wall_time": st.wall_time,
        },
    }
    with _sink(args.out) as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    return 0 if res.success else 1


def cmd_bench(args) -> int:
    variants = [Variant(v) for v in args.variant] if args.variant else list(Variant)
    sc = _suite_config(args, variants)
    result = run_suite(sc, _costs(args), jobs=args.jobs, progress=_progress)
    summary = summarize(result.rows, wall_clock=args.wall_clock)
    with _sink(args.out) as fh:
        emit_csv(result.rows, summary, fh, wall_clock=args.wall_clock)
    report = format_report(summary)
    if report:
        print(report, file=sys.stderr)
    return 0


def cmd_profile(args) -> int:
    sc = _suite_config(args, [Variant.SW_MORTON])
    result = run_suite(sc, _costs(args), jobs=args.jobs, progress=_progress)
    per_config = profile_rows(result.rows)
    with _sink(args.out) as fh:
        fh.write("config,store_share\n")
        for cid, share in per_config:
            fh.write(f"{cid},{share!r}\n")
        shares = [s for _, s in per_config if s > 0]
        if shares:
            fh.write(f"# geomean_store_share,{geomean(shares)!r}\n")
        fh.write(f"# reference_store_share,{REF_STORE_SHARE!r}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mortonrrt", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a synthetic scenario file")
    p.add_argument("--edge", type=float, default=100.0)
    p.add_argument("--timesteps", type=int, default=20)
    p.add_argument("--obstacles", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--radius", type=float, default=3.0)
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("plan", help="plan once on a scenario file")
    p.add_argument("--scenario", required=True, metavar="FILE")
    p.add_argument("--variant", choices=[v.value for v in Variant], default=Variant.BASELINE.value)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--step", type=float, default=PlannerConfig.step)
    p.add_argument("--goal-bias", type=float, default=PlannerConfig.goal_bias)
    p.add_argument("--max-iters", type=int, default=PlannerConfig.max_iters)
    p.add_argument("--out", metavar="FILE")
    _store_flags(p)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("bench", help="run the configuration suite and write CSV")
    _suite_flags(p)
    p.add_argument("--variant", action="append", choices=[v.value for v in Variant])
    p.add_argument("--wall-clock", action="store_true", help="add wall_time (makes output non-reproducible)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("profile", help="per-configuration store share of sw-morton")
    _suite_flags(p)
    p.set_defaults(func=cmd_profile)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (ScenarioError, ValueError, OSError) as exc:
        print(f"mortonrrt: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
