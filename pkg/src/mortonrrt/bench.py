"""Benchmark suite: paired baseline / sw-morton / hw-morton runs over synthetic configurations.

Rows are deterministic (no wall-clock columns) unless ``wall_clock`` is requested,
so two runs with the same settings produce byte-identical CSV.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import itertools
import math
import random
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import IO, Iterable, Optional, Sequence

from mortonrrt.cost import CostModel
from mortonrrt.memostore import StoreConfig
from mortonrrt.morton import QuantConfig
from mortonrrt.planner import PlannerConfig, PlanStats, Variant, plan
from mortonrrt.scenario import generate_synthetic

# reported values, printed next to ours for comparison
REF_SW_WALL_SPEEDUP = 1.96
REF_SW_MODELED_SPEEDUP = 2.28
REF_HW_SPEEDUP = 8.0
REF_LENGTH_RATIO = {Variant.SW_MORTON: 1.42, Variant.HW_MORTON: 1.65}
REF_STORE_SHARE = 0.27

QUICK_TRIALS = 3


def geomean(values: Iterable[float]) -> float:
    vals = list(values)
    if not vals:
        raise ValueError("geomean of an empty sequence")
    if any(not v > 0 for v in vals):
        raise ValueError("geomean needs strictly positive values")
    return math.exp(math.fsum(math.log(v) for v in vals) / len(vals))


def store_share(stats: PlanStats) -> float:
    """Fraction of modeled operations spent in Morton-store lookups and updates."""
    if not stats.modeled_ops > 0:
        raise ValueError("store_share needs a run with nonzero modeled operations")
    return stats.store_ops / stats.modeled_ops


def modeled_speedup(baseline: PlanStats, candidate: PlanStats) -> float:
    if not candidate.modeled_cycles > 0:
        raise ValueError("candidate has zero modeled cycles")
    return baseline.modeled_cycles / candidate.modeled_cycles


@dataclass(frozen=True)
class SuiteConfig:
    edge_lengths: tuple = (100, 200)
    timestep_counts: tuple = (10, 100)
    obstacle_counts: tuple = (5, 10, 20)
    trials: int = 10
    seed: int = 0
    variants: tuple = (Variant.BASELINE, Variant.SW_MORTON, Variant.HW_MORTON)
    k: int = 18
    scale: int = QuantConfig.scale
    store_capacity: int = StoreConfig.capacity_bytes
    max_iters: int = 200_000
    nn_policy: str = StoreConfig.nn_policy
    probe_endpoint: bool = PlannerConfig.probe_endpoint

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.variants:
            raise ValueError("at least one variant is required")

    def configs(self) -> list[tuple[int, int, int]]:
        return list(itertools.product(self.edge_lengths, self.timestep_counts, self.obstacle_counts))

    def planner_config(self, variant: Variant, seed: int, costs: CostModel) -> PlannerConfig:
        store = StoreConfig(
            capacity_bytes=self.store_capacity,
            quant=QuantConfig(self.scale, self.k),
            nn_policy=self.nn_policy,
        )
        return PlannerConfig(
            variant=variant,
            seed=seed,
            store=store,
            costs=costs,
            max_iters=self.max_iters,
            probe_endpoint=self.probe_endpoint,
        )


def config_id(edge, timesteps, obstacles) -> str:
    return f"l{edge}_T{timesteps}_L{obstacles}"


def derive_seed(*parts) -> int:
    return random.Random(":".join(map(str, parts))).getrandbits(63)


@dataclass
class BenchRow:
    config: str
    edge: int
    timesteps: int
    obstacles: int
    variant: str
    trial: int
    scenario_seed: int
    plan_seed: int
    success: bool
    iterations: int
    nodes: int
    alpha: float
    beta: float
    nn_store_hits: int
    col_store_hits: int
    modeled_ops: float
    modeled_cycles: float
    store_share: float
    path_len: float
    wall_time: Optional[float] = None


COLUMNS = [f.name for f in dataclasses.fields(BenchRow) if f.name != "wall_time"]
VARIANT_ORDER = {v.value: i for i, v in enumerate(Variant)}


def _run_trial(args) -> list[BenchRow]:
    sc, costs, (edge, T, L), trial = args
    cid = config_id(edge, T, L)
    scen_seed = derive_seed(sc.seed, cid, trial, "scenario")
    plan_seed = derive_seed(sc.seed, cid, trial, "plan")
    scenario = generate_synthetic(edge, T, L, scen_seed)
    rows = []
    for v in sc.variants:
        res = plan(scenario, sc.planner_config(v, plan_seed, costs))
        st = res.stats
        rows.append(
            BenchRow(
                config=cid,
                edge=edge,
                timesteps=T,
                obstacles=L,
                variant=v.value,
                trial=trial,
                scenario_seed=scen_seed,
                plan_seed=plan_seed,
                success=res.success,
                iterations=st.iterations,
                nodes=st.N,
                alpha=st.alpha,
                beta=st.beta,
                nn_store_hits=st.nn_store_hits,
                col_store_hits=st.col_store_hits,
                modeled_ops=st.modeled_ops,
                modeled_cycles=st.modeled_cycles,
                store_share=store_share(st) if st.modeled_ops > 0 else 0.0,
                path_len=st.path_len,
                wall_time=st.wall_time,
            )
        )
    return rows


@dataclass
class SuiteResult:
    rows: list[BenchRow]
    summary: dict = field(default_factory=dict)


def run_suite(
    sc: SuiteConfig,
    cm: CostModel | None = None,
    jobs: int = 1,
    progress=None,
) -> SuiteResult:
    """Run every variant on identical scenarios and planner seeds for each (config, trial)."""
    costs = cm if cm is not None else CostModel.default()
    work = [(sc, costs, c, t) for c in sc.configs() for t in range(sc.trials)]
    rows: list[BenchRow] = []
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            for r in ex.map(_run_trial, work):
                rows.extend(r)
                if progress:
                    progress(r)
    else:
        for w in work:
            r = _run_trial(w)
            rows.extend(r)
            if progress:
                progress(r)
    rows.sort(key=lambda r: (r.edge, r.timesteps, r.obstacles, VARIANT_ORDER[r.variant], r.trial))
    return SuiteResult(rows, summarize(rows))


def summarize(rows: Sequence[BenchRow], wall_clock: bool = False) -> dict:
    """Per-config means and cross-config geomeans.

    A config's speedup is mean baseline cycles over mean candidate cycles; the
    suite figure is the geomean of those per-config speedups. Length ratios use
    only trials where both the baseline and the candidate found a path.
    """
    out: dict = {}
    by = {}
    for r in rows:
        by.setdefault((r.config, r.variant), []).append(r)
    cfgs = list(dict.fromkeys(r.config for r in rows))
    variants = sorted({r.variant for r in rows}, key=VARIANT_ORDER.__getitem__)
    base = Variant.BASELINE.value
    for cid in cfgs:
        for v in variants:
            rs = by.get((cid, v), [])
            if not rs:
                continue
            ok = [r for r in rs if r.success]
            out[f"{cid}.{v}.success"] = len(ok) / len(rs)
            out[f"{cid}.{v}.mean_cycles"] = statistics.fmean(r.modeled_cycles for r in rs)
            out[f"{cid}.{v}.mean_alpha"] = statistics.fmean(r.alpha for r in rs)
            out[f"{cid}.{v}.mean_beta"] = statistics.fmean(r.beta for r in rs)
            out[f"{cid}.{v}.mean_store_share"] = statistics.fmean(r.store_share for r in rs)
            if ok:
                out[f"{cid}.{v}.mean_path_len"] = statistics.fmean(r.path_len for r in ok)
            if wall_clock:
                out[f"{cid}.{v}.mean_wall_time"] = statistics.fmean(r.wall_time for r in rs)
    if base not in variants:
        return out
    for v in variants:
        if v == base:
            continue
        speedups, lengths, walls = [], [], []
        for cid in cfgs:
            b, c = by.get((cid, base), []), by.get((cid, v), [])
            if not b or not c:
                continue
            s = out[f"{cid}.{base}.mean_cycles"] / out[f"{cid}.{v}.mean_cycles"]
            out[f"{cid}.{v}.modeled_speedup"] = s
            speedups.append(s)
            pairs = [(x, y) for x, y in zip(b, c) if x.success and y.success]
            if pairs:
                ratio = statistics.fmean(y.path_len for _, y in pairs) / statistics.fmean(
                    x.path_len for x, _ in pairs
                )
                out[f"{cid}.{v}.length_ratio"] = ratio
                lengths.append(ratio)
            if wall_clock:
                w = statistics.fmean(x.wall_time for x in b) / statistics.fmean(y.wall_time for y in c)
                out[f"{cid}.{v}.wall_speedup"] = w
                walls.append(w)
        if speedups:
            out[f"ALL.{v}.geomean_modeled_speedup"] = geomean(speedups)
        if lengths:
            out[f"ALL.{v}.geomean_length_ratio"] = geomean(lengths)
        if walls:
            out[f"ALL.{v}.geomean_wall_speedup"] = geomean(walls)
    shares = [out[f"{cid}.{Variant.SW_MORTON.value}.mean_store_share"] for cid in cfgs
              if f"{cid}.{Variant.SW_MORTON.value}.mean_store_share" in out]
    if shares and all(s > 0 for s in shares):
        out[f"ALL.{Variant.SW_MORTON.value}.geomean_store_share"] = geomean(shares)
    return out


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def emit_csv(rows: Sequence[BenchRow], summary: dict, sink: IO[str], wall_clock: bool = False) -> None:
    """Header, one line per row, then ``# key,value`` summary lines."""
    cols = COLUMNS + (["wall_time"] if wall_clock else [])
    w = csv.writer(sink, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([_fmt(getattr(r, c)) for c in cols])
    for k, v in summary.items():
        sink.write(f"# {k},{_fmt(v)}\n")


_INT_COLS = {"edge", "timesteps", "obstacles", "trial", "scenario_seed", "plan_seed", "iterations",
             "nodes", "nn_store_hits", "col_store_hits"}


def parse_csv(text: str) -> tuple[list[BenchRow], dict]:
    """Inverse of :func:`emit_csv`."""
    body = [ln for ln in text.splitlines() if not ln.startswith("#")]
    summary = {}
    for ln in text.splitlines():
        if ln.startswith("# "):
            k, v = ln[2:].rsplit(",", 1)
            summary[k] = float(v)
    rows = []
    for rec in csv.DictReader(io.StringIO("\n".join(body))):
        kw = {}
        for k, v in rec.items():
            if k in ("config", "variant"):
                kw[k] = v
            elif k == "success":
                kw[k] = v == "1"
            elif k in _INT_COLS:
                kw[k] = int(v)
            else:
                kw[k] = float(v)
        rows.append(BenchRow(**kw))
    return rows, summary


def format_report(summary: dict) -> str:
    """Human-readable comparison of suite geomeans against reference figures."""
    sw, hw = Variant.SW_MORTON.value, Variant.HW_MORTON.value
    lines = []

    def line(label, key, ref):
        if key in summary:
            lines.append(f"{label:<38} {summary[key]:8.3f}   (reference: {ref})")

    line("sw-morton modeled speedup (geomean)", f"ALL.{sw}.geomean_modeled_speedup", f"{REF_SW_MODELED_SPEEDUP}x")
    line("hw-morton modeled speedup (geomean)", f"ALL.{hw}.geomean_modeled_speedup", f"{REF_HW_SPEEDUP}x")
    line("sw-morton wall-clock speedup (geomean)", f"ALL.{sw}.geomean_wall_speedup", f"{REF_SW_WALL_SPEEDUP}x")
    line("sw-morton length ratio (geomean)", f"ALL.{sw}.geomean_length_ratio", f"{REF_LENGTH_RATIO[Variant.SW_MORTON]}x")
    line("hw-morton length ratio (geomean)", f"ALL.{hw}.geomean_length_ratio", f"{REF_LENGTH_RATIO[Variant.HW_MORTON]}x")
    line("sw-morton store share (geomean)", f"ALL.{sw}.geomean_store_share", f"~{REF_STORE_SHARE}")
    return "\n".join(lines)


def profile_rows(rows: Sequence[BenchRow]) -> list[tuple[str, float]]:
    """Per-config mean store share of the software variant."""
    acc: dict[str, list[float]] = {}
    for r in rows:
        if r.variant == Variant.SW_MORTON.value:
            acc.setdefault(r.config, []).append(r.store_share)
    return [(cid, statistics.fmean(v)) for cid, v in acc.items()]
