import io
import math

import pytest

from mortonrrt.bench import (
    COLUMNS,
    SuiteConfig,
    emit_csv,
    geomean,
    modeled_speedup,
    parse_csv,
    run_suite,
    store_share,
    summarize,
)
from mortonrrt.cost import CostModel
from mortonrrt.planner import PlanStats, Variant

TINY = dict(edge_lengths=(30,), timestep_counts=(10,), obstacle_counts=(3,), max_iters=20_000)


@pytest.mark.parametrize("vals, expected", [([1, 4], 2), ([2, 8], 4), ([3.5], 3.5)])
def test_geomean(vals, expected):
    assert geomean(vals) == pytest.approx(expected)


@pytest.mark.parametrize("vals", [[], [1, 0], [2, -1]])
def test_geomean_domain(vals):
    with pytest.raises(ValueError):
        geomean(vals)


def test_store_share():
    assert store_share(PlanStats(store_ops=100, modeled_ops=400)) == 0.25
    assert store_share(PlanStats(store_ops=0, modeled_ops=400)) == 0
    with pytest.raises(ValueError):
        store_share(PlanStats())


def test_modeled_speedup():
    a = PlanStats(modeled_cycles=800)
    assert modeled_speedup(a, a) == 1.0
    assert modeled_speedup(a, PlanStats(modeled_cycles=100)) == 8.0
    with pytest.raises(ValueError):
        modeled_speedup(a, PlanStats())


def test_default_costs_file_matches_dataclass():
    assert CostModel.default() == CostModel()


def test_cost_model_rejects_unknown_and_negative():
    with pytest.raises(ValueError):
        CostModel.from_dict({"bogus": 1})
    with pytest.raises(ValueError):
        CostModel(steer=-1)
    with pytest.raises(ValueError):
        CostModel(store_hw_op=2)


def test_pairing():
    res = run_suite(SuiteConfig(trials=1, variants=(Variant.BASELINE, Variant.SW_MORTON), **TINY))
    assert len(res.rows) == 2
    a, b = res.rows
    assert (a.scenario_seed, a.plan_seed) == (b.scenario_seed, b.plan_seed)
    assert {a.variant, b.variant} == {"baseline", "sw-morton"}


def test_csv_shapes():
    buf = io.StringIO()
    emit_csv([], {}, buf)
    assert buf.getvalue().splitlines() == [",".join(COLUMNS)]

    res = run_suite(SuiteConfig(trials=2, **TINY))
    buf = io.StringIO()
    emit_csv(res.rows, res.summary, buf)
    lines = buf.getvalue().splitlines()
    assert len(lines) == 1 + len(res.rows) + len(res.summary)
    assert len(res.rows) == 6


def test_csv_round_trip():
    res = run_suite(SuiteConfig(trials=2, **TINY))
    buf = io.StringIO()
    emit_csv(res.rows, res.summary, buf)
    rows, summary = parse_csv(buf.getvalue())
    for got, want in zip(rows, res.rows):
        for col in COLUMNS:
            g, w = getattr(got, col), getattr(want, col)
            assert g == w or (isinstance(w, float) and math.isnan(w) and math.isnan(g))
    assert summary == pytest.approx(res.summary)


def test_suite_is_reproducible():
    def once():
        buf = io.StringIO()
        res = run_suite(SuiteConfig(trials=2, **TINY))
        emit_csv(res.rows, res.summary, buf)
        return buf.getvalue()

    assert once() == once()


def test_summary_uses_per_config_speedups():
    sc = SuiteConfig(trials=2, edge_lengths=(30,), timestep_counts=(10,), obstacle_counts=(2, 4), max_iters=20_000)
    res = run_suite(sc)
    s = res.summary
    per_cfg = []
    for cid in ("l30_T10_L2", "l30_T10_L4"):
        base = [r.modeled_cycles for r in res.rows if r.config == cid and r.variant == "baseline"]
        hw = [r.modeled_cycles for r in res.rows if r.config == cid and r.variant == "hw-morton"]
        per_cfg.append((sum(base) / len(base)) / (sum(hw) / len(hw)))
        assert s[f"{cid}.hw-morton.modeled_speedup"] == pytest.approx(per_cfg[-1])
    assert s["ALL.hw-morton.geomean_modeled_speedup"] == pytest.approx(math.sqrt(per_cfg[0] * per_cfg[1]))


def test_unreachable_trials_are_recorded_and_excluded():
    sc = SuiteConfig(trials=1, edge_lengths=(100,), timestep_counts=(10,), obstacle_counts=(0,), max_iters=50)
    res = run_suite(sc)
    assert all(not r.success for r in res.rows)
    assert all(math.isnan(r.path_len) for r in res.rows)
    assert "ALL.sw-morton.geomean_length_ratio" not in res.summary
    assert res.summary["l100_T10_L0.baseline.success"] == 0


def test_wall_clock_columns_are_opt_in():
    res = run_suite(SuiteConfig(trials=1, **TINY))
    buf = io.StringIO()
    emit_csv(res.rows, summarize(res.rows, wall_clock=True), buf, wall_clock=True)
    header = buf.getvalue().splitlines()[0]
    assert header.endswith("wall_time")
    assert "ALL.sw-morton.geomean_wall_speedup" in buf.getvalue()
