import pytest

from scm.benchmark import (
    load_scenario,
    noise_grid,
    results_to_csv,
    run_ablation,
    run_baseline,
    run_beta2_regression,
    run_growth,
    run_suite,
    run_test,
)
from scm.encoding import RuleBasedExtractor
from scm.errors import InvalidArgumentError
from scm.model import EngineConfig


def test_scenarios_well_formed():
    for name, facts in (("retention5", 11), ("retention10", 22)):
        sc = load_scenario(name)
        assert len(sc["probes"]) == facts
        expects = [p["expect"] for p in sc["probes"]]
        assert len(set(expects)) == facts


def test_scenario_script_extracts_each_fact_exactly_once():
    extractor = RuleBasedExtractor()
    for name in ("retention5", "retention10"):
        sc = load_scenario(name)
        seen = []
        prior = {}
        for turn in sc["turns"]:
            result = extractor.extract(turn, prior)
            for c in result.concepts:
                seen.append(c.label.lower())
        expects = [p["expect"] for p in sc["probes"]]
        for expect in expects:
            assert seen.count(expect) == 1, f"{expect} extracted {seen.count(expect)} times"


def test_noise_grid_endpoints():
    grid = noise_grid(50)
    assert grid[0] == pytest.approx(0.02)
    assert grid[-1] == pytest.approx(0.10)
    assert len(grid) == 50
    assert all(a < b for a, b in zip(grid, grid[1:]))


def test_unknown_test_id():
    with pytest.raises(InvalidArgumentError):
        run_test("nonsense")


def test_capacity():
    r = run_test("capacity")
    assert r.passed and r.numer == 7


def test_retention_suites():
    r5 = run_test("retention5")
    assert r5.passed and (r5.numer, r5.denom) == (11, 11)
    r10 = run_test("retention10")
    assert r10.passed and (r10.numer, r10.denom) == (22, 22)


def test_consolidation():
    r = run_test("consolidation")
    assert r.passed
    assert r.detail["important_kept"] == 6
    assert r.detail["noise_removed"] == 12


def test_forgetting():
    r = run_test("forgetting")
    assert r.passed
    assert r.detail["important_kept"] == 5
    assert r.detail["noise_removed"] >= 45


def test_beta2_regression():
    out = run_beta2_regression()
    assert out["removed_beta2_04"] == 0
    assert out["removed_beta2_02"] >= 45


def test_traversal():
    r = run_test("traversal")
    assert r.passed and r.numer == 3


def test_persistence_suite(tmp_path):
    r = run_test("persistence")
    assert r.passed and r.numer == 3


def test_baseline_orderings():
    full = run_baseline("full")
    fifo = run_baseline("fifo")
    vector = run_baseline("vector")
    noforget = run_baseline("noforget")
    assert full.recall == full.probes == 22
    assert fifo.recall < full.recall
    assert vector.recall <= full.recall
    assert vector.size > full.size
    assert noforget.recall == full.recall
    assert noforget.size > full.size


def test_ablation_forget_and_tagger_keep_all_noise():
    for comp in ("forget", "tagger"):
        ab, _full = run_ablation(comp)
        assert ab.noise_retained == 50, comp
        assert ab.recall == ab.probes


def test_ablation_wm_limit_retains_more_noise():
    ab, full = run_ablation("wm_limit")
    assert ab.noise_retained > full.noise_retained


def test_ablation_self_identical_to_full():
    ab, full = run_ablation("self")
    assert ab.recall == full.recall
    assert ab.noise_retained == full.noise_retained


def test_ablation_rem_recall_unchanged_size_geq():
    ab, full = run_ablation("rem")
    assert ab.recall == full.recall
    assert ab.ltm_size >= full.ltm_size


def test_growth_off_linear_to_110():
    series = run_growth(20, False)
    assert len(series) == 20
    assert all(b > a for a, b in zip(series, series[1:]))
    assert abs(series[-1] - 110) <= 11


def test_growth_on_plateaus():
    series = run_growth(20, True)
    last5 = series[-5:]
    peak = max(series)
    assert (max(last5) - min(last5)) <= 0.10 * peak + 1e-9
    assert peak < 40  # far below the unpruned trajectory


def test_growth_single_cycle():
    assert len(run_growth(1, True)) == 1


def test_csv_deterministic_across_runs():
    cfg = EngineConfig(rng_seed=7)
    suites = [t for t in ("capacity", "retention5", "forgetting", "traversal")]
    rows1 = []
    rows2 = []
    for s in suites:
        rows1.extend(run_suite(s, runs=2, config=cfg))
        rows2.extend(run_suite(s, runs=2, config=cfg))
    assert results_to_csv(rows1) == results_to_csv(rows2)


def test_csv_shape():
    rows = run_suite("capacity", runs=2)
    text = results_to_csv(rows)
    lines = text.strip().splitlines()
    assert lines[0] == "test,run,score,metric_numer,metric_denom,latency_us,ltm_size"
    assert len(lines) == 3
    assert lines[1].startswith("capacity,1,")
