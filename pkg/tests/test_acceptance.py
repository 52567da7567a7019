"""Acceptance suite: every primary criterion at its stated tolerance.

Each test prints one `[PASS]`/`[FAIL]` line (run with `pytest -s` to see
them inline). All protocols run on simulated clocks with the default
configuration seed, so every number asserted here is reproducible.
"""
import itertools
import random
import time

from scm import benchmark
from scm.benchmark import (
    results_to_csv,
    run_ablation,
    run_baseline,
    run_beta2_regression,
    run_growth,
    run_suite,
    run_test,
)
from scm.encoding import HashEmbedder
from scm.long_term_memory import MemoryGraph
from scm.model import (
    Concept,
    ConceptType,
    EngineConfig,
    Episode,
    Predicate,
    SimulatedClock,
    ValueVector,
    make_concept_id,
    value_for_importance,
)
from scm.sleep_cycle import nrem_consolidate, rem_dream, walk_step
from scm.valuation import composite_importance
from scm.working_memory import WorkingMemory


def check(name: str, condition: bool, detail: str = ""):
    print(f"[{'PASS' if condition else 'FAIL'}] {name}" + (f" :: {detail}" if detail else ""))
    assert condition, f"{name} {detail}"


def timed(budget_s: float):
    start = time.monotonic()

    def finish() -> float:
        return time.monotonic() - start

    return finish, budget_s


# ---------------------------------------------------------------------- 1
def test_acceptance_working_memory_capacity():
    finish, budget = timed(1.0)
    wm = WorkingMemory(7)
    clock = SimulatedClock()
    for i in range(10):
        value = ValueVector(novelty=1.0)
        wm.admit(
            Episode(
                eid=f"e{i}",
                timestamp=clock.now(),
                concept_ids=(f"c{i}",),
                text="",
                value=value,
                importance=0.3,
                last_access=clock.now(),
            )
        )
        clock.advance(0.01)
    kept = [ep.eid for ep in wm.episodes]
    elapsed = finish()
    check(
        "working-memory capacity: 10 admissions leave the last 7",
        len(wm) == 7 and kept == [f"e{i}" for i in range(3, 10)] and elapsed < budget,
        f"size={len(wm)} kept={kept} elapsed={elapsed:.3f}s",
    )


# ---------------------------------------------------------------------- 2
def test_acceptance_retention():
    finish, budget = timed(5.0)
    r5 = run_test("retention5")
    r10 = run_test("retention10")
    elapsed = finish()
    check(
        "retention: 11/11 and 22/22 probes hit in top-3",
        r5.numer == 11 and r5.denom == 11 and r10.numer == 22 and r10.denom == 22
        and elapsed < budget,
        f"r5={r5.numer}/{r5.denom} r10={r10.numer}/{r10.denom} elapsed={elapsed:.2f}s",
    )


# ---------------------------------------------------------------------- 3
def test_acceptance_forgetting_effectiveness():
    finish, budget = timed(5.0)
    r = run_test("forgetting")
    elapsed = finish()
    check(
        "forgetting: all 5 important retained, >=45/50 noise removed",
        r.detail["important_kept"] == 5 and r.detail["noise_removed"] >= 45
        and elapsed < budget,
        f"kept={r.detail['important_kept']}/5 removed={r.detail['noise_removed']}/50 "
        f"theta_f={r.detail['theta_f']:.4f} elapsed={elapsed:.2f}s",
    )


# ---------------------------------------------------------------------- 4
def test_acceptance_beta2_regression():
    out = run_beta2_regression()
    check(
        "recency-weight regression: beta2=0.4 removes exactly 0, beta2=0.2 removes >=45",
        out["removed_beta2_04"] == 0 and out["removed_beta2_02"] >= 45,
        f"0.4->{out['removed_beta2_04']} 0.2->{out['removed_beta2_02']}",
    )


# ---------------------------------------------------------------------- 5
def _brute_consolidation(episodes, importances, edges, eta, alpha):
    table = dict(edges)
    for ids in episodes:
        uniq = list(dict.fromkeys(ids))
        for i in range(len(uniq)):
            for j in range(i + 1, len(uniq)):
                key = (uniq[i], uniq[j])
                table[key] = table.get(key, 0.0) + eta * importances[uniq[i]] * importances[uniq[j]]
    return {k: v * alpha for k, v in table.items()}


def test_acceptance_consolidation_mathematics():
    rng = random.Random(20260809)
    cfg = EngineConfig(embedding_dim=32)
    worst = 0.0
    for trial in range(25):
        graph = MemoryGraph(cfg, HashEmbedder(32))
        clock = SimulatedClock()
        wm = WorkingMemory(64)
        ids = []
        for i in range(14):
            label = f"t{trial} node {i}"
            imp = rng.uniform(0.02, 0.95)
            value = value_for_importance(imp)
            cid = make_concept_id(label, ConceptType.FACT)
            graph.upsert_concept(
                Concept(
                    id=cid, label=label, ctype=ConceptType.FACT, description="",
                    embedding=graph.embedder.embed(label), value=value,
                    importance=composite_importance(value),
                    created_at=clock.now(), last_access=clock.now(),
                ),
                clock.now(),
            )
            ids.append(cid)
        edges = {}
        while len(edges) < 50:
            a, b = rng.sample(ids, 2)
            if (a, b) in edges:
                continue
            s = rng.uniform(0.0, 3.0)
            graph.add_or_strengthen(a, b, Predicate.RELATED_TO, s, clock.now())
            edges[(a, b)] = s
        episodes = []
        for e in range(rng.randrange(1, 7)):
            eps = rng.sample(ids, rng.randrange(2, 7))
            episodes.append(eps)
            wm.admit(
                Episode(
                    eid=f"e{e}", timestamp=clock.now(), concept_ids=tuple(eps),
                    text="", value=ValueVector(novelty=1.0), importance=0.3,
                    last_access=clock.now(),
                )
            )
        importances = {cid: graph.get(cid).importance for cid in ids}
        expected = _brute_consolidation(episodes, importances, edges, cfg.eta, cfg.alpha)
        nrem_consolidate(wm, graph, cfg, clock.now())
        actual = {(r.src, r.dst): r.strength for r in graph.relations()}
        assert set(actual) == set(expected)
        worst = max(worst, max(abs(actual[k] - expected[k]) for k in expected))
    order_ok = True
    for _ in range(1000):
        strengths = [rng.uniform(0.0, 5.0) for _ in range(12)]
        scaled = [s * 0.8 for s in strengths]
        for (a, sa), (b, sb) in itertools.combinations(zip(strengths, scaled), 2):
            if a > b and not (sa > sb):
                order_ok = False
    check(
        "consolidation math: oracle equality within 1e-12 and order-preserving downscale",
        worst <= 1e-12 and order_ok,
        f"max|diff|={worst:.2e} order={'ok' if order_ok else 'violated'}",
    )


# ---------------------------------------------------------------------- 6
def test_acceptance_rem_transition_law():
    cfg = EngineConfig(embedding_dim=32)
    graph = MemoryGraph(cfg, HashEmbedder(32))
    clock = SimulatedClock()

    def put(label, importance=0.6):
        value = value_for_importance(importance)
        cid = make_concept_id(label, ConceptType.FACT)
        graph.upsert_concept(
            Concept(
                id=cid, label=label, ctype=ConceptType.FACT, description="",
                embedding=graph.embedder.embed(label), value=value,
                importance=composite_importance(value),
                created_at=clock.now(), last_access=clock.now(),
            ),
            clock.now(),
        )
        return cid

    hub = put("hub")
    heavy, light1, light2 = put("heavy"), put("light one"), put("light two")
    graph.add_or_strengthen(hub, heavy, Predicate.RELATED_TO, 2.0, clock.now())
    graph.add_or_strengthen(hub, light1, Predicate.RELATED_TO, 1.0, clock.now())
    graph.add_or_strengthen(hub, light2, Predicate.RELATED_TO, 1.0, clock.now())
    rng = random.Random(31337)
    steps = 100_000
    counts = {heavy: 0, light1: 0, light2: 0}
    for _ in range(steps):
        counts[walk_step(graph, hub, rng)] += 1
    freq = {k: v / steps for k, v in counts.items()}
    law_ok = (
        abs(freq[heavy] - 0.5) <= 0.01
        and abs(freq[light1] - 0.25) <= 0.01
        and abs(freq[light2] - 0.25) <= 0.01
    )

    chain = [
        put("works in healthcare", 0.9),
        put("medical school", 0.5),
        put("studies anatomy", 0.5),
        put("physical fitness", 0.5),
        put("enjoys hiking", 0.5),
    ]
    for a, b in zip(chain, chain[1:]):
        graph.add_or_strengthen(a, b, Predicate.RELATED_TO, 1.0, clock.now())
    seed_episode = Episode(
        eid="seed", timestamp=clock.now(), concept_ids=(chain[0],), text="",
        value=ValueVector(novelty=1.0), importance=0.9, last_access=clock.now(),
    )
    rem_dream(graph, [seed_episode], random.Random(1), cfg, clock.now())
    dreamed = (chain[0], chain[-1], Predicate.RELATED_TO.value) in {
        (r.src, r.dst, r.predicate.value) for r in graph.relations()
    }
    check(
        "dream walks: empirical transition frequencies within +/-0.01 and chain edge integrated",
        law_ok and dreamed,
        f"freq=({freq[heavy]:.3f},{freq[light1]:.3f},{freq[light2]:.3f}) chain_edge={dreamed}",
    )


# ---------------------------------------------------------------------- 7
def test_acceptance_graph_traversal():
    r = run_test("traversal")
    check(
        "graph traversal: seeded 1-hop cluster returns exactly 3/3",
        r.passed and r.numer == 3,
        f"{r.numer}/3",
    )


# ---------------------------------------------------------------------- 8
def test_acceptance_latency():
    finish, budget = timed(60.0)
    r = run_test("latency")
    elapsed = finish()
    rows = {row["size"]: row for row in r.detail["rows"]}
    check(
        "latency: mean <0.1ms at 10 and <1ms at 360 concepts, p99 <5ms",
        rows[10]["mean_us"] < 100.0
        and rows[360]["mean_us"] < 1000.0
        and all(row["p99_us"] < 5000.0 for row in r.detail["rows"])
        and elapsed < budget,
        f"mean10={rows[10]['mean_us']:.0f}us mean360={rows[360]['mean_us']:.0f}us "
        f"p99max={max(row['p99_us'] for row in r.detail['rows']):.0f}us elapsed={elapsed:.1f}s",
    )


# ---------------------------------------------------------------------- 9
def test_acceptance_persistence():
    r = run_test("persistence")
    check(
        "persistence: 3/3 concepts recovered field-equal after restart",
        r.passed and r.numer == 3,
        f"{r.numer}/3",
    )


# --------------------------------------------------------------------- 10
def test_acceptance_growth():
    finish, budget = timed(30.0)
    off = run_growth(20, False)
    on = run_growth(20, True)
    elapsed = finish()
    increasing = all(b > a for a, b in zip(off, off[1:]))
    near_110 = abs(off[-1] - 110) <= 0.10 * 110
    last5 = on[-5:]
    plateau = (max(last5) - min(last5)) <= 0.10 * max(on) + 1e-9
    check(
        "growth: unpruned run reaches ~110 strictly increasing; pruned run plateaus",
        increasing and near_110 and plateau and elapsed < budget,
        f"off_final={off[-1]} on_last5={last5} peak={max(on)} elapsed={elapsed:.1f}s",
    )


# --------------------------------------------------------------------- 11
def test_acceptance_baselines_directional():
    full = run_baseline("full")
    fifo = run_baseline("fifo")
    vector = run_baseline("vector")
    noforget = run_baseline("noforget")
    ok = (
        full.recall == 22
        and fifo.recall < full.recall
        and vector.recall <= full.recall
        and vector.size > full.size
        and noforget.recall == full.recall
        and noforget.size > full.size
    )
    check(
        "baselines: fifo < full recall; vector <= full with larger store; noforget = full with larger store",
        ok,
        f"full={full.recall}/{full.size} fifo={fifo.recall}/{fifo.size} "
        f"vector={vector.recall}/{vector.size} noforget={noforget.recall}/{noforget.size}",
    )


# --------------------------------------------------------------------- 12
def test_acceptance_ablations_directional():
    forget_ab, _ = run_ablation("forget")
    tagger_ab, _ = run_ablation("tagger")
    wm_ab, wm_full = run_ablation("wm_limit")
    self_ab, self_full = run_ablation("self")
    rem_ab, rem_full = run_ablation("rem")
    ok = (
        forget_ab.noise_retained == 50
        and tagger_ab.noise_retained == 50
        and wm_ab.noise_retained > wm_full.noise_retained
        and self_ab.recall == self_full.recall
        and self_ab.noise_retained == self_full.noise_retained
        and rem_ab.recall == rem_full.recall
        and rem_ab.ltm_size >= rem_full.ltm_size
    )
    check(
        "ablations: forget 50/50, tagger 50/50, wm>full, self=full, rem recall unchanged",
        ok,
        f"forget={forget_ab.noise_retained} tagger={tagger_ab.noise_retained} "
        f"wm={wm_ab.noise_retained}>{wm_full.noise_retained} "
        f"self=({self_ab.recall},{self_ab.noise_retained})=({self_full.recall},{self_full.noise_retained}) "
        f"rem=({rem_ab.recall},{rem_ab.ltm_size})vs({rem_full.recall},{rem_full.ltm_size})",
    )


# --------------------------------------------------------------------- 13
def test_acceptance_determinism():
    cfg = EngineConfig(rng_seed=42)
    deterministic_suites = [t for t in benchmark.TEST_IDS if t != "latency"]

    def full_run():
        rows = []
        for suite in deterministic_suites:
            rows.extend(run_suite(suite, runs=2, config=cfg))
        return results_to_csv(rows)

    a = full_run()
    b = full_run()
    check(
        "determinism: two benchmark runs emit byte-identical CSV",
        a == b,
        f"{len(a)} bytes each",
    )
