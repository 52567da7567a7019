"""Benchmark harness: the eight-test suite, baselines, ablations, growth
simulation, and latency measurement.

Every protocol runs on a simulated clock with a fixed seed, so scores,
counts, and sizes are bit-reproducible; only the latency suite reports
wall-clock measurements.
"""
from __future__ import annotations

import gc
import json
import time
from dataclasses import dataclass, field
from importlib import resources

from .baselines import make_backend
from .encoding import HashEmbedder
from .engine import MemoryEngine
from .errors import InvalidArgumentError
from .long_term_memory import MemoryGraph
from .model import (
    Concept,
    ConceptType,
    EngineConfig,
    Predicate,
    SimulatedClock,
    make_concept_id,
    normalize_label,
    value_for_importance,
)
from .persistence import load, save
from .valuation import composite_importance

TEST_IDS = (
    "capacity",
    "retention5",
    "retention10",
    "consolidation",
    "forgetting",
    "traversal",
    "latency",
    "persistence",
)

ABLATABLE_COMPONENTS = ("wm_limit", "tagger", "nrem", "rem", "forget", "self")

NOISE_AGING_HOURS = 14 * 24  # two weeks of simulated staleness


@dataclass
class TestResult:
    test: str
    score: float
    passed: bool
    numer: int
    denom: int
    latency_us: float = 0.0
    ltm_size: int = 0
    detail: dict = field(default_factory=dict)


def load_scenario(name: str) -> dict:
    path = resources.files("scm") / "scenarios" / f"{name}.json"
    return json.loads(path.read_text(encoding="utf-8"))


def noise_grid(count: int, lo: float = 0.02, hi: float = 0.10) -> list[float]:
    """Evenly spread importance values across [lo, hi], endpoints included."""
    if count == 1:
        return [lo]
    return [lo + (hi - lo) * j / (count - 1) for j in range(count)]


def _noise_labels(count: int) -> list[str]:
    return [f"filler item {j:02d}" for j in range(count)]


def _probe_hit(answers: list[str], expect: str) -> bool:
    want = normalize_label(expect)
    return any(want in normalize_label(a) for a in answers)


def run_probes(backend, probes, k: int = 3) -> int:
    return sum(1 for p in probes if _probe_hit(backend.query(p["query"], k), p["expect"]))


# ------------------------------------------------------------------ tests
def _engine(config: EngineConfig | None) -> MemoryEngine:
    return MemoryEngine(config or EngineConfig(), clock=SimulatedClock())


def _without_triggers(config: EngineConfig | None) -> EngineConfig:
    doc = (config or EngineConfig()).as_dict()
    doc.update(theta_e=2.0, theta_c=2.0, tau_hours=1e12)
    return EngineConfig.from_dict(doc)


def run_capacity_test(config: EngineConfig | None = None) -> TestResult:
    """Ten ingests against a quiet engine leave exactly the last seven."""
    eng = _engine(_without_triggers(config))
    for i in range(10):
        eng.process_message(f"My trinket number{i} is plain")
    kept = [ep.eid for ep in eng.wm.episodes]
    expected = [f"ep-{i:06d}" for i in range(4, 11)]
    ok = len(eng.wm) == 7 and kept == expected
    return TestResult(
        "capacity", 1.0 if ok else 0.0, ok, 7 if ok else len(eng.wm), 7,
        ltm_size=eng.ltm.node_count,
    )


def _run_retention(name: str, config: EngineConfig | None) -> TestResult:
    scenario = load_scenario(name)
    eng = _engine(config)
    for turn in scenario["turns"]:
        eng.process_message(turn)
    probes = scenario["probes"]
    hits = 0
    for p in probes:
        answers = [eng.ltm.get(h.concept_id).label for h in eng.query(p["query"], 3)]
        hits += _probe_hit(answers, p["expect"])
    n = len(probes)
    return TestResult(
        name, hits / n, hits == n, hits, n, ltm_size=eng.ltm.node_count
    )


def run_retention5_test(config: EngineConfig | None = None) -> TestResult:
    return _run_retention("retention5", config)


def run_retention10_test(config: EngineConfig | None = None) -> TestResult:
    return _run_retention("retention10", config)


def _seed_important(eng: MemoryEngine, count: int) -> list[str]:
    words = ("alpha", "bravo", "cedar", "delta", "ember", "flint")
    return [
        eng.inject_concept(f"landmark {words[i]}", ConceptType.FACT, 0.9)
        for i in range(count)
    ]


def _noise_prune_protocol(
    eng: MemoryEngine, important_count: int, noise_count: int
) -> tuple[int, int, float]:
    """Shared skeleton: seed, age, touch the important set, sleep once."""
    important = _seed_important(eng, important_count)
    noise_ids = [
        eng.inject_concept(label, ConceptType.ABSTRACT, imp)
        for label, imp in zip(_noise_labels(noise_count), noise_grid(noise_count))
    ]
    eng.advance_clock(NOISE_AGING_HOURS)
    for cid in important:
        eng.query(eng.ltm.get(cid).label, 1)
    report = eng.force_sleep()
    kept_important = sum(cid in eng.ltm for cid in important)
    removed_noise = sum(cid not in eng.ltm for cid in noise_ids)
    return kept_important, removed_noise, report.theta_f


def run_consolidation_test(config: EngineConfig | None = None) -> TestResult:
    """Smaller population variant: 6 important kept, 12 noise removed."""
    eng = _engine(config)
    kept, removed, theta_f = _noise_prune_protocol(eng, 6, 12)
    ok = kept == 6 and removed == 12
    return TestResult(
        "consolidation",
        (kept + removed) / 18,
        ok,
        kept + removed,
        18,
        ltm_size=eng.ltm.node_count,
        detail={"important_kept": kept, "noise_removed": removed, "theta_f": theta_f},
    )


def run_forgetting_test(config: EngineConfig | None = None) -> TestResult:
    """5 touched important + 50 aged noise: keep all 5, remove >= 45."""
    eng = _engine(config)
    kept, removed, theta_f = _noise_prune_protocol(eng, 5, 50)
    ok = kept == 5 and removed >= 45
    return TestResult(
        "forgetting",
        removed / 50 if kept == 5 else 0.0,
        ok,
        removed,
        50,
        ltm_size=eng.ltm.node_count,
        detail={"important_kept": kept, "noise_removed": removed, "theta_f": theta_f},
    )


def run_beta2_regression(config: EngineConfig | None = None) -> dict:
    """Identical fresh state under the old and corrected recency weights."""

    def removals(beta2: float) -> int:
        doc = (config or EngineConfig()).as_dict()
        doc.update(beta1=1.0 - beta2, beta2=beta2)
        eng = _engine(EngineConfig.from_dict(doc))
        important = _seed_important(eng, 5)
        noise_ids = [
            eng.inject_concept(label, ConceptType.ABSTRACT, imp)
            for label, imp in zip(_noise_labels(50), noise_grid(50))
        ]
        for cid in important:
            eng.query(eng.ltm.get(cid).label, 1)
        report = eng.force_sleep()
        assert all(cid in eng.ltm for cid in important)
        return report.concepts_forgotten

    return {"removed_beta2_04": removals(0.4), "removed_beta2_02": removals(0.2)}


def run_traversal_test(config: EngineConfig | None = None) -> TestResult:
    eng = _engine(config)
    hub = eng.inject_concept("project garden", ConceptType.FACT, 0.6)
    spokes = [
        eng.inject_concept(label, ConceptType.FACT, 0.5)
        for label in ("compost pile", "tomato beds", "drip lines")
    ]
    now = eng.clock.now()
    for s in spokes:
        eng.ltm.add_or_strengthen(hub, s, Predicate.RELATED_TO, 0.5, now)
    found = {cid for cid, hops in eng.ltm.neighbors(hub, 1)}
    hits = len(found & set(spokes))
    ok = hits == 3 and len(found) == 3
    return TestResult(
        "traversal", hits / 3 if ok or hits else 0.0, ok, hits, 3,
        ltm_size=eng.ltm.node_count,
    )


LATENCY_SIZES = (10, 60, 120, 240, 360)
LATENCY_QUERIES = 1000

_WORDS = (
    "amber basil cobalt dune ember fjord grove heather iris juniper kelp lagoon "
    "marsh nectar onyx prairie quartz reed sierra tundra umber violet willow xenon"
).split()


def _latency_graph(size: int, config: EngineConfig) -> MemoryGraph:
    clock = SimulatedClock()
    graph = MemoryGraph(config, HashEmbedder(config.embedding_dim))
    for i in range(size):
        label = f"entry {i} {_WORDS[i % len(_WORDS)]} {_WORDS[(i * 7 + 3) % len(_WORDS)]}"
        value = value_for_importance(0.1 + (i % 17) / 40.0)
        graph.upsert_concept(
            Concept(
                id=make_concept_id(label, ConceptType.FACT),
                label=label,
                ctype=ConceptType.FACT,
                description="",
                embedding=graph.embedder.embed(label),
                value=value,
                importance=composite_importance(value),
                created_at=clock.now(),
                last_access=clock.now(),
            ),
            clock.now(),
        )
    ids = [c.id for c in graph.concepts()]
    now = clock.now()
    for i in range(0, size - 1, 3):
        graph.add_or_strengthen(ids[i], ids[i + 1], Predicate.RELATED_TO, 0.5, now)
    return graph


def run_latency_test(config: EngineConfig | None = None) -> TestResult:
    cfg = config or EngineConfig()
    clock = SimulatedClock()
    rows = []
    for size in LATENCY_SIZES:
        graph = _latency_graph(size, cfg)
        queries = [
            f"find {_WORDS[q % len(_WORDS)]} {_WORDS[(q * 5 + 1) % len(_WORDS)]} entry {q % size}"
            for q in range(LATENCY_QUERIES)
        ]
        for q in queries[:50]:
            graph.retrieve(q, 3, clock.now())  # warm caches
        gc.collect()
        gc.disable()
        try:
            samples = []
            for q in queries:
                t0 = time.perf_counter_ns()
                graph.retrieve(q, 3, clock.now())
                samples.append(time.perf_counter_ns() - t0)
        finally:
            gc.enable()
        samples.sort()
        mean_us = sum(samples) / len(samples) / 1000.0
        p99_us = samples[int(0.99 * len(samples)) - 1] / 1000.0
        rows.append({"size": size, "mean_us": mean_us, "p99_us": p99_us})
    by_size = {r["size"]: r for r in rows}
    ok = (
        by_size[10]["mean_us"] < 100.0
        and by_size[360]["mean_us"] < 1000.0
        and all(r["p99_us"] < 5000.0 for r in rows)
    )
    return TestResult(
        "latency",
        1.0 if ok else 0.0,
        ok,
        int(ok),
        1,
        latency_us=by_size[360]["mean_us"],
        ltm_size=360,
        detail={"rows": rows},
    )


def run_persistence_test(config: EngineConfig | None = None, workdir=None) -> TestResult:
    import tempfile
    from pathlib import Path

    eng = _engine(config)
    turns = ["I live in Mumbai", "My name is Asha", "I like hiking"]
    probes = [
        {"query": "where do i live", "expect": "mumbai"},
        {"query": "what is my name", "expect": "asha"},
        {"query": "do i like hiking", "expect": "hiking"},
    ]
    for t in turns:
        eng.process_message(t)
    fact_ids = [
        make_concept_id("Mumbai", ConceptType.LOCATION),
        make_concept_id("Asha", ConceptType.PERSON),
        make_concept_id("hiking", ConceptType.PREFERENCE),
    ]
    base = Path(workdir) if workdir else Path(tempfile.mkdtemp(prefix="scm-bench-"))
    path = base / "persistence.json"
    save(eng, path)
    fresh = load(path, clock=SimulatedClock(eng.clock.now()))
    recovered = sum(
        1
        for cid in fact_ids
        if cid in fresh.ltm and fresh.ltm.get(cid) == eng.ltm.get(cid)
    )
    hits = 0
    for p in probes:
        answers = [fresh.ltm.get(h.concept_id).label for h in fresh.query(p["query"], 3)]
        hits += _probe_hit(answers, p["expect"])
    ok = recovered == 3 and hits == 3
    return TestResult(
        "persistence", recovered / 3 if hits == 3 else 0.0, ok, recovered, 3,
        ltm_size=fresh.ltm.node_count,
    )


_RUNNERS = {
    "capacity": run_capacity_test,
    "retention5": run_retention5_test,
    "retention10": run_retention10_test,
    "consolidation": run_consolidation_test,
    "forgetting": run_forgetting_test,
    "traversal": run_traversal_test,
    "latency": run_latency_test,
    "persistence": run_persistence_test,
}


def run_test(test_id: str, config: EngineConfig | None = None) -> TestResult:
    try:
        runner = _RUNNERS[test_id]
    except KeyError:
        raise InvalidArgumentError(
            f"unknown test {test_id!r} (expected one of {TEST_IDS})"
        ) from None
    return runner(config)


# ------------------------------------------------------------- baselines
@dataclass
class BaselineResult:
    backend: str
    recall: int
    probes: int
    size: int


def _composite_scenario(backend, noise_count: int = 50) -> BaselineResult:
    """Shared script: dialog, fresh noise, aging, probe touch, one sleep."""
    scenario = load_scenario("retention10")
    for turn in scenario["turns"]:
        backend.ingest(turn)
    noise = list(zip(_noise_labels(noise_count), noise_grid(noise_count)))
    backend.inject_noise(noise)
    backend.advance(NOISE_AGING_HOURS)
    probes = scenario["probes"]
    run_probes(backend, probes, 3)  # touch pass refreshes queried facts
    backend.sleep()
    recall = run_probes(backend, probes, 3)
    return BaselineResult(backend.name, recall, len(probes), backend.size())


def run_baseline(kind: str, config: EngineConfig | None = None) -> BaselineResult:
    return _composite_scenario(make_backend(kind, config))


# ------------------------------------------------------------- ablations
@dataclass
class AblationResult:
    component: str
    recall: int
    probes: int
    ltm_size: int
    noise_retained: int
    noise_total: int


def _with_disabled(config: EngineConfig | None, component: str | None) -> EngineConfig:
    cfg = config or EngineConfig()
    doc = cfg.as_dict()
    if component:
        doc["disabled"] = sorted(set(cfg.disabled) | {component})
    return EngineConfig.from_dict(doc)


def _standard_ablation_run(component: str | None, config: EngineConfig | None) -> AblationResult:
    """Dialog plus fresh noise, one forced sleep, then scored probes."""
    eng = _engine(_with_disabled(config, component))
    scenario = load_scenario("retention10")
    for turn in scenario["turns"]:
        eng.process_message(turn)
    noise_ids = [
        eng.inject_concept(label, ConceptType.ABSTRACT, imp)
        for label, imp in zip(_noise_labels(50), noise_grid(50))
    ]
    probes = scenario["probes"]

    def probe_pass() -> int:
        hits = 0
        for p in probes:
            answers = [eng.ltm.get(h.concept_id).label for h in eng.query(p["query"], 3)]
            hits += _probe_hit(answers, p["expect"])
        return hits

    probe_pass()
    eng.force_sleep()
    recall = probe_pass()
    retained = sum(cid in eng.ltm for cid in noise_ids)
    return AblationResult(
        component or "full", recall, len(probes), eng.ltm.node_count, retained, 50
    )


def _wm_pressure_run(component: str | None, config: EngineConfig | None) -> AblationResult:
    """Stale noise held in working-memory episodes; capacity decides how many
    get their last access refreshed by transfer before the final sleep."""
    eng = _engine(_with_disabled(config, component))
    noise_ids = [
        eng.inject_concept(f"buzz entry {j:02d}", ConceptType.ABSTRACT, 0.2)
        for j in range(50)
    ]
    for cid in noise_ids:
        eng.inject_episode([cid], "stale buzz")
    eng.advance_clock(NOISE_AGING_HOURS)
    scenario = load_scenario("retention10")
    for turn in scenario["turns"]:
        eng.process_message(turn)
    probes = scenario["probes"]
    hits = 0
    for p in probes:
        answers = [eng.ltm.get(h.concept_id).label for h in eng.query(p["query"], 3)]
        hits += _probe_hit(answers, p["expect"])
    eng.force_sleep()
    retained = sum(cid in eng.ltm for cid in noise_ids)
    return AblationResult(
        component or "full", hits, len(probes), eng.ltm.node_count, retained, 50
    )


def run_ablation(component: str, config: EngineConfig | None = None) -> tuple[AblationResult, AblationResult]:
    """Run the component-disabled engine and the full reference engine on the
    same protocol; returns (ablated, full)."""
    if component not in ABLATABLE_COMPONENTS:
        raise InvalidArgumentError(
            f"unknown component {component!r} (expected one of {ABLATABLE_COMPONENTS})"
        )
    protocol = _wm_pressure_run if component == "wm_limit" else _standard_ablation_run
    return protocol(component, config), protocol(None, config)


# ---------------------------------------------------------------- growth
def run_growth(cycles: int, forgetting_on: bool, config: EngineConfig | None = None) -> list[int]:
    """Per-cycle count of unprotected concepts.

    Each cycle injects one durable concept plus five low-value ones (one
    label repeats on even cycles, netting 5.5 adds per cycle), ages the
    clock, and sleeps once.
    """
    if cycles < 1:
        raise InvalidArgumentError("cycles must be >= 1")
    component = None if forgetting_on else "forget"
    eng = _engine(_with_disabled(config, component))
    series = []
    for c in range(1, cycles + 1):
        eng.inject_concept(f"milestone {c:03d}", ConceptType.FACT, 0.9)
        for j in range(1, 5):
            eng.inject_concept(f"noise {c:03d} {j}", ConceptType.ABSTRACT, 0.05)
        fifth = f"noise {c - 1:03d} 5" if c % 2 == 0 else f"noise {c:03d} 5"
        eng.inject_concept(fifth, ConceptType.ABSTRACT, 0.05)
        eng.advance_clock(15.0)
        eng.force_sleep()
        series.append(len(eng.ltm.unprotected()))
    return series


# ------------------------------------------------------------------- CSV
CSV_HEADER = "test,run,score,metric_numer,metric_denom,latency_us,ltm_size"


def results_to_csv(results: list[tuple[int, TestResult]]) -> str:
    lines = [CSV_HEADER]
    for run_idx, r in results:
        lines.append(
            f"{r.test},{run_idx},{r.score!r},{r.numer},{r.denom},{r.latency_us!r},{r.ltm_size}"
        )
    return "\n".join(lines) + "\n"


def run_suite(
    suite: str, runs: int = 1, config: EngineConfig | None = None
) -> list[tuple[int, TestResult]]:
    ids = TEST_IDS if suite == "all" else (suite,)
    for tid in ids:
        if tid not in TEST_IDS:
            raise InvalidArgumentError(f"unknown suite {suite!r}")
    out = []
    for tid in ids:
        for run_idx in range(1, runs + 1):
            out.append((run_idx, run_test(tid, config)))
    return out
