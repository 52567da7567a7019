import pytest

from scm.errors import ConfigurationError, InvalidArgumentError
from scm.model import (
    ConceptType,
    EngineConfig,
    Predicate,
    SimulatedClock,
    ValueVector,
    WallClock,
    hours_between,
    make_concept_id,
    value_for_importance,
)
from scm.valuation import composite_importance


def test_concept_id_deterministic():
    a = make_concept_id("Mumbai", ConceptType.LOCATION)
    b = make_concept_id("Mumbai", ConceptType.LOCATION)
    assert a == b


def test_concept_id_normalizes_case_and_whitespace():
    assert make_concept_id("mumbai ", ConceptType.LOCATION) == make_concept_id(
        "Mumbai", ConceptType.LOCATION
    )
    assert make_concept_id("  New   Delhi ", ConceptType.LOCATION) == make_concept_id(
        "new delhi", ConceptType.LOCATION
    )


def test_concept_id_type_participates_in_identity():
    assert make_concept_id("Mumbai", ConceptType.LOCATION) != make_concept_id(
        "Mumbai", ConceptType.PERSON
    )


def test_concept_id_rejects_empty_label():
    with pytest.raises(InvalidArgumentError):
        make_concept_id("   ", ConceptType.FACT)


def test_unknown_type_and_predicate_coerce():
    assert ConceptType.coerce("banana") is ConceptType.ABSTRACT
    assert ConceptType.coerce("Location") is ConceptType.LOCATION
    assert Predicate.coerce("banana") is Predicate.RELATED_TO
    assert Predicate.coerce("CAUSES") is Predicate.CAUSES


def test_value_vector_ranges_enforced():
    ValueVector(0.0, -1.0, 1.0, 0.999)
    with pytest.raises(InvalidArgumentError):
        ValueVector(novelty=1.5)
    with pytest.raises(InvalidArgumentError):
        ValueVector(repetition=1.0)
    with pytest.raises(InvalidArgumentError):
        ValueVector(emotional=-1.2)


def test_config_defaults_validate():
    cfg = EngineConfig().validate()
    assert cfg.wm_capacity == 7
    assert sum(cfg.tagger_weights) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"tagger_weights": (0.3, 0.2, 0.35, 0.2)},
        {"fusion_weights": (0.5, 0.3, 0.3)},
        {"alpha": 0.0},
        {"alpha": 1.2},
        {"eta": 0.0},
        {"beta1": 0.8, "beta2": 0.4},
        {"wm_capacity": 0},
        {"disabled": ("nonsense",)},
    ],
)
def test_config_rejects_bad_values(kwargs):
    with pytest.raises(ConfigurationError):
        EngineConfig(**kwargs).validate()


def test_config_roundtrip_dict():
    cfg = EngineConfig(rng_seed=7, disabled=("rem",))
    assert EngineConfig.from_dict(cfg.as_dict()) == cfg


def test_value_for_importance_matches_target():
    for target in (0.0, 0.02, 0.1, 0.3, 0.5, 0.9, 0.95):
        v = value_for_importance(target)
        assert composite_importance(v) == pytest.approx(target, abs=1e-12)
    with pytest.raises(InvalidArgumentError):
        value_for_importance(1.0)  # repetition < 1 leaves no room for 1.0


def test_simulated_clock_advances_only_explicitly():
    clock = SimulatedClock()
    t0 = clock.now()
    assert clock.now() == t0
    t1 = clock.advance(2.5)
    assert hours_between(t1, t0) == pytest.approx(2.5)
    with pytest.raises(InvalidArgumentError):
        clock.advance(-1)


def test_wall_clock_monotonic():
    clock = WallClock()
    a = clock.now()
    b = clock.now()
    assert b >= a


def test_wall_clock_has_no_advance():
    with pytest.raises(InvalidArgumentError):
        WallClock().advance(1)
