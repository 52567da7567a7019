import math

import pytest

from scm.errors import NotFoundError
from scm.model import Episode, SimulatedClock, ValueVector
from scm.working_memory import WorkingMemory


def make_episode(i, clock, importance=0.5):
    now = clock.now()
    # novelty alone reaches any importance <= 0.3; scale via novelty weight
    value = ValueVector(novelty=min(1.0, importance / 0.30))
    return Episode(
        eid=f"e{i}",
        timestamp=now,
        concept_ids=(f"c{i}",),
        text=f"episode {i}",
        value=value,
        importance=importance,
        last_access=now,
    )


@pytest.fixture
def clock():
    return SimulatedClock()


def test_admit_under_capacity_no_eviction(clock):
    wm = WorkingMemory(7)
    for i in range(6):
        assert wm.admit(make_episode(i, clock)) is None
        clock.advance(0.01)
    assert wm.admit(make_episode(6, clock)) is None
    assert len(wm) == 7


def test_admit_at_capacity_evicts_oldest(clock):
    wm = WorkingMemory(7)
    for i in range(7):
        wm.admit(make_episode(i, clock))
        clock.advance(0.01)
    evicted = wm.admit(make_episode(7, clock))
    assert evicted is not None
    assert evicted.eid == "e0"
    assert min(ep.timestamp for ep in wm.episodes) > evicted.timestamp
    assert len(wm) == 7


def test_admit_ten_keeps_last_seven_in_order(clock):
    wm = WorkingMemory(7)
    evicted = []
    for i in range(10):
        out = wm.admit(make_episode(i, clock))
        if out:
            evicted.append(out.eid)
        clock.advance(0.01)
    assert len(wm) == 7
    assert evicted == ["e0", "e1", "e2"]
    assert [ep.eid for ep in wm.episodes] == [f"e{i}" for i in range(3, 10)]


def test_touch_updates_access_and_repetition(clock):
    wm = WorkingMemory(7)
    wm.admit(make_episode(0, clock, importance=0.3))
    clock.advance(1.0)
    updated = wm.touch("e0", clock.now())
    assert updated.access_count == 1
    # counts (1, 1): repetition = 1/2
    assert updated.value.repetition == pytest.approx(0.5)
    assert updated.last_access == clock.now()


def test_touch_twice_counts(clock):
    wm = WorkingMemory(7)
    wm.admit(make_episode(0, clock))
    t0 = clock.now()
    wm.touch("e0", t0)
    later = clock.advance(0.5)
    ep = wm.touch("e0", later)
    assert ep.access_count == 2
    assert ep.last_access == later > t0


def test_touch_missing_raises(clock):
    wm = WorkingMemory(7)
    with pytest.raises(NotFoundError):
        wm.touch("ghost", clock.now())


def test_entropy_uniform_is_one(clock):
    wm = WorkingMemory(7)
    for i in range(7):
        wm.admit(make_episode(i, clock, importance=0.25))
    assert wm.entropy() == pytest.approx(1.0)


def test_entropy_single_episode_is_zero(clock):
    wm = WorkingMemory(7)
    wm.admit(make_episode(0, clock))
    assert wm.entropy() == 0.0
    wm.clear()
    assert wm.entropy() == 0.0


def test_entropy_hand_computed_two_episodes(clock):
    wm = WorkingMemory(7)
    wm.admit(make_episode(0, clock, importance=0.27))   # 0.9 of total
    wm.admit(make_episode(1, clock, importance=0.03))   # 0.1 of total
    expected = -(0.9 * math.log(0.9) + 0.1 * math.log(0.1)) / math.log(2)
    assert wm.entropy() == pytest.approx(expected, abs=1e-9)
    assert wm.entropy() == pytest.approx(0.469, abs=5e-4)


def test_entropy_in_unit_interval_and_permutation_invariant(clock):
    import random

    rng = random.Random(5)
    values = [rng.uniform(0.01, 0.3) for _ in range(7)]
    wm1 = WorkingMemory(7)
    wm2 = WorkingMemory(7)
    for i, imp in enumerate(values):
        wm1.admit(make_episode(i, clock, importance=imp))
    for i, imp in enumerate(reversed(values)):
        wm2.admit(make_episode(i, clock, importance=imp))
    assert 0.0 <= wm1.entropy() <= 1.0
    assert wm1.entropy() == pytest.approx(wm2.entropy(), abs=1e-12)


def test_clear_returns_held_episodes(clock):
    wm = WorkingMemory(7)
    for i in range(3):
        wm.admit(make_episode(i, clock))
    held = wm.clear()
    assert [e.eid for e in held] == ["e0", "e1", "e2"]
    assert len(wm) == 0
