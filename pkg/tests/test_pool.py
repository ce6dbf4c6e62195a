from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from dca.cell import DcConfig, DendriticCell
from dca.pool import DcPool, PoolConfig, init_pool
from dca.signals import DEFAULT_WEIGHTS, NormalizationMode, SignalVector, process_signals

REF_SIGNALS = SignalVector(pamp=0, danger=1.8975, safe=6)


def test_init_paper_pool():
    pool = init_pool(PoolConfig(100, 10, 0), DcConfig(10, 0.1))
    assert len(pool.cells) == 100
    assert all(c.collected == [] for c in pool.cells)
    assert all(9 <= c.threshold <= 11 for c in pool.cells)
    assert len({c.threshold for c in pool.cells}) == 100


def test_singleton_pool():
    pool = init_pool(PoolConfig(1, 1, 0))
    pool.dispatch_event("a", SignalVector(danger=1))
    assert len(pool.cells) == 1
    assert pool.cells[0].collected == ["a"]


@pytest.mark.parametrize(
    "kwargs",
    [{"pool_size": 0}, {"sample_size": 0}, {"pool_size": 5, "sample_size": 6}, {"rng_seed": -1}, {"rng_seed": 2**64}],
)
def test_pool_config_validation(kwargs):
    with pytest.raises(ValueError):
        PoolConfig(**kwargs)


def test_all_selected_cells_migrate_together():
    pool = init_pool(PoolConfig(100, 10, 0), DcConfig(10, 0.0))
    ref = process_signals(REF_SIGNALS)
    for k, c in enumerate(pool.cells):
        for j in range(3):
            c.sample(("warmup", k, j), ref)
    assert all(c.totals.csm == pytest.approx(8.3385) for c in pool.cells)
    old = list(pool.cells)
    emitted = pool.dispatch_event("x", REF_SIGNALS)
    assert len(emitted) == 10
    assert all(p.antigens[-1] == "x" and len(p.antigens) == 4 for p in emitted)
    replaced = [i for i, c in enumerate(pool.cells) if c is not old[i]]
    assert len(replaced) == 10
    assert all(pool.cells[i].collected == [] for i in replaced)
    assert len(pool.cells) == 100


def test_zero_event_records_without_migration():
    pool = init_pool(PoolConfig(100, 10, 3))
    emitted = pool.dispatch_event(7, SignalVector())
    assert emitted == []
    assert sum(c.collected.count(7) for c in pool.cells) == 10


@given(st.integers(1, 30), st.integers(1, 30), st.integers(0, 2**63))
@settings(max_examples=50)
def test_selection_is_distinct(pool_size, sample_size, seed):
    sample_size = min(sample_size, pool_size)
    pool = init_pool(PoolConfig(pool_size, sample_size, seed))
    for _ in range(5):
        chosen = pool.select()
        assert len(chosen) == sample_size == len(set(chosen))
        assert all(0 <= i < pool_size for i in chosen)


def _stream(n):
    for k in range(n):
        yield k, SignalVector(pamp=k % 3, danger=(k * 7) % 5, safe=(k * 3) % 4)


def test_pool_size_constant_and_conservation():
    pool = init_pool(PoolConfig(20, 5, 11), DcConfig(10, 0.1))
    n = 300
    for antigen, s in _stream(n):
        pool.dispatch_event(antigen, s)
        assert len(pool.cells) == 20
    pool.flush()
    assert pool.cells == []
    counts = Counter(a for p in pool.presentations for a in p.antigens)
    assert sum(counts.values()) == n * 5
    assert set(counts.values()) == {5}


def test_flush_empty_pool_and_single_cell():
    pool = init_pool(PoolConfig(5, 1, 0))
    assert pool.flush() == []

    pool = init_pool(PoolConfig(5, 1, 0))
    cell = DendriticCell(threshold=100.0)
    for a in (1, 2, 3):
        cell.sample(a, process_signals(REF_SIGNALS))
    pool.cells[2] = cell
    emitted = pool.flush()
    assert len(emitted) == 1
    assert emitted[0].antigens == (1, 2, 3)
    assert emitted[0].context.value == "semi-mature"


def _presentation_stream(seed):
    pool = init_pool(PoolConfig(30, 4, seed))
    for antigen, s in _stream(200):
        pool.dispatch_event(antigen, s, DEFAULT_WEIGHTS, NormalizationMode.EQ1_TIMES_TWO)
    pool.flush()
    return pool.presentations


def test_seed_determinism():
    assert _presentation_stream(5) == _presentation_stream(5)
    assert _presentation_stream(5) != _presentation_stream(6)
