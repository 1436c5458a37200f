import random

import pytest
from hypothesis import given, strategies as st

from lsys_complexity.analysis import (
    MeasureConfig,
    WindowPlan,
    WindowRecord,
    WindowSeries,
    analyze,
    flag_anomalies,
    robust_outliers,
    segment,
)
from lsys_complexity.complexity import k0_of_window
from lsys_complexity.encoding import BitString
from lsys_complexity.errors import DomainError, InvalidWindowError


def rand_bits(n, seed=0):
    rng = random.Random(seed)
    return BitString.from_iter(rng.getrandbits(1) for _ in range(n))


@pytest.mark.parametrize("n, count, dropped", [(1100, 2, 76), (512, 1, 0), (511, 0, 511)])
def test_segment_counts(n, count, dropped):
    windows, plan = segment(BitString.from01("0" * n), WindowPlan(512))
    assert len(windows) == count
    assert plan.dropped_tail_bits == dropped


@given(st.integers(0, 300), st.sampled_from([2, 4, 8, 16, 32]), st.integers(1, 40))
def test_segment_coverage(n, w, stride):
    bits = rand_bits(n, n)
    windows, plan = segment(bits, WindowPlan(w, stride))
    expected = (n - w) // stride + 1 if n >= w else 0
    assert len(windows) == expected
    assert all(len(x) == w for x in windows)
    for i, x in enumerate(windows):
        assert x == bits[i * stride:i * stride + w]


def test_segment_reassembles_prefix():
    bits = rand_bits(1000)
    windows, plan = segment(bits, WindowPlan(64))
    joined = BitString(b"".join(w.bits for w in windows))
    assert joined == bits[: len(joined)]
    assert len(joined) + plan.dropped_tail_bits == 1000


def test_plan_validation():
    with pytest.raises(InvalidWindowError):
        WindowPlan(500)
    with pytest.raises(ValueError):
        WindowPlan(512, 0)
    assert WindowPlan(64).stride_bits == 64


def test_analyze_constant_stream():
    series = analyze(BitString.from01("1" * 1024), WindowPlan(256))
    assert len(series.records) == 4
    for i, r in enumerate(series.records):
        assert r.k0 == 0.0 and r.te == 0.0 and 0 < r.lc <= 1
        assert r.start_bit == i * 256


def test_analyze_matches_k0_of_window():
    bits = rand_bits(64 * 6, 5)
    cfg = MeasureConfig(weighting="count")
    series = analyze(bits, WindowPlan(64), ["k0"], cfg)
    assert series.measures == ("k0",)
    windows, _ = segment(bits, WindowPlan(64))
    assert [r.k0 for r in series.records] == [k0_of_window(w, weighting="count").K0 for w in windows]
    assert all(r.te is None and r.lc is None for r in series.records)


def test_analyze_is_permutation_equivariant():
    blocks = [rand_bits(64, s) for s in range(5)]
    cfg = MeasureConfig(weighting="count")
    base = analyze(BitString(b"".join(b.bits for b in blocks)), WindowPlan(64), config=cfg)
    perm = [3, 0, 4, 1, 2]
    shuffled = analyze(BitString(b"".join(blocks[i].bits for i in perm)), WindowPlan(64), config=cfg)
    for j, i in enumerate(perm):
        a, b = base.records[i], shuffled.records[j]
        assert (a.k0, a.te, a.lc) == (b.k0, b.te, b.lc)


def test_analyze_parallel_matches_serial():
    bits = rand_bits(64 * 8, 9)
    cfg = MeasureConfig(weighting="count")
    assert analyze(bits, WindowPlan(64), config=cfg, workers=2) == analyze(bits, WindowPlan(64), config=cfg)


def test_analyze_requires_a_measure():
    with pytest.raises(ValueError):
        analyze(rand_bits(64), WindowPlan(64), [])


def _series(values):
    records = tuple(WindowRecord(i, i * 8, k0=v) for i, v in enumerate(values))
    return WindowSeries(WindowPlan(8), records, "raw", ("k0",))


def test_identical_values_have_no_flags():
    out = flag_anomalies(_series([1.5] * 20))
    assert not any(r.anomaly for r in out.records)


def test_single_shifted_window_flagged_with_zero_mad():
    values = [2.0] * 99 + [12.0]
    out = flag_anomalies(_series(values), 3.5)
    assert [r.index for r in out.records if r.anomaly] == [99]


def test_single_shifted_window_flagged_with_bounded_noise():
    rng = random.Random(11)
    values = [2.0 + rng.uniform(-0.01, 0.01) for _ in range(100)]
    values[37] += 1.0
    out = flag_anomalies(_series(values), 3.5)
    assert [r.index for r in out.records if r.anomaly] == [37]


@given(st.lists(st.integers(-400, 400), min_size=1, max_size=40), st.integers(-50, 50))
def test_flags_shift_invariant(eighths, c):
    # dyadic values and integer shifts keep every median/MAD step exact
    values = [v / 8 for v in eighths]
    assert robust_outliers(values) == robust_outliers([v + c for v in values])


def test_flags_shift_invariant_exact_values():
    values = [1.0, 1.25, 1.5, 1.25, 9.0, 1.0, 1.5]
    assert robust_outliers(values) == robust_outliers([v + 4.0 for v in values])


@given(st.lists(st.floats(0, 10), min_size=1, max_size=40))
def test_flag_count_monotone_in_tau(values):
    counts = [sum(robust_outliers(values, tau)) for tau in (0.5, 1, 2, 3.5, 6)]
    assert counts == sorted(counts, reverse=True)


def test_flag_errors():
    with pytest.raises(DomainError):
        flag_anomalies(WindowSeries(WindowPlan(8), (), "raw"))
    with pytest.raises(ValueError):
        robust_outliers([1.0], tau=0)
    with pytest.raises(ValueError):
        flag_anomalies(_series([1.0, 2.0]), measure="te")
