import itertools
import math

import pytest
from hypothesis import given, strategies as st

from lsys_complexity.baselines import (
    distinct_counts,
    entropy_fixed_length,
    linguistic_complexity,
    max_vocabulary,
    te_length,
    topological_entropy,
)
from lsys_complexity.encoding import BitString
from lsys_complexity.errors import DomainError

from oracles import all_substring_counts

S1 = "0111001100"
S2 = "0101010101"


@pytest.mark.parametrize("s, total", [(S1, 38), (S2, 19), ("0000", 4)])
def test_distinct_totals(s, total):
    assert distinct_counts(s).total == total


def test_constant_counts_are_one():
    assert distinct_counts("0000").counts == (1, 1, 1, 1)


def test_distinct_counts_empty():
    with pytest.raises(DomainError):
        distinct_counts("")


def test_distinct_counts_exhaustive_up_to_10():
    for n in range(1, 11):
        for bits in itertools.product("01", repeat=n):
            s = "".join(bits)
            assert list(distinct_counts(s).counts) == all_substring_counts(s)


@given(st.text(alphabet="acgt", min_size=1, max_size=200))
def test_distinct_counts_other_alphabets(s):
    idx = distinct_counts(s)
    assert list(idx.counts) == all_substring_counts(s)
    assert idx[len(s)] == 1
    for l in range(1, len(s) + 1):
        assert 1 <= idx[l] <= min(4**l, len(s) - l + 1)


def test_distinct_counts_accepts_bitstring():
    assert distinct_counts(BitString.from01(S1)).total == 38


@given(st.text(alphabet="01", min_size=1, max_size=60), st.sampled_from("01"))
def test_appending_never_decreases_total(s, ch):
    assert distinct_counts(s + ch).total >= distinct_counts(s).total


def test_lc_worked_examples():
    a = linguistic_complexity(S1, 2)
    b = linguistic_complexity(S2, 2)
    assert (a.A, a.M) == (38, 42) and (b.A, b.M) == (19, 42)
    assert a.lc == pytest.approx(0.904762, abs=1e-6)
    assert b.lc == pytest.approx(0.45238, abs=1e-5)


def test_lc_constant():
    r = linguistic_complexity("0000", 2)
    assert r.M == 2 + 3 + 2 + 1
    assert r.lc == 0.5


def test_max_vocabulary_long_string_matches_direct_sum():
    n = 300
    assert max_vocabulary(n, 2) == sum(min(2**l, n - l + 1) for l in range(1, n + 1))
    assert max_vocabulary(n, 4) == sum(min(4**l, n - l + 1) for l in range(1, n + 1))


@given(st.text(alphabet="01", min_size=1, max_size=80))
def test_lc_in_unit_interval(s):
    assert 0 < linguistic_complexity(s).lc <= 1


def test_lc_rejects_small_alphabet():
    with pytest.raises(DomainError):
        linguistic_complexity("0", 1)


@pytest.mark.parametrize(
    "s, l, expected",
    [(S2, 3, 1 / 3), ("0000000", 4, 0.0), ("01", 1, 1.0)],
)
def test_entropy_fixed_length(s, l, expected):
    assert entropy_fixed_length(s, l, 2) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("l", [0, 11])
def test_entropy_fixed_length_domain(l):
    with pytest.raises(DomainError):
        entropy_fixed_length(S2, l, 2)


def test_te_worked_value():
    assert te_length(10, 2) == 3
    assert topological_entropy(S2, 2) == pytest.approx(1 / 3, abs=1e-12)


def test_te_constant_is_zero():
    for n in (2, 5, 17, 512):
        assert topological_entropy("1" * n, 2) == 0.0


@pytest.mark.parametrize(
    "n, l",
    [(2, 1), (4, 1), (5, 2), (10, 3), (11, 3), (19, 4), (35, 4), (36, 5)],
)
def test_te_length_selection_and_boundary(n, l):
    # n = 2**(l+1) + l satisfies the inequality for l and l + 1; the larger wins
    assert te_length(n, 2) == l
    assert 2**l + l - 1 <= n <= 2 ** (l + 1) + l


def test_te_length_boundary_picks_larger():
    for l in range(1, 8):
        n = 2 ** (l + 1) + l
        assert te_length(n, 2) == l + 1


def test_te_too_short():
    with pytest.raises(DomainError):
        topological_entropy("0", 2)


@given(st.text(alphabet="01", min_size=2, max_size=300))
def test_te_in_unit_interval(s):
    h = topological_entropy(s, 2)
    assert 0 <= h <= 1
    l = te_length(len(s), 2)
    prefix = s[: 2**l + l - 1]
    assert h == pytest.approx(math.log2(all_substring_counts(prefix)[l - 1]) / l)
