import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cesarolab.circle import TWO_PI, PCFunction, lp_norm
from cesarolab.dyadic import (
    DyadicInterval, IntervalFamily, containing_interval, cz_decompose, dilate, dilated_union,
    filter_beta, maximal_selection, neighbor, overlap_sum, shifted,
)
from cesarolab.lab.sets import cz_invariants, lambda_nesting, random_family

from conftest import random_pc


def cz_oracle(values: np.ndarray, lam: float, level: int = 0, index: int = 0) -> list[tuple[int, int]]:
    """Recursive stopping time on ``|values|`` at the dyadic node ``(level, index)``."""
    n = len(values)
    if n == 1:
        return []
    out = []
    for child, half in ((2 * index, values[: n // 2]), (2 * index + 1, values[n // 2 :])):
        if np.mean(np.abs(half)) > lam:
            out.append((level + 1, child))
        else:
            out.extend(cz_oracle(half, lam, level + 1, child))
    return out


def test_containing_interval_examples():
    assert containing_interval(0.0, 1) == DyadicInterval(1, 1)
    assert containing_interval(-np.pi, 2) == DyadicInterval(2, 0)
    assert containing_interval(np.pi / 2, 2) == DyadicInterval(2, 3)


def test_neighbor_examples():
    I = DyadicInterval(4, 5)
    assert neighbor(I, 0) == I
    assert neighbor(DyadicInterval(1, 1), 1) == DyadicInterval(1, 0)
    assert neighbor(neighbor(I, 3), -3) == I


def test_dilate_examples():
    I = DyadicInterval(4, 7)
    np.testing.assert_array_equal(dilate(I, 1).mask, np.arange(16) == 7)
    assert dilate(I, 3).measure() == pytest.approx(3 * I.measure)
    assert dilate(DyadicInterval(1, 0), 3).mask.all()
    with pytest.raises(ValueError):
        dilate(I, 2)


def test_cz_rejects_lambda_at_or_below_mean():
    with pytest.raises(ValueError):
        cz_decompose(PCFunction.constant(1.0, 3), 1.0)
    with pytest.raises(ValueError):
        cz_decompose(PCFunction.constant(1.0, 3), np.inf)


def test_cz_constant_has_empty_family():
    f = PCFunction.constant(1.0, 3)
    d = cz_decompose(f, 1.0 + 1e-9)
    assert len(d.family) == 0
    np.testing.assert_array_equal(d.good.values, f.values)


@pytest.mark.parametrize("lam", [1.0 + 1e-9, 1.5, 3.0, 5.0])
def test_cz_spike_matches_recursive_oracle(lam):
    f = PCFunction.from_cells(5, range(16, 20), 8.0)  # 8 on [0, pi/4)
    d = cz_decompose(f, lam)
    assert [(I.level, I.index) for I in d.family] == sorted(cz_oracle(f.values, lam))
    if lam < 2:
        assert list(d.family) == [DyadicInterval(1, 1)]


@given(st.integers(0, 2**32 - 1), st.floats(1.05, 20.0))
def test_cz_matches_oracle_on_random_functions(seed, mult):
    f = random_pc(np.random.default_rng(seed), 7)
    lam = mult * lp_norm(f, 1) / TWO_PI
    d = cz_decompose(f, lam)
    expected = sorted(cz_oracle(f.values, lam * (1 + 1e-12)))
    assert sorted((I.level, I.index) for I in d.family) == expected


@given(st.integers(0, 2**32 - 1), st.floats(1.05, 20.0))
def test_cz_invariants_hold(seed, mult):
    f = random_pc(np.random.default_rng(seed), 7, complex_values=seed % 2 == 1)
    lam = mult * lp_norm(f, 1) / TWO_PI
    inv = cz_invariants(cz_decompose(f, lam))
    assert inv.passed
    d = cz_decompose(f, lam)
    assert lp_norm(d.good, np.inf) <= 2 * lam * (1 + 1e-12)
    assert d.measure_F() <= lp_norm(f, 1) / lam * (1 + 1e-12)


@given(st.integers(0, 2**32 - 1), st.floats(1.05, 10.0), st.floats(1.0, 4.0))
def test_lambda_nesting(seed, mult, factor):
    f = random_pc(np.random.default_rng(seed), 7)
    lam = mult * lp_norm(f, 1) / TWO_PI
    assert lambda_nesting(f, lam, lam * factor)


def test_filter_beta_examples():
    fam = IntervalFamily((DyadicInterval(2, 0), DyadicInterval(4, 8), DyadicInterval(2, 3)))
    assert len(filter_beta(fam, TWO_PI)) == 0
    assert filter_beta(fam, 0) == fam
    assert [I.level for I in filter_beta(fam, TWO_PI / 8)] == [2, 2]


def test_dilated_union_examples():
    assert dilated_union(IntervalFamily(), 7).is_empty()
    I = DyadicInterval(5, 3)
    assert dilated_union(IntervalFamily((I,)), 5) == dilate(I, 5)


@given(st.integers(0, 2**32 - 1), st.sampled_from([1, 3, 7, 9]))
def test_dilated_union_subadditive(seed, gamma):
    fam = random_family(np.random.default_rng(seed), max_level=8)
    assert dilated_union(fam, gamma).measure() <= gamma * fam.measure() + 1e-12


def test_overlap_examples():
    I = DyadicInterval(3, 1)
    assert overlap_sum(IntervalFamily((I,)), 1) == pytest.approx(I.measure)
    J = DyadicInterval(3, 5)
    assert overlap_sum(IntervalFamily((I, J)), 3) == pytest.approx(3 * I.measure + 3 * J.measure)


@given(st.integers(0, 2**32 - 1), st.sampled_from([3, 7, 9]), st.integers(0, 3))
def test_overlap_sum_is_grid_invariant(seed, gamma, extra):
    fam = random_family(np.random.default_rng(seed), max_level=8)
    L = max(fam.finest_level, 1)
    assert overlap_sum(fam, gamma, L + extra) == pytest.approx(overlap_sum(fam, gamma, L), rel=1e-12)


def test_maximal_selection_examples():
    same = IntervalFamily(tuple(DyadicInterval(4, k) for k in (1, 5, 9)))
    assert maximal_selection(same, 0) == same
    fam = IntervalFamily((DyadicInterval(3, 0), DyadicInterval(5, 4)))
    # shift 1: (3, 0) -> (3, 1) covering level-5 cells 4..7, and (5, 4) -> (5, 5) lies inside it
    assert maximal_selection(fam, 1) == IntervalFamily((DyadicInterval(3, 0),))


@given(st.integers(0, 2**32 - 1), st.integers(-5, 5))
def test_maximal_selection_shifted_copies_disjoint(seed, shift):
    fam = random_family(np.random.default_rng(seed), max_level=8)
    sel = shifted(maximal_selection(fam, shift), shift)
    for i, a in enumerate(sel):
        for b in sel[i + 1 :]:
            assert not a.intersects(b)
