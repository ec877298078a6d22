import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cesarolab import spectral
from cesarolab.circle import TWO_PI, GridSet, PCFunction, TrigPoly, bandlimit, fourier_coefficients
from cesarolab.dyadic import containing_interval, cz_decompose, dilate
from cesarolab.operators import (
    CompositeSpec, addend_trigpoly, e_operator, fejer_mean, hilbert_modified, modified_partial_sum,
    partial_sum, sigma_indicator, sv_difference, t_beta_operator, t_operator, vp_mean,
)
from cesarolab.sequences import make_lacunary
from cesarolab.spectral import (
    band_sv, band_trigpoly, band_vp, log_series_small_angle, log_series_table, midpoints,
)

from conftest import random_pc


def hilbert_riemann(f: PCFunction, n: int, y: float, samples: int = 1 << 20) -> float:
    """Midpoint rule for the cotangent integral outside the tripled interval around ``y``."""
    x = -np.pi + TWO_PI * (np.arange(samples) + 0.5) / samples
    I = containing_interval(y, int(np.floor(np.log2(n))))
    excl = dilate(I, 3)
    cell = np.floor((x + np.pi) / TWO_PI * 2**excl.level).astype(int)
    keep = ~excl.mask[cell]
    vals = f.at(x) / np.tan((y - x) / 2)
    return float(np.sum(vals[keep]) * TWO_PI / samples)


def test_partial_sum_examples(half_indicator):
    assert partial_sum(half_indicator, 1, 0.0) == pytest.approx(0.5)
    c = PCFunction.constant(3.0, 2)
    for n in (0, 1, 17):
        assert partial_sum(c, n, 0.4) == pytest.approx(3.0)


def test_trig_input_is_fixed():
    p = TrigPoly.from_dict_coeffs({-2: 1j, 0: 0.5, 2: -1j, 1: 0.25})
    y = np.linspace(-3, 3, 7)
    np.testing.assert_allclose(partial_sum(p, 2, y), p(y), atol=1e-13)
    np.testing.assert_allclose(vp_mean(p, 2, y), p(y), atol=1e-13)
    np.testing.assert_allclose(sv_difference(p, 2, y), 0, atol=1e-13)


def test_vp_and_sv_single_frequency():
    p = TrigPoly.from_dict_coeffs({3: 1.0})
    y = np.array([0.0, 0.5, 2.0])
    np.testing.assert_allclose(vp_mean(p, 2, y), np.exp(3j * y) / 2, atol=1e-14)
    np.testing.assert_allclose(sv_difference(p, 2, y), -np.exp(3j * y) / 2, atol=1e-14)


def test_fejer_examples(half_indicator, rng):
    one = PCFunction.constant(1.0, 3)
    assert fejer_mean(one, 9, 0.2) == pytest.approx(1.0)
    f = random_pc(rng)
    assert fejer_mean(f, 0, 1.1) == pytest.approx(f.mean())
    ns = rng.integers(0, 200, 512)
    ys = rng.uniform(-np.pi, np.pi, 512)
    vals = np.array([fejer_mean(half_indicator, int(n), y).real for n, y in zip(ns, ys)])
    assert vals.min() >= -1e-10 and vals.max() <= 1 + 1e-10


@given(st.integers(0, 2**32 - 1), st.integers(1, 200))
def test_sv_support_window(seed, n):
    f = random_pc(np.random.default_rng(seed), 5)
    p = band_trigpoly(f, band_sv(n))
    ks = np.abs(p.ks)
    assert np.all(p.coeffs[(ks <= n) | (ks > 2 * n - 1)] == 0)


@given(st.integers(0, 2**32 - 1), st.integers(1, 100))
def test_projection_identities(seed, n):
    f = random_pc(np.random.default_rng(seed), 5)
    s = bandlimit(f, n)
    pts = midpoints(8)
    np.testing.assert_allclose(partial_sum(s, n, pts), partial_sum(f, n, pts), atol=1e-12)
    np.testing.assert_allclose(vp_mean(s, n, pts), partial_sum(f, n, pts), atol=1e-12)


@given(st.integers(0, 2**32 - 1), st.integers(0, 300))
def test_fejer_positivity(seed, n):
    f = PCFunction(6, np.abs(np.random.default_rng(seed).standard_normal(64)))
    assert fejer_mean(f, n, midpoints(9)).real.min() >= -1e-10


@given(st.integers(0, 2**32 - 1), st.integers(0, 400))
def test_sigma_of_indicator_in_unit_interval(seed, m):
    mask = np.random.default_rng(seed).random(64) < 0.4
    v = sigma_indicator(GridSet(6, mask), m, midpoints(9))
    assert v.min() >= -1e-10 and v.max() <= 1 + 1e-10


def test_hilbert_of_constant_vanishes_at_midpoints():
    c = PCFunction.constant(2.0, 4)
    for n in (2, 8, 64):
        g = int(np.floor(np.log2(n)))
        assert np.max(np.abs(hilbert_modified(c, n, midpoints(g)))) < 1e-12


def test_hilbert_zero_on_excluded_support():
    n = 16  # excluded: 3 I_4(y)
    y = midpoints(6).subset([20])
    I = containing_interval(float(y.y[0]), 4)
    f = PCFunction(6, dilate(I, 3, 6).mask.astype(float) * 3.0)
    assert abs(hilbert_modified(f, n, y)[0]) < 1e-14
    assert abs(modified_partial_sum(f, 8, n, y)[0]) < 1e-14
    assert abs(modified_partial_sum(PCFunction.constant(0.0, 4), 8, 8, y)[0]) == 0


def test_hilbert_far_cell_closed_form_and_riemann():
    f = PCFunction.from_cells(6, [3], 1.5)
    y = float(midpoints(8).y[200])
    a, b = f.edges()[3], f.edges()[4]
    closed = 1.5 * 2 * (np.log(abs(np.sin((y - a) / 2))) - np.log(abs(np.sin((y - b) / 2))))
    val = hilbert_modified(f, 8, y)
    assert val == pytest.approx(closed, rel=1e-12)
    assert val.real == pytest.approx(hilbert_riemann(f, 8, y), rel=1e-6)


def test_e_operator_examples():
    one = PCFunction.constant(1.0, 3)
    pts = midpoints(7)
    for l in (4, 8, 13, 100):
        ell = int(np.floor(np.log2(l)))
        np.testing.assert_allclose(e_operator(one, l, l, pts), l * 3 * TWO_PI / 2**ell, rtol=1e-13)
    assert np.all(e_operator(PCFunction.constant(0.0, 3), 8, 8, pts) == 0)


@given(st.integers(0, 2**32 - 1), st.sampled_from([8, 32, 128]))
def test_domination_by_local_integral(seed, l):
    f = random_pc(np.random.default_rng(seed), 8, complex_values=True)
    pts = midpoints(10).subset(np.arange(0, 1024, 16))
    lhs = np.abs(partial_sum(f, l, pts) - modified_partial_sum(f, l, l, pts))
    assert np.all(lhs <= np.abs(e_operator(f.abs(), l, l, pts)) + 1e-9)


@given(st.integers(0, 2**32 - 1))
def test_modified_partial_sum_square_bound(seed):
    f = random_pc(np.random.default_rng(seed), 8)
    l = 8
    pts = midpoints(10).subset(np.arange(0, 1024, 16))
    s = np.abs(modified_partial_sum(f, l, l, pts)) ** 2
    h1 = np.abs(hilbert_modified(f, l, pts, modulation=-(l + 1))) ** 2
    h2 = np.abs(hilbert_modified(f, l, pts, modulation=l)) ** 2
    l1 = np.sum(np.abs(f.values)) * f.width
    assert np.all(s <= l1**2 + h1 + h2 + 1e-9)


def test_modulated_hilbert_matches_explicit_modulation(rng):
    f = random_pc(rng, 6)
    pts = midpoints(9)
    for k in (-9, 5):
        g = f.refine(12).modulate(k)
        # refining to level 12 keeps the exclusion exact; modulation is cellwise approximate
        approx = hilbert_modified(g, 8, pts)
        exact = hilbert_modified(f, 8, pts, modulation=k)
        assert np.max(np.abs(approx - exact)) < 0.02 * (1 + np.max(np.abs(exact)))


def test_t_operator_examples(rng):
    seq = make_lacunary(2, 4, 6)
    pts = midpoints(8)
    f = random_pc(rng)
    np.testing.assert_allclose(t_operator(f, seq, 1, pts), sv_difference(f, 4, pts), atol=1e-13)
    p = TrigPoly.from_dict_coeffs({-4: 1.0, 3: 2j})
    assert np.max(np.abs(t_operator(p, seq, 6, pts))) == 0
    g = random_pc(rng)
    lhs = t_operator(f * 2.0 + g * (1 - 1j), seq, 5, pts)
    rhs = 2.0 * t_operator(f, seq, 5, pts) + (1 - 1j) * t_operator(g, seq, 5, pts)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)
    with pytest.raises(ValueError):
        t_operator(f, seq, 7, pts)


def test_t_beta_with_empty_family_is_t(rng):
    seq = make_lacunary(3, 10, 8)
    spec = CompositeSpec(seq, 8, 9, 0.3)
    f = random_pc(rng, 6)
    lam = 1e3 * np.max(np.abs(f.values))
    assert len(cz_decompose(f, lam).family) == 0
    pts = midpoints(9)
    np.testing.assert_allclose(t_beta_operator(f, spec, lam, pts), t_operator(f, seq, 8, pts), atol=1e-12)
    c = PCFunction.constant(0.7, 4)
    assert np.max(np.abs(t_beta_operator(c, spec, 2.0, pts))) < 1e-15


def test_composite_spec_validation():
    seq = make_lacunary(3, 10, 4)
    for bad in ({"beta": 8}, {"beta": 7}, {"delta": 0.5}, {"N": 5}):
        kw = {"seq": seq, "N": 4, **bad}
        with pytest.raises(ValueError):
            CompositeSpec(**kw)


def test_addend_windows_on_step_function(rng):
    f = PCFunction(5, np.repeat(rng.standard_normal(8), 4))
    seq = make_lacunary(3, 10, 8)
    cz = cz_decompose(f, 2 * np.sum(np.abs(f.values)) * f.width / TWO_PI)
    comp = ~dilate(next(iter(cz.family)), 9, 5) if len(cz.family) else GridSet.full(5)
    for j in range(1, 9):
        n = seq.term(j)
        p = addend_trigpoly(f, n, n // 10, comp)
        ks = np.abs(p.ks)
        inside = (10 * ks >= 9 * n) & (10 * ks <= 21 * n)
        scale = np.max(np.abs(p.coeffs))
        assert np.max(np.abs(p.coeffs[~inside]), initial=0) <= 1e-9 * scale


def test_log_series_small_angle_matches_table():
    L = 14
    r = np.arange(1, 200)
    for p in (1, 63, 64, 500, 5000):
        table = log_series_table(p, L)[r]
        em = log_series_small_angle(p, TWO_PI * r / 2**L)
        assert np.max(np.abs(em - table)) < 1e-12


def test_local_operators_above_table_resolution(monkeypatch, rng):
    # with a lowered table limit the arc ends go through Euler-Maclaurin
    f = random_pc(rng, 6)
    pts = midpoints(10).subset(np.arange(0, 1024, 8))
    ref_h = hilbert_modified(f, 1 << 14, pts, modulation=-(1 << 14) - 1)
    ref_s = modified_partial_sum(f, 3000, 1 << 14, pts)
    monkeypatch.setattr(spectral, "MAX_FOLD_LEVEL", 12)
    np.testing.assert_allclose(hilbert_modified(f, 1 << 14, pts, modulation=-(1 << 14) - 1), ref_h, atol=1e-11)
    np.testing.assert_allclose(modified_partial_sum(f, 3000, 1 << 14, pts), ref_s, atol=1e-11)


def test_large_order_hilbert_runs():
    f = PCFunction.indicator(0.0, np.pi, 4)
    v = hilbert_modified(f, 10 * 2**31, midpoints(10))
    assert np.all(np.isfinite(v))


def test_local_operators_need_dyadic_points():
    f = PCFunction.constant(1.0, 3)
    with pytest.raises(ValueError):
        hilbert_modified(f, 8, np.array([0.1234567]))


def test_band_vp_weights():
    f = PCFunction.indicator(0.0, np.pi, 4)
    p = band_trigpoly(f, band_vp(4))
    c = fourier_coefficients(f, p.ks)
    w = np.where(np.abs(p.ks) <= 4, 1.0, (8 - np.abs(p.ks)) / 4)
    np.testing.assert_allclose(p.coeffs, w * c, atol=1e-15)
