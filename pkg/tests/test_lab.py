import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cesarolab.circle import TWO_PI, PCFunction, TrigPoly, lp_norm
from cesarolab.corpus import default_corpus
from cesarolab.dyadic import DyadicInterval, cz_decompose
from cesarolab.lab import composite, convergence, local, regions, sets
from cesarolab.lab.reports import (
    BoundRatioReport, CSV_COLUMNS, HardAssertionError, WeakTypeCurve, monotone_blowup, reports_to_csv,
    stable_pair, strictly_decreasing,
)
from cesarolab.operators import CompositeSpec
from cesarolab.sequences import make_delta_growth, make_lacunary, make_powers_of_two

from conftest import random_pc


@pytest.fixture(scope="module")
def spike():
    """``2 lambda`` on one level-5 interval, ``lambda = 1``."""
    return PCFunction.from_cells(7, DyadicInterval(5, 9).cells(7), 2.0)


# -- regions -----------------------------------------------------------------------

@pytest.mark.parametrize("which", ["H", "S", "SV"])
def test_dilated_weighted_empty_family(which, rng):
    f = random_pc(rng, 6)
    lam = 1e3 * lp_norm(f, np.inf)
    lhs, eps = regions.dilated_weighted_integral(f, lam, 7, 9, 64, 8, which, 9)
    assert lhs == 0.0 and eps is None


@pytest.mark.parametrize("which", ["H", "S", "SV"])
def test_dilated_weighted_single_interval(spike, which):
    assert [I for I in cz_decompose(spike, 1.0).family] == [DyadicInterval(5, 9)]
    a, _ = regions.dilated_weighted_integral(spike, 1.0, 7, 9, 64, 8, which, 10)
    b, _ = regions.dilated_weighted_integral(spike, 1.0, 7, 9, 64, 8, which, 11)
    assert a > 0 and abs(a - b) <= 0.05 * b
    wide, _ = regions.dilated_weighted_integral(spike, 1.0, 7, 13, 64, 8, which, 10)
    assert wide <= a


def test_dilated_weighted_preconditions(spike):
    with pytest.raises(ValueError):
        regions.dilated_weighted_integral(spike, 1.0, 7, 9, 1000, 8, "H")
    with pytest.raises(ValueError):
        regions.dilated_weighted_integral(spike, 1.0, 5, 9, 64, 8, "H")
    with pytest.raises(ValueError):
        regions.dilated_weighted_integral(spike, 1.0, 7, 7, 64, 8, "H")
    with pytest.raises(ValueError):
        regions.dilated_weighted_integral(spike, 0.01, 7, 9, 64, 8, "H")


def test_gap_terms_vanish_when_all_intervals_survive(spike):
    # |I| = 2 pi / 32 exceeds every beta_j of a sequence starting at n_1 = 1000
    seq = make_lacunary(2, 1000, 6)
    for which in ("H", "S", "SV"):
        assert np.all(regions.gap_terms(spike, 1.0, 7, seq, 6, which, 9) == 0)
    with pytest.raises(ValueError):
        regions.gap_terms(spike, 1.0, 7, make_lacunary(1.5, 10, 6), 6)


def test_delta_audit_on_lacunary_sequences():
    corpus = default_corpus()
    seq = make_lacunary(2, 10, 32)
    for it in corpus[:8]:
        l1 = lp_norm(it.f, 1)
        if l1 == 0:
            continue
        cz = cz_decompose(it.f, 2 * l1 / TWO_PI)
        a = regions.delta_audit(cz, 7, seq, 32)
        assert a.violations == 0 and a.k_min == math.ceil(math.log(32) ** 2)


def test_sv_weighted_terms_empty_family_and_rhs_scaling(rng):
    f = random_pc(rng, 6)
    seq = make_lacunary(2, 10, 4)
    lam = 1e3 * lp_norm(f, np.inf)
    on_f = regions.sv_weighted_terms(f, lam, 9, seq, 4, "gammaF", 7, 9)
    assert np.all(on_f == 0)
    r1 = regions.check_cor_SV_gammaF(f, lam, 7, 9, seq, 4, "T", 9)
    r2 = regions.check_cor_SV_gammaF(f, 2 * lam, 7, 9, seq, 4, "T", 9)
    assert r2.rhs_without_constant == pytest.approx(2 * r1.rhs_without_constant)
    assert r1.lhs == pytest.approx(r2.lhs)
    assert r1.rhs_without_constant == pytest.approx(4 * math.log(5) ** 5 * lp_norm(f, 1) * lam)


def test_off_region_with_empty_family_is_whole_circle(rng):
    f = random_pc(rng, 6)
    lam = 1e3 * lp_norm(f, np.inf)
    rep = regions.check_lemma_T_minus_gammaF(f, lam, 7, "S", 8, 9)
    from cesarolab.operators import partial_sum
    from cesarolab.spectral import midpoints
    full = np.sum(np.abs(partial_sum(f, 8, midpoints(9))) ** 2) * TWO_PI / 2**9
    assert rep.lhs == pytest.approx(full)
    zero = regions.check_lemma_T_minus_gammaF(PCFunction.constant(0.0, 3), 1.0, 7, "H", 8, 9)
    assert zero.lhs == 0 and zero.ratio == 0


def test_e_vanishing_on_corpus():
    for it in default_corpus()[:20]:
        l1 = lp_norm(it.f, 1)
        if l1 == 0:
            continue
        for mult in (1.5, 4.0):
            v = regions.check_e_vanishing(it.f, mult * l1 / TWO_PI, 7, [8, 128, 1 << 16], 9)
            assert v <= regions.E_TOL


def test_bad_part_sum_has_zero_local_means(rng):
    f = random_pc(rng, 7)
    cz = cz_decompose(f, 3 * lp_norm(f, 1) / TWO_PI)
    f0 = regions.bad_part_sum(cz)
    for I, _ in cz.bad:
        assert abs(f0.values[I.cells(7)].sum()) < 1e-12


# -- sets ---------------------------------------------------------------------------

def test_check_cz_detects_nothing_on_corpus():
    for it in default_corpus()[:12]:
        l1 = lp_norm(it.f, 1)
        if l1:
            assert sets.check_cz(it.f, 2 * l1 / TWO_PI).passed
            assert sets.family_invariance(it.f, 2 * l1 / TWO_PI)


def test_overlap_report_within_bound(rng):
    for _ in range(20):
        fam = sets.random_family(rng, 8)
        if len(fam):
            for gamma in (7, 9, 11):
                assert sets.overlap_report(fam, gamma).ratio <= sets.overlap_bound(gamma)


@given(st.integers(0, 2**32 - 1), st.integers(-4, 4))
def test_check_maximal_selection(seed, shift):
    fam = sets.random_family(np.random.default_rng(seed), 7)
    sets.check_maximal_selection(fam, shift)


# -- local --------------------------------------------------------------------------

def test_kernel_identities_pass():
    res = local.kernel_identities(32, 512)
    assert res.passed
    assert res.max_cot_defect <= 1e-12


def test_domination_raises_on_bad_tolerance(rng):
    f = random_pc(rng, 6)
    pts = local.evenly_spaced_midpoints(9, 16)
    assert local.check_domination(f, 8, pts) <= local.DOMINATION_TOL
    assert local.modified_sum_gap(f, 8, pts) <= 1e-9


def test_hilbert_weak_type_curve(spike):
    cur = local.hilbert_weak_type(spike, 64, [0.5, 1, 2, 4], 9, "spike")
    assert cur.is_monotone()
    assert np.isfinite(cur.fitted_constant())


# -- composite ----------------------------------------------------------------------

def test_orthogonality_single_addend_is_exact(rng):
    f = random_pc(rng, 6)
    seq = make_lacunary(3, 10, 1)
    spec = CompositeSpec(seq, 1, 9, 0.3)
    res = composite.check_orthogonality_equality(f, seq, spec, 2 * lp_norm(f, 1) / TWO_PI)
    assert res.defect == 0.0


def test_orthogonality_windows_disjoint_q3(rng):
    f = PCFunction(5, np.repeat(rng.standard_normal(8), 4))
    seq = make_lacunary(3, 10, 6)
    spec = CompositeSpec(seq, 6, 9, 0.3)
    res = composite.check_orthogonality_equality(f, seq, spec, 2 * lp_norm(f, 1) / TWO_PI)
    assert res.disjoint and res.windows_ok and res.defect <= 1e-8
    for a, b in zip(seq.terms, seq.terms[1:]):
        assert 21 * a < 9 * b  # 2.1 n_j < 0.9 n_{j+1}


def test_orthogonality_q26_corpus_item():
    it = default_corpus()[3]
    seq = make_lacunary(2.6, 10, 8)
    spec = CompositeSpec(seq, 8, 9, 0.3)
    res = composite.check_orthogonality_equality(it.f, seq, spec, 2 * lp_norm(it.f, 1) / TWO_PI)
    assert res.defect <= 1e-8


def test_orthogonality_rejects_small_ratio(rng):
    f = random_pc(rng, 5)
    for q in (2.0, 2.5):
        seq = make_lacunary(q, 10, 4)
        with pytest.raises(ValueError):
            composite.check_orthogonality_equality(f, seq, CompositeSpec(seq, 4, 9, 0.3), 2 * lp_norm(f, 1) / TWO_PI)


def test_orthogonality_bound_zero_function():
    from cesarolab.corpus import CorpusItem
    seq = make_lacunary(3, 10, 4)
    zero = CorpusItem("zero", PCFunction.constant(0.0, 3), "")
    assert composite.check_orthogonality_bound([zero], seq, CompositeSpec(seq, 4, 9, 0.3), [2.0]) == []


def test_replacement_empty_family_measure_zero(rng):
    f = random_pc(rng, 6)
    seq = make_delta_growth(0.3, 10, 16)
    spec = CompositeSpec(seq, 16, 9, 0.3)
    big = 1e3 * lp_norm(f, np.inf)
    cur = composite.check_replacement(f, seq, spec, [big, 2 * big], 16, 9)
    assert list(cur.measures) == [0.0, 0.0]
    assert composite.replacement_bound(1.0, 1.0, 0.45) == pytest.approx(10.0)


def test_replacement_curve_monotone_on_spike(spike):
    seq = make_delta_growth(0.3, 10, 32)
    spec = CompositeSpec(seq, 32, 9, 0.3)
    mu = lp_norm(spike, 1) / TWO_PI
    cur = composite.check_replacement(spike, seq, spec, [mu * 2 ** (k / 4) for k in range(1, 9)], 32, 9)
    assert cur.is_monotone()


# -- convergence --------------------------------------------------------------------

def test_full_average_of_constant_is_exact():
    c = PCFunction.constant(2.0, 3)
    cur = convergence.convergence_experiment(c, make_powers_of_two(8), [1, 4, 8], "full_average", 8)
    assert max(cur.sup) < 1e-13


def test_sv_average_of_low_degree_polynomial_is_zero():
    p = TrigPoly.from_dict_coeffs({-3: 1.0, 2: 0.5j})
    seq = make_lacunary(2, 4, 10)
    assert max(convergence.convergence_experiment(p, seq, [1, 5, 10], "sv_average", 8).sup) == 0.0
    assert max(convergence.check_vp_convergence(p, seq, [1, 5, 10], 8).sup) < 1e-13


def test_indicator_convergence_decreases():
    f = PCFunction.indicator(0.0, np.pi, 4)
    cur = convergence.convergence_experiment(f, make_powers_of_two(32), [4, 8, 16, 32], "full_average", 10)
    assert cur.decreasing(0.1)


def test_convergence_argument_checks():
    f = PCFunction.constant(1.0, 2)
    with pytest.raises(ValueError):
        convergence.convergence_experiment(f, make_powers_of_two(4), [4, 2])
    with pytest.raises(ValueError):
        convergence.convergence_experiment(f, make_powers_of_two(4), [8])
    with pytest.raises(ValueError):
        convergence.convergence_experiment(f, make_powers_of_two(4), [2], "bogus")


# -- reports ------------------------------------------------------------------------

def test_report_helpers():
    r = BoundRatioReport("x", 2.0, 4.0, "item", {"N": 3, "lam": 1.5, "extra": [1, 2]})
    assert r.ratio == 0.5
    text = reports_to_csv([r])
    assert text.splitlines()[0].split(",") == list(CSV_COLUMNS)
    assert stable_pair(1.0, 1.9) and not stable_pair(1.0, 2.1)
    assert monotone_blowup([1, 2.5, 7]) and not monotone_blowup([1, 0.5, 3])
    assert strictly_decreasing([4, 3, 3.5, 1]) and not strictly_decreasing([4, 5, 6, 1])
    with pytest.raises(AssertionError):
        raise HardAssertionError("x")


def test_weak_type_curve_fit():
    cur = WeakTypeCurve([1.0, 2.0], [0.5, 0.1], [1.0, 0.5], "c")
    assert cur.is_monotone()
    assert cur.fitted_constant() == pytest.approx(0.5)
