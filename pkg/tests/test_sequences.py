import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cesarolab.sequences import (
    IndexSequence, beta_param, block_coords, m_param, make_delta_growth, make_lacunary,
    make_powers_of_two, nbeta, sequence_from_spec, subsequence_lacunarity_audit,
)


def test_lacunary_examples():
    assert make_lacunary(2, 1, 5).terms == (1, 2, 4, 8, 16)
    assert make_lacunary(2.5, 2, 3).terms == (2, 5, 13)
    with pytest.raises(ValueError):
        make_lacunary(1.0, 1, 3)


def test_delta_growth_examples():
    s = make_delta_growth(0.4, 10, 3)
    assert s.terms == (10, 20, math.ceil(20 * (1 + 2**-0.4)))
    assert make_delta_growth(0.4, 1, 2).terms == (1, 2)
    with pytest.raises(ValueError):
        make_delta_growth(0.5, 1, 3)


def test_sequence_validation_and_round_trip():
    with pytest.raises(ValueError):
        IndexSequence((3, 3, 4))
    s = make_lacunary(3, 4, 6)
    assert IndexSequence.from_dict(s.to_dict()) == s
    assert s.satisfies_growth()
    assert make_powers_of_two(4).terms == (2, 4, 8, 16)


def test_nbeta_values():
    assert nbeta(1) == pytest.approx(40 * math.log(2) ** 2)
    assert nbeta(1) == pytest.approx(19.2182, abs=1e-4)
    assert nbeta(3) == pytest.approx(80 * math.log(4) ** 2)
    assert nbeta(3) == pytest.approx(153.75, abs=0.01)
    assert nbeta(1, "two") == pytest.approx(40.0)


def test_beta_and_m_params():
    s = make_lacunary(2, 10, 4)
    assert beta_param(s, 2) == pytest.approx(nbeta(2) / 20)
    assert [m_param(s, j) for j in (1, 2, 3, 4)] == [1, 2, 4, 8]
    with pytest.raises(ValueError):
        m_param(make_lacunary(2, 1, 3), 1)
    assert m_param(make_lacunary(2, 1, 3), 1, require_positive=False) == 0


def test_block_coords_examples():
    bc = block_coords(16, 0.25)
    assert (bc.K, bc.K0) == (4, 2)
    one = block_coords(1, 0.3)
    assert (one.K, one.K0) == (1, 1)
    j, b = one.pairs[1]
    assert b == 0 and one.index(j, b) == 1


@given(st.integers(1, 2000), st.floats(0.01, 0.49))
def test_block_coords_bijection(N, delta):
    bc = block_coords(N, delta)
    assert all(0 <= b < bc.K0 and bc.index(j, b) == i for i, (j, b) in bc.pairs.items())
    assert len(set(bc.pairs.values())) == N
    assert sorted(i for v in bc.blocks().values() for i in v) == list(range(1, N + 1))


def direct_block_min_ratio(terms, N, K0):
    return min(terms[i + K0] / terms[i] for i in range(N - K0))


def test_delta_growth_subsequence_audit():
    s = make_delta_growth(0.4, 1, 1600)
    assert s.satisfies_growth()
    # at N = 400 the within-block ratios top out near (1 + 1/K0)^K0 < 2.6
    a = subsequence_lacunarity_audit(s, 0.4, 400)
    assert (a.K, a.K0) == (20, 10)
    assert a.below_threshold and a.k_delta is None
    assert a.min_ratio == pytest.approx(direct_block_min_ratio(s.terms, 400, 10))
    b = subsequence_lacunarity_audit(s, 0.4, 1600)
    assert b.k_delta == 40 and not b.below_threshold
    assert all(b.ratios_by_K[k] >= 2.6 for k in range(b.k_delta, b.K + 1))
    q3 = make_lacunary(3, 1, 40)
    assert q3.min_ratio() >= 3
    assert subsequence_lacunarity_audit(q3, 0.3, 40).k_delta == 1


@given(st.floats(2.0, 6.0), st.integers(1, 50), st.integers(32, 80))
def test_beta_decay_along_lacunary(q, n1, N):
    # beta_{j+k} < 16 / n_j once k >= log^2 N
    s = make_lacunary(q, n1, N + math.ceil(math.log(N) ** 2) + 1)
    k0 = math.ceil(math.log(N) ** 2)
    for j in range(1, N + 1):
        for k in (k0, k0 + 1):
            assert beta_param(s, j + k) < 16 / s.term(j)


@given(st.floats(1.01, 8.0), st.integers(1, 1000), st.integers(1, 30))
def test_lacunary_ratio_property(q, n1, count):
    s = make_lacunary(q, n1, count)
    t = np.array(s.terms, dtype=object)
    assert all(b >= q * a * (1 - 1e-15) for a, b in zip(t, t[1:]))


def test_sequence_from_spec():
    assert sequence_from_spec({"kind": "lacunary", "q": 2, "n1": 3}, 3).terms == (3, 6, 12)
    assert sequence_from_spec({"kind": "explicit", "terms": [1, 5, 9]}, 2).terms == (1, 5)
    with pytest.raises(ValueError):
        sequence_from_spec({"kind": "nope"}, 3)
