import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from relstate.errors import OracleScaleError
from relstate.exterior import (elementary_symmetric, elementary_symmetric_all,
                               permutation_parity, sum_wedge_norms_sq_brute,
                               sum_wedge_norms_sq_over_tuples, wedge_components_levicivita,
                               wedge_norm_sq_gram, wedge_norm_sq_levicivita)
from relstate.operators import PureBipartiteState
from relstate.relmap import pure_relative_states


def _family(rng, k, d, complex_=True):
    v = rng.standard_normal((k, d))
    return v + 1j * rng.standard_normal((k, d)) if complex_ else v


def test_permutation_parity():
    assert permutation_parity((0, 1, 2)) == 1
    assert permutation_parity((1, 0, 2)) == -1
    assert permutation_parity((1, 2, 0)) == 1
    assert permutation_parity((3, 2, 1, 0)) == 1


def test_dependent_family_has_zero_wedge():
    rng = np.random.default_rng(0)
    a, b = _family(rng, 2, 4)
    fam = np.array([a, b, 2 * a - 1j * b])
    assert wedge_norm_sq_levicivita(fam) < 1e-12
    assert wedge_norm_sq_gram(fam) < 1e-12


def test_orthonormal_family_has_unit_wedge():
    q, _ = np.linalg.qr(np.random.default_rng(1).standard_normal((5, 5)))
    assert wedge_norm_sq_levicivita(q[:3]) == pytest.approx(1.0)
    assert wedge_norm_sq_gram(q[:3]) == pytest.approx(1.0)


def test_two_real_vectors_match_cross_product():
    a, b = np.array([1.0, 2.0, -0.5]), np.array([0.3, -1.0, 4.0])
    expected = a @ a * (b @ b) - (a @ b) ** 2
    assert wedge_norm_sq_levicivita([a, b]) == pytest.approx(expected)
    assert wedge_norm_sq_gram([a, b]) == pytest.approx(expected)
    assert expected == pytest.approx(np.sum(np.cross(a, b) ** 2))


def test_wedge_components_for_two_vectors():
    comps = wedge_components_levicivita([[1, 0, 0], [0, 1, 0]])
    assert comps[(0, 1)] == 1
    assert comps[(0, 2)] == 0 and comps[(1, 2)] == 0


def test_restate_tuples_of_schmidt_form():
    p = np.array([0.5, 0.3, 0.2])
    restates = pure_relative_states(PureBipartiteState(np.diag(np.sqrt(p))), np.eye(3))
    for i, j in itertools.combinations(range(3), 2):
        assert wedge_norm_sq_gram(restates[[i, j]]) == pytest.approx(p[i] * p[j])
    assert wedge_norm_sq_gram(restates) == pytest.approx(np.prod(p))


def test_oracle_scale_limit():
    with pytest.raises(OracleScaleError):
        wedge_norm_sq_levicivita(np.ones((7, 9)))
    with pytest.raises(OracleScaleError):
        wedge_norm_sq_levicivita(np.ones((2, 10)))


def test_more_vectors_than_dimensions():
    fam = np.random.default_rng(2).standard_normal((4, 3))
    assert wedge_norm_sq_gram(fam) == 0.0
    assert wedge_norm_sq_levicivita(fam) == 0.0


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(1, 4), st.integers(0, 2**32 - 1), st.booleans())
def test_gram_matches_levicivita(d, k, seed, complex_):
    k = min(k, d)
    fam = _family(np.random.default_rng(seed), k, d, complex_)
    lc = wedge_norm_sq_levicivita(fam)
    assert abs(wedge_norm_sq_gram(fam) - lc) <= 1e-10 * max(1.0, lc)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 5), st.integers(2, 4), st.integers(0, 2**32 - 1))
def test_change_of_basis_scales_by_determinant(d, k, seed):
    rng = np.random.default_rng(seed)
    k = min(k, d)
    fam = _family(rng, k, d)
    c = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
    lhs = wedge_norm_sq_gram(c @ fam)
    rhs = abs(np.linalg.det(c)) ** 2 * wedge_norm_sq_gram(fam)
    assert lhs == pytest.approx(rhs, rel=1e-9)


def test_elementary_symmetric_examples():
    p = np.array([1 / 2, 1 / 3, 1 / 6])
    assert elementary_symmetric(p, 1) == pytest.approx(1.0)
    assert elementary_symmetric(p, 2) == pytest.approx(11 / 36)
    assert elementary_symmetric(p, 3) == pytest.approx(1 / 36)
    assert elementary_symmetric(p, 0) == 1.0
    for d in (2, 3, 5):
        u = np.full(d, 1 / d)
        for k in range(d + 1):
            assert elementary_symmetric(u, k) == pytest.approx(math.comb(d, k) / d ** k)


def test_elementary_symmetric_rejects_bad_k():
    with pytest.raises(ValueError):
        elementary_symmetric([0.5, 0.5], 3)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(0, 10, allow_nan=False), min_size=0, max_size=8))
def test_elementary_symmetric_matches_enumeration(values):
    e = elementary_symmetric_all(values)
    for k in range(len(values) + 1):
        brute = sum(math.prod(c) for c in itertools.combinations(values, k))
        assert e[k] == pytest.approx(brute, rel=1e-12, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(0, 1, allow_nan=False), min_size=1, max_size=8))
def test_elementary_symmetric_is_permutation_invariant(values):
    assert_allclose(elementary_symmetric_all(values), elementary_symmetric_all(values[::-1]), rtol=1e-12, atol=1e-15)


def test_tuple_sum_examples():
    for n in (2, 3, 5):
        for k in range(n + 1):
            assert sum_wedge_norms_sq_over_tuples(np.eye(n), k) == pytest.approx(math.comb(n, k))
    p = np.array([0.4, 0.3, 0.2, 0.1])
    for k in range(1, 5):
        assert sum_wedge_norms_sq_over_tuples(np.diag(np.sqrt(p)), k) == pytest.approx(elementary_symmetric(p, k))


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 5), st.integers(2, 7), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_cauchy_binet(d, n, k, seed):
    k = min(k, n)
    b = _family(np.random.default_rng(seed), d, n)
    brute = sum_wedge_norms_sq_brute(b, k)
    assert abs(brute - sum_wedge_norms_sq_over_tuples(b, k)) <= 1e-10 * max(1.0, brute)
