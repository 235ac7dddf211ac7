"""Norms of k-fold wedge products.

Vector families are 2-d arrays with one vector per row.  Complex families use
the Hermitian inner product, real ones the dot product (same formula).

``wedge_norm_sq_levicivita`` expands the wedge product component by component
with explicit permutation signs and is only meant as an oracle.
``wedge_norm_sq_gram`` is the production path: ``|v_1 ^ ... ^ v_k|^2`` equals
the determinant of the Gram matrix.
"""
from __future__ import annotations

import itertools
import math

import numpy as np

from .errors import NumericalConsistencyError, OracleScaleError

ORACLE_MAX_K = 6
ORACLE_MAX_D = 9
GRAM_FLOOR = 1e-12


def _family(vectors) -> np.ndarray:
    v = np.asarray(vectors)
    if v.ndim == 1:
        v = v[None, :]
    if v.ndim != 2:
        raise ValueError("a vector family is a 2-d array with one vector per row")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector family contains NaN/Inf")
    return v


def permutation_parity(perm) -> int:
    """+1 for even permutations of ``range(n)``, -1 for odd ones."""
    perm = list(perm)
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        j, length = start, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def wedge_components_levicivita(vectors) -> dict[tuple[int, ...], complex]:
    """Components of ``v_1 ^ ... ^ v_k`` on ``|mu_1 ... mu_k>``, mu ascending."""
    v = _family(vectors)
    k, d = v.shape
    if k > ORACLE_MAX_K or d > ORACLE_MAX_D:
        raise OracleScaleError(
            f"Levi-Civita oracle limited to k <= {ORACLE_MAX_K}, d <= {ORACLE_MAX_D} (got k={k}, d={d})")
    perms = [(p, permutation_parity(p)) for p in itertools.permutations(range(k))]
    comps = {}
    for mu in itertools.combinations(range(d), k):
        total = 0j
        for p, sign in perms:
            term = complex(sign)
            for i in range(k):
                term *= v[i, mu[p[i]]]
            total += term
        comps[mu] = total
    return comps


def wedge_norm_sq_levicivita(vectors) -> float:
    v = _family(vectors)
    k, d = v.shape
    if k > d:
        if k > ORACLE_MAX_K or d > ORACLE_MAX_D:
            raise OracleScaleError(f"Levi-Civita oracle limited to k <= {ORACLE_MAX_K}, d <= {ORACLE_MAX_D}")
        return 0.0
    return float(sum(abs(c) ** 2 for c in wedge_components_levicivita(v).values()))


def gram_matrix(vectors) -> np.ndarray:
    v = _family(vectors)
    return v.conj() @ v.T


def wedge_norm_sq_gram(vectors) -> float:
    """``det G`` with ``G_ij = <v_i, v_j>``, via pivoted LU.

    Small negative determinants from round-off are clamped to zero; the floor
    is ``-1e-12`` scaled by the Hadamard bound ``prod_i G_ii`` when that
    exceeds one.
    """
    v = _family(vectors)
    k, d = v.shape
    if k == 0:
        return 1.0
    if k > d:
        return 0.0
    g = gram_matrix(v)
    det = np.linalg.det(g).real
    scale = max(1.0, float(np.prod(np.diag(g).real)))
    if det < 0:
        if det < -GRAM_FLOOR * scale:
            raise NumericalConsistencyError(f"Gram determinant {det:.3e} is negative beyond round-off")
        return 0.0
    return float(det)


def wedge_norm(vectors) -> float:
    return math.sqrt(wedge_norm_sq_gram(vectors))


def elementary_symmetric_all(values) -> np.ndarray:
    """``[e_0, e_1, ..., e_n]`` by the recursion ``e_k <- e_k + x e_(k-1)``.

    Only additions of products of non-negative inputs are involved, so there
    is no cancellation.
    """
    x = np.asarray(values, dtype=float).ravel()
    e = np.zeros(x.size + 1)
    e[0] = 1.0
    for m, xm in enumerate(x, start=1):
        e[1:m + 1] = e[1:m + 1] + xm * e[0:m]
    return e


def elementary_symmetric(values, k: int) -> float:
    x = np.asarray(values, dtype=float).ravel()
    if not 0 <= k <= x.size:
        raise ValueError(f"k must lie in [0, {x.size}], got {k}")
    return float(elementary_symmetric_all(x)[k])


def sum_wedge_norms_sq_over_tuples(columns, k: int) -> float:
    """``sum_(i1<...<ik) |b_i1 ^ ... ^ b_ik|^2`` over the columns of ``columns``.

    By Cauchy-Binet this is the sum of k x k principal minors of ``B^dag B``,
    i.e. ``e_k`` of the squared singular values.
    """
    b = np.asarray(columns)
    n = b.shape[1]
    if not 0 <= k <= n:
        raise ValueError(f"k must lie in [0, {n}], got {k}")
    s2 = np.zeros(n)
    s = np.linalg.svd(b, compute_uv=False)
    s2[:s.size] = s ** 2
    return elementary_symmetric(s2, k)


def sum_wedge_norms_sq_brute(columns, k: int, norm_sq=wedge_norm_sq_gram) -> float:
    """Same sum by explicit enumeration of the ``C(n, k)`` column tuples."""
    b = np.asarray(columns)
    n = b.shape[1]
    if not 0 <= k <= n:
        raise ValueError(f"k must lie in [0, {n}], got {k}")
    return float(sum(norm_sq(b[:, list(t)].T) for t in itertools.combinations(range(n), k)))


def tuple_wedge_norms_sq(columns, k: int) -> dict[tuple[int, ...], float]:
    b = np.asarray(columns)
    return {t: wedge_norm_sq_gram(b[:, list(t)].T)
            for t in itertools.combinations(range(b.shape[1]), k)}
