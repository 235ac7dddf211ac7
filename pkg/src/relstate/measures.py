"""Relative-state correlation measures.

Pure states: the per-tuple volumes ``lambda`` spanned by re-states and the
invariants ``Lambda_k`` with ``Lambda_k**2 = d**k / C(d, k) * e_k(p)``.
Mixed states: ``upsilon`` and ``Upsilon_k`` built the same way from the
Hilbert-Schmidt re-state vectors, ``Upsilon_k**2 = d**(2k) / C(d*d, k) *
e_k(kappa**2)`` with ``kappa`` the singular values of the correlation matrix.

Both invariants are computed either from the singular values ("svd", the
default) or by summing explicit wedge norms over all k-tuples ("wedge").
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, NumericalConsistencyError
from .exterior import (elementary_symmetric_all, sum_wedge_norms_sq_brute,
                       tuple_wedge_norms_sq, wedge_norm_sq_gram)
from .hsbasis import HermitianBasis, identity_first_basis
from .operators import PureBipartiteState, as_density, schmidt_coefficients
from .relmap import build_correlation_matrix, pure_relative_states

PURE_LAMBDA = "pure-lambda"
MIXED_UPSILON = "mixed-upsilon"
PATH_SVD = "svd"
PATH_WEDGE = "wedge"

VALUE_CEILING = 1 + 1e-9
ZERO_PROPAGATION_TOL = 1e-10


@dataclass
class MeasureReport:
    """Invariants ``values[k]`` for ``k = 1..n``.

    ``k = 1`` is kept for completeness but carries no correlation
    information (it is the norm for pure states and the purity for mixed
    ones); see :meth:`correlation_values`.
    """

    kind: str
    dim: int
    values: dict[int, float]
    path: str
    per_tuple: dict[tuple[int, ...], float] | None = None
    extras: dict[str, float] = field(default_factory=dict)

    def correlation_values(self) -> dict[int, float]:
        return {k: v for k, v in self.values.items() if k >= 2}

    def check(self) -> None:
        """Assert the report invariants (range, zero propagation)."""
        for k, v in self.values.items():
            if not -1e-12 <= v <= VALUE_CEILING:
                raise NumericalConsistencyError(f"invariant k={k} = {v!r} outside [0, 1]")
        ks = sorted(self.values)
        for i, k in enumerate(ks):
            if self.values[k] <= ZERO_PROPAGATION_TOL:
                later = [self.values[j] for j in ks[i + 1:]]
                if later and max(later) > ZERO_PROPAGATION_TOL:
                    raise NumericalConsistencyError(
                        f"invariant vanishes at k={k} but not for some larger k")

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "dim": self.dim, "path": self.path,
               "values": {str(k): v for k, v in sorted(self.values.items())}}
        if self.extras:
            out.update(self.extras)
        if self.per_tuple is not None:
            out["per_tuple"] = {",".join(map(str, t)): v for t, v in self.per_tuple.items()}
        return out


def normalization(n: int, k: int) -> float:
    """``n**k / C(n, k)``, which maps ``e_k`` of a uniform distribution on ``n`` points to 1.

    Pure states use ``n = d``, mixed states ``n = d*d``.
    """
    return n ** k / math.comb(n, k)


def _from_esym(esums: np.ndarray, n: int) -> dict[int, float]:
    return {k: math.sqrt(max(0.0, normalization(n, k) * esums[k])) for k in range(1, n + 1)}


def lambda_tuple(psi: PureBipartiteState, hypo_states, normalize: bool = True) -> float:
    """``|phi_1 ^ ... ^ phi_k| / |varphi_1 ^ ... ^ varphi_k|`` for the given hypo-states.

    With ``normalize=False`` the denominator is skipped, which is correct
    for orthonormal hypo-states.
    """
    hypo = np.atleast_2d(np.asarray(hypo_states, dtype=complex))
    num = wedge_norm_sq_gram(pure_relative_states(psi, hypo))
    if not normalize:
        return math.sqrt(num)
    den = wedge_norm_sq_gram(hypo)
    if den <= 1e-24:
        raise ZeroDivisionError("hypo-states are linearly dependent")
    return math.sqrt(num / den)


def pure_invariants(psi: PureBipartiteState, path: str = PATH_SVD, hypo_basis=None,
                    with_tuples: bool = False) -> MeasureReport:
    """``Lambda_k`` for ``k = 1..d`` with ``d = min(dimA, dimB)``.

    ``hypo_basis`` (rows, orthonormal, default the computational basis) is
    only used by the wedge path.
    """
    d = min(psi.dims)
    per_tuple = None
    if path == PATH_SVD:
        p = schmidt_coefficients(psi)
        esums = elementary_symmetric_all(p)
    elif path == PATH_WEDGE:
        hypo = np.eye(psi.dim_a) if hypo_basis is None else np.asarray(hypo_basis)
        restates = pure_relative_states(psi, hypo).T
        esums = np.array([1.0] + [sum_wedge_norms_sq_brute(restates, k) for k in range(1, d + 1)])
        if with_tuples:
            per_tuple = {}
            for k in range(2, d + 1):
                per_tuple.update({t: math.sqrt(v) for t, v in tuple_wedge_norms_sq(restates, k).items()})
    else:
        raise ValueError(f"unknown path {path!r}")
    return MeasureReport(PURE_LAMBDA, d, _from_esym(esums[:d + 1], d), path, per_tuple)


def i_concurrence(psi: PureBipartiteState) -> float:
    """``C_I = 2 sqrt(sum_(i<j) p_i p_j)``."""
    e = elementary_symmetric_all(schmidt_coefficients(psi))
    return 2.0 * math.sqrt(max(0.0, e[2])) if len(e) > 2 else 0.0


def concurrence_two_qubit(psi: PureBipartiteState) -> float:
    """Two-qubit concurrence ``2 sqrt(p_0 p_1)``.

    Cross-checked against the area spanned by the two re-states of the
    computational hypo basis, which must equal half of it.
    """
    if psi.dims != (2, 2):
        raise DimensionError(f"two-qubit concurrence needs a 2 x 2 state, got {psi.dims}")
    p = schmidt_coefficients(psi)
    c = 2.0 * math.sqrt(p[0] * p[1])
    area = lambda_tuple(psi, np.eye(2), normalize=False)
    if abs(area - c / 2) > 1e-12:
        raise NumericalConsistencyError(f"re-state area {area!r} != C/2 = {c / 2!r}")
    return c


def _square_dims(rho) -> int:
    da, db = rho.require_dims()
    if da != db:
        raise DimensionError(f"mixed-state invariants need equal local dimensions, got {da} x {db}")
    return da


def mixed_invariants(state, basis_a: HermitianBasis | None = None,
                     basis_b: HermitianBasis | None = None, path: str = PATH_SVD,
                     hypo_family=None, with_tuples: bool = False) -> MeasureReport:
    """``Upsilon_k`` for ``k = 1..d**2``.

    The wedge path uses hypo-state coordinate vectors ``a_i`` (rows of
    ``hypo_family``, orthonormal, default the basis elements themselves) and
    their re-states ``b_i = M^T a_i``.
    """
    rho = as_density(state)
    d = _square_dims(rho)
    n = d * d
    basis_a = basis_a if basis_a is not None else identity_first_basis(d)
    basis_b = basis_b if basis_b is not None else identity_first_basis(d)
    m = build_correlation_matrix(rho, basis_a, basis_b).matrix
    per_tuple = None
    if path == PATH_SVD:
        kappa = np.linalg.svd(m, compute_uv=False)
        esums = elementary_symmetric_all(kappa ** 2)
    elif path == PATH_WEDGE:
        a = np.eye(n) if hypo_family is None else np.asarray(hypo_family, dtype=float)
        restates = m.T @ a.T
        esums = np.array([1.0] + [sum_wedge_norms_sq_brute(restates, k) for k in range(1, n + 1)])
        if with_tuples:
            per_tuple = {}
            for k in range(2, n + 1):
                per_tuple.update({t: math.sqrt(v) for t, v in tuple_wedge_norms_sq(restates, k).items()})
    else:
        raise ValueError(f"unknown path {path!r}")
    return MeasureReport(MIXED_UPSILON, d, _from_esym(esums, n), path, per_tuple)


@dataclass
class BoundCheck:
    passed: bool
    margins: dict[int, float]

    @property
    def min_margin(self) -> float:
        return min(self.margins.values(), default=math.inf)


def maclaurin_bound_check(report: MeasureReport, tol: float = 1e-10) -> BoundCheck:
    """Check ``Lambda_k >= Lambda_d**(k/d)`` for ``2 <= k < d``.

    This is Maclaurin's inequality rewritten in the normalized convention.
    """
    if report.kind != PURE_LAMBDA:
        raise ValueError("maclaurin_bound_check expects a pure-state report")
    d = report.dim
    top = report.values[d]
    margins = {k: report.values[k] - top ** (k / d) for k in range(2, d)}
    return BoundCheck(all(m >= -tol for m in margins.values()), margins)


@dataclass
class RelationReport:
    """Pure-state links between ``Upsilon_k`` and ``Lambda_k``.

    ``lambda2_sq``/``upsilon2_sq`` are the unnormalized ``e_2(p)`` and
    ``e_2(kappa**2)``; ``upsilon2_residual`` is ``upsilon2_sq - 2(l - l**2)``
    with ``l = lambda2_sq``, an exact identity.  ``other_residuals`` records
    two further candidate relations (``Upsilon_3**2 = 2(Lambda_2**4 -
    Lambda_2**6)`` and ``Upsilon_(d*d)**2 = Lambda_d**(2d)``) in both
    conventions, reported only.
    """

    lambda2_sq: float
    upsilon2_sq: float
    upsilon2_residual: float
    other_residuals: dict[str, float]


def pure_mixed_relation_check(psi: PureBipartiteState) -> RelationReport:
    d = min(psi.dims)
    p = schmidt_coefficients(psi)
    ep = elementary_symmetric_all(p)
    kappa = np.linalg.svd(build_correlation_matrix(psi.density()).matrix, compute_uv=False)
    ek = elementary_symmetric_all(kappa ** 2)
    l2 = ep[2] if d >= 2 else 0.0
    u2 = ek[2]
    others = {}
    # unnormalized: Lambda-hat_k**2 = e_k(p), Upsilon-hat_k**2 = e_k(kappa**2)
    if d >= 2:
        others["upsilon3_unnormalized"] = ek[3] - 2 * (l2 ** 2 - l2 ** 3)
    others["upsilon_top_unnormalized"] = ek[-1] - ep[d] ** d
    if psi.dim_a == psi.dim_b:
        lam = _from_esym(ep[:d + 1], d)
        ups = _from_esym(ek, d * d)
        if d >= 2:
            others["upsilon3_normalized"] = ups[3] ** 2 - 2 * (lam[2] ** 4 - lam[2] ** 6)
        others["upsilon_top_normalized"] = ups[d * d] ** 2 - lam[d] ** (2 * d)
    others = {k: float(v) for k, v in others.items()}
    return RelationReport(float(l2), float(u2), float(u2 - 2 * (l2 - l2 ** 2)), others)
