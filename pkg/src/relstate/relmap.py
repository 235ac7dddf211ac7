"""Relative-state maps.

For a pure state the map ``L_psi: H_A -> H_B`` sends a hypo-state ``|phi>`` to
the partial overlap ``(<phi| (x) 1)|psi>``.  It is antilinear and is stored as a
fixed matrix applied after complex conjugation.  For a mixed state the map
``Y -> Tr_A[(Y (x) 1) rho]`` is linear on operators; in Hilbert-Schmidt
coordinates it is the real matrix ``M^T``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NumericalConsistencyError
from .hsbasis import HermitianBasis, HSVector, devectorize, identity_first_basis
from .operators import (DensityOperator, PureBipartiteState, as_density,
                        partial_trace)

MARGINAL_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class AntilinearMap:
    """The map ``v -> matrix @ conj(v)``."""

    matrix: np.ndarray

    def __call__(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=complex)
        if v.shape[0] != self.matrix.shape[1]:
            raise DimensionError(
                f"vector of length {v.shape[0]} does not match domain dimension {self.matrix.shape[1]}")
        return self.matrix @ v.conj()

    def adjoint(self) -> AntilinearMap:
        # <chi, L v> = <v, L^dag chi> gives L^dag = matrix^T composed with conjugation.
        return AntilinearMap(self.matrix.T)

    def __matmul__(self, other: AntilinearMap) -> np.ndarray:
        """Composition of two antilinear maps, which is linear."""
        return self.matrix @ other.matrix.conj()


def pure_map(psi: PureBipartiteState) -> AntilinearMap:
    """``L_psi`` with matrix ``alpha_hat = sum_ij alpha_ji |i><j|``."""
    return AntilinearMap(psi.amplitudes.T)


def pure_relative_state(psi: PureBipartiteState, phi) -> np.ndarray:
    """Re-state ``(<phi| (x) 1)|psi>``; ``phi`` need not be normalized."""
    phi = np.asarray(phi, dtype=complex)
    if phi.shape != (psi.dim_a,):
        raise DimensionError(f"hypo-state must have length {psi.dim_a}, got shape {phi.shape}")
    return phi.conj() @ psi.amplitudes


def pure_relative_states(psi: PureBipartiteState, hypo) -> np.ndarray:
    """Re-states of several hypo-states given as the rows of ``hypo``."""
    hypo = np.atleast_2d(np.asarray(hypo, dtype=complex))
    if hypo.shape[1] != psi.dim_a:
        raise DimensionError(f"hypo-states must have length {psi.dim_a}")
    return hypo.conj() @ psi.amplitudes


def pure_map_marginals(psi: PureBipartiteState) -> tuple[DensityOperator, DensityOperator]:
    """``(L^dag L, L L^dag)``, checked against ``(rho_A, rho_B)``."""
    lmap = pure_map(psi)
    ldag = lmap.adjoint()
    rho_a = ldag @ lmap
    rho_b = lmap @ ldag
    ref_a = partial_trace(psi, "A").matrix
    ref_b = partial_trace(psi, "B").matrix
    dev = max(np.max(np.abs(rho_a - ref_a)), np.max(np.abs(rho_b - ref_b)))
    if dev > MARGINAL_TOL:
        raise NumericalConsistencyError(
            f"relative-state marginals differ from partial traces by {dev:.3e}")
    return DensityOperator.from_unchecked(rho_a), DensityOperator.from_unchecked(rho_b)


def _bipartite(rho) -> tuple[np.ndarray, tuple[int, int]]:
    rho = as_density(rho)
    return rho.matrix, rho.require_dims()


def mixed_relative_state(rho, y) -> np.ndarray:
    """``Tr_A[(Y (x) 1) rho]`` for any operator ``Y`` on ``H_A``."""
    m, (da, db) = _bipartite(rho)
    y = np.asarray(y, dtype=complex)
    if y.shape != (da, da):
        raise DimensionError(f"operator on H_A must be {da} x {da}, got {y.shape}")
    return np.einsum("ik,kjil->jl", y, m.reshape(da, db, da, db))


@dataclass(frozen=True, eq=False)
class HypoReStatePair:
    hypo: np.ndarray
    re: np.ndarray

    @property
    def probability(self) -> float:
        """Trace of the re-state; an outcome probability when ``hypo`` is a state."""
        return float(np.trace(self.re).real)


def relative_state_pair(rho, hypo) -> HypoReStatePair:
    return HypoReStatePair(np.asarray(hypo, dtype=complex), mixed_relative_state(rho, hypo))


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    """``M_kl = Tr[(K_k^A (x) K_l^B) rho]`` together with the bases used."""

    matrix: np.ndarray
    basis_a: HermitianBasis
    basis_b: HermitianBasis

    def reconstruct(self) -> np.ndarray:
        return np.einsum("kl,kab,lcd->acbd", self.matrix,
                         self.basis_a.elements, self.basis_b.elements).reshape(
            self.basis_a.dim * self.basis_b.dim, -1)

    def singular_values(self) -> np.ndarray:
        return np.linalg.svd(self.matrix, compute_uv=False)


def build_correlation_matrix(rho, basis_a: HermitianBasis | None = None,
                             basis_b: HermitianBasis | None = None) -> CorrelationMatrix:
    m, (da, db) = _bipartite(rho)
    basis_a = basis_a if basis_a is not None else identity_first_basis(da)
    basis_b = basis_b if basis_b is not None else identity_first_basis(db)
    if basis_a.dim != da or basis_b.dim != db:
        raise DimensionError(
            f"bases of dimension ({basis_a.dim}, {basis_b.dim}) do not match state dims ({da}, {db})")
    t = m.reshape(da, db, da, db)
    mat = np.einsum("kab,lcd,bdac->kl", basis_a.elements, basis_b.elements, t).real
    return CorrelationMatrix(mat, basis_a, basis_b)


def apply_map_coords(corr: CorrelationMatrix, a: HSVector) -> HSVector:
    """Coordinate form of the relative-state map, ``b = M^T a``."""
    if not corr.basis_a.same_as(a.basis):
        raise DimensionError("hypo-state coordinates are not in the correlation matrix's A basis")
    return HSVector(corr.matrix.T @ a.coords, corr.basis_b)


def re_state_from_coords(corr: CorrelationMatrix, a: HSVector) -> np.ndarray:
    return devectorize(apply_map_coords(corr, a))
