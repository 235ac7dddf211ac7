"""Dense linear-algebra substrate.

States, partial traces, Schmidt and spectral decompositions, entropies and
seeded random ensembles.  Everything else in the package is built on these.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import DimensionError, ValidationError

EIG_CLAMP = 1e-12
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_FLOOR = -1e-10
NORM_TOL = 1e-12

Seed = Union[int, np.random.Generator, None]


def _rng(seed: Seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _finite(a: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(a)):
        raise ValidationError(f"{what}: all entries finite (found NaN/Inf)")


@dataclass(frozen=True, eq=False)
class PureBipartiteState:
    """Pure state ``sum_ij alpha_ij |i>|j>`` stored as its amplitude matrix."""

    amplitudes: np.ndarray

    def __post_init__(self):
        alpha = np.array(self.amplitudes, dtype=complex)
        if alpha.ndim != 2 or min(alpha.shape) < 1:
            raise DimensionError("amplitudes must be a non-empty dimA x dimB matrix")
        _finite(alpha, "PureBipartiteState")
        norm = np.sum(np.abs(alpha) ** 2)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValidationError(
                f"PureBipartiteState: sum |alpha_ij|^2 = 1 within {NORM_TOL} "
                f"(got {float(norm)!r})")
        alpha.setflags(write=False)
        object.__setattr__(self, "amplitudes", alpha)

    @classmethod
    def from_vector(cls, vec, dim_a: int, dim_b: int) -> PureBipartiteState:
        vec = np.asarray(vec, dtype=complex).ravel()
        if vec.size != dim_a * dim_b:
            raise DimensionError(
                f"vector of length {vec.size} does not factor as {dim_a} x {dim_b}")
        return cls(vec.reshape(dim_a, dim_b))

    @classmethod
    def normalized(cls, amplitudes) -> PureBipartiteState:
        alpha = np.asarray(amplitudes, dtype=complex)
        return cls(alpha / np.linalg.norm(alpha))

    @property
    def dim_a(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def dim_b(self) -> int:
        return self.amplitudes.shape[1]

    @property
    def dims(self) -> tuple[int, int]:
        return self.amplitudes.shape

    @property
    def vector(self) -> np.ndarray:
        return self.amplitudes.ravel()

    def density(self) -> DensityOperator:
        v = self.vector
        return DensityOperator(np.outer(v, v.conj()), dims=self.dims)


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian, positive semidefinite, unit-trace matrix.

    ``dims`` is the optional ``(dimA, dimB)`` factorization tag; it is required
    by anything that needs to tell the two subsystems apart.
    """

    matrix: np.ndarray
    dims: tuple[int, int] | None = None

    def __post_init__(self):
        rho = np.array(self.matrix, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] < 1:
            raise DimensionError("density matrix must be square and non-empty")
        _finite(rho, "DensityOperator")
        n = rho.shape[0]
        if self.dims is not None:
            dims = tuple(int(x) for x in self.dims)
            if len(dims) != 2 or dims[0] * dims[1] != n or min(dims) < 1:
                raise DimensionError(f"factorization {self.dims} does not match dim {n}")
            object.__setattr__(self, "dims", dims)
        herm = np.max(np.abs(rho - rho.conj().T))
        if herm > HERMITIAN_TOL:
            raise ValidationError(
                f"DensityOperator: Hermitian within {HERMITIAN_TOL} (deviation {herm:.3e})")
        tr = np.trace(rho).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValidationError(
                f"DensityOperator: trace = 1 within {TRACE_TOL} (got {float(tr)!r})")
        lo = np.linalg.eigvalsh(rho).min()
        if lo < PSD_FLOOR:
            raise ValidationError(
                f"DensityOperator: minimum eigenvalue >= {PSD_FLOOR} (got {lo:.3e})")
        rho.setflags(write=False)
        object.__setattr__(self, "matrix", rho)

    @classmethod
    def from_unchecked(cls, matrix, dims=None) -> DensityOperator:
        """Symmetrize away round-off Hermiticity drift, then validate."""
        m = np.asarray(matrix, dtype=complex)
        return cls((m + m.conj().T) / 2, dims=dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def require_dims(self) -> tuple[int, int]:
        if self.dims is None:
            raise DimensionError("density operator carries no (dimA, dimB) factorization tag")
        return self.dims

    def eigvals(self) -> np.ndarray:
        w = np.linalg.eigvalsh(self.matrix)
        return np.where(w < EIG_CLAMP, 0.0, w)


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    """``|psi> = sum_i sqrt(p_i) |a_i> (x) |b_i>``.

    ``basis_a[:, i]`` and ``basis_b[:, i]`` hold the local Schmidt vectors; the
    coefficients are sorted in descending order and padded with zeros up to
    ``min(dimA, dimB)``.
    """

    coefficients: np.ndarray
    basis_a: np.ndarray
    basis_b: np.ndarray

    @property
    def rank(self) -> int:
        return int(np.count_nonzero(self.coefficients))

    def reconstruct(self) -> np.ndarray:
        return (self.basis_a * np.sqrt(self.coefficients)) @ self.basis_b.T


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product of two matrices (or vectors)."""
    return np.kron(np.asarray(a), np.asarray(b))


def _as_matrix_and_dims(rho) -> tuple[np.ndarray, tuple[int, int]]:
    if isinstance(rho, DensityOperator):
        return rho.matrix, rho.require_dims()
    if isinstance(rho, PureBipartiteState):
        return rho.density().matrix, rho.dims
    raise DimensionError("partial trace needs a DensityOperator with a factorization tag")


def partial_trace(rho, keep: str) -> DensityOperator:
    """Reduce a bipartite state to subsystem ``keep`` (``"A"`` or ``"B"``)."""
    m, (da, db) = _as_matrix_and_dims(rho)
    t = m.reshape(da, db, da, db)
    if keep in ("A", 0):
        red = np.einsum("ijkj->ik", t)
    elif keep in ("B", 1):
        red = np.einsum("ijil->jl", t)
    else:
        raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")
    return DensityOperator.from_unchecked(red)


def partial_trace_matrix(m: np.ndarray, dims: tuple[int, int], keep: str) -> np.ndarray:
    """Unvalidated partial trace of an arbitrary operator (used for re-states)."""
    da, db = dims
    t = np.asarray(m).reshape(da, db, da, db)
    if keep == "A":
        return np.einsum("ijkj->ik", t)
    if keep == "B":
        return np.einsum("ijil->jl", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def schmidt_decompose(psi: PureBipartiteState) -> SchmidtDecomposition:
    u, s, vh = np.linalg.svd(psi.amplitudes)
    p = s ** 2
    p = np.where(p < EIG_CLAMP, 0.0, p)
    n = len(s)
    return SchmidtDecomposition(p, u[:, :n], vh[:n, :].T)


def schmidt_coefficients(psi: PureBipartiteState) -> np.ndarray:
    return schmidt_decompose(psi).coefficients


def von_neumann_entropy(rho) -> float:
    """Entropy in bits; eigenvalues below 1e-12 count as zero."""
    if isinstance(rho, PureBipartiteState):
        return 0.0
    if isinstance(rho, DensityOperator):
        w = rho.eigvals()
    else:
        w = np.linalg.eigvalsh(np.asarray(rho))
        w = np.where(w < EIG_CLAMP, 0.0, w)
    w = w[w > 0]
    return float(max(0.0, -np.sum(w * np.log2(w))))


def _ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return (rng.standard_normal((rows, cols))
            + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def _check_dims(*dims: int) -> None:
    for d in dims:
        if int(d) < 1:
            raise DimensionError(f"dimensions must be >= 1, got {d}")


def random_pure_state(dim_a: int, dim_b: int, seed: Seed = None) -> PureBipartiteState:
    """Haar-random pure state (normalized complex Gaussian vector)."""
    _check_dims(dim_a, dim_b)
    g = _ginibre(_rng(seed), dim_a, dim_b)
    return PureBipartiteState(g / np.linalg.norm(g))


def random_density(d: int, seed: Seed = None, dims: tuple[int, int] | None = None,
                   rank: int | None = None) -> DensityOperator:
    """Random density ``G G^dag / Tr(G G^dag)`` with complex Gaussian ``G``.

    ``rank`` (default full) sets the number of columns of ``G``.
    """
    _check_dims(d)
    g = _ginibre(_rng(seed), d, d if rank is None else rank)
    m = g @ g.conj().T
    return DensityOperator.from_unchecked(m / np.trace(m).real, dims=dims)


def random_unitary(d: int, seed: Seed = None) -> np.ndarray:
    """Haar-random unitary: QR of a Ginibre matrix with the R-diagonal phases fixed."""
    _check_dims(d)
    q, r = np.linalg.qr(_ginibre(_rng(seed), d, d))
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def random_isometry(d_in: int, d_out: int, seed: Seed = None) -> np.ndarray:
    _check_dims(d_in, d_out)
    if d_out < d_in:
        raise DimensionError("an isometry needs d_out >= d_in")
    q, r = np.linalg.qr(_ginibre(_rng(seed), d_out, d_in))
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def random_local_operation(d: int, n_kraus: int, seed: Seed = None) -> list[np.ndarray]:
    """Kraus set of a random channel on a d-level system.

    The operators are the ``n_kraus`` stacked d x d blocks of a random
    isometry from ``C^d`` to ``C^(n_kraus d)``, so ``sum A_i^dag A_i = I``.
    """
    if n_kraus < 1:
        raise ValueError("n_kraus must be >= 1")
    v = random_isometry(d, n_kraus * d, seed)
    return [v[i * d:(i + 1) * d, :] for i in range(n_kraus)]


def maximally_entangled(d: int) -> PureBipartiteState:
    return PureBipartiteState(np.eye(d, dtype=complex) / np.sqrt(d))


def product_state(psi_a: Sequence[complex], psi_b: Sequence[complex]) -> PureBipartiteState:
    a = np.asarray(psi_a, dtype=complex)
    b = np.asarray(psi_b, dtype=complex)
    return PureBipartiteState(np.outer(a / np.linalg.norm(a), b / np.linalg.norm(b)))


def product_density(rho_a, rho_b) -> DensityOperator:
    ma = rho_a.matrix if isinstance(rho_a, DensityOperator) else np.asarray(rho_a)
    mb = rho_b.matrix if isinstance(rho_b, DensityOperator) else np.asarray(rho_b)
    return DensityOperator.from_unchecked(np.kron(ma, mb), dims=(ma.shape[0], mb.shape[0]))


def as_density(state) -> DensityOperator:
    if isinstance(state, DensityOperator):
        return state
    if isinstance(state, PureBipartiteState):
        return state.density()
    raise TypeError(f"expected a state, got {type(state).__name__}")


def local_unitary_pure(psi: PureBipartiteState, u_a, u_b) -> PureBipartiteState:
    alpha = np.asarray(u_a) @ psi.amplitudes @ np.asarray(u_b).T
    return PureBipartiteState.normalized(alpha)


def local_unitary_density(rho: DensityOperator, u_a, u_b) -> DensityOperator:
    u = np.kron(u_a, u_b)
    return DensityOperator.from_unchecked(u @ rho.matrix @ u.conj().T, dims=rho.dims)
