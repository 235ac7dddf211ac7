"""Hermitian operator bases and Hilbert-Schmidt coordinates.

Two orderings are provided.  ``identity_first_basis`` is the generalized
Gell-Mann set led by the normalized identity; ``schmidt_projector_basis``
starts with the rank-one projectors onto a supplied orthonormal set.  In both,
pair elements come in lexicographic ``(l, l')`` order, symmetric ones before
antisymmetric ones.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ValidationError

IDENTITY_FIRST = "identity-first"
SCHMIDT_PROJECTOR = "schmidt-projector"

ORTHONORMAL_TOL = 1e-10
UNITARY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class HermitianBasis:
    """Ordered set of ``d**2`` Hermitian matrices with ``Tr(K_i K_j) = delta_ij``.

    ``elements`` has shape ``(d*d, d, d)``.
    """

    elements: np.ndarray
    flavor: str

    def __post_init__(self):
        els = np.array(self.elements, dtype=complex)
        els.setflags(write=False)
        object.__setattr__(self, "elements", els)

    @property
    def dim(self) -> int:
        return self.elements.shape[1]

    def __len__(self) -> int:
        return self.elements.shape[0]

    def __getitem__(self, i: int) -> np.ndarray:
        return self.elements[i]

    def gram(self) -> np.ndarray:
        """Matrix of trace inner products ``Tr(K_i K_j)``."""
        return np.einsum("iab,jba->ij", self.elements, self.elements).real

    def same_as(self, other: HermitianBasis) -> bool:
        return self is other or (
            self.elements.shape == other.elements.shape
            and np.array_equal(self.elements, other.elements))


@dataclass(frozen=True, eq=False)
class HSVector:
    """Real coordinates of a Hermitian operator in a given basis."""

    coords: np.ndarray
    basis: HermitianBasis

    def __post_init__(self):
        c = np.array(self.coords, dtype=float)
        if c.shape != (len(self.basis),):
            raise DimensionError(
                f"expected {len(self.basis)} coordinates, got shape {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValidationError("HSVector: coords finite")
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    def operator(self) -> np.ndarray:
        return devectorize(self, self.basis)


def _pair_elements(vectors: np.ndarray, antisym_sign: complex) -> tuple[list, list]:
    d = vectors.shape[1]
    sym, anti = [], []
    for l in range(d):
        for m in range(l + 1, d):
            outer = np.outer(vectors[:, l], vectors[:, m].conj())
            sym.append((outer + outer.conj().T) / np.sqrt(2))
            anti.append(antisym_sign * (outer - outer.conj().T) / np.sqrt(2))
    return sym, anti


def identity_first_basis(d: int) -> HermitianBasis:
    """Generalized Gell-Mann basis, normalized and led by ``I/sqrt(d)``.

    The antisymmetric elements use the Pauli-y sign convention, so for
    ``d = 2`` the basis is exactly ``(I, X, Y, Z)/sqrt(2)``.
    """
    if d < 2:
        raise DimensionError("identity_first_basis needs d >= 2")
    eye = np.eye(d, dtype=complex)
    sym, anti = _pair_elements(eye, -1j)
    diag = []
    for j in range(1, d):
        v = np.zeros(d)
        v[:j] = 1.0
        v[j] = -j
        diag.append(np.diag(v / np.sqrt(j * (j + 1))).astype(complex))
    els = [eye / np.sqrt(d)] + sym + anti + diag
    return HermitianBasis(np.array(els), IDENTITY_FIRST)


def schmidt_projector_basis(vectors) -> HermitianBasis:
    """Basis ``{E_k} + {F_ll'} + {G_mm'}`` built on the columns of ``vectors``.

    ``E_k = |k><k|``, ``F_ll' = (|l><l'| + |l'><l|)/sqrt(2)`` and
    ``G_mm' = i(|m><m'| - |m'><m|)/sqrt(2)``.  The projectors are not
    traceless, but the set is still orthonormal.
    """
    v = np.asarray(vectors, dtype=complex)
    if v.ndim != 2 or v.shape[0] != v.shape[1]:
        raise DimensionError("need d orthonormal vectors of length d, as columns of a d x d matrix")
    dev = np.max(np.abs(v.conj().T @ v - np.eye(v.shape[0])))
    if dev > ORTHONORMAL_TOL:
        raise ValidationError(
            f"schmidt_projector_basis: vectors orthonormal within {ORTHONORMAL_TOL} "
            f"(deviation {dev:.3e})")
    proj = [np.outer(v[:, k], v[:, k].conj()) for k in range(v.shape[0])]
    sym, anti = _pair_elements(v, 1j)
    return HermitianBasis(np.array(proj + sym + anti), SCHMIDT_PROJECTOR)


def computational_projector_basis(d: int) -> HermitianBasis:
    return schmidt_projector_basis(np.eye(d))


def _check_square(op: np.ndarray, basis: HermitianBasis) -> None:
    if op.shape != (basis.dim, basis.dim):
        raise DimensionError(f"operator shape {op.shape} does not match basis dimension {basis.dim}")


def coordinates(op, basis: HermitianBasis) -> np.ndarray:
    """Raw coordinate array ``Tr(K_k op)`` (real part) without validation."""
    return np.einsum("kab,ba->k", basis.elements, np.asarray(op)).real


def vectorize(op, basis: HermitianBasis, *, tol: float = 1e-10) -> HSVector:
    op = np.asarray(op, dtype=complex)
    _check_square(op, basis)
    dev = np.max(np.abs(op - op.conj().T))
    if dev > tol:
        raise ValidationError(f"vectorize: operator Hermitian within {tol} (deviation {dev:.3e})")
    return HSVector(coordinates(op, basis), basis)


def devectorize(v, basis: HermitianBasis | None = None) -> np.ndarray:
    if isinstance(v, HSVector):
        if basis is not None and not basis.same_as(v.basis):
            raise DimensionError("HSVector was built in a different basis")
        basis = v.basis
        coords = v.coords
    else:
        coords = np.asarray(v, dtype=float)
        if basis is None:
            raise ValueError("a basis is required for raw coordinates")
    if coords.shape != (len(basis),):
        raise DimensionError(f"expected {len(basis)} coordinates, got shape {coords.shape}")
    return np.einsum("k,kab->ab", coords, basis.elements)


def superoperator_matrix(channel, basis: HermitianBasis) -> np.ndarray:
    """Real matrix ``S_ij = Tr(K_i channel(K_j))`` of a Hermiticity-preserving map."""
    images = np.array([channel(k) for k in basis.elements])
    return np.einsum("iab,jba->ij", basis.elements, images).real


def rotation_of_unitary(u, basis: HermitianBasis) -> np.ndarray:
    """Orthogonal matrix ``R`` with ``vectorize(U rho U^dag) = R vectorize(rho)``."""
    u = np.asarray(u, dtype=complex)
    _check_square(u, basis)
    dev = np.max(np.abs(u.conj().T @ u - np.eye(basis.dim)))
    if dev > UNITARY_TOL:
        raise ValidationError(f"rotation_of_unitary: U unitary within {UNITARY_TOL} (deviation {dev:.3e})")
    ud = u.conj().T
    return superoperator_matrix(lambda k: u @ k @ ud, basis)
