"""Local dynamics: depolarization, product-basis decoherence and Kraus channels.

Also holds the closed-form ``Upsilon_k(p)`` curves for a maximally entangled
input under the two decoherence channels and the LOCC counterexample.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import DimensionError, ValidationError
from .hsbasis import HermitianBasis, identity_first_basis, superoperator_matrix
from .measures import mixed_invariants
from .operators import (DensityOperator, PureBipartiteState, Seed, _rng, as_density,
                        maximally_entangled, product_density, random_local_operation,
                        schmidt_decompose)

COMPLETENESS_TOL = 1e-10
DEPOLARIZE = "depolarize"
DEPHASE = "dephase"


def _check_p(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return p


def _completeness_error(kraus) -> float:
    d = kraus[0].shape[1]
    return float(np.max(np.abs(sum(a.conj().T @ a for a in kraus) - np.eye(d))))


@dataclass(frozen=True, eq=False)
class LocalOperation:
    """Bi-local channel ``rho -> sum_ij (A_i (x) B_j) rho (A_i (x) B_j)^dag``."""

    kraus_a: tuple[np.ndarray, ...]
    kraus_b: tuple[np.ndarray, ...]

    def __post_init__(self):
        ka = tuple(np.asarray(a, dtype=complex) for a in self.kraus_a)
        kb = tuple(np.asarray(b, dtype=complex) for b in self.kraus_b)
        if not ka or not kb:
            raise ValidationError("LocalOperation: each side needs at least one Kraus operator")
        for side, ks in (("A", ka), ("B", kb)):
            if len({k.shape for k in ks}) != 1 or ks[0].shape[0] != ks[0].shape[1]:
                raise DimensionError(f"Kraus operators on side {side} must be square and equally sized")
            err = _completeness_error(ks)
            if err > COMPLETENESS_TOL:
                raise ValidationError(
                    f"LocalOperation: sum K^dag K = I on side {side} within {COMPLETENESS_TOL} "
                    f"(deviation {err:.3e})")
        object.__setattr__(self, "kraus_a", ka)
        object.__setattr__(self, "kraus_b", kb)

    @property
    def dims(self) -> tuple[int, int]:
        return self.kraus_a[0].shape[0], self.kraus_b[0].shape[0]

    @classmethod
    def identity(cls, dim_a: int, dim_b: int) -> LocalOperation:
        return cls((np.eye(dim_a),), (np.eye(dim_b),))

    @classmethod
    def random(cls, dim_a: int, dim_b: int, seed: Seed = None,
               n_kraus: tuple[int, int] = (2, 4)) -> LocalOperation:
        """Independent random channels on each side with 2-4 Kraus elements."""
        rng = _rng(seed)
        na, nb = rng.integers(n_kraus[0], n_kraus[1] + 1, size=2)
        return cls(tuple(random_local_operation(dim_a, int(na), rng)),
                   tuple(random_local_operation(dim_b, int(nb), rng)))


def apply_kraus(kraus, m: np.ndarray) -> np.ndarray:
    return sum(k @ m @ k.conj().T for k in kraus)


def apply_local_operation(rho, op: LocalOperation) -> DensityOperator:
    rho = as_density(rho)
    dims = rho.require_dims()
    if dims != op.dims:
        raise DimensionError(f"operation acts on {op.dims}, state has dims {dims}")
    da, db = dims
    # contract each side separately: cost sum of Kraus counts, not their product
    t = rho.matrix.reshape(da, db, da, db)
    t = sum(np.einsum("ai,ijkl,bk->ajbl", a, t, a.conj()) for a in op.kraus_a)
    t = sum(np.einsum("bj,ajcl,dl->abcd", b, t, b.conj()) for b in op.kraus_b)
    return DensityOperator.from_unchecked(t.reshape(da * db, da * db), dims=dims)


def channel_coordinates(kraus, basis: HermitianBasis) -> np.ndarray:
    """Real matrix ``S`` of a single-side channel in the given basis."""
    return superoperator_matrix(lambda x: apply_kraus(kraus, x), basis)


def local_operation_coordinates(op: LocalOperation, basis_a: HermitianBasis | None = None,
                                basis_b: HermitianBasis | None = None) -> tuple[np.ndarray, np.ndarray]:
    """``(S_A, S_B)`` such that the correlation matrix maps as ``M -> S_A M S_B^T``."""
    da, db = op.dims
    basis_a = basis_a if basis_a is not None else identity_first_basis(da)
    basis_b = basis_b if basis_b is not None else identity_first_basis(db)
    return channel_coordinates(op.kraus_a, basis_a), channel_coordinates(op.kraus_b, basis_b)


def polar_parts(s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``S = R |S|`` with ``R`` orthogonal and ``|S|`` positive semidefinite."""
    return scipy.linalg.polar(s, side="right")


def depolarize(state, p: float) -> DensityOperator:
    """``p rho + (1 - p) I / D`` with ``D`` the total dimension."""
    p = _check_p(p)
    rho = as_density(state)
    n = rho.dim
    return DensityOperator.from_unchecked(p * rho.matrix + (1 - p) * np.eye(n) / n, dims=rho.dims)


def werner_state(d: int, p: float) -> DensityOperator:
    return depolarize(maximally_entangled(d), p)


def product_basis_decohere(state, p: float, basis_a=None, basis_b=None) -> DensityOperator:
    """``p rho + (1 - p) sum_ij (E_i (x) E_j) rho (E_i (x) E_j)``.

    ``basis_a``/``basis_b`` hold the product-basis vectors as columns.  For a
    pure input they default to its local Schmidt bases.
    """
    p = _check_p(p)
    if basis_a is None or basis_b is None:
        if not isinstance(state, PureBipartiteState):
            raise ValueError("product basis must be given explicitly for mixed inputs")
        sd = schmidt_decompose(state)
        da, db = state.dims
        basis_a = _complete(sd.basis_a, da) if basis_a is None else basis_a
        basis_b = _complete(sd.basis_b, db) if basis_b is None else basis_b
    rho = as_density(state)
    dims = rho.require_dims()
    va = np.asarray(basis_a, dtype=complex)
    vb = np.asarray(basis_b, dtype=complex)
    # dephasing in a product basis keeps only the diagonal of rho in that basis
    u = np.kron(va, vb)
    diag = np.real(np.einsum("ji,jk,ki->i", u.conj(), rho.matrix, u))
    dephased = (u * diag) @ u.conj().T
    return DensityOperator.from_unchecked(p * rho.matrix + (1 - p) * dephased, dims=dims)


def _complete(vectors: np.ndarray, d: int) -> np.ndarray:
    """Extend orthonormal columns to a full orthonormal basis of ``C^d``."""
    if vectors.shape[1] == d:
        return vectors
    q, _ = np.linalg.qr(np.hstack([vectors, np.eye(d, dtype=complex)]))
    q = q[:, :d]
    # QR may flip phases of the leading columns; restore the given vectors exactly
    q[:, :vectors.shape[1]] = vectors
    return q


def xi_state(d: int) -> DensityOperator:
    """Fully decohered maximally entangled state ``(1/d) sum_i |ii><ii|``."""
    return product_basis_decohere(maximally_entangled(d), 0.0, np.eye(d), np.eye(d))


def closed_form_upsilon_werner(d: int, k: int, p: float) -> float:
    """``Upsilon_k`` of a Werner state: ``sqrt(p**(2(k-1)) [k/d**2 + (1 - k/d**2) p**2])``."""
    if not 2 <= k <= d * d:
        raise ValueError(f"k must lie in [2, {d * d}], got {k}")
    p = _check_p(p)
    r = k / d ** 2
    return math.sqrt(p ** (2 * (k - 1)) * (r + (1 - r) * p ** 2))


def _binom(n: int, m: int) -> int:
    return math.comb(n, m) if 0 <= m <= n else 0


def closed_form_upsilon_dephase(d: int, k: int, p: float) -> float:
    """``Upsilon_k`` after product-basis decoherence of a maximally entangled state.

    ``Upsilon_k**2 = sum_l C(d, k-l) C(d**2-d, l) p**(2l) / C(d**2, k)``.
    """
    if not 2 <= k <= d * d:
        raise ValueError(f"k must lie in [2, {d * d}], got {k}")
    p = _check_p(p)
    total = sum(_binom(d, k - l) * _binom(d * d - d, l) * p ** (2 * l) for l in range(k + 1))
    return math.sqrt(total / math.comb(d * d, k))


@dataclass
class ChannelSweep:
    """Numeric and closed-form ``Upsilon_k`` along a grid of ``p`` values."""

    channel: str
    d: int
    ks: list[int]
    grid: list[float]
    results: list[dict[int, tuple[float, float]]] = field(default_factory=list)

    def max_difference(self) -> float:
        return max((abs(a - b) for row in self.results for a, b in row.values()), default=0.0)


def channel_output(channel: str, d: int, p: float) -> DensityOperator:
    psi = maximally_entangled(d)
    if channel == DEPOLARIZE:
        return depolarize(psi, p)
    if channel == DEPHASE:
        return product_basis_decohere(psi, p)
    raise ValueError(f"unknown channel {channel!r}")


def sweep(channel: str, d: int, grid, ks) -> ChannelSweep:
    grid = sorted(float(p) for p in grid)
    for p in grid:
        _check_p(p)
    closed = closed_form_upsilon_werner if channel == DEPOLARIZE else closed_form_upsilon_dephase
    out = ChannelSweep(channel, d, list(ks), grid)
    for p in grid:
        values = mixed_invariants(channel_output(channel, d, p)).values
        out.results.append({k: (values[k], closed(d, k, p)) for k in ks})
    return out


def correlate_by_shared_randomness(rho_a, rho_b, weights=None) -> DensityOperator:
    """``sum_i q_i rho_A^(i) (x) rho_B^(i)`` with ``rho^(i)`` the normalized
    projection of each input onto ``|i>``.

    Both parties condition on a shared random index ``i`` (classical
    communication) and filter their local state onto the ``i``-th
    computational state.
    """
    ma = np.asarray(rho_a.matrix if isinstance(rho_a, DensityOperator) else rho_a)
    mb = np.asarray(rho_b.matrix if isinstance(rho_b, DensityOperator) else rho_b)
    d = ma.shape[0]
    if mb.shape[0] != d:
        raise DimensionError("both parties must share the same number of outcomes")
    q = np.full(d, 1.0 / d) if weights is None else np.asarray(weights, dtype=float)
    out = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        pa, pb = ma[i, i].real, mb[i, i].real
        if pa <= 0 or pb <= 0:
            continue
        proj = np.zeros((d, d))
        proj[i, i] = 1.0
        out += q[i] * np.kron(proj @ ma @ proj / pa, proj @ mb @ proj / pb)
    return DensityOperator.from_unchecked(out / np.trace(out).real, dims=(d, d))


@dataclass
class LoccDemoReport:
    upsilon2_before: float
    upsilon2_after_locc: float
    upsilon2_after_lo: float

    @property
    def locc_increased(self) -> bool:
        return self.upsilon2_after_locc > self.upsilon2_before + 1e-9

    @property
    def lo_monotone(self) -> bool:
        """Only the local-operation branch is covered by the monotonicity result."""
        return self.upsilon2_after_lo <= self.upsilon2_before + 1e-9


def locc_increase_demo(d: int = 2, seed: Seed = 0) -> LoccDemoReport:
    """Product input ``I/d (x) I/d`` mapped by shared randomness vs. by a random LO."""
    mixed = np.eye(d) / d
    start = product_density(mixed, mixed)
    before = mixed_invariants(start).values[2]
    after_locc = mixed_invariants(correlate_by_shared_randomness(mixed, mixed)).values[2]
    after_lo = mixed_invariants(apply_local_operation(start, LocalOperation.random(d, d, seed))).values[2]
    return LoccDemoReport(before, after_locc, after_lo)
