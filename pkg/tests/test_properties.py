"""Randomized checks of structural invariants across modules."""
import numpy as np
import pytest
from numpy.testing import assert_allclose

from relstate import io
from relstate.channels import sweep, xi_state
from relstate.discord import MeasurementBasis, discord_given_basis
from relstate.exterior import wedge_norm_sq_gram
from relstate.hsbasis import identity_first_basis, schmidt_projector_basis, vectorize
from relstate.measures import PATH_WEDGE, lambda_tuple, mixed_invariants, pure_invariants
from relstate.operators import (DensityOperator, PureBipartiteState, maximally_entangled, partial_trace,
                                random_density, random_local_operation, random_pure_state,
                                random_unitary, schmidt_decompose)
from relstate.relmap import (build_correlation_matrix, mixed_relative_state,
                             re_state_from_coords)


def _hermitian(rng, d):
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return a + a.conj().T


def test_partial_trace_preserves_trace_and_positivity():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        da, db = rng.integers(1, 5, size=2)
        rho = random_density(int(da * db), rng, dims=(int(da), int(db)))
        for keep in ("A", "B"):
            red = partial_trace(rho, keep).matrix
            assert abs(np.trace(red) - 1) < 1e-12
            assert np.min(np.linalg.eigvalsh(red)) > -1e-12


def test_schmidt_reconstruction_fidelity():
    rng = np.random.default_rng(1)
    for _ in range(1000):
        da, db = (int(x) for x in rng.integers(1, 6, size=2))
        psi = random_pure_state(da, db, rng)
        rec = schmidt_decompose(psi).reconstruct().ravel()
        assert abs(np.vdot(psi.vector, rec)) ** 2 >= 1 - 1e-10


def test_fixed_seed_is_bit_identical():
    assert np.array_equal(random_density(5, seed=42).matrix, random_density(5, seed=42).matrix)
    a = random_local_operation(3, 3, seed=42)
    b = random_local_operation(3, 3, seed=42)
    assert all(np.array_equal(x, y) for x, y in zip(a, b))


def test_random_local_operation_completeness():
    rng = np.random.default_rng(2)
    for d in (2, 3, 4):
        for n in (1, 2, 4):
            ks = random_local_operation(d, n, rng)
            assert np.max(np.abs(sum(k.conj().T @ k for k in ks) - np.eye(d))) < 1e-10


@pytest.mark.parametrize("flavor", ["identity-first", "schmidt-projector"])
def test_coordinates_are_an_isometry(flavor):
    rng = np.random.default_rng(3)
    for i in range(500):
        d = 2 + i % 5
        basis = identity_first_basis(d) if flavor == "identity-first" else schmidt_projector_basis(random_unitary(d, rng))
        a, b = _hermitian(rng, d), _hermitian(rng, d)
        lhs = vectorize(a, basis).coords @ vectorize(b, basis).coords
        assert abs(lhs - np.trace(a @ b).real) < 1e-10


def test_mixed_map_is_linear_and_positive():
    rng = np.random.default_rng(4)
    for _ in range(500):
        d = int(rng.integers(2, 4))
        rho = random_density(d * d, rng, dims=(d, d))
        t1, t2 = _hermitian(rng, d), _hermitian(rng, d)
        a, b = rng.standard_normal(2)
        lhs = mixed_relative_state(rho, a * t1 + b * t2)
        rhs = a * mixed_relative_state(rho, t1) + b * mixed_relative_state(rho, t2)
        assert np.max(np.abs(lhs - rhs)) < 1e-12
        tau = random_density(d, rng).matrix
        assert np.min(np.linalg.eigvalsh(mixed_relative_state(rho, tau))) > -1e-10


def test_coordinate_path_matches_operator_path():
    rng = np.random.default_rng(5)
    for _ in range(500):
        d = int(rng.integers(2, 4))
        rho = random_density(d * d, rng, dims=(d, d))
        corr = build_correlation_matrix(rho)
        tau = random_density(d, rng).matrix
        via_coords = re_state_from_coords(corr, vectorize(tau, corr.basis_a))
        assert np.max(np.abs(via_coords - mixed_relative_state(rho, tau))) < 1e-10


def test_maximally_mixed_component_maps_to_multiple_of_identity():
    rng = np.random.default_rng(6)
    for d in (2, 3, 4):
        mixed = DensityOperator(np.eye(d * d) / (d * d), dims=(d, d))
        for _ in range(5):
            y = _hermitian(rng, d)
            assert_allclose(mixed_relative_state(mixed, y), np.trace(y) * np.eye(d) / (d * d), atol=1e-14)


def test_wedge_norm_unitary_invariance():
    rng = np.random.default_rng(7)
    for _ in range(200):
        d = int(rng.integers(2, 7))
        k = int(rng.integers(1, d + 1))
        fam = rng.standard_normal((k, d)) + 1j * rng.standard_normal((k, d))
        u = random_unitary(d, rng)
        before = wedge_norm_sq_gram(fam)
        assert abs(wedge_norm_sq_gram(fam @ u.T) - before) <= 1e-10 * max(1.0, before)


def test_monotone_damping():
    rng = np.random.default_rng(8)
    for _ in range(200):
        d = int(rng.integers(2, 7))
        k = int(rng.integers(1, d + 1))
        fam = rng.standard_normal((k, d)) + 1j * rng.standard_normal((k, d))
        q = rng.uniform(0, 1, d)
        assert wedge_norm_sq_gram(fam * q) <= wedge_norm_sq_gram(fam) * (1 + 1e-12) + 1e-15


def test_hypo_basis_independence():
    rng = np.random.default_rng(9)
    for d in (2, 3, 4):
        psi = random_pure_state(d, d, rng)
        a = pure_invariants(psi, PATH_WEDGE, hypo_basis=random_unitary(d, rng)).values
        b = pure_invariants(psi, PATH_WEDGE, hypo_basis=random_unitary(d, rng)).values
        assert max(abs(a[k] - b[k]) for k in a) < 1e-9
    for d in (2, 3):
        rho = random_density(d * d, rng, dims=(d, d))
        q1, _ = np.linalg.qr(rng.standard_normal((d * d, d * d)))
        q2, _ = np.linalg.qr(rng.standard_normal((d * d, d * d)))
        a = mixed_invariants(rho, path=PATH_WEDGE, hypo_family=q1.T).values
        b = mixed_invariants(rho, path=PATH_WEDGE, hypo_family=q2.T).values
        assert max(abs(a[k] - b[k]) for k in a) < 1e-9


def test_zero_propagation_for_reduced_rank():
    rng = np.random.default_rng(10)
    for rank in (1, 2, 3):
        alpha = np.zeros((5, 5), dtype=complex)
        alpha[:, :rank] = rng.standard_normal((5, rank)) + 1j * rng.standard_normal((5, rank))
        values = pure_invariants(PureBipartiteState.normalized(alpha)).values
        assert values[rank] > 1e-6
        assert all(values[k] < 1e-9 for k in range(rank + 1, 6))


def test_per_tuple_maximum_is_saturated_on_maximally_entangled_subspace():
    rng = np.random.default_rng(11)
    for d in (2, 3, 4):
        for k in range(2, d + 1):
            best = 0.0
            for _ in range(20):
                psi = random_pure_state(d, d, rng)
                hypo = random_unitary(d, rng)[:k]
                best = max(best, lambda_tuple(psi, hypo, normalize=False))
            assert best <= k ** (-k / 2) + 1e-10
            alpha = np.zeros((d, d))
            alpha[np.arange(k), np.arange(k)] = 1 / np.sqrt(k)
            saturated = lambda_tuple(PureBipartiteState(alpha), np.eye(d)[:k], normalize=False)
            assert saturated == pytest.approx(k ** (-k / 2), abs=1e-12)


def test_unclamped_discord_is_never_materially_negative():
    rng = np.random.default_rng(12)
    for _ in range(200):
        d = int(rng.integers(2, 4))
        rho = random_density(d * d, rng, dims=(d, d))
        basis = MeasurementBasis(random_unitary(d, rng))
        assert discord_given_basis(rho, basis, clamp=False) >= -1e-9


@pytest.mark.parametrize("d", [2, 3])
def test_mutually_unbiased_projectors_give_identical_restates_for_xi(d):
    xi = xi_state(d)
    restates = [mixed_relative_state(xi, p) for p in MeasurementBasis.fourier(d).projectors]
    for r in restates[1:]:
        assert np.max(np.abs(r - restates[0])) < 1e-10


def test_sweep_csv_is_byte_identical():
    a = io.sweep_to_csv(sweep("depolarize", 3, np.linspace(0, 1, 11), [2, 9]))
    b = io.sweep_to_csv(sweep("depolarize", 3, np.linspace(0, 1, 11), [2, 9]))
    assert a == b


def test_local_unitaries_preserve_correlation_spectrum():
    rng = np.random.default_rng(13)
    for _ in range(50):
        d = int(rng.integers(2, 4))
        rho = random_density(d * d, rng, dims=(d, d))
        ua, ub = random_unitary(d, rng), random_unitary(d, rng)
        u = np.kron(ua, ub)
        moved = DensityOperator.from_unchecked(u @ rho.matrix @ u.conj().T, dims=(d, d))
        assert_allclose(build_correlation_matrix(moved).singular_values(),
                        build_correlation_matrix(rho).singular_values(), atol=1e-10)


def test_maximally_entangled_saturates_everything():
    for d in (2, 3):
        assert_allclose(list(mixed_invariants(maximally_entangled(d)).values.values()), 1.0, atol=1e-12)
