"""Randomized property suites behind ``relstate verify``."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .channels import LocalOperation, apply_local_operation
from .exterior import (sum_wedge_norms_sq_brute, sum_wedge_norms_sq_over_tuples,
                       wedge_norm_sq_gram, wedge_norm_sq_levicivita)
from .measures import PATH_WEDGE, mixed_invariants, pure_invariants
from .operators import (local_unitary_density, local_unitary_pure, random_density,
                        random_pure_state, random_unitary)

INVARIANCE_TOL = 1e-9
MONOTONICITY_TOL = 1e-9
ORACLE_TOL = 1e-10


@dataclass
class SuiteResult:
    name: str
    trials: int
    max_violation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_violation < self.tolerance

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (f"{verdict} {self.name}: trials={self.trials} "
                f"max_violation={self.max_violation:.3e} (tol {self.tolerance:g})")


def _max_abs_diff(a: dict, b: dict, ks: Iterable[int]) -> float:
    return max(abs(a[k] - b[k]) for k in ks)


def pure_invariance(trials: int, dims: Iterable[int], rng: np.random.Generator) -> SuiteResult:
    worst, n = 0.0, 0
    for d in dims:
        for _ in range(trials):
            psi = random_pure_state(d, d, rng)
            moved = local_unitary_pure(psi, random_unitary(d, rng), random_unitary(d, rng))
            a, b = pure_invariants(psi).values, pure_invariants(moved).values
            worst = max(worst, _max_abs_diff(a, b, a))
            n += 1
    return SuiteResult("pure local-unitary invariance", n, worst, INVARIANCE_TOL)


def mixed_invariance(trials: int, dims: Iterable[int], rng: np.random.Generator) -> SuiteResult:
    worst, n = 0.0, 0
    for d in dims:
        for _ in range(trials):
            rho = random_density(d * d, rng, dims=(d, d))
            moved = local_unitary_density(rho, random_unitary(d, rng), random_unitary(d, rng))
            a, b = mixed_invariants(rho).values, mixed_invariants(moved).values
            worst = max(worst, _max_abs_diff(a, b, a))
            n += 1
    return SuiteResult("mixed local-unitary invariance", n, worst, INVARIANCE_TOL)


def monotonicity(trials: int, dims: Iterable[int], rng: np.random.Generator) -> SuiteResult:
    """Largest increase of ``Upsilon_k`` (k >= 2) under random local operations."""
    worst, n = 0.0, 0
    for d in dims:
        for _ in range(trials):
            rho = random_density(d * d, rng, dims=(d, d))
            out = apply_local_operation(rho, LocalOperation.random(d, d, rng))
            before = mixed_invariants(rho).correlation_values()
            after = mixed_invariants(out).correlation_values()
            worst = max(worst, max(after[k] - before[k] for k in before))
            n += 1
    return SuiteResult("local-operation monotonicity (k >= 2)", n, worst, MONOTONICITY_TOL)


def _random_family(rng: np.random.Generator, k: int, d: int, complex_: bool) -> np.ndarray:
    v = rng.standard_normal((k, d))
    if complex_:
        v = v + 1j * rng.standard_normal((k, d))
    return v


def wedge_oracle(trials: int, rng: np.random.Generator) -> SuiteResult:
    """Levi-Civita expansion vs Gram determinant vs Cauchy-Binet singular values."""
    worst = 0.0
    for t in range(trials):
        d = int(rng.integers(2, 7))
        k = int(rng.integers(1, min(4, d) + 1))
        v = _random_family(rng, k, d, complex_=bool(t % 2))
        lc = wedge_norm_sq_levicivita(v)
        worst = max(worst, abs(lc - wedge_norm_sq_gram(v)) / max(1.0, lc))
        cols = _random_family(rng, d, int(rng.integers(k, 9)), complex_=bool(t % 2))
        brute = sum_wedge_norms_sq_brute(cols, k)
        worst = max(worst, abs(brute - sum_wedge_norms_sq_over_tuples(cols, k)) / max(1.0, brute))
    return SuiteResult("wedge oracle (Levi-Civita / Gram / SVD)", trials, worst, ORACLE_TOL)


def state_path_oracle(trials: int, rng: np.random.Generator) -> SuiteResult:
    """Wedge-tuple path vs symmetric-polynomial path on random states."""
    worst, n = 0.0, 0
    for t in range(trials):
        if t % 2 == 0:
            d = int(rng.integers(2, 5))
            psi = random_pure_state(d, d, rng)
            hypo = random_unitary(d, rng)
            a = pure_invariants(psi).values
            b = pure_invariants(psi, PATH_WEDGE, hypo_basis=hypo).values
        else:
            d = int(rng.integers(2, 4))
            rho = random_density(d * d, rng, dims=(d, d))
            q, _ = np.linalg.qr(rng.standard_normal((d * d, d * d)))
            a = mixed_invariants(rho).values
            b = mixed_invariants(rho, path=PATH_WEDGE, hypo_family=q.T).values
        worst = max(worst, _max_abs_diff(a, b, a))
        n += 1
    return SuiteResult("state path oracle (wedge / svd)", n, worst, ORACLE_TOL)


SUITE_NAMES = ("invariance", "monotonicity", "oracle")


def run_suite(name: str, trials: int = 200, seed: int = 0,
              dims: Iterable[int] | None = None) -> list[SuiteResult]:
    """Run one named suite (or ``"all"``) and return its results."""
    rng = np.random.default_rng(seed)
    names = list(SUITE_NAMES) if name == "all" else [name]
    results = []
    for suite in names:
        if suite == "invariance":
            results.append(pure_invariance(trials, dims or (2, 3, 4), rng))
            results.append(mixed_invariance(trials, dims or (2, 3), rng))
        elif suite == "monotonicity":
            results.append(monotonicity(trials, dims or (2, 3), rng))
        elif suite == "oracle":
            results.append(wedge_oracle(trials, rng))
            results.append(state_path_oracle(max(1, trials // 2), rng))
        else:
            raise ValueError(f"unknown suite {suite!r}")
    return results
