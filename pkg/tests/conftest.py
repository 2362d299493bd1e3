"""Fixtures compartidas."""

import numpy as np
import pytest

from entbound.config.models import AscentConfig
from entbound.core.tensor import DensityMatrix


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def ascent() -> AscentConfig:
    return AscentConfig(restarts=3, seed=7, max_iterations=2000)


@pytest.fixture
def maximally_mixed_qubits() -> DensityMatrix:
    return DensityMatrix.from_matrix(np.eye(4) / 4.0, (2, 2))


def assert_density(rho: DensityMatrix, tol: float = 1e-10) -> None:
    m = rho.matrix
    assert abs(np.trace(m) - 1.0) < tol
    assert np.max(np.abs(m - m.conj().T)) < tol
    assert np.linalg.eigvalsh(m)[0] > -tol


@pytest.fixture
def check_density():
    return assert_density
