"""Fórmula cerrada de E_G para dos qubits vía concurrencia."""

import numpy as np

try:
    from ..core.errors import UsageError
    from ..core.tensor import DensityMatrix, sqrtm_psd
    from ..infrastructure.metrics import record_bound
    from .results import BoundResult
except ImportError:
    from entbound.core.errors import UsageError
    from entbound.core.tensor import DensityMatrix, sqrtm_psd
    from entbound.infrastructure.metrics import record_bound
    from entbound.bounds.results import BoundResult

_SY_SY = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))


def _check_two_qubit(rho: DensityMatrix) -> None:
    if rho.layout.dims != (2, 2):
        raise UsageError(f"la fórmula exacta requiere layout 2x2, llegó {rho.layout.label()}")


def concurrence(rho: DensityMatrix) -> float:
    """C = max(0, λ1 − λ2 − λ3 − λ4), λ autovalores decrecientes de √(√ρ ρ̃ √ρ)."""
    _check_two_qubit(rho)
    root = sqrtm_psd(rho.matrix)
    tilde = _SY_SY @ rho.matrix.conj() @ _SY_SY
    inner = root @ tilde @ root
    lam = np.sqrt(np.clip(np.linalg.eigvalsh(0.5 * (inner + inner.conj().T)), 0.0, None))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def exact_two_qubit(rho: DensityMatrix) -> float:
    c = min(1.0, concurrence(rho))
    return 0.5 * (1.0 - np.sqrt(1.0 - c * c))


def exact_bound(rho: DensityMatrix) -> BoundResult:
    value = exact_two_qubit(rho)
    record_bound("exact2q", "exact")
    return BoundResult.build(value, direction="lower", method="exact2q", solver_tolerance=0.0, status="exact")


__all__ = ["concurrence", "exact_two_qubit", "exact_bound"]
