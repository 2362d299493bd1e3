"""
Estados de referencia: Horodecki 3x3, GHZ, W, su mezcla y los estados
fundamentales del modelo XXX de tres qubits.
Convención: el sitio 0 es el bit más significativo.
"""

import numpy as np

try:
    from ..core.errors import UsageError
    from ..core.tensor import DensityMatrix, PureState
except ImportError:
    from entbound.core.errors import UsageError
    from entbound.core.tensor import DensityMatrix, PureState


def _check_unit(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise UsageError(f"{name} debe estar en [0, 1]: {value}")


def _check_qubits(n: int) -> None:
    if n < 2:
        raise UsageError(f"se necesitan al menos 2 qubits: {n}")


def horodecki_3x3(a: float) -> DensityMatrix:
    """Familia 3x3 PPT entrelazada, prefactor 1/(8a+1)."""
    _check_unit("a", a)
    m = np.zeros((9, 9))
    for i in (0, 4, 8):
        for j in (0, 4, 8):
            m[i, j] = a
    for i in (1, 2, 3, 5, 7):
        m[i, i] = a
    m[6, 6] = m[8, 8] = (1.0 + a) / 2.0
    m[6, 8] = m[8, 6] = np.sqrt(1.0 - a * a) / 2.0
    return DensityMatrix.from_matrix(m / (8.0 * a + 1.0), (3, 3))


def ghz(n: int) -> PureState:
    _check_qubits(n)
    v = np.zeros(2**n)
    v[0] = v[-1] = 1.0
    return PureState.normalized(v, (2,) * n)


def w(n: int) -> PureState:
    _check_qubits(n)
    v = np.zeros(2**n)
    for site in range(n):
        v[1 << (n - 1 - site)] = 1.0
    return PureState.normalized(v, (2,) * n)


def ghz_w_mixture(p: float, n: int = 3) -> DensityMatrix:
    """p|GHZ⟩⟨GHZ| + (1−p)|W⟩⟨W|."""
    _check_unit("p", p)
    m = p * ghz(n).projector() + (1.0 - p) * w(n).projector()
    return DensityMatrix.from_matrix(m, (2,) * n)


def bell(which: str = "phi+") -> PureState:
    vectors = {
        "phi+": [1, 0, 0, 1],
        "phi-": [1, 0, 0, -1],
        "psi+": [0, 1, 1, 0],
        "psi-": [0, 1, -1, 0],
    }
    if which not in vectors:
        raise UsageError(f"estado de Bell desconocido: {which!r}")
    return PureState.normalized(vectors[which], (2, 2))


def product_basis(bits: str) -> PureState:
    """|b_0 b_1 ...⟩ para una cadena de '0'/'1'."""
    if not bits or any(b not in "01" for b in bits):
        raise UsageError(f"cadena de bits inválida: {bits!r}")
    v = np.zeros(2 ** len(bits))
    v[int(bits, 2)] = 1.0
    return PureState.normalized(v, (2,) * len(bits))


def werner(p: float) -> DensityMatrix:
    """p|Φ+⟩⟨Φ+| + (1−p) I/4."""
    _check_unit("p", p)
    m = p * bell("phi+").projector() + (1.0 - p) * np.eye(4) / 4.0
    return DensityMatrix.from_matrix(m, (2, 2))


# -- estados fundamentales del modelo XXX de tres qubits --------------------------------

_TWO_EXCITATIONS = (3, 5, 6)  # |011⟩, |101⟩, |110⟩
_ONE_EXCITATION = (1, 2, 4)  # |001⟩, |010⟩, |100⟩


def _sector_block(indices, diag: float, off: float) -> np.ndarray:
    m = np.zeros((8, 8))
    for i in indices:
        for j in indices:
            m[i, j] = diag if i == j else off
    return m


def m32() -> DensityMatrix:
    """Estado fundamental en el punto de transición h = 3J/2."""
    m = _sector_block(_TWO_EXCITATIONS, 2.0 / 9.0, -1.0 / 9.0)
    m[7, 7] = 1.0 / 3.0
    return DensityMatrix.from_matrix(m, (2, 2, 2))


def hr1() -> DensityMatrix:
    """Estado fundamental para 0 < h < 3/2."""
    return DensityMatrix.from_matrix(_sector_block(_TWO_EXCITATIONS, 1.0 / 3.0, -1.0 / 6.0), (2, 2, 2))


def hr0() -> DensityMatrix:
    """Estado fundamental para h = 0."""
    m = _sector_block(_ONE_EXCITATION, 1.0 / 6.0, -1.0 / 12.0)
    m += _sector_block(_TWO_EXCITATIONS, 1.0 / 6.0, -1.0 / 12.0)
    return DensityMatrix.from_matrix(m, (2, 2, 2))


def sigma_star() -> DensityMatrix:
    """⅓(|011⟩⟨011| + |101⟩⟨101| + |110⟩⟨110|): σ separable óptimo para hr1."""
    m = np.zeros((8, 8))
    for i in _TWO_EXCITATIONS:
        m[i, i] = 1.0 / 3.0
    return DensityMatrix.from_matrix(m, (2, 2, 2))


__all__ = [
    "horodecki_3x3",
    "ghz",
    "w",
    "ghz_w_mixture",
    "bell",
    "product_basis",
    "werner",
    "m32",
    "hr1",
    "hr0",
    "sigma_star",
]
