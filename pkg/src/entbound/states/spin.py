"""
Cadenas de espines: Hamiltoniano general, presets XX/XXX/hexágono y estados térmicos.

H = ½ Σ_bonds (Jx XX + Jy YY + Jz ZZ) + h Σ_j Z_j, con el enlace (n−1, 0) solo si periodic.
"""

from functools import reduce

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

try:
    from ..config import config as app_config
    from ..core.errors import CapacityError, UsageError
    from ..core.tensor import DensityMatrix, SubsystemLayout, partial_trace
    from .library import hr0, hr1, m32
except ImportError:
    from entbound.config import config as app_config
    from entbound.core.errors import CapacityError, UsageError
    from entbound.core.tensor import DensityMatrix, SubsystemLayout, partial_trace
    from entbound.states.library import hr0, hr1, m32

MAX_SPINS = 10
DEGENERACY_TOL = 1e-10

_I = np.eye(2, dtype=np.complex128)
PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


class SpinModel(BaseModel):
    """Parámetros de una cadena de n espines 1/2 (acoplamientos con signo literal)."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=2)
    Jx: float = 0.0
    Jy: float = 0.0
    Jz: float = 0.0
    h: float = 0.0
    periodic: bool = True

    @field_validator("n")
    @classmethod
    def check_size(cls, v: int) -> int:
        if v > MAX_SPINS:
            raise ValueError(f"cadena de {v} espines supera el máximo {MAX_SPINS}")
        return v

    @property
    def bonds(self) -> list[tuple[int, int]]:
        bonds = [(j, j + 1) for j in range(self.n - 1)]
        if self.periodic:
            bonds.append((self.n - 1, 0))
        return bonds


def site_operator(op: np.ndarray, site: int, n: int) -> np.ndarray:
    return reduce(np.kron, [op if j == site else _I for j in range(n)])


def hamiltonian(model: SpinModel) -> np.ndarray:
    n = model.n
    dim = 2**n
    if dim > app_config.SDP_DIMENSION_CAP:
        raise CapacityError(dim, app_config.SDP_DIMENSION_CAP, f"Hamiltoniano de {n} espines")
    singles = {axis: [site_operator(p, j, n) for j in range(n)] for axis, p in PAULI.items()}
    h = np.zeros((dim, dim), dtype=np.complex128)
    couplings = {"x": model.Jx, "y": model.Jy, "z": model.Jz}
    for i, j in model.bonds:
        for axis, coupling in couplings.items():
            if coupling != 0.0:
                h += 0.5 * coupling * (singles[axis][i] @ singles[axis][j])
    if model.h != 0.0:
        h += model.h * sum(singles["z"])
    return 0.5 * (h + h.conj().T)


def total_sz(n: int) -> np.ndarray:
    return sum(site_operator(PAULI["z"], j, n) for j in range(n))


# -- presets ---------------------------------------------------------------------------


def xx_model(n: int = 3, J: float = 1.0, h: float = 0.0, periodic: bool = True) -> SpinModel:
    """−(J/2) Σ (XX + YY) + h Σ Z."""
    return SpinModel(n=n, Jx=-J, Jy=-J, Jz=0.0, h=h, periodic=periodic)


def xxx_model(n: int = 3, J: float = -1.0, h: float = 0.0, periodic: bool = True) -> SpinModel:
    """−(J/2) Σ (XX + YY + ZZ) + h Σ Z."""
    return SpinModel(n=n, Jx=-J, Jy=-J, Jz=-J, h=h, periodic=periodic)


def hexagon_model(J: float = 1.0, h: float = 0.0) -> SpinModel:
    """Anillo de 6 espines XX con campo."""
    return xx_model(n=6, J=J, h=h, periodic=True)


PRESETS = {"xx": xx_model, "xxx": xxx_model, "hexagon": hexagon_model}


# -- estados térmicos ----------------------------------------------------------------------


def _check_hermitian(h: np.ndarray) -> np.ndarray:
    h = np.asarray(h, dtype=np.complex128)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise UsageError(f"Hamiltoniano no cuadrado: {h.shape}")
    if np.max(np.abs(h - h.conj().T)) > 1e-12:
        raise UsageError("Hamiltoniano no hermítico")
    return 0.5 * (h + h.conj().T)


def thermal_state(h: np.ndarray, beta: float, layout, ground: bool = False) -> DensityMatrix:
    """
    e^{−βH}/Z vía descomposición espectral (desplazada por el mínimo autovalor).
    ground=True (o beta=inf) devuelve la mezcla uniforme del subespacio fundamental.
    """
    h = _check_hermitian(h)
    layout = SubsystemLayout.of(layout)
    w, v = np.linalg.eigh(h)
    if np.isnan(beta) or beta < 0.0:
        raise UsageError(f"beta debe ser ≥ 0: {beta}")
    if ground or np.isinf(beta):
        width = w[-1] - w[0]
        weights = (w - w[0] <= DEGENERACY_TOL * width).astype(float)
    else:
        weights = np.exp(-beta * (w - w[0]))
    weights = weights / np.sum(weights)
    m = (v * weights) @ v.conj().T
    return DensityMatrix.from_matrix(m, layout, normalize=True)


def ground_state(h: np.ndarray, layout) -> DensityMatrix:
    return thermal_state(h, np.inf, layout, ground=True)


def thermal_xx(beta: float, J: float = 1.0, n: int = 3, h: float = 0.0) -> DensityMatrix:
    return thermal_state(hamiltonian(xx_model(n=n, J=J, h=h)), beta, (2,) * n)


def thermal_xxx(beta: float, h: float = 0.0, J: float = -1.0, n: int = 3) -> DensityMatrix:
    return thermal_state(hamiltonian(xxx_model(n=n, J=J, h=h)), beta, (2,) * n)


def thermal_hexagon(beta: float, h: float = 0.0, J: float = 1.0) -> DensityMatrix:
    return thermal_state(hamiltonian(hexagon_model(J=J, h=h)), beta, (2,) * 6)


def ground_xxx(h: float, J: float = -1.0, n: int = 3) -> DensityMatrix:
    return ground_state(hamiltonian(xxx_model(n=n, J=J, h=h)), (2,) * n)


def hexagon_bdf(beta: float, h: float = 0.0, J: float = 1.0) -> DensityMatrix:
    """Marginal del anillo de 6 espines sobre los sitios B, D, F (índices 1, 3, 5)."""
    rho = thermal_hexagon(beta, h, J)
    return partial_trace(rho, (1, 3, 5))


def xxx_closed_form(beta: float, h: float, J: float) -> DensityMatrix:
    """
    Estado térmico cerrado de la cadena XXX de 3 espines, con κ = e^{3βJ} − 1,
    ξ = 2e^{3βJ} + 1, μ = (e^{2βh} + 1)(e^{4βh} + 2e^{2βh+3βJ} + 1).
    Coincide con thermal_xxx(beta, h, J=−J): el J de esta fórmula tiene el signo opuesto al del preset.
    """
    e3 = np.exp(3.0 * beta * J)
    kappa = e3 - 1.0
    xi = 2.0 * e3 + 1.0
    mu = (np.exp(2.0 * beta * h) + 1.0) * (np.exp(4.0 * beta * h) + 2.0 * np.exp(2.0 * beta * h + 3.0 * beta * J) + 1.0)
    m = np.zeros((8, 8))
    for indices, field in (((1, 2, 4), np.exp(2.0 * beta * h)), ((3, 5, 6), np.exp(4.0 * beta * h))):
        for i in indices:
            for j in indices:
                m[i, j] = (xi if i == j else -kappa) * field / (3.0 * mu)
    m[0, 0] = 1.0 / mu
    m[7, 7] = np.exp(6.0 * beta * h) / mu
    return DensityMatrix.from_matrix(m, (2, 2, 2), normalize=True)


_REFERENCE_STATES = {"m32": m32, "hr1": hr1, "hr0": hr0}


def xxx_reference_state(which: str, beta: float = 5.0, h: float = 1.0, J: float = 1.0) -> DensityMatrix:
    """Estados fundamentales m32, hr1, hr0 o el térmico cerrado ("thermal")."""
    if which == "thermal":
        return xxx_closed_form(beta, h, J)
    if which not in _REFERENCE_STATES:
        raise UsageError(f"estado desconocido: {which!r} (válidos: m32, hr1, hr0, thermal)")
    return _REFERENCE_STATES[which]()


__all__ = [
    "SpinModel",
    "hamiltonian",
    "total_sz",
    "site_operator",
    "xx_model",
    "xxx_model",
    "hexagon_model",
    "PRESETS",
    "thermal_state",
    "ground_state",
    "thermal_xx",
    "thermal_xxx",
    "thermal_hexagon",
    "ground_xxx",
    "hexagon_bdf",
    "xxx_closed_form",
    "xxx_reference_state",
]
