"""Canales locales en representación de Kraus."""

from typing import Iterable

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

try:
    from ..core.errors import UsageError
    from ..core.tensor import DensityMatrix, hermitize
except ImportError:
    from entbound.core.errors import UsageError
    from entbound.core.tensor import DensityMatrix, hermitize

COMPLETENESS_TOL = 1e-12


class KrausChannel(BaseModel):
    """Operadores E_i sobre una dimensión local, con Σ E_i†E_i = I."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str = "kraus"
    operators: list[np.ndarray]

    @field_validator("operators", mode="before")
    @classmethod
    def to_arrays(cls, v):
        out = []
        for op in v:
            a = np.array(op, dtype=np.complex128)
            a.setflags(write=False)
            out.append(a)
        return out

    @model_validator(mode="after")
    def check_completeness(self) -> "KrausChannel":
        if not self.operators:
            raise ValueError("un canal necesita al menos un operador de Kraus")
        d = self.operators[0].shape[0]
        if any(op.shape != (d, d) for op in self.operators):
            raise ValueError("operadores de Kraus de formas distintas o no cuadrados")
        total = sum(op.conj().T @ op for op in self.operators)
        error = float(np.max(np.abs(total - np.eye(d))))
        if error > COMPLETENESS_TOL:
            raise ValueError(f"Σ E†E difiere de la identidad en {error:.3e}")
        return self

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]

    def apply(self, matrix: np.ndarray) -> np.ndarray:
        return sum(op @ matrix @ op.conj().T for op in self.operators)


def _check_parameter(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise UsageError(f"{name} debe estar en [0, 1]: {value}")


def amplitude_damping(q: float) -> KrausChannel:
    _check_parameter("q", q)
    e0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - q)]])
    e1 = np.array([[0.0, np.sqrt(q)], [0.0, 0.0]])
    return KrausChannel(name=f"amplitude_damping({q})", operators=[e0, e1])


def depolarizing(p: float) -> KrausChannel:
    """ρ → (1 − 3p/4)ρ + (p/4)(XρX + YρY + ZρZ)."""
    _check_parameter("p", p)
    paulis = [
        np.eye(2),
        np.array([[0, 1], [1, 0]]),
        np.array([[0, -1j], [1j, 0]]),
        np.array([[1, 0], [0, -1]]),
    ]
    scales = [np.sqrt(1.0 - 3.0 * p / 4.0)] + [np.sqrt(p / 4.0)] * 3
    return KrausChannel(name=f"depolarizing({p})", operators=[s * op for s, op in zip(scales, paulis)])


def _apply_on_site(channel: KrausChannel, tensor: np.ndarray, site: int, m: int) -> np.ndarray:
    out = np.zeros_like(tensor)
    for op in channel.operators:
        t = np.moveaxis(np.tensordot(op, tensor, axes=([1], [site])), 0, site)
        t = np.moveaxis(np.tensordot(op.conj(), t, axes=([1], [m + site])), 0, m + site)
        out += t
    return out


def apply_local_channel(channel: KrausChannel, rho: DensityMatrix, sites: Iterable[int] | None = None) -> DensityMatrix:
    """(⊗_{i∈sites} Λ) aplicado a ρ; sites=None aplica el canal en todos los subsistemas."""
    dims = rho.layout.dims
    m = len(dims)
    sites = tuple(range(m)) if sites is None else tuple(sorted(set(int(s) for s in sites)))
    for s in sites:
        if s < 0 or s >= m:
            raise UsageError(f"sitio {s} fuera de rango (hay {m})")
        if dims[s] != channel.dim:
            raise UsageError(f"el canal actúa sobre dimensión {channel.dim}, el sitio {s} tiene {dims[s]}")
    t = rho.matrix.reshape(dims + dims)
    for s in sites:
        t = _apply_on_site(channel, t, s, m)
    return DensityMatrix.from_matrix(hermitize(t.reshape(rho.dim, rho.dim)), rho.layout)


__all__ = ["KrausChannel", "amplitude_damping", "depolarizing", "apply_local_channel"]
