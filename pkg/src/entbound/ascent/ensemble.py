"""Ensambles {p_i, |ψ_i⟩} y su reconstrucción."""

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

try:
    from ..core.tensor import ProductState, PureState, SubsystemLayout
except ImportError:
    from entbound.core.tensor import ProductState, PureState, SubsystemLayout

WEIGHT_TOL = 1e-12


class Ensemble(BaseModel):
    """Pesos p_i ≥ 0 con Σ p_i = 1 y estados puros sobre un layout común."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    weights: np.ndarray
    states: list[PureState]
    products: list[ProductState] | None = None

    @field_validator("weights", mode="before")
    @classmethod
    def to_array(cls, v):
        out = np.array(v, dtype=float).reshape(-1)
        out.setflags(write=False)
        return out

    @model_validator(mode="after")
    def check_ensemble(self) -> "Ensemble":
        if len(self.states) == 0 or len(self.states) != self.weights.shape[0]:
            raise ValueError("pesos y estados de longitudes distintas o vacíos")
        if np.any(self.weights < 0.0):
            raise ValueError("pesos negativos")
        total = float(np.sum(self.weights))
        if abs(total - 1.0) > WEIGHT_TOL:
            raise ValueError(f"los pesos suman {total!r}")
        layout = self.states[0].layout
        if any(s.layout != layout for s in self.states):
            raise ValueError("los estados del ensamble tienen layouts distintos")
        if self.products is not None and len(self.products) != len(self.states):
            raise ValueError("número de factores producto distinto del de estados")
        return self

    @classmethod
    def from_products(cls, weights, products: list[ProductState]) -> "Ensemble":
        weights = np.asarray(weights, dtype=float)
        weights = weights / np.sum(weights)
        return cls(weights=weights, states=[p.to_pure() for p in products], products=products)

    @property
    def layout(self) -> SubsystemLayout:
        return self.states[0].layout

    @property
    def separable(self) -> bool:
        return self.products is not None

    def density(self) -> np.ndarray:
        vectors = np.array([s.amplitudes for s in self.states])
        return (vectors.T * self.weights) @ vectors.conj()

    def reconstructs(self, rho: np.ndarray, tol: float = 1e-10) -> bool:
        return float(np.max(np.abs(self.density() - rho))) <= tol


__all__ = ["Ensemble"]
