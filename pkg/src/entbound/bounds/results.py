"""Resultados de cotas: BoundResult y PureEstimate."""

import re
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

try:
    from ..config.models import BoundSummary
except ImportError:
    from entbound.config.models import BoundSummary

METHOD_TAGS = ("lb1", "lb2k2", "lb2k3", "lb3", "lb4", "pure", "ascent", "exact2q")
PRECISION_LIMITED = "precision-limited"
_LB2_TAG = re.compile(r"^lb2k[1-9][0-9]*$")


class BoundResult(BaseModel):
    """Cota de E_G con su certificado. value se recorta a [0, 1]; raw_value conserva el original."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    value: float
    raw_value: float
    direction: Literal["lower", "upper"]
    method: str
    certificate: dict[str, np.ndarray] = Field(default_factory=dict)
    solver_tolerance: float
    status: str
    iterations: int = 0
    wall_time: float = 0.0

    @field_validator("method")
    @classmethod
    def check_method(cls, v: str) -> str:
        if v not in METHOD_TAGS and not _LB2_TAG.match(v):
            raise ValueError(f"método desconocido: {v!r}")
        return v

    @model_validator(mode="after")
    def check_value(self) -> "BoundResult":
        if np.isfinite(self.value) and not 0.0 <= self.value <= 1.0:
            raise ValueError(f"valor {self.value} fuera de [0, 1]; use BoundResult.build")
        return self

    @classmethod
    def build(cls, raw_value: float, **kwargs) -> "BoundResult":
        raw = float(raw_value)
        value = float(np.clip(raw, 0.0, 1.0)) if np.isfinite(raw) else raw
        return cls(value=value, raw_value=raw, **kwargs)

    @property
    def ok(self) -> bool:
        return self.status in ("optimal", "converged", "exact")

    def summary(self) -> BoundSummary:
        return BoundSummary(
            value=self.value,
            raw_value=self.raw_value,
            direction=self.direction,
            method=self.method,
            status=self.status,
            iterations=self.iterations,
            solver_tolerance=self.solver_tolerance,
            wall_time_seconds=self.wall_time,
        )


class PureEstimate(BaseModel):
    """Estimación SDP de un estado puro con su radio de precisión certificado."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    value: float
    epsilon: float = Field(description="1 − λ_max del σ óptimo")
    accuracy: float = Field(description="factor · √epsilon")
    factor: float
    status: str
    solver_tolerance: float
    iterations: int = 0
    wall_time: float = 0.0
    sigma: np.ndarray | None = None

    @field_validator("epsilon")
    @classmethod
    def check_epsilon(cls, v: float) -> float:
        if np.isfinite(v) and not 0.0 <= v <= 1.0:
            raise ValueError(f"epsilon {v} fuera de [0, 1]")
        return v

    def as_bound(self) -> BoundResult:
        certificate = {} if self.sigma is None else {"sigma": self.sigma}
        return BoundResult.build(
            self.value,
            direction="lower",
            method="pure",
            certificate=certificate,
            solver_tolerance=self.solver_tolerance,
            status=self.status,
            iterations=self.iterations,
            wall_time=self.wall_time,
        )


__all__ = ["BoundResult", "PureEstimate", "METHOD_TAGS", "PRECISION_LIMITED"]
