"""Modelos Pydantic de configuración y de resultados de la CLI/harness"""

import math
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

try:
    from . import config as app_config
except ImportError:
    from entbound.config import config as app_config

SCHEMA_VERSION = "1"

LbMethod = Literal["lb1", "lb2k2", "lb2k3", "lb3", "lb4"]
Experiment = Literal[
    "horodecki",
    "ghz-w-mix",
    "xx-thermal",
    "xx-ppt-window",
    "xxx-field",
    "xxx-beta",
    "hexagon",
    "noise-ad",
    "noise-dep",
    "custom-file",
]

GAP_FLOOR = -1e-7


class AscentConfig(BaseModel):
    """Parámetros del ascenso (cotas superiores)"""
    model_config = ConfigDict(frozen=True)

    tolerance: float = Field(
        default_factory=lambda: app_config.ASCENT_TOLERANCE,
        description="Umbral de incremento de fidelidad/solapamiento para parar",
    )
    max_iterations: int = Field(default_factory=lambda: app_config.ASCENT_MAX_ITERATIONS, ge=1)
    restarts: Optional[int] = Field(
        default=None,
        ge=1,
        description="Reinicios aleatorios; None usa el valor por tipo (puro/mixto) de la configuración",
    )
    ensemble_size: Optional[int] = Field(
        default=None,
        ge=1,
        description="Tamaño del ensamble de ub_mixed; None usa d²",
    )
    inner_sweeps: int = Field(default_factory=lambda: app_config.ASCENT_INNER_SWEEPS, ge=1)
    seed: int = Field(default_factory=lambda: app_config.DEFAULT_SEED)

    @field_validator("tolerance")
    @classmethod
    def check_tolerance(cls, v: float) -> float:
        if not v > 0.0:
            raise ValueError(f"la tolerancia del ascenso debe ser positiva: {v}")
        return v

    def restarts_for(self, kind: str) -> int:
        if self.restarts is not None:
            return self.restarts
        return app_config.ASCENT_RESTARTS_PURE if kind == "pure" else app_config.ASCENT_RESTARTS_MIXED


class SweepGrid(BaseModel):
    """Rejilla de un parámetro: {start, stop, step} o lista explícita"""
    name: str
    start: Optional[float] = None
    stop: Optional[float] = None
    step: Optional[float] = None
    values: Optional[List[float]] = None

    @model_validator(mode="after")
    def check_grid(self) -> "SweepGrid":
        if self.values is not None:
            if len(self.values) == 0:
                raise ValueError("la lista de valores de la rejilla está vacía")
            return self
        if self.start is None or self.stop is None or self.step is None:
            raise ValueError("la rejilla necesita 'values' o bien 'start', 'stop' y 'step'")
        if not self.step > 0:
            raise ValueError(f"el paso debe ser positivo: {self.step}")
        if self.stop < self.start:
            raise ValueError(f"stop {self.stop} menor que start {self.start}")
        return self

    def points(self) -> List[float]:
        """Puntos en orden; los extremos se redondean a 12 decimales para ser reproducibles."""
        if self.values is not None:
            return [float(v) for v in self.values]
        count = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return [round(self.start + i * self.step, 12) for i in range(count)]


class SweepSpec(BaseModel):
    """Especificación de un barrido (archivo JSON de --config)"""
    experiment: Experiment
    grid: Optional[SweepGrid] = None
    lb_method: LbMethod = "lb4"
    ascent: AscentConfig = Field(default_factory=AscentConfig)
    tolerance: float = Field(default_factory=lambda: app_config.SDP_TOLERANCE, gt=0.0)
    max_iterations: int = Field(default_factory=lambda: app_config.SDP_MAX_ITERATIONS, ge=1)
    workers: int = Field(default_factory=lambda: app_config.SWEEP_WORKERS, ge=1)
    seed: int = Field(default_factory=lambda: app_config.DEFAULT_SEED)
    out: Optional[str] = None
    format: Literal["csv", "json"] = "csv"
    options: Dict[str, Any] = Field(
        default_factory=dict,
        description="Parámetros del experimento: J, h, beta, n, state, file, ...",
    )


class SweepRow(BaseModel):
    """Fila de salida de un barrido (columnas CSV en este orden)"""
    schema_version: str = SCHEMA_VERSION
    experiment: str
    param_name: str
    param: float
    lower: Optional[float] = None
    upper: Optional[float] = None
    gap: Optional[float] = None
    lb_method: str
    lb_status: str = ""
    ub_iterations: int = 0
    wall_time_seconds: float = 0.0
    status: str = "ok"
    extras: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def check_gap(self) -> "SweepRow":
        if self.lower is None or self.upper is None:
            return self
        expected = self.upper - self.lower
        if self.gap is None:
            self.gap = expected
        elif abs(self.gap - expected) > 1e-12:
            raise ValueError(f"gap {self.gap} != upper - lower {expected}")
        if self.gap < GAP_FLOOR and self.status == "ok":
            raise ValueError(f"gap {self.gap} bajo el mínimo {GAP_FLOOR} con status ok")
        return self


class BoundSummary(BaseModel):
    """Resumen serializable de una cota"""
    value: float
    raw_value: float
    direction: Literal["lower", "upper"]
    method: str
    status: str
    iterations: int = 0
    solver_tolerance: float
    wall_time_seconds: float = 0.0


class EstimateReport(BaseModel):
    """Salida de `entbound estimate`"""
    schema_version: str = SCHEMA_VERSION
    input: str
    dims: List[int]
    lower: BoundSummary
    upper: BoundSummary
    gap: float
    method: str
    status: str
    tolerances: Dict[str, float]
    timings: Dict[str, float]
    extras: Dict[str, Any] = Field(default_factory=dict)


class CompareEntry(BaseModel):
    """Estadísticas de una cota en compare-bounds"""
    method: str
    evaluated: int = 0
    skipped: int = 0
    wins: int = 0
    mean_wall_time_seconds: Optional[float] = None
    failures: int = 0


class CompareReport(BaseModel):
    """Salida de `entbound compare-bounds`"""
    schema_version: str = SCHEMA_VERSION
    n_samples: int = Field(ge=1)
    dims: List[int]
    rank: Optional[int] = None
    seed: int
    separable: bool = False
    tie_tolerance: float
    entries: List[CompareEntry]
    max_deviation: Dict[str, float] = Field(
        default_factory=dict,
        description="Máxima |LBi − LBj| sobre la muestra, clave 'lbi|lbj'",
    )
    values: List[Dict[str, Optional[float]]] = Field(default_factory=list)
