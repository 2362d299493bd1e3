"""
Comparación de cotas inferiores sobre estados aleatorios: tiempo medio, victorias
(empates dentro de la precisión del solver) y desviación máxima entre pares.
"""

import time
from itertools import combinations
from typing import Dict, List, Optional, Sequence

import numpy as np

try:
    from ..bounds.lower import build_lower, solve_lower
    from ..config import config as app_config
    from ..config.models import CompareEntry, CompareReport
    from ..core.errors import CapacityError, UsageError
    from ..core.tensor import random_density_matrix, random_separable_state
    from ..infrastructure.logging_config import get_logger
    from .sweep import point_seeds
except ImportError:
    from entbound.bounds.lower import build_lower, solve_lower
    from entbound.config import config as app_config
    from entbound.config.models import CompareEntry, CompareReport
    from entbound.core.errors import CapacityError, UsageError
    from entbound.core.tensor import random_density_matrix, random_separable_state
    from entbound.infrastructure.logging_config import get_logger
    from entbound.harness.sweep import point_seeds

logger = get_logger("harness.compare")

COMPARE_METHODS = ("lb1", "lb2k2", "lb2k3", "lb3", "lb4")
SKIPPED = "skipped"


def parse_dims(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(d) for d in text.lower().split("x"))
    except ValueError:
        raise UsageError(f"dimensiones inválidas: {text!r} (ejemplo: 3x3)")
    if len(dims) < 2 or any(d < 2 for d in dims):
        raise UsageError(f"se necesitan al menos dos subsistemas de dimensión >= 2: {text!r}")
    return dims


def _sample(dims: tuple[int, ...], seed: int, rank: Optional[int], separable: bool):
    total = int(np.prod(dims))
    if separable:
        return random_separable_state(dims, rank or total, seed)
    return random_density_matrix(total, rank or total, seed, dims)


def compare_bounds(
    n_samples: int,
    dims: Sequence[int] = (3, 3),
    seed: int = 0,
    rank: Optional[int] = None,
    separable: bool = False,
    methods: Sequence[str] = COMPARE_METHODS,
    tolerance: float | None = None,
    max_iterations: int | None = None,
) -> CompareReport:
    if n_samples < 1:
        raise UsageError("n_samples debe ser >= 1")
    dims = tuple(dims)
    tie = app_config.WIN_TIE_TOLERANCE
    entries = {m: CompareEntry(method=m) for m in methods}
    times: Dict[str, List[float]] = {m: [] for m in methods}
    values: List[Dict[str, Optional[float]]] = []

    for i, sample_seed in enumerate(point_seeds(seed, n_samples)):
        rho = _sample(dims, sample_seed, rank, separable)
        row: Dict[str, Optional[float]] = {}
        for method in methods:
            entry = entries[method]
            try:
                model = build_lower(rho, method)
            except CapacityError as e:
                logger.info("cota omitida por capacidad", extra={"extra_fields": {"method": method, "error": str(e)}})
                entries[method] = entry.model_copy(update={"skipped": entry.skipped + 1})
                row[method] = None
                continue
            start = time.perf_counter()
            result = solve_lower(model, tolerance, max_iterations)
            times[method].append(time.perf_counter() - start)
            if result.ok:
                row[method] = result.value
                entries[method] = entry.model_copy(update={"evaluated": entry.evaluated + 1})
            else:
                row[method] = None
                entries[method] = entry.model_copy(
                    update={"evaluated": entry.evaluated + 1, "failures": entry.failures + 1}
                )
        available = [v for v in row.values() if v is not None]
        if available:
            best = max(available)
            for method, v in row.items():
                if v is not None and v >= best - tie:
                    entries[method] = entries[method].model_copy(update={"wins": entries[method].wins + 1})
        values.append(row)
        logger.debug("muestra comparada", extra={"extra_fields": {"sample": i, "values": row}})

    deviation: Dict[str, float] = {}
    for a, b in combinations(methods, 2):
        diffs = [abs(r[a] - r[b]) for r in values if r.get(a) is not None and r.get(b) is not None]
        if diffs:
            deviation[f"{a}|{b}"] = float(max(diffs))

    final = []
    for m in methods:
        mean = float(np.mean(times[m])) if times[m] else None
        final.append(entries[m].model_copy(update={"mean_wall_time_seconds": mean}))
    return CompareReport(
        n_samples=n_samples,
        dims=list(dims),
        rank=rank,
        seed=seed,
        separable=separable,
        tie_tolerance=tie,
        entries=final,
        max_deviation=deviation,
        values=values,
    )


__all__ = ["compare_bounds", "parse_dims", "COMPARE_METHODS", "SKIPPED"]
