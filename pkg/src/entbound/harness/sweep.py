"""
Ejecución de barridos: pool acotado de workers (asyncio + hilos), resultados en
el orden de la rejilla y fallos capturados por punto.
"""

import asyncio
import time
from typing import List

import numpy as np
from pydantic import ValidationError

try:
    from ..bounds.estimate import estimate
    from ..bounds.results import PRECISION_LIMITED
    from ..config.models import SweepRow, SweepSpec
    from ..core.errors import CapacityError, EntboundError
    from ..infrastructure.logging_config import get_logger, log_context
    from ..infrastructure.metrics import record_sweep_point
    from .experiments import Experiment, get_experiment, grid_points, jsonable
except ImportError:
    from entbound.bounds.estimate import estimate
    from entbound.bounds.results import PRECISION_LIMITED
    from entbound.config.models import SweepRow, SweepSpec
    from entbound.core.errors import CapacityError, EntboundError
    from entbound.infrastructure.logging_config import get_logger, log_context
    from entbound.infrastructure.metrics import record_sweep_point
    from entbound.harness.experiments import Experiment, get_experiment, grid_points, jsonable

logger = get_logger("harness.sweep")

FALLBACK_METHOD = "lb1"


def point_seeds(seed: int, count: int) -> list[int]:
    """Semillas independientes por punto, estables ante el número de workers."""
    children = np.random.SeedSequence(seed).spawn(count)
    return [int(c.generate_state(1)[0]) for c in children]


def _finite(value: float) -> float | None:
    return value if np.isfinite(value) else None


def _row_status(lower_status: str, upper_status: str) -> str:
    if PRECISION_LIMITED in (lower_status, upper_status):
        return PRECISION_LIMITED
    if lower_status != "optimal":
        return lower_status
    return "ok"


def evaluate_point(spec: SweepSpec, experiment: Experiment, param_name: str, param: float, seed: int) -> SweepRow:
    """Evalúa un punto; cualquier error de dominio queda en `status`."""
    with log_context(experiment=experiment.name, point=f"{param_name}={param:g}", seed=seed):
        return _evaluate(spec, experiment, param_name, param, seed)


def _evaluate(spec: SweepSpec, experiment: Experiment, param_name: str, param: float, seed: int) -> SweepRow:
    start = time.perf_counter()
    base = {
        "experiment": experiment.name,
        "param_name": param_name,
        "param": param,
        "lb_method": spec.lb_method,
    }
    try:
        rho, extras = experiment.build(param, spec.options)
        ascent = spec.ascent.model_copy(update={"seed": seed})
        method = spec.lb_method
        try:
            lower, upper = estimate(rho, method, ascent, spec.tolerance, spec.max_iterations)
        except CapacityError as e:
            logger.warning(
                "capacidad excedida, se degrada la cota inferior",
                extra={"extra_fields": {"param": param, "from": method, "to": FALLBACK_METHOD, "error": str(e)}},
            )
            method = FALLBACK_METHOD
            extras["degraded_from"] = spec.lb_method
            lower, upper = estimate(rho, method, ascent, spec.tolerance, spec.max_iterations)
        return SweepRow(
            **{**base, "lb_method": method},
            lower=_finite(lower.value),
            upper=_finite(upper.value),
            lb_status=lower.status,
            ub_iterations=upper.iterations,
            wall_time_seconds=time.perf_counter() - start,
            status=_row_status(lower.status, upper.status),
            extras=jsonable(extras),
        )
    except (EntboundError, np.linalg.LinAlgError, ValidationError, OSError) as e:
        logger.error(
            "fallo en punto de barrido",
            extra={"extra_fields": {"experiment": experiment.name, "param": param, "error": str(e)}},
        )
        return SweepRow(**base, wall_time_seconds=time.perf_counter() - start, status=f"error: {e}")


async def _run(spec: SweepSpec, experiment: Experiment, param_name: str, points: list[float]) -> List[SweepRow]:
    semaphore = asyncio.Semaphore(spec.workers)
    seeds = point_seeds(spec.seed, len(points))

    async def run_point(param: float, seed: int) -> SweepRow:
        async with semaphore:
            row = await asyncio.to_thread(evaluate_point, spec, experiment, param_name, param, seed)
        await record_sweep_point(row.wall_time_seconds, row.status)
        return row

    return list(await asyncio.gather(*(run_point(p, s) for p, s in zip(points, seeds))))


def run_sweep(spec: SweepSpec) -> List[SweepRow]:
    """Una fila por punto de la rejilla, en orden de rejilla."""
    experiment = get_experiment(spec.experiment)
    param_name, points = grid_points(experiment, spec.grid)
    logger.info(
        "barrido iniciado",
        extra={"extra_fields": {"experiment": experiment.name, "points": len(points), "workers": spec.workers}},
    )
    rows = asyncio.run(_run(spec, experiment, param_name, points))
    failed = sum(1 for r in rows if r.status.startswith("error"))
    logger.info(
        "barrido terminado",
        extra={"extra_fields": {"experiment": experiment.name, "points": len(rows), "failed": failed}},
    )
    return rows


__all__ = ["run_sweep", "evaluate_point", "point_seeds", "FALLBACK_METHOD"]
