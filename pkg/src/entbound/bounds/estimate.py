"""
Estimación por intervalo: cota inferior SDP + cota superior por ascenso.

Si la inferior supera a la superior más BRACKET_SLACK se vuelve a resolver la
inferior con tolerancia /10 (hasta RECONCILE_ATTEMPTS veces); si persiste, ambas
cotas se marcan "precision-limited" y se conservan los valores crudos.
"""

import time

try:
    from ..ascent import ub_mixed, ub_pure
    from ..ascent.ensemble import Ensemble
    from ..config import config as app_config
    from ..config.models import AscentConfig
    from ..core.tensor import DensityMatrix, PureState
    from ..infrastructure.logging_config import get_logger
    from .lower import build_lower, solve_lower
    from .pure import pure_sdp_estimate
    from .results import PRECISION_LIMITED, BoundResult, PureEstimate
except ImportError:
    from entbound.ascent import ub_mixed, ub_pure
    from entbound.ascent.ensemble import Ensemble
    from entbound.config import config as app_config
    from entbound.config.models import AscentConfig
    from entbound.core.tensor import DensityMatrix, PureState
    from entbound.infrastructure.logging_config import get_logger
    from entbound.bounds.lower import build_lower, solve_lower
    from entbound.bounds.pure import pure_sdp_estimate
    from entbound.bounds.results import PRECISION_LIMITED, BoundResult, PureEstimate

logger = get_logger("bounds.estimate")


def _violates(lower: BoundResult, upper: BoundResult) -> bool:
    return lower.raw_value > upper.raw_value + app_config.BRACKET_SLACK


def reconcile(lower: BoundResult, upper: BoundResult, resolve) -> tuple[BoundResult, BoundResult]:
    """Reintenta la cota inferior con tolerancias más finas mientras viole el intervalo."""
    tolerance = lower.solver_tolerance
    attempt = 0
    while _violates(lower, upper) and attempt < app_config.RECONCILE_ATTEMPTS:
        attempt += 1
        tolerance /= 10.0
        logger.warning(
            "cota inferior supera a la superior, re-resolviendo",
            extra={"extra_fields": {
                "lower": lower.raw_value, "upper": upper.raw_value,
                "attempt": attempt, "tolerance": tolerance,
            }},
        )
        lower = resolve(tolerance)
    if _violates(lower, upper):
        lower = lower.model_copy(update={"status": PRECISION_LIMITED})
        upper = upper.model_copy(update={"status": PRECISION_LIMITED})
    return lower, upper


def estimate(
    rho: DensityMatrix,
    lb_method: str = "lb4",
    ub_config: AscentConfig | None = None,
    tolerance: float | None = None,
    max_iterations: int | None = None,
    cut_mode: str | None = None,
) -> tuple[BoundResult, BoundResult]:
    """(inferior, superior) para un estado mixto."""
    lower, upper, _, _ = estimate_with_certificate(rho, lb_method, ub_config, tolerance, max_iterations, cut_mode)
    return lower, upper


def estimate_with_certificate(
    rho: DensityMatrix,
    lb_method: str = "lb4",
    ub_config: AscentConfig | None = None,
    tolerance: float | None = None,
    max_iterations: int | None = None,
    cut_mode: str | None = None,
) -> tuple[BoundResult, BoundResult, Ensemble, dict[str, float]]:
    """Como `estimate`, devolviendo además el ensamble separable y los tiempos."""
    tolerance = app_config.SDP_TOLERANCE if tolerance is None else tolerance
    start = time.perf_counter()
    lower = solve_lower(build_lower(rho, lb_method, cut_mode), tolerance, max_iterations)
    middle = time.perf_counter()
    upper, ensemble = ub_mixed(rho, ub_config)
    end = time.perf_counter()

    def resolve(tol: float) -> BoundResult:
        return solve_lower(build_lower(rho, lb_method, cut_mode), tol, max_iterations)

    lower, upper = reconcile(lower, upper, resolve)
    timings = {"lower": middle - start, "upper": end - middle, "total": time.perf_counter() - start}
    return lower, upper, ensemble, timings


def estimate_pure(
    psi: PureState,
    ub_config: AscentConfig | None = None,
    tolerance: float | None = None,
    max_iterations: int | None = None,
    accuracy_mode: str | None = None,
) -> tuple[BoundResult, BoundResult, PureEstimate]:
    """(inferior, superior, estimación SDP) para un estado puro."""
    tolerance = app_config.SDP_TOLERANCE if tolerance is None else tolerance
    sdp = pure_sdp_estimate(psi, tolerance, max_iterations, accuracy_mode)
    upper = ub_pure(psi, ub_config)

    def resolve(tol: float) -> BoundResult:
        return pure_sdp_estimate(psi, tol, max_iterations, accuracy_mode).as_bound()

    lower, upper = reconcile(sdp.as_bound(), upper, resolve)
    return lower, upper, sdp


__all__ = ["estimate", "estimate_with_certificate", "estimate_pure", "reconcile"]
