"""
Métricas de entbound exportadas en formato Prometheus.
Usa prometheus_client para contadores e histogramas; la CLI puede volcar
la exposición en texto al terminar (--metrics-out).
"""

from prometheus_client import Counter, Histogram, generate_latest

# Contadores
sdp_solves_total = Counter(
    'entbound_sdp_solves_total',
    'Total de SDP resueltos',
    ['status']  # "optimal" | "max_iterations" | "numerical_failure" | "infeasible"
)

bounds_total = Counter(
    'entbound_bounds_total',
    'Cotas calculadas por método',
    ['method', 'status']
)

ascent_runs_total = Counter(
    'entbound_ascent_runs_total',
    'Ejecuciones del ascenso',
    ['kind']  # "pure" | "mixed"
)

sweep_points_total = Counter(
    'entbound_sweep_points_total',
    'Puntos de barrido procesados',
    ['status']  # "ok" | "precision-limited" | "error"
)

# Histogramas
sdp_solve_duration = Histogram(
    'entbound_sdp_solve_duration_seconds',
    'Duración de cada solve SDP en segundos',
    buckets=(0.01, 0.1, 0.5, 1.0, 5.0, 30.0, 120.0, 600.0)
)

sdp_iterations = Histogram(
    'entbound_sdp_iterations',
    'Iteraciones de punto interior por solve',
    buckets=(5, 10, 20, 30, 50, 100, 200)
)

sweep_point_duration = Histogram(
    'entbound_sweep_point_duration_seconds',
    'Duración de un punto de barrido en segundos',
    buckets=(0.1, 1.0, 5.0, 30.0, 120.0, 600.0)
)


def record_solve(latency_seconds: float, status: str, iterations: int) -> None:
    """Registra un solve SDP terminado."""
    sdp_solves_total.labels(status=status).inc()
    sdp_solve_duration.observe(latency_seconds)
    sdp_iterations.observe(iterations)


def record_bound(method: str, status: str) -> None:
    """Registra una cota calculada (inferior o superior)."""
    bounds_total.labels(method=method, status=status).inc()


def record_ascent(kind: str) -> None:
    ascent_runs_total.labels(kind=kind).inc()


async def record_sweep_point(latency_seconds: float, status: str) -> None:
    """
    Registra un punto de barrido completado.

    Args:
        latency_seconds: Duración del punto en segundos
        status: Estado del punto; los errores se agrupan bajo "error"
    """
    label = "error" if status.startswith("error") else status
    sweep_points_total.labels(status=label).inc()
    sweep_point_duration.observe(latency_seconds)


def get_metrics_text() -> bytes:
    """
    Genera la salida en formato Prometheus (text/plain; version=0.0.4).
    """
    return generate_latest()


__all__ = [
    "record_solve",
    "record_bound",
    "record_ascent",
    "record_sweep_point",
    "get_metrics_text",
    "sdp_solves_total",
    "bounds_total",
    "sweep_points_total",
]
