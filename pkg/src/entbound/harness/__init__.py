"""Barridos de experimentos, comparación de cotas y salida tabular."""

try:
    from .compare import compare_bounds, parse_dims
    from .experiments import EXPERIMENTS, get_experiment
    from .output import render, rows_to_csv, sweep_document
    from .sweep import evaluate_point, run_sweep
except ImportError:
    from entbound.harness.compare import compare_bounds, parse_dims
    from entbound.harness.experiments import EXPERIMENTS, get_experiment
    from entbound.harness.output import render, rows_to_csv, sweep_document
    from entbound.harness.sweep import evaluate_point, run_sweep

__all__ = [
    "EXPERIMENTS",
    "get_experiment",
    "run_sweep",
    "evaluate_point",
    "compare_bounds",
    "parse_dims",
    "render",
    "rows_to_csv",
    "sweep_document",
]
