"""
CLI de entbound: estimate, sweep, compare-bounds y export-state.

Códigos de salida: 0 éxito, 1 fallo del solver (se imprime el status),
2 error de uso, de formato o de capacidad (se imprime el mensaje).
Los datos van a stdout; logs y tablas auxiliares a stderr.
"""

import ast
import json
import sys
from pathlib import Path
from typing import Annotated, Any, Dict, List, Optional

import click
import numpy as np
import typer
from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

try:
    from ..ascent.ensemble import Ensemble
    from ..bounds.estimate import estimate_pure, estimate_with_certificate
    from ..bounds.lower import build_lower
    from ..bounds.pure import build_pure
    from ..bounds.results import PRECISION_LIMITED, BoundResult
    from ..config import config as app_config
    from ..config.models import AscentConfig, EstimateReport, SweepGrid, SweepSpec
    from ..core.errors import EntboundError
    from ..core.matrix_io import format_matrix_text, matrix_to_json, write_matrix
    from ..core.tensor import PureState
    from ..harness.compare import SKIPPED, compare_bounds, parse_dims
    from ..harness.experiments import get_experiment
    from ..harness.output import render, write_output
    from ..harness.sweep import run_sweep
    from ..infrastructure.logging_config import get_logger
    from ..infrastructure.metrics import get_metrics_text
    from ..sdp.dump import dump_problem
    from ..states.registry import load_state
except ImportError:
    from entbound.ascent.ensemble import Ensemble
    from entbound.bounds.estimate import estimate_pure, estimate_with_certificate
    from entbound.bounds.lower import build_lower
    from entbound.bounds.pure import build_pure
    from entbound.bounds.results import PRECISION_LIMITED, BoundResult
    from entbound.config import config as app_config
    from entbound.config.models import AscentConfig, EstimateReport, SweepGrid, SweepSpec
    from entbound.core.errors import EntboundError
    from entbound.core.matrix_io import format_matrix_text, matrix_to_json, write_matrix
    from entbound.core.tensor import PureState
    from entbound.harness.compare import SKIPPED, compare_bounds, parse_dims
    from entbound.harness.experiments import get_experiment
    from entbound.harness.output import render, write_output
    from entbound.harness.sweep import run_sweep
    from entbound.infrastructure.logging_config import get_logger
    from entbound.infrastructure.metrics import get_metrics_text
    from entbound.sdp.dump import dump_problem
    from entbound.states.registry import load_state

logger = get_logger("cli")

app = typer.Typer(
    name="entbound",
    help="Cotas certificadas de entrelazamiento geométrico.",
    add_completion=False,
    no_args_is_help=True,
)
err_console = Console(stderr=True)

EXIT_SOLVER = 1
EXIT_USAGE = 2
SOLVER_FAILURES = ("max_iterations", "numerical_failure", "infeasible")

LB_CHOICES = click.Choice(["lb1", "lb2k2", "lb2k3", "lb3", "lb4"])
FORMAT_CHOICES = click.Choice(["csv", "json"])

LbOption = Annotated[Optional[str], typer.Option("--lb", click_type=LB_CHOICES, help="Cota inferior")]
TolOption = Annotated[Optional[float], typer.Option("--tol", help="Tolerancia del solver SDP")]
MaxIterOption = Annotated[Optional[int], typer.Option("--max-iter", help="Iteraciones máximas del solver")]
RestartsOption = Annotated[Optional[int], typer.Option("--restarts", help="Reinicios del ascenso")]
SeedOption = Annotated[Optional[int], typer.Option("--seed", help="Semilla")]
MetricsOption = Annotated[Optional[Path], typer.Option("--metrics-out", help="Escribe métricas Prometheus")]


def _fail(message: str, code: int = EXIT_USAGE) -> None:
    err_console.print(f"[red]error:[/red] {message}", markup=True, highlight=False, soft_wrap=True)
    raise typer.Exit(code=code)


def _usage_message(error: Exception) -> str:
    if isinstance(error, ValidationError):
        first = error.errors()[0]
        where = ".".join(str(p) for p in first.get("loc", ()))
        return f"{where}: {first['msg']}" if where else first["msg"]
    return str(error)


def _write_metrics(path: Optional[Path]) -> None:
    if path is not None:
        path.write_bytes(get_metrics_text())


def _ascent_config(restarts: Optional[int], seed: Optional[int], base: Optional[AscentConfig] = None) -> AscentConfig:
    base = base or AscentConfig()
    update: Dict[str, Any] = {}
    if restarts is not None:
        update["restarts"] = restarts
    if seed is not None:
        update["seed"] = seed
    return AscentConfig.model_validate({**base.model_dump(), **update})


def _certificate_matrices(lower: BoundResult, upper: BoundResult, dims, ensemble: Optional[Ensemble]) -> Dict[str, Any]:
    out: Dict[str, Any] = {}
    for name, matrix in lower.certificate.items():
        m = np.asarray(matrix)
        if m.ndim == 2 and m.shape[0] == m.shape[1]:
            out[f"lower_{name}"] = matrix_to_json(m, dims if name == "sigma" else (m.shape[0],))
    if "product" in upper.certificate:
        v = np.asarray(upper.certificate["product"])
        out["upper_sigma"] = matrix_to_json(np.outer(v, v.conj()), dims)
    elif "sigma" in upper.certificate:
        out["upper_sigma"] = matrix_to_json(upper.certificate["sigma"], dims)
    if ensemble is not None:
        out["ensemble"] = {
            "weights": ensemble.weights.tolist(),
            "states": [{"re": s.amplitudes.real.tolist(), "im": s.amplitudes.imag.tolist()} for s in ensemble.states],
            "separable": ensemble.separable,
        }
    return out


def _print_estimate(report: EstimateReport) -> None:
    table = Table(title=f"E_G de {report.input}")
    table.add_column("cota")
    table.add_column("método")
    table.add_column("valor", justify="right")
    table.add_column("status")
    table.add_column("iter", justify="right")
    for s in (report.lower, report.upper):
        table.add_row(s.direction, s.method, f"{s.value:.10f}", s.status, str(s.iterations))
    table.add_row("gap", "", f"{report.gap:.3e}", report.status, "")
    err_console.print(table)


@app.command()
def estimate(
    state: Annotated[str, typer.Argument(help="Archivo de matriz o constructor, p. ej. 'ghz(3)'")],
    lb: LbOption = None,
    tol: TolOption = None,
    max_iter: MaxIterOption = None,
    restarts: RestartsOption = None,
    seed: SeedOption = None,
    certificate_out: Annotated[Optional[Path], typer.Option("--certificate-out", help="Certificados en JSON")] = None,
    dump_sdp: Annotated[Optional[Path], typer.Option("--dump-sdp", help="Volcado JSON del SDP de la cota inferior")] = None,
    metrics_out: MetricsOption = None,
    quiet: Annotated[bool, typer.Option("--quiet", help="Sin tabla en stderr")] = False,
) -> None:
    """Cota inferior y superior de E_G para un estado."""
    try:
        loaded = load_state(state)
        ascent = _ascent_config(restarts, seed)
        logger.info("estimación solicitada", extra={"extra_fields": {"input": state, "dims": list(loaded.layout.dims), "lb": lb}})
        tolerance = app_config.SDP_TOLERANCE if tol is None else tol
        extras: Dict[str, Any] = {}
        ensemble: Optional[Ensemble] = None
        if isinstance(loaded, PureState) and lb is None:
            if dump_sdp is not None:
                dump_problem(build_pure(loaded).problem, dump_sdp)
            lower, upper, sdp = estimate_pure(loaded, ascent, tolerance, max_iter)
            extras = {"epsilon": sdp.epsilon, "accuracy": sdp.accuracy, "accuracy_factor": sdp.factor}
            timings = {"lower": sdp.wall_time, "total": sdp.wall_time + upper.wall_time}
            method = "pure"
        else:
            rho = loaded.density() if isinstance(loaded, PureState) else loaded
            method = lb or "lb4"
            if dump_sdp is not None:
                dump_problem(build_lower(rho, method).problem, dump_sdp)
            lower, upper, ensemble, timings = estimate_with_certificate(rho, method, ascent, tolerance, max_iter)
        dims = list(loaded.layout.dims)
        status = PRECISION_LIMITED if PRECISION_LIMITED in (lower.status, upper.status) else lower.status
        report = EstimateReport(
            input=state,
            dims=dims,
            lower=lower.summary(),
            upper=upper.summary(),
            gap=upper.value - lower.value,
            method=method,
            status=status,
            tolerances={"sdp": tolerance, "ascent": ascent.tolerance},
            timings=timings,
            extras=extras,
        )
        if certificate_out is not None:
            certificate_out.write_text(
                json.dumps(_certificate_matrices(lower, upper, dims, ensemble)) + "\n", encoding="utf-8"
            )
    except (EntboundError, ValidationError, ValueError) as e:
        _fail(_usage_message(e))
        return

    typer.echo(report.model_dump_json(indent=2))
    if not quiet:
        _print_estimate(report)
    _write_metrics(metrics_out)
    if lower.status in SOLVER_FAILURES:
        err_console.print(f"status: {lower.status}", highlight=False)
        raise typer.Exit(code=EXIT_SOLVER)


def _parse_option(text: str) -> tuple[str, Any]:
    if "=" not in text:
        raise click.BadParameter(f"se esperaba clave=valor: {text!r}")
    key, raw = text.split("=", 1)
    try:
        value = ast.literal_eval(raw)
    except (ValueError, SyntaxError):
        value = raw
    return key.strip(), value


def _parse_grid(name: str, grid: Optional[str], values: Optional[str]) -> Optional[SweepGrid]:
    if grid is None and values is None:
        return None
    if values is not None:
        return SweepGrid(name=name, values=[float(v) for v in values.split(",") if v.strip()])
    parts = grid.split(":")
    if len(parts) != 3:
        raise click.BadParameter(f"la rejilla debe ser inicio:fin:paso: {grid!r}")
    start, stop, step = (float(p) for p in parts)
    return SweepGrid(name=name, start=start, stop=stop, step=step)


@app.command()
def sweep(
    experiment: Annotated[Optional[str], typer.Argument(help="Experimento (horodecki, xx-thermal, ...)")] = None,
    config: Annotated[Optional[Path], typer.Option("--config", help="Archivo JSON con un SweepSpec")] = None,
    grid: Annotated[Optional[str], typer.Option("--grid", help="inicio:fin:paso")] = None,
    values: Annotated[Optional[str], typer.Option("--values", help="Lista separada por comas")] = None,
    param: Annotated[Optional[str], typer.Option("--param", help="Nombre del parámetro")] = None,
    option: Annotated[Optional[List[str]], typer.Option("--option", "-o", help="clave=valor del experimento")] = None,
    lb: LbOption = None,
    tol: TolOption = None,
    max_iter: MaxIterOption = None,
    restarts: RestartsOption = None,
    seed: SeedOption = None,
    workers: Annotated[Optional[int], typer.Option("--workers", help="Puntos en paralelo")] = None,
    out: Annotated[Optional[Path], typer.Option("--out", help="Archivo de salida (por defecto stdout)")] = None,
    fmt: Annotated[Optional[str], typer.Option("--format", click_type=FORMAT_CHOICES)] = None,
    no_timings: Annotated[bool, typer.Option("--no-timings", help="Tiempos a cero (salida reproducible byte a byte)")] = False,
    metrics_out: MetricsOption = None,
) -> None:
    """Barrido de un experimento sobre una rejilla de parámetros."""
    try:
        data: Dict[str, Any] = {}
        if config is not None:
            data = SweepSpec.model_validate_json(config.read_text(encoding="utf-8")).model_dump()
        if experiment is not None:
            data["experiment"] = experiment
        if "experiment" not in data:
            raise click.BadParameter("indique un experimento o --config")
        parsed_grid = _parse_grid(param or get_experiment(data["experiment"]).param_name, grid, values)
        if parsed_grid is not None:
            data["grid"] = parsed_grid.model_dump()
        overrides = {"lb_method": lb, "tolerance": tol, "max_iterations": max_iter, "workers": workers, "format": fmt}
        data.update({k: v for k, v in overrides.items() if v is not None})
        if seed is not None:
            data["seed"] = seed
        if out is not None:
            data["out"] = str(out)
        if option:
            data["options"] = {**data.get("options", {}), **dict(_parse_option(o) for o in option)}
        base_ascent = AscentConfig.model_validate(data["ascent"]) if "ascent" in data else None
        data["ascent"] = _ascent_config(restarts, seed, base_ascent).model_dump()
        spec = SweepSpec.model_validate(data)
        rows = run_sweep(spec)
        text = render(rows, spec, no_timings=no_timings)
    except click.BadParameter as e:
        _fail(e.message)
        return
    except (EntboundError, ValidationError, ValueError) as e:
        _fail(_usage_message(e))
        return

    if spec.out:
        write_output(text, spec.out)
    else:
        sys.stdout.write(text)
    _write_metrics(metrics_out)


@app.command("compare-bounds")
def compare_bounds_cmd(
    samples: Annotated[int, typer.Option("--samples", "-n", help="Número de estados aleatorios")] = 10,
    dims: Annotated[str, typer.Option("--dims", help="Dimensiones locales, p. ej. 3x3")] = "3x3",
    rank: Annotated[Optional[int], typer.Option("--rank", help="Rango de los estados aleatorios")] = None,
    separable: Annotated[bool, typer.Option("--separable", help="Mezclas de estados producto")] = False,
    seed: SeedOption = None,
    tol: TolOption = None,
    max_iter: MaxIterOption = None,
    fmt: Annotated[Optional[str], typer.Option("--format", click_type=FORMAT_CHOICES)] = None,
    out: Annotated[Optional[Path], typer.Option("--out")] = None,
    metrics_out: MetricsOption = None,
) -> None:
    """Compara lb1, lb2 (k=2,3), lb3 y lb4 sobre estados aleatorios."""
    try:
        report = compare_bounds(
            samples,
            parse_dims(dims),
            seed=app_config.DEFAULT_SEED if seed is None else seed,
            rank=rank,
            separable=separable,
            tolerance=tol,
            max_iterations=max_iter,
        )
    except (EntboundError, ValidationError, ValueError) as e:
        _fail(_usage_message(e))
        return

    table = Table(title=f"compare-bounds {dims} (n={samples})")
    for column in ("método", "evaluadas", "victorias", "fallos", "t medio [s]"):
        table.add_column(column, justify="right" if column != "método" else "left")
    for entry in report.entries:
        mean = "-" if entry.mean_wall_time_seconds is None else f"{entry.mean_wall_time_seconds:.3f}"
        label = entry.method if entry.skipped == 0 else f"{entry.method} ({SKIPPED} {entry.skipped})"
        table.add_row(label, str(entry.evaluated), str(entry.wins), str(entry.failures), mean)
    err_console.print(table)

    if fmt == "csv":
        lines = ["method,evaluated,skipped,wins,failures,mean_wall_time_seconds"]
        for e in report.entries:
            mean = "" if e.mean_wall_time_seconds is None else repr(e.mean_wall_time_seconds)
            lines.append(f"{e.method},{e.evaluated},{e.skipped},{e.wins},{e.failures},{mean}")
        text = "\n".join(lines) + "\n"
    else:
        text = report.model_dump_json(indent=2) + "\n"
    if out is not None:
        write_output(text, str(out))
    else:
        sys.stdout.write(text)
    _write_metrics(metrics_out)


@app.command("export-state")
def export_state(
    state: Annotated[str, typer.Argument(help="Constructor, p. ej. 'horodecki(0.3)'")],
    out: Annotated[Optional[Path], typer.Option("--out", help="Archivo (.json o texto)")] = None,
    fmt: Annotated[Optional[str], typer.Option("--format", click_type=click.Choice(["text", "json"]))] = None,
) -> None:
    """Escribe la matriz densidad de un constructor en formato texto o JSON."""
    try:
        loaded = load_state(state)
        rho = loaded.density() if isinstance(loaded, PureState) else loaded
        dims = rho.layout.dims
        if out is not None:
            write_matrix(out, rho.matrix, dims, fmt)
            return
        if fmt == "json":
            sys.stdout.write(json.dumps(matrix_to_json(rho.matrix, dims)) + "\n")
        else:
            sys.stdout.write(format_matrix_text(rho.matrix, dims))
    except (EntboundError, ValidationError, ValueError) as e:
        _fail(_usage_message(e))


@app.command()
def version() -> None:
    """Versión del paquete."""
    typer.echo(app_config.VERSION)


def main() -> None:
    app()


if __name__ == "__main__":
    main()
