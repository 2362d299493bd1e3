"""
Experimentos de barrido: cada uno construye el estado de un punto de la rejilla
y las columnas extra de su fila.
"""

from typing import Any, Callable, Dict, NamedTuple

import numpy as np

try:
    from ..bounds.exact import exact_two_qubit
    from ..config.models import SweepGrid
    from ..core.errors import UsageError
    from ..core.matrix_io import read_density_matrix
    from ..core.tensor import DensityMatrix, negativity, negativity_profile, partial_trace
    from ..states import library, spin
    from ..states.registry import noisy
except ImportError:
    from entbound.bounds.exact import exact_two_qubit
    from entbound.config.models import SweepGrid
    from entbound.core.errors import UsageError
    from entbound.core.matrix_io import read_density_matrix
    from entbound.core.tensor import DensityMatrix, negativity, negativity_profile, partial_trace
    from entbound.states import library, spin
    from entbound.states.registry import noisy

Builder = Callable[[float, Dict[str, Any]], tuple[DensityMatrix, Dict[str, Any]]]

HEXAGON_PAIRS = {"B|D": (0, 1), "B|F": (0, 2), "D|F": (1, 2)}


class Experiment(NamedTuple):
    name: str
    param_name: str
    default_grid: SweepGrid
    build: Builder


def _grid(name: str, start: float, stop: float, step: float) -> SweepGrid:
    return SweepGrid(name=name, start=start, stop=stop, step=step)


def _horodecki(a: float, options: Dict[str, Any]) -> tuple[DensityMatrix, Dict[str, Any]]:
    rho = library.horodecki_3x3(a)
    return rho, {"negativity": negativity(rho, (0,))}


def _ghz_w_mix(p: float, options: Dict[str, Any]) -> tuple[DensityMatrix, Dict[str, Any]]:
    n = int(options.get("n", 3))
    return library.ghz_w_mixture(p, n), {"n": n}


def _xx_thermal(beta: float, options: Dict[str, Any]) -> tuple[DensityMatrix, Dict[str, Any]]:
    J = float(options.get("J", 1.0))
    n = int(options.get("n", 3))
    rho = spin.thermal_xx(beta, J=J, n=n)
    profile = negativity_profile(rho)
    return rho, {"J": J, "min_negativity": min(profile.values()), "max_negativity": max(profile.values())}


def _xx_ppt_window(beta: float, options: Dict[str, Any]) -> tuple[DensityMatrix, Dict[str, Any]]:
    J = float(options.get("J", -1.0))
    rho = spin.thermal_xx(beta, J=J, n=int(options.get("n", 3)))
    profile = negativity_profile(rho, options.get("cuts"))
    ppt = all(v <= float(options.get("ppt_tolerance", 1e-9)) for v in profile.values())
    return rho, {"J": J, "negativity": profile, "ppt": ppt}


def _xxx_field(h: float, options: Dict[str, Any]) -> tuple[DensityMatrix, Dict[str, Any]]:
    J = float(options.get("J", -1.0))
    if options.get("ground", False):
        return spin.ground_xxx(h, J=J), {"J": J, "beta": "inf"}
    beta = float(options.get("beta", 5.0))
    return spin.thermal_xxx(beta, h=h, J=J), {"J": J, "beta": beta}


def _xxx_beta(beta: float, options: Dict[str, Any]) -> tuple[DensityMatrix, Dict[str, Any]]:
    J = float(options.get("J", -1.0))
    h = float(options.get("h", 1.0))
    return spin.thermal_xxx(beta, h=h, J=J), {"J": J, "h": h}


def _hexagon(h: float, options: Dict[str, Any]) -> tuple[DensityMatrix, Dict[str, Any]]:
    beta = float(options.get("beta", 5.0))
    rho = spin.hexagon_bdf(beta, h, J=float(options.get("J", 1.0)))
    pairwise = {label: exact_two_qubit(partial_trace(rho, pair)) for label, pair in HEXAGON_PAIRS.items()}
    return rho, {"beta": beta, "pairwise": pairwise}


def _noise(channel: str) -> Builder:
    def build(parameter: float, options: Dict[str, Any]) -> tuple[DensityMatrix, Dict[str, Any]]:
        state = options.get("state", "ghz")
        n = int(options.get("n", 3))
        return noisy(state, channel, parameter, n), {"state": state, "n": n}

    return build


def _custom_file(index: float, options: Dict[str, Any]) -> tuple[DensityMatrix, Dict[str, Any]]:
    files = options.get("files") or ([options["file"]] if "file" in options else [])
    if not files:
        raise UsageError("custom-file necesita options.file u options.files")
    i = int(round(index))
    if not 0 <= i < len(files):
        raise UsageError(f"índice {i} fuera de la lista de archivos ({len(files)})")
    return read_density_matrix(files[i]), {"file": str(files[i])}


def _xxx_beta_grid() -> SweepGrid:
    coarse = _grid("beta", 0.3, 6.0, 0.05).points()
    fine = [p for p in _grid("beta", 6.0, 10.0, 0.1).points() if p > coarse[-1] + 1e-9]
    return SweepGrid(name="beta", values=coarse + fine)


EXPERIMENTS: Dict[str, Experiment] = {
    "horodecki": Experiment("horodecki", "a", _grid("a", 0.01, 1.0, 0.01), _horodecki),
    "ghz-w-mix": Experiment("ghz-w-mix", "p", _grid("p", 0.0, 1.0, 0.05), _ghz_w_mix),
    "xx-thermal": Experiment("xx-thermal", "beta", _grid("beta", 0.3, 2.0, 0.01), _xx_thermal),
    "xx-ppt-window": Experiment("xx-ppt-window", "beta", _grid("beta", 0.6, 0.85, 0.01), _xx_ppt_window),
    "xxx-field": Experiment("xxx-field", "h", _grid("h", 0.0, 3.0, 0.05), _xxx_field),
    "xxx-beta": Experiment("xxx-beta", "beta", _xxx_beta_grid(), _xxx_beta),
    "hexagon": Experiment("hexagon", "h", _grid("h", 0.0, 2.0, 0.05), _hexagon),
    "noise-ad": Experiment("noise-ad", "q", _grid("q", 0.0, 0.9, 0.1), _noise("ad")),
    "noise-dep": Experiment("noise-dep", "p", _grid("p", 0.1, 0.9, 0.1), _noise("dep")),
    "custom-file": Experiment("custom-file", "index", SweepGrid(name="index", values=[0.0]), _custom_file),
}


def get_experiment(name: str) -> Experiment:
    if name not in EXPERIMENTS:
        raise UsageError(f"experimento desconocido: {name!r}")
    return EXPERIMENTS[name]


def grid_points(experiment: Experiment, grid: SweepGrid | None) -> tuple[str, list[float]]:
    grid = grid or experiment.default_grid
    return grid.name or experiment.param_name, grid.points()


def jsonable(value: Any) -> Any:
    """Convierte escalares numpy y dicts anidados a tipos JSON."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        return float(value)
    return value


__all__ = ["Experiment", "EXPERIMENTS", "get_experiment", "grid_points", "jsonable", "HEXAGON_PAIRS"]
