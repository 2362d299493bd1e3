"""
Constructores de estados accesibles por nombre desde la CLI.

Una especificación es una llamada con argumentos literales, p. ej. "ghz(3)",
"horodecki(0.3)" o "thermal_xx(beta=0.7, J=-1)". Si el texto es la ruta de un
archivo existente se lee como matriz densidad.
"""

import ast
from pathlib import Path
from typing import Any, Callable, Dict, Union

import numpy as np

try:
    from ..core.errors import UsageError
    from ..core.matrix_io import read_density_matrix
    from ..core.tensor import (
        DensityMatrix,
        PureState,
        random_density_matrix,
        random_pure_state,
        random_separable_state,
    )
    from ..infrastructure.logging_config import get_logger
    from . import library, spin
    from .channels import amplitude_damping, apply_local_channel, depolarizing
except ImportError:
    from entbound.core.errors import UsageError
    from entbound.core.matrix_io import read_density_matrix
    from entbound.core.tensor import (
        DensityMatrix,
        PureState,
        random_density_matrix,
        random_pure_state,
        random_separable_state,
    )
    from entbound.infrastructure.logging_config import get_logger
    from entbound.states import library, spin
    from entbound.states.channels import amplitude_damping, apply_local_channel, depolarizing

logger = get_logger("states.registry")

State = Union[PureState, DensityMatrix]

CHANNELS = {"ad": amplitude_damping, "dep": depolarizing}
PURE_FAMILIES = {"ghz": library.ghz, "w": library.w}


def noisy(state: str = "ghz", channel: str = "ad", parameter: float = 0.0, n: int = 3) -> DensityMatrix:
    """GHZ o W de n qubits con el mismo canal local en todos los sitios."""
    if state not in PURE_FAMILIES:
        raise UsageError(f"estado base desconocido: {state!r} (válidos: ghz, w)")
    if channel not in CHANNELS:
        raise UsageError(f"canal desconocido: {channel!r} (válidos: ad, dep)")
    rho = PURE_FAMILIES[state](n).density()
    return apply_local_channel(CHANNELS[channel](parameter), rho)


def _dims(dims) -> tuple[int, ...]:
    if isinstance(dims, str):
        return tuple(int(d) for d in dims.lower().split("x"))
    return tuple(int(d) for d in dims)


def random_density(dims="3x3", rank: int | None = None, seed: int = 0) -> DensityMatrix:
    dims = _dims(dims)
    total = int(np.prod(dims))
    return random_density_matrix(total, rank or total, seed, dims)


def random_pure(dims="2x2x2", seed: int = 0) -> PureState:
    return random_pure_state(_dims(dims), seed)


def random_separable(dims="3x3", terms: int = 4, seed: int = 0) -> DensityMatrix:
    return random_separable_state(_dims(dims), terms, seed)


CONSTRUCTORS: Dict[str, Callable[..., State]] = {
    "horodecki": library.horodecki_3x3,
    "ghz": library.ghz,
    "w": library.w,
    "ghz_w": library.ghz_w_mixture,
    "bell": library.bell,
    "product": library.product_basis,
    "werner": library.werner,
    "m32": library.m32,
    "hr1": library.hr1,
    "hr0": library.hr0,
    "sigma_star": library.sigma_star,
    "xxx_reference": spin.xxx_reference_state,
    "thermal_xx": spin.thermal_xx,
    "thermal_xxx": spin.thermal_xxx,
    "thermal_hexagon": spin.thermal_hexagon,
    "hexagon_bdf": spin.hexagon_bdf,
    "ground_xxx": spin.ground_xxx,
    "xxx_closed_form": spin.xxx_closed_form,
    "noisy": noisy,
    "random_density": random_density,
    "random_pure": random_pure,
    "random_separable": random_separable,
}


def _literal(node: ast.AST) -> Any:
    try:
        return ast.literal_eval(node)
    except (ValueError, SyntaxError):
        raise UsageError(f"argumento no literal: {ast.unparse(node)!r}")


def parse_constructor(text: str) -> tuple[str, list[Any], dict[str, Any]]:
    """"name(args, key=value)" → (name, args, kwargs). Solo se aceptan literales."""
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as e:
        raise UsageError(f"constructor inválido {text!r}: {e.msg}")
    node = tree.body
    if isinstance(node, ast.Name):
        return node.id, [], {}
    if not isinstance(node, ast.Call) or not isinstance(node.func, ast.Name):
        raise UsageError(f"se esperaba una llamada nombre(...): {text!r}")
    args = [_literal(a) for a in node.args]
    kwargs = {}
    for kw in node.keywords:
        if kw.arg is None:
            raise UsageError("no se admite **kwargs en un constructor")
        kwargs[kw.arg] = _literal(kw.value)
    return node.func.id, args, kwargs


def build_state(text: str) -> State:
    name, args, kwargs = parse_constructor(text)
    if name not in CONSTRUCTORS:
        raise UsageError(f"constructor desconocido: {name!r} (disponibles: {', '.join(sorted(CONSTRUCTORS))})")
    try:
        state = CONSTRUCTORS[name](*args, **kwargs)
    except TypeError as e:
        raise UsageError(f"{name}: {e}")
    logger.debug("estado construido", extra={"extra_fields": {"spec": text, "dims": list(state.layout.dims)}})
    return state


def load_state(spec: str) -> State:
    """Ruta de archivo de matriz (texto o JSON) o especificación de constructor."""
    path = Path(spec)
    if path.suffix.lower() in (".json", ".txt", ".mat") or path.is_file():
        if not path.is_file():
            raise UsageError(f"no existe el archivo {spec!r}")
        return read_density_matrix(path)
    return build_state(spec)


__all__ = [
    "CONSTRUCTORS",
    "State",
    "noisy",
    "random_density",
    "random_pure",
    "random_separable",
    "parse_constructor",
    "build_state",
    "load_state",
]
