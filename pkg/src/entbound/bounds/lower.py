"""
Cotas inferiores SDP de E_G.

lb1: relajación PPT + bloque de raíz de fidelidad.
lb2k<k>: igual sobre una k-extensión con igualdades de marginales.
lb3 / lb4: purificación + operador X con X^A = I (reducido / sistema completo).
"""

from typing import Callable, NamedTuple, Sequence

import numpy as np

try:
    from ..config import config as app_config
    from ..core.errors import CapacityError, UsageError
    from ..core.tensor import DensityMatrix, partial_trace_array, ppt_cuts, purify
    from ..infrastructure.logging_config import get_logger, log_context
    from ..infrastructure.metrics import record_bound
    from ..sdp import Expr, SdpProblem, SdpSolution, root_fidelity_block, solve
    from .results import BoundResult
except ImportError:
    from entbound.config import config as app_config
    from entbound.core.errors import CapacityError, UsageError
    from entbound.core.tensor import DensityMatrix, partial_trace_array, ppt_cuts, purify
    from entbound.infrastructure.logging_config import get_logger, log_context
    from entbound.infrastructure.metrics import record_bound
    from entbound.sdp import Expr, SdpProblem, SdpSolution, root_fidelity_block, solve
    from entbound.bounds.results import BoundResult

logger = get_logger("bounds.lower")


class LowerModel(NamedTuple):
    """Problema SDP de una cota y la forma de leer su solución."""
    method: str
    problem: SdpProblem
    extract: Callable[[SdpSolution], tuple[float, dict[str, np.ndarray]]]


def _require_factored(rho: DensityMatrix) -> None:
    if len(rho.layout) < 2:
        raise UsageError(f"se necesitan al menos 2 subsistemas, layout {rho.layout.dims}")


def check_capacity(dim: int, what: str) -> None:
    if dim > app_config.SDP_DIMENSION_CAP:
        raise CapacityError(dim, app_config.SDP_DIMENSION_CAP, what)


def _add_ppt(problem: SdpProblem, expr: Expr, dims: Sequence[int], cut_mode: str | None) -> None:
    for cut in ppt_cuts(dims, cut_mode):
        problem.add_psd(expr.partial_transpose(dims, cut), name="ppt" + "".join(str(i) for i in cut))


def _fidelity_extract(fid, sigma_of) -> Callable:
    def extract(solution: SdpSolution):
        root = solution.objective_value
        certificate = {}
        if solution.primal_blocks:
            certificate = {"sigma": sigma_of(solution.primal_blocks), "x": fid.x_value(solution.primal_blocks)}
        return 1.0 - root * root, certificate
    return extract


# -- constructores de problemas ---------------------------------------------------------


def extension_layout(dims: Sequence[int], k: int) -> tuple[tuple[int, ...], list[int]]:
    """
    Layout de la k-extensión y subsistema de origen de cada copia extra.
    Bipartito: k−1 copias de B. Multipartito: k−1 copias alternando hacia atrás
    sobre los dos últimos subsistemas (C, B, C, ...).
    """
    dims = tuple(dims)
    m = len(dims)
    if m == 2:
        sources = [1] * (k - 1)
    else:
        sources = [m - 1 - (j % 2) for j in range(k - 1)]
    return dims + tuple(dims[s] for s in sources), sources


def extension_equalities(m: int, sources: list[int]) -> list[tuple[int, ...]]:
    """
    Órdenes de `keep` cuyas marginales deben igualar la marginal de referencia
    (0..m−1): una por copia, más la sustitución conjunta de la c-ésima copia de
    cada subsistema copiado cuando todos la tienen.
    """
    reference = list(range(m))
    keeps: list[tuple[int, ...]] = []
    copies: dict[int, list[int]] = {}
    for j, src in enumerate(sources):
        position = m + j
        copies.setdefault(src, []).append(position)
        keep = list(reference)
        keep[src] = position
        keeps.append(tuple(keep))
    copied = sorted(copies)
    if m > 2 and len(copied) > 1:
        for c in range(min(len(copies[s]) for s in copied)):
            keep = list(reference)
            for s in copied:
                keep[s] = copies[s][c]
            keeps.append(tuple(keep))
    return keeps


def build_lb1(rho: DensityMatrix, cut_mode: str | None = None) -> LowerModel:
    return build_lb2(rho, 1, cut_mode, method="lb1")


def build_lb2(rho: DensityMatrix, k: int, cut_mode: str | None = None, method: str | None = None) -> LowerModel:
    _require_factored(rho)
    if k < 1:
        raise UsageError(f"k debe ser >= 1: {k}")
    dims = rho.layout.dims
    m = len(dims)
    ext_dims, sources = extension_layout(dims, k)
    total = int(np.prod(ext_dims))
    check_capacity(total, f"extensión k={k}")

    method = method or f"lb2k{k}"
    problem = SdpProblem(name=method, sense="max")
    s = problem.variable("sigma", total)
    sigma = s.expr
    problem.add_psd(sigma, name="sigma")
    _add_ppt(problem, sigma, ext_dims, cut_mode)
    problem.add_equality(sigma.trace(), 1.0)
    reference = tuple(range(m))
    marginal = sigma.partial_trace(ext_dims, reference) if sources else sigma
    for keep in extension_equalities(m, sources):
        problem.add_equality(sigma.partial_trace(ext_dims, keep) - marginal, 0.0)
    fid = root_fidelity_block(problem, rho.matrix, marginal)

    def sigma_of(blocks):
        return partial_trace_array(blocks[s.index], ext_dims, reference) if sources else blocks[s.index]

    return LowerModel(method, problem, _fidelity_extract(fid, sigma_of))


def _purified_operator(rho: DensityMatrix, traced: int | None) -> tuple[np.ndarray, tuple[int, ...], int]:
    """(ρ' , dims, r): marginal de la purificación con la ancilla primero."""
    psi = purify(rho)
    dims = psi.layout.dims
    r = dims[0]
    projector = psi.projector()
    if traced is None:
        return projector, dims, r
    m = len(rho.layout)
    if not -m <= traced < m:
        raise UsageError(f"subsistema a trazar {traced} fuera de rango (hay {m})")
    position = 1 + (traced % m)
    keep = tuple(i for i in range(len(dims)) if i != position)
    reduced = partial_trace_array(projector, dims, keep)
    return 0.5 * (reduced + reduced.conj().T), tuple(dims[i] for i in keep), r


def build_lb_purity(
    rho: DensityMatrix, full: bool, traced: int = -1, cut_mode: str | None = None
) -> LowerModel:
    _require_factored(rho)
    method = "lb4" if full else "lb3"
    target, dims, r = _purified_operator(rho, None if full else traced)
    total = int(np.prod(dims))
    check_capacity(total, "operador X de la purificación")

    problem = SdpProblem(name=method, sense="max")
    xv = problem.variable("x", total)
    x = xv.expr
    problem.add_psd(x, name="x")
    problem.add_equality(x.partial_trace(dims, (0,)), np.eye(r))
    _add_ppt(problem, x, dims, cut_mode)
    problem.add_objective(xv, target)

    def extract(solution: SdpSolution):
        certificate = {"x": solution.primal_blocks[xv.index]} if solution.primal_blocks else {}
        return 1.0 - solution.objective_value, certificate

    return LowerModel(method, problem, extract)


def build_lower(rho: DensityMatrix, method: str, cut_mode: str | None = None) -> LowerModel:
    """Constructor por etiqueta: lb1, lb2k<k>, lb3, lb4."""
    if method == "lb1":
        return build_lb1(rho, cut_mode)
    if method.startswith("lb2k") and method[4:].isdigit():
        return build_lb2(rho, int(method[4:]), cut_mode)
    if method == "lb3":
        return build_lb_purity(rho, full=False, cut_mode=cut_mode)
    if method == "lb4":
        return build_lb_purity(rho, full=True, cut_mode=cut_mode)
    raise UsageError(f"método de cota inferior desconocido: {method!r}")


# -- resolución ----------------------------------------------------------------------------


def solve_lower(model: LowerModel, tolerance: float | None = None, max_iterations: int | None = None) -> BoundResult:
    tolerance = app_config.SDP_TOLERANCE if tolerance is None else tolerance
    with log_context(method=model.method):
        solution = solve(model.problem, tolerance, max_iterations)
    raw, certificate = model.extract(solution)
    record_bound(model.method, solution.status.value)
    if not solution.optimal:
        logger.warning(
            "cota inferior sin convergencia",
            extra={"extra_fields": {"method": model.method, "status": solution.status.value}},
        )
    return BoundResult.build(
        raw,
        direction="lower",
        method=model.method,
        certificate=certificate,
        solver_tolerance=tolerance,
        status=solution.status.value,
        iterations=solution.iterations,
        wall_time=solution.wall_time,
    )


def lb_ppt_fidelity(rho: DensityMatrix, tolerance: float | None = None, max_iterations: int | None = None,
                    cut_mode: str | None = None) -> BoundResult:
    return solve_lower(build_lb1(rho, cut_mode), tolerance, max_iterations)


def lb_k_extension(rho: DensityMatrix, k: int, tolerance: float | None = None,
                   max_iterations: int | None = None) -> BoundResult:
    return solve_lower(build_lb2(rho, k), tolerance, max_iterations)


def lb_purity_reduced(rho: DensityMatrix, tolerance: float | None = None, max_iterations: int | None = None,
                      traced: int = -1, cut_mode: str | None = None) -> BoundResult:
    return solve_lower(build_lb_purity(rho, full=False, traced=traced, cut_mode=cut_mode), tolerance, max_iterations)


def lb_purity_full(rho: DensityMatrix, tolerance: float | None = None, max_iterations: int | None = None,
                   cut_mode: str | None = None) -> BoundResult:
    return solve_lower(build_lb_purity(rho, full=True, cut_mode=cut_mode), tolerance, max_iterations)


def lower_bound(rho: DensityMatrix, method: str = "lb4", tolerance: float | None = None,
                max_iterations: int | None = None, cut_mode: str | None = None) -> BoundResult:
    return solve_lower(build_lower(rho, method, cut_mode), tolerance, max_iterations)


__all__ = [
    "LowerModel",
    "build_lower",
    "build_lb1",
    "build_lb2",
    "build_lb_purity",
    "extension_layout",
    "extension_equalities",
    "check_capacity",
    "solve_lower",
    "lb_ppt_fidelity",
    "lb_k_extension",
    "lb_purity_reduced",
    "lb_purity_full",
    "lower_bound",
]
