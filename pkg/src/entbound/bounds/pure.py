"""
Estimador SDP para estados puros: relajación PPT sobre la marginal sin el
último subsistema, con radio de precisión factor·√ε.
"""

import numpy as np

try:
    from ..config import config as app_config
    from ..core.errors import UsageError
    from ..core.tensor import PureState, partial_trace_array, ppt_cuts
    from ..infrastructure.metrics import record_bound
    from ..sdp import SdpProblem, solve
    from .lower import LowerModel, check_capacity
    from .results import PureEstimate
except ImportError:
    from entbound.config import config as app_config
    from entbound.core.errors import UsageError
    from entbound.core.tensor import PureState, partial_trace_array, ppt_cuts
    from entbound.infrastructure.metrics import record_bound
    from entbound.sdp import SdpProblem, solve
    from entbound.bounds.lower import LowerModel, check_capacity
    from entbound.bounds.results import PureEstimate

# Radio certificado: "m-1" -> 4(M−1)√ε, "m-2" -> 4(M−2)√ε
ACCURACY_FACTORS = {
    "m-1": lambda m: 4.0 * (m - 1),
    "m-2": lambda m: 4.0 * (m - 2),
}


def accuracy_factor(parties: int, mode: str | None = None) -> float:
    mode = mode or app_config.PURE_ACCURACY
    if mode not in ACCURACY_FACTORS:
        raise UsageError(f"factor de precisión desconocido: {mode!r} (use 'm-1' o 'm-2')")
    return ACCURACY_FACTORS[mode](parties)


def build_pure(psi: PureState, cut_mode: str | None = None) -> LowerModel:
    dims = psi.layout.dims
    if len(dims) < 2:
        raise UsageError(f"el estimador puro necesita al menos 2 subsistemas, layout {dims}")
    kept = dims[:-1]
    total = int(np.prod(kept))
    check_capacity(total, "marginal del estado puro")
    reduced = partial_trace_array(psi.projector(), dims, tuple(range(len(kept))))
    reduced = 0.5 * (reduced + reduced.conj().T)

    problem = SdpProblem(name="pure", sense="max")
    s = problem.variable("sigma", total)
    sigma = s.expr
    problem.add_psd(sigma, name="sigma")
    for cut in ppt_cuts(kept, cut_mode):
        problem.add_psd(sigma.partial_transpose(kept, cut), name="ppt" + "".join(str(i) for i in cut))
    problem.add_equality(sigma.trace(), 1.0)
    problem.add_objective(s, reduced)

    def extract(solution):
        certificate = {"sigma": solution.primal_blocks[s.index]} if solution.primal_blocks else {}
        return 1.0 - solution.objective_value, certificate

    return LowerModel("pure", problem, extract)


def pure_sdp_estimate(
    psi: PureState,
    tolerance: float | None = None,
    max_iterations: int | None = None,
    accuracy_mode: str | None = None,
    cut_mode: str | None = None,
) -> PureEstimate:
    tolerance = app_config.SDP_TOLERANCE if tolerance is None else tolerance
    factor = accuracy_factor(len(psi.layout), accuracy_mode)
    model = build_pure(psi, cut_mode)
    solution = solve(model.problem, tolerance, max_iterations)
    value, certificate = model.extract(solution)
    record_bound("pure", solution.status.value)
    sigma = certificate.get("sigma")
    if sigma is not None:
        lam_max = float(np.linalg.eigvalsh(sigma)[-1])
        epsilon = float(np.clip(1.0 - lam_max, 0.0, 1.0))
    else:
        epsilon = float("nan")
    return PureEstimate(
        value=value,
        epsilon=epsilon,
        accuracy=factor * float(np.sqrt(epsilon)),
        factor=factor,
        status=solution.status.value,
        solver_tolerance=tolerance,
        iterations=solution.iterations,
        wall_time=solution.wall_time,
        sigma=sigma,
    )


__all__ = ["pure_sdp_estimate", "build_pure", "accuracy_factor", "ACCURACY_FACTORS"]
