"""
Estado producto más cercano a un estado puro por actualizaciones alternadas.

Los reinicios se procesan como un lote: cada factor tiene forma (lote, d_i) y
las contracciones se hacen con np.einsum sobre todos los miembros a la vez.
"""

import logging
from typing import NamedTuple, Sequence

import numpy as np

try:
    from ..config.models import AscentConfig
    from ..core.errors import UsageError
    from ..core.tensor import ProductState, PureState
    from ..infrastructure.logging_config import get_logger
    from ..infrastructure.metrics import record_ascent, record_bound
    from ..bounds.results import BoundResult
except ImportError:
    from entbound.config.models import AscentConfig
    from entbound.core.errors import UsageError
    from entbound.core.tensor import ProductState, PureState
    from entbound.infrastructure.logging_config import get_logger
    from entbound.infrastructure.metrics import record_ascent, record_bound
    from entbound.bounds.results import BoundResult

logger = get_logger("ascent.product")

ZERO_CONTRACTION = 1e-14


class ProductSearch(NamedTuple):
    state: ProductState
    overlap: float
    iterations: int
    restart_events: int
    converged: bool


def random_factors(rng: np.random.Generator, batch: int, dims: Sequence[int]) -> list[np.ndarray]:
    factors = []
    for d in dims:
        f = rng.standard_normal((batch, d)) + 1j * rng.standard_normal((batch, d))
        factors.append(f / np.linalg.norm(f, axis=1, keepdims=True))
    return factors


def contract_except(targets: np.ndarray, factors: list[np.ndarray], i: int) -> np.ndarray:
    """v_i = ⟨⊗_{j≠i} φ_j| ψ⟩ por miembro del lote; targets (B, d_1, ..., d_M)."""
    m = len(factors)
    batch = m
    operands: list = [targets, [batch] + list(range(m))]
    for j, f in enumerate(factors):
        if j != i:
            operands += [f.conj(), [batch, j]]
    operands.append([batch, i])
    return np.einsum(*operands, optimize=True)


def product_vectors(factors: list[np.ndarray]) -> np.ndarray:
    """Vectores producto (B, Πd) con el subsistema 0 como factor más significativo."""
    out = factors[0]
    for f in factors[1:]:
        out = (out[:, :, None] * f[:, None, :]).reshape(out.shape[0], -1)
    return out


def sweep(
    targets: np.ndarray, factors: list[np.ndarray], rng: np.random.Generator
) -> tuple[list[np.ndarray], np.ndarray, int]:
    """
    Una pasada completa i = 1..M. Devuelve (factores, |⟨φ|ψ⟩| por miembro,
    número de contracciones nulas re-aleatorizadas).
    """
    events = 0
    norms = np.zeros(targets.shape[0])
    for i in range(len(factors)):
        v = contract_except(targets, factors, i)
        norms = np.linalg.norm(v, axis=1)
        zero = norms < ZERO_CONTRACTION
        updated = np.empty_like(v)
        updated[~zero] = v[~zero] / norms[~zero, None]
        if np.any(zero):
            events += int(np.sum(zero))
            updated[zero] = random_factors(rng, int(np.sum(zero)), [v.shape[1]])[0]
        factors[i] = updated
    return factors, norms, events


def product_ascent(psi: PureState, config: AscentConfig | None = None) -> ProductSearch:
    config = config or AscentConfig()
    dims = psi.layout.dims
    if len(dims) < 2:
        raise UsageError(f"el ascenso necesita al menos 2 subsistemas, layout {dims}")
    restarts = config.restarts_for("pure")
    rng = np.random.default_rng(config.seed)
    target = psi.tensor()
    targets = np.broadcast_to(target, (restarts,) + target.shape)
    factors = random_factors(rng, restarts, dims)
    trace = logger.isEnabledFor(logging.DEBUG)

    previous = np.full(restarts, -np.inf)
    overlaps = np.zeros(restarts)
    events = 0
    converged = False
    iterations = 0
    for iterations in range(1, config.max_iterations + 1):
        factors, overlaps, zero_events = sweep(targets, factors, rng)
        events += zero_events
        delta = overlaps - previous
        if trace:
            logger.debug(
                "iteración ascenso puro",
                extra={"extra_fields": {
                    "iteration": iterations, "overlap": float(np.max(overlaps)),
                    "delta": float(np.max(delta)),
                }},
            )
        if zero_events == 0 and np.all(delta < config.tolerance):
            converged = True
            break
        previous = overlaps

    # np.argmax devuelve el primero entre empates
    best = int(np.argmax(overlaps))
    state = ProductState(factors=[f[best] for f in factors])
    overlap = float(min(1.0, abs(np.vdot(state.vector(), psi.amplitudes))))
    record_ascent("pure")
    return ProductSearch(state, overlap, iterations, events, converged)


def closest_product_state(psi: PureState, config: AscentConfig | None = None) -> tuple[ProductState, float]:
    """(φ, |⟨φ|ψ⟩|); 1 − overlap² es una cota superior de E_G(ψ)."""
    search = product_ascent(psi, config)
    return search.state, search.overlap


def ub_pure(psi: PureState, config: AscentConfig | None = None) -> BoundResult:
    config = config or AscentConfig()
    search = product_ascent(psi, config)
    status = "converged" if search.converged else "max_iterations"
    record_bound("ascent", status)
    return BoundResult.build(
        1.0 - search.overlap**2,
        direction="upper",
        method="ascent",
        certificate={"product": search.state.vector()},
        solver_tolerance=config.tolerance,
        status=status,
        iterations=search.iterations,
    )


__all__ = [
    "closest_product_state",
    "product_ascent",
    "ub_pure",
    "ProductSearch",
    "sweep",
    "random_factors",
    "product_vectors",
    "contract_except",
]
