"""
Cota superior de E_G para estados mixtos por refinamiento de ensambles.

Cada iteración:
  1. A_ij = √(p_i q_j)⟨φ_j|ψ_i⟩, SVD A = V D W†, U = W V†, α_i = Σ_j U_ij √p_j |ψ_j⟩
     (nueva descomposición de ρ alineada con el ensamble separable);
  2. refinamiento de cada φ_i hacia ψ_i con barridos alternados;
  3. q_i ∝ p_i |⟨φ_i|ψ_i⟩|²;
  4. parar cuando F(ρ, σ) deja de crecer más que la tolerancia.
"""

import logging
from typing import NamedTuple

import numpy as np
import scipy.linalg

try:
    from ..bounds.results import BoundResult
    from ..config import config as app_config
    from ..config.models import AscentConfig
    from ..core.errors import UsageError
    from ..core.tensor import DensityMatrix, ProductState, PureState, fidelity
    from ..infrastructure.logging_config import get_logger
    from ..infrastructure.metrics import record_ascent, record_bound
    from .ensemble import Ensemble
    from .product import product_ascent, product_vectors, random_factors, sweep
except ImportError:
    from entbound.bounds.results import BoundResult
    from entbound.config import config as app_config
    from entbound.config.models import AscentConfig
    from entbound.core.errors import UsageError
    from entbound.core.tensor import DensityMatrix, ProductState, PureState, fidelity
    from entbound.infrastructure.logging_config import get_logger
    from entbound.infrastructure.metrics import record_ascent, record_bound
    from entbound.ascent.ensemble import Ensemble
    from entbound.ascent.product import product_ascent, product_vectors, random_factors, sweep

logger = get_logger("ascent.mixed")

COLLAPSE = 1e-14
MONOTONE_SLACK = 1e-12


class _Run(NamedTuple):
    fidelity: float
    weights: np.ndarray
    factors: list[np.ndarray]
    iterations: int
    converged: bool


def initial_decomposition(rho: DensityMatrix, size: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """
    Autodescomposición de ρ completada hasta `size` con estados de Haar de peso 0,
    mezclada con la DFT. Devuelve (p, Ψ) con Ψ de filas normalizadas.
    """
    w, v = rho.eigh()
    keep = w > app_config.RANK_THRESHOLD * max(w[-1], 0.0)
    rank = int(np.sum(keep))
    if size < rank:
        raise UsageError(f"ensemble_size {size} menor que el rango de ρ ({rank})")
    d = rho.dim
    scaled = np.zeros((size, d), dtype=np.complex128)
    scaled[:rank] = (np.sqrt(w[keep])[:, None] * v[:, keep].T)
    mixed = scipy.linalg.dft(size, scale="sqrtn") @ scaled
    return _normalize(mixed, rng)


def _normalize(alpha: np.ndarray, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """p_i = ⟨α_i|α_i⟩, ψ_i = α_i/‖α_i‖; miembros nulos reciben un estado aleatorio."""
    norms = np.linalg.norm(alpha, axis=1)
    psi = np.empty_like(alpha)
    nonzero = norms > COLLAPSE
    psi[nonzero] = alpha[nonzero] / norms[nonzero, None]
    if np.any(~nonzero):
        g = rng.standard_normal((int(np.sum(~nonzero)), alpha.shape[1])) * (1 + 0j)
        g += 1j * rng.standard_normal(g.shape)
        psi[~nonzero] = g / np.linalg.norm(g, axis=1, keepdims=True)
    return norms**2, psi


def _sigma(q: np.ndarray, phi: np.ndarray) -> np.ndarray:
    return (phi.T * q) @ phi.conj()


def _run(rho: DensityMatrix, config: AscentConfig, size: int, rng: np.random.Generator, trace: bool) -> _Run | None:
    dims = rho.layout.dims
    p, psi = initial_decomposition(rho, size, rng)
    factors = random_factors(rng, size, dims)
    q = rng.dirichlet(np.ones(size))
    best: _Run | None = None
    previous = -np.inf
    for iteration in range(1, config.max_iterations + 1):
        phi = product_vectors(factors)
        a = np.outer(np.sqrt(p), np.sqrt(q)) * (psi @ phi.conj().T)
        v, _, wh = np.linalg.svd(a)
        u = wh.conj().T @ v.conj().T
        p, psi = _normalize(u @ (np.sqrt(p)[:, None] * psi), rng)

        targets = psi.reshape((size,) + dims)
        for _ in range(config.inner_sweeps):
            factors, _, _ = sweep(targets, factors, rng)
        phi = product_vectors(factors)
        overlaps = np.abs(np.sum(phi.conj() * psi, axis=1)) ** 2
        weights = p * overlaps
        total = float(np.sum(weights))
        if total < COLLAPSE:
            logger.info("colapso de pesos en ub_mixed, reinicio", extra={"extra_fields": {"iteration": iteration}})
            return best
        q = weights / total
        value = fidelity(rho.matrix, _sigma(q, phi))
        delta = value - previous
        if trace:
            logger.debug(
                "iteración ascenso mixto",
                extra={"extra_fields": {"iteration": iteration, "fidelity": value, "delta": delta}},
            )
        if best is None or value > best.fidelity:
            best = _Run(value, q.copy(), [f.copy() for f in factors], iteration, False)
        if delta < -MONOTONE_SLACK:
            # Fidelidad decreciente: se devuelve el mejor iterado
            return best._replace(iterations=iteration, converged=True)
        if delta < config.tolerance:
            return best._replace(iterations=iteration, converged=True)
        previous = value
    return best._replace(iterations=config.max_iterations) if best else None


def ub_mixed(rho: DensityMatrix, config: AscentConfig | None = None) -> tuple[BoundResult, Ensemble]:
    """Cota superior 1 − F(ρ, σ) con σ separable y su ensamble certificado."""
    config = config or AscentConfig()
    dims = rho.layout.dims
    if rho.rank() == 1:
        w, v = rho.eigh()
        psi = PureState.normalized(v[:, -1], rho.layout)
        search = product_ascent(psi, config)
        status = "converged" if search.converged else "max_iterations"
        record_bound("ascent", status)
        ensemble = Ensemble.from_products([1.0], [search.state])
        return (
            BoundResult.build(
                1.0 - fidelity(rho.matrix, ensemble.density()),
                direction="upper",
                method="ascent",
                certificate={"sigma": ensemble.density()},
                solver_tolerance=config.tolerance,
                status=status,
                iterations=search.iterations,
            ),
            ensemble,
        )

    size = config.ensemble_size or rho.dim**2
    rng = np.random.default_rng(config.seed)
    trace = logger.isEnabledFor(logging.DEBUG)
    best: _Run | None = None
    iterations = 0
    for _ in range(config.restarts_for("mixed")):
        run = _run(rho, config, size, rng, trace)
        if run is None:
            continue
        iterations += run.iterations
        if best is None or run.fidelity > best.fidelity:
            best = run
    record_ascent("mixed")
    if best is None:
        record_bound("ascent", "numerical_failure")
        raise UsageError("ub_mixed: todos los reinicios colapsaron")

    keep = best.weights > 0.0
    products = [ProductState(factors=[f[i] for f in best.factors]) for i in np.flatnonzero(keep)]
    ensemble = Ensemble.from_products(best.weights[keep], products)
    sigma = ensemble.density()
    status = "converged" if best.converged else "max_iterations"
    record_bound("ascent", status)
    bound = BoundResult.build(
        1.0 - fidelity(rho.matrix, sigma),
        direction="upper",
        method="ascent",
        certificate={"sigma": sigma},
        solver_tolerance=config.tolerance,
        status=status,
        iterations=iterations,
    )
    logger.info(
        "ub_mixed terminado",
        extra={"extra_fields": {"dims": list(dims), "value": bound.value, "iterations": iterations}},
    )
    return bound, ensemble


__all__ = ["ub_mixed", "initial_decomposition"]
