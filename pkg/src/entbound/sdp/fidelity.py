"""
Bloque SDP de raíz de fidelidad:

    max Re Tr X   sujeto a   [[ρ, X], [X†, σ]] ⪰ 0

con X = P + iQ (P, Q hermíticas). Con σ fijo el óptimo es √F(ρ, σ).
"""

from typing import NamedTuple

import numpy as np

try:
    from ..config import config as app_config
    from ..core.errors import SdpModelError
    from .problem import Expr, SdpProblem, Variable
except ImportError:
    from entbound.config import config as app_config
    from entbound.core.errors import SdpModelError
    from entbound.sdp.problem import Expr, SdpProblem, Variable


class FidelityBlock(NamedTuple):
    p: Variable
    q: Variable
    support: int  # rango de ρ usado en el bloque

    def x_value(self, blocks: list[np.ndarray]) -> np.ndarray:
        return blocks[self.p.index] + 1j * blocks[self.q.index]


def root_fidelity_block(
    problem: SdpProblem,
    rho: np.ndarray,
    sigma: Expr,
    name: str = "fid",
    threshold: float | None = None,
) -> FidelityBlock:
    """
    Añade el bloque y el fragmento de objetivo Tr P (= Re Tr X) al problema.

    Si ρ no tiene rango completo se restringe a su soporte ρ = V D V†:
    el bloque pasa a [[D, V†X], [X†V, σ]] con la igualdad (I − VV†)X = 0.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    d = rho.shape[0]
    if rho.shape != (d, d) or sigma.shape != (d, d):
        raise SdpModelError(f"ρ {rho.shape} y σ {sigma.shape} de dimensiones incompatibles")
    if np.max(np.abs(rho - rho.conj().T)) > 1e-12:
        raise SdpModelError("ρ no es hermítica")
    if problem.sense != "max":
        raise SdpModelError("el bloque de fidelidad requiere un problema de maximización")
    threshold = app_config.RANK_THRESHOLD if threshold is None else threshold

    w, v = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    keep = w > threshold * max(w[-1], 0.0)
    p = problem.variable(f"{name}_p", d)
    q = problem.variable(f"{name}_q", d)
    x = p.expr + 1j * q.expr
    if np.all(keep):
        problem.add_psd(Expr.block([[rho, x], [x.H, sigma]]), name=name)
    else:
        vk = v[:, keep]
        y = vk.conj().T @ x
        problem.add_psd(Expr.block([[np.diag(w[keep]), y], [y.H, sigma]]), name=name)
        off_support = np.eye(d) - vk @ vk.conj().T
        problem.add_equality(off_support @ x, np.zeros((d, d)), hermitian=False)
    problem.add_objective(p, np.eye(d))
    return FidelityBlock(p, q, int(np.sum(keep)))


__all__ = ["root_fidelity_block", "FidelityBlock"]
