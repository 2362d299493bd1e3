"""
Inmersión real de un SDP hermítico: cada bloque X (n x n) se sustituye por
Y = [[Re X, −Im X], [Im X, Re X]] (2n x 2n, simétrico real).
"""

from typing import NamedTuple

import numpy as np
import scipy.sparse as sp

try:
    from . import operators as ops
    from .problem import Expr, SdpProblem
except ImportError:
    from entbound.sdp import operators as ops
    from entbound.sdp.problem import Expr, SdpProblem


def embed_matrix(m: np.ndarray) -> np.ndarray:
    """[[Re M, −Im M], [Im M, Re M]]; los autovalores de M aparecen duplicados."""
    m = np.asarray(m, dtype=np.complex128)
    return np.block([[m.real, -m.imag], [m.imag, m.real]]).astype(np.complex128)


def _recover_operator(n: int) -> sp.csr_matrix:
    """vec X = ½(Y11 + Y22) + (i/2)(Y21 − Y12) como operador sobre vec Y."""
    big = (2 * n, 2 * n)
    shape = (n, n)
    s11 = ops.selection_operator(big, (0, 0), shape)
    s12 = ops.selection_operator(big, (0, n), shape)
    s21 = ops.selection_operator(big, (n, 0), shape)
    s22 = ops.selection_operator(big, (n, n), shape)
    return (0.5 * (s11 + s22) + 0.5j * (s21 - s12)).tocsr()


def _embed_output(shape: tuple[int, int]) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    """Operadores que colocan Re U y Im U en la matriz real 2r x 2c."""
    big = (2 * shape[0], 2 * shape[1])
    p11 = ops.placement_operator(big, (0, 0), shape)
    p12 = ops.placement_operator(big, (0, shape[1]), shape)
    p21 = ops.placement_operator(big, (shape[0], 0), shape)
    p22 = ops.placement_operator(big, (shape[0], shape[1]), shape)
    return (p11 + p22).tocsr(), (p21 - p12).tocsr()


class RealEmbedding(NamedTuple):
    problem: SdpProblem
    dims: tuple[int, ...]

    def complex_blocks(self, blocks: list[np.ndarray]) -> list[np.ndarray]:
        """Mapa inverso: bloques reales 2n → bloques hermíticos n."""
        out = []
        for y, n in zip(blocks, self.dims):
            y = np.real(y)
            x = 0.5 * (y[:n, :n] + y[n:, n:]) + 0.5j * (y[n:, :n] - y[:n, n:])
            out.append(0.5 * (x + x.conj().T))
        return out


def embed_complex(problem: SdpProblem) -> RealEmbedding:
    """SDP real simétrico equivalente (mismo valor óptimo)."""
    embedded = SdpProblem(name=f"{problem.name}-real", sense=problem.sense, field="real")
    recover = {}
    for var in problem.variables:
        new = embedded.variable(f"{var.name}_re", 2 * var.dim)
        recover[var.index] = _recover_operator(var.dim)
        n = var.dim
        y = new.expr
        embedded.add_equality(y[0:n, 0:n] - y[n:, n:], np.zeros((n, n)), hermitian=True)
        if problem.field == "complex":
            embedded.add_equality(y[0:n, n:] + y[0:n, n:].T, np.zeros((n, n)), hermitian=False)
        else:
            embedded.add_equality(y[0:n, n:], np.zeros((n, n)), hermitian=False)

    def lift(expr: Expr) -> Expr:
        e_re, e_im = _embed_output(expr.shape)
        terms = {}
        for k, op in expr.terms.items():
            composed = (op @ recover[k]).tocsr()
            real_part = sp.csr_matrix(composed.real, dtype=np.complex128)
            imag_part = sp.csr_matrix(composed.imag, dtype=np.complex128)
            terms[k] = (e_re @ real_part + e_im @ imag_part).tocsr()
        constant = None if expr.constant is None else embed_matrix(expr.constant)
        return Expr((2 * expr.shape[0], 2 * expr.shape[1]), terms, constant)

    for k, coeff in problem.objective.items():
        embedded.add_objective(embedded.variables[k], 0.5 * embed_matrix(coeff))
    for name, expr in problem.cones:
        embedded.add_psd(lift(expr), name=name)
    for expr, rhs, hermitian in problem.equalities:
        embedded.add_equality(lift(expr), embed_matrix(rhs), hermitian=hermitian)
    return RealEmbedding(embedded, tuple(v.dim for v in problem.variables))


__all__ = ["embed_complex", "embed_matrix", "RealEmbedding"]
