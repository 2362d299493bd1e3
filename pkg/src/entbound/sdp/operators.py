"""
Operadores lineales dispersos sobre vec(X) (orden por filas) que usa la capa de
modelado: traspuesta, traspuesta parcial, traza parcial ordenada, colocación de
bloques. Se memorizan con cachetools: los mismos operadores se repiten en cada
punto de un barrido.
"""

from typing import Sequence

import numpy as np
import scipy.sparse as sp
from cachetools import LRUCache, cached

_OPERATOR_CACHE: LRUCache = LRUCache(maxsize=512)


def _freeze(op: sp.csr_matrix) -> sp.csr_matrix:
    # Compartido entre llamadas: solo lectura por convención
    op.sum_duplicates()
    return op


def _permutation(perm: np.ndarray) -> sp.csr_matrix:
    n = perm.shape[0]
    return sp.csr_matrix((np.ones(n, dtype=np.complex128), (np.arange(n), perm)), shape=(n, n))


@cached(cache=_OPERATOR_CACHE, key=lambda rows, cols: ("transpose", rows, cols))
def transpose_operator(rows: int, cols: int) -> sp.csr_matrix:
    """vec(Xᵀ) = P vec(X) para X de rows x cols."""
    perm = np.arange(rows * cols).reshape(rows, cols).T.reshape(-1)
    return _freeze(_permutation(perm))


@cached(cache=_OPERATOR_CACHE, key=lambda dims, systems: ("ptranspose", dims, systems))
def partial_transpose_operator(dims: tuple[int, ...], systems: tuple[int, ...]) -> sp.csr_matrix:
    m = len(dims)
    axes = list(range(2 * m))
    for i in systems:
        axes[i], axes[m + i] = axes[m + i], axes[i]
    perm = np.arange(int(np.prod(dims)) ** 2).reshape(dims + dims).transpose(axes).reshape(-1)
    return _freeze(_permutation(perm))


@cached(cache=_OPERATOR_CACHE, key=lambda dims, keep: ("ptrace", dims, keep))
def partial_trace_operator(dims: tuple[int, ...], keep: tuple[int, ...]) -> sp.csr_matrix:
    """
    Traza parcial que conserva `keep` EN EL ORDEN DADO (permite reetiquetar
    copias en las extensiones simétricas).
    """
    m = len(dims)
    traced = [i for i in range(m) if i not in keep]
    dk = int(np.prod([dims[i] for i in keep]))
    dt = int(np.prod([dims[i] for i in traced])) if traced else 1
    perm = list(keep) + traced + [m + i for i in keep] + [m + i for i in traced]
    index = np.arange(int(np.prod(dims)) ** 2).reshape(dims + dims).transpose(perm)
    index = index.reshape(dk, dt, dk, dt)
    t = np.arange(dt)
    cols = index[:, t, :, t]  # (dt, dk, dk)
    rows = np.broadcast_to(np.arange(dk * dk).reshape(1, dk, dk), cols.shape)
    op = sp.csr_matrix(
        (np.ones(cols.size, dtype=np.complex128), (rows.reshape(-1), cols.reshape(-1))),
        shape=(dk * dk, int(np.prod(dims)) ** 2),
    )
    return _freeze(op)


@cached(
    cache=_OPERATOR_CACHE,
    key=lambda out_shape, offset, in_shape: ("place", out_shape, offset, in_shape),
)
def placement_operator(
    out_shape: tuple[int, int], offset: tuple[int, int], in_shape: tuple[int, int]
) -> sp.csr_matrix:
    """Coloca un bloque in_shape en la posición offset de una matriz out_shape."""
    r, c = in_shape
    ii, jj = np.meshgrid(np.arange(r), np.arange(c), indexing="ij")
    rows = ((ii + offset[0]) * out_shape[1] + (jj + offset[1])).reshape(-1)
    cols = (ii * c + jj).reshape(-1)
    op = sp.csr_matrix(
        (np.ones(r * c, dtype=np.complex128), (rows, cols)),
        shape=(out_shape[0] * out_shape[1], r * c),
    )
    return _freeze(op)


def selection_operator(
    in_shape: tuple[int, int], offset: tuple[int, int], out_shape: tuple[int, int]
) -> sp.csr_matrix:
    """Extrae el sub-bloque out_shape en offset (adjunto de la colocación)."""
    return placement_operator(in_shape, offset, out_shape).T.tocsr()


def trace_operator(n: int) -> sp.csr_matrix:
    return sp.csr_matrix(
        (np.ones(n, dtype=np.complex128), (np.zeros(n, dtype=int), np.arange(n) * (n + 1))),
        shape=(1, n * n),
    )


def left_multiply_operator(a: np.ndarray, cols: int) -> sp.csr_matrix:
    """vec(A U) = (A ⊗ I) vec(U)."""
    return sp.kron(sp.csr_matrix(a), sp.identity(cols, dtype=np.complex128), format="csr")


def right_multiply_operator(b: np.ndarray, rows: int) -> sp.csr_matrix:
    """vec(U B) = (I ⊗ Bᵀ) vec(U)."""
    return sp.kron(sp.identity(rows, dtype=np.complex128), sp.csr_matrix(b.T), format="csr")


def dims_key(dims: Sequence[int]) -> tuple[int, ...]:
    return tuple(int(d) for d in dims)


__all__ = [
    "transpose_operator",
    "partial_transpose_operator",
    "partial_trace_operator",
    "placement_operator",
    "selection_operator",
    "trace_operator",
    "left_multiply_operator",
    "right_multiply_operator",
    "dims_key",
]
