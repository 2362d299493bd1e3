"""
Capa de modelado SDP: variables hermíticas por bloques, expresiones afines,
restricciones de igualdad y de imagen semidefinida positiva.

Una expresión es Σ_v op_v · vec(X_v) + C con op_v disperso (vec por filas).
`compile()` la traduce a la forma cónica estándar que consume el solver:

    minimizar cᵀx  sujeto a  G x + s = h,  s ⪰ 0 (bloques hermíticos),  A x = b

con x real: cada bloque hermítico n x n se parametriza con una base ortonormal
de n² reales (n(n+1)/2 en el cuerpo real).
"""

from math import isqrt
from numbers import Number
from typing import Iterable, NamedTuple, Sequence

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from cachetools import LRUCache, cached

try:
    from ..core.errors import SdpModelError
    from . import operators as ops
except ImportError:
    from entbound.core.errors import SdpModelError
    from entbound.sdp import operators as ops

COEFFICIENT_TOL = 1e-12
IMAGE_TOL = 1e-9
RANK_TOL = 1e-10
CONSISTENCY_TOL = 1e-8


@cached(cache=LRUCache(maxsize=128), key=lambda n, field: (n, field))
def hermitian_basis(n: int, field: str = "complex") -> sp.csc_matrix:
    """
    Base ortonormal (producto interno Re Tr(A†B)) de las matrices hermíticas n x n,
    como columnas de vec(B_k): diagonal, luego (E_ab+E_ba)/√2, luego i(E_ab−E_ba)/√2.
    En el cuerpo real solo diagonal y parte simétrica.
    """
    a, b = np.triu_indices(n, 1)
    m = a.size
    s = 1.0 / np.sqrt(2.0)
    rows = [np.arange(n) * (n + 1), a * n + b, b * n + a]
    cols = [np.arange(n), n + np.arange(m), n + np.arange(m)]
    vals = [np.ones(n, dtype=np.complex128), np.full(m, s, dtype=np.complex128), np.full(m, s, dtype=np.complex128)]
    count = n + m
    if field == "complex":
        rows += [a * n + b, b * n + a]
        cols += [n + m + np.arange(m), n + m + np.arange(m)]
        vals += [np.full(m, 1j * s), np.full(m, -1j * s)]
        count += m
    elif field != "real":
        raise SdpModelError(f"cuerpo desconocido: {field!r}")
    return sp.csc_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n * n, count),
    )


class Variable(NamedTuple):
    index: int
    name: str
    dim: int

    @property
    def expr(self) -> "Expr":
        return Expr.of_variable(self)


def _vec(matrix: np.ndarray) -> np.ndarray:
    return np.asarray(matrix, dtype=np.complex128).reshape(-1)


class Expr:
    """Expresión afín matricial en las variables del problema."""

    # ndarray (+, @) Expr debe delegar en Expr
    __array_ufunc__ = None

    def __init__(self, shape, terms=None, constant=None):
        self.shape = (int(shape[0]), int(shape[1]))
        self.terms: dict[int, sp.csr_matrix] = dict(terms or {})
        self.constant = None
        if constant is not None:
            self.constant = np.asarray(constant, dtype=np.complex128).reshape(self.shape)

    # -- construcción ------------------------------------------------------------

    @classmethod
    def of_variable(cls, var: Variable) -> "Expr":
        n = var.dim
        return cls((n, n), {var.index: sp.identity(n * n, dtype=np.complex128, format="csr")})

    @classmethod
    def const(cls, matrix) -> "Expr":
        matrix = np.atleast_2d(np.asarray(matrix, dtype=np.complex128))
        return cls(matrix.shape, constant=matrix)

    def _as_expr(self, other) -> "Expr":
        if isinstance(other, Expr):
            expr = other
        elif isinstance(other, Number):
            if other != 0:
                raise SdpModelError("solo se suma el escalar 0 a una expresión matricial")
            return Expr(self.shape)
        else:
            expr = Expr.const(other)
        if expr.shape != self.shape:
            raise SdpModelError(f"formas incompatibles {self.shape} y {expr.shape}")
        return expr

    def _map(self, op: sp.spmatrix, shape) -> "Expr":
        op = sp.csr_matrix(op)
        terms = {k: (op @ v).tocsr() for k, v in self.terms.items()}
        constant = None if self.constant is None else op @ _vec(self.constant)
        return Expr(shape, terms, constant)

    # -- álgebra -------------------------------------------------------------------

    def __add__(self, other) -> "Expr":
        other = self._as_expr(other)
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = (terms[k] + v).tocsr() if k in terms else v
        if self.constant is None:
            constant = other.constant
        elif other.constant is None:
            constant = self.constant
        else:
            constant = self.constant + other.constant
        return Expr(self.shape, terms, constant)

    __radd__ = __add__

    def __neg__(self) -> "Expr":
        return self * -1.0

    def __sub__(self, other) -> "Expr":
        return self + (-self._as_expr(other))

    def __rsub__(self, other) -> "Expr":
        return self._as_expr(other) + (-self)

    def __mul__(self, scalar) -> "Expr":
        if not isinstance(scalar, Number):
            raise SdpModelError("producto solo por escalares; use @ para matrices")
        terms = {k: (v * scalar).tocsr() for k, v in self.terms.items()}
        constant = None if self.constant is None else self.constant * scalar
        return Expr(self.shape, terms, constant)

    __rmul__ = __mul__

    def __matmul__(self, b) -> "Expr":
        b = np.atleast_2d(np.asarray(b, dtype=np.complex128))
        if b.shape[0] != self.shape[1]:
            raise SdpModelError(f"producto incompatible {self.shape} @ {b.shape}")
        return self._map(ops.right_multiply_operator(b, self.shape[0]), (self.shape[0], b.shape[1]))

    def __rmatmul__(self, a) -> "Expr":
        a = np.atleast_2d(np.asarray(a, dtype=np.complex128))
        if a.shape[1] != self.shape[0]:
            raise SdpModelError(f"producto incompatible {a.shape} @ {self.shape}")
        return self._map(ops.left_multiply_operator(a, self.shape[1]), (a.shape[0], self.shape[1]))

    @property
    def H(self) -> "Expr":
        """Traspuesta conjugada (las variables son hermíticas: conj(vec X) = vec(Xᵀ))."""
        rows, cols = self.shape
        p_out = ops.transpose_operator(rows, cols)
        terms = {}
        for k, v in self.terms.items():
            n = isqrt(v.shape[1])
            terms[k] = (p_out @ v.conj() @ ops.transpose_operator(n, n)).tocsr()
        constant = None if self.constant is None else self.constant.conj().T
        return Expr((cols, rows), terms, constant)

    @property
    def T(self) -> "Expr":
        rows, cols = self.shape
        return self._map(ops.transpose_operator(rows, cols), (cols, rows))

    def __getitem__(self, key) -> "Expr":
        rs, cs = key
        r0, r1, _ = rs.indices(self.shape[0])
        c0, c1, _ = cs.indices(self.shape[1])
        op = ops.selection_operator(self.shape, (r0, c0), (r1 - r0, c1 - c0))
        return self._map(op, (r1 - r0, c1 - c0))

    def partial_transpose(self, dims: Sequence[int], systems: Iterable[int]) -> "Expr":
        dims = ops.dims_key(dims)
        self._check_square(int(np.prod(dims)))
        op = ops.partial_transpose_operator(dims, tuple(sorted(set(systems))))
        return self._map(op, self.shape)

    def partial_trace(self, dims: Sequence[int], keep: Sequence[int]) -> "Expr":
        dims = ops.dims_key(dims)
        self._check_square(int(np.prod(dims)))
        keep = tuple(int(i) for i in keep)
        dk = int(np.prod([dims[i] for i in keep]))
        return self._map(ops.partial_trace_operator(dims, keep), (dk, dk))

    def trace(self) -> "Expr":
        self._check_square(self.shape[0])
        return self._map(ops.trace_operator(self.shape[0]), (1, 1))

    def _check_square(self, dim: int) -> None:
        if self.shape != (dim, dim):
            raise SdpModelError(f"se esperaba una expresión {dim}x{dim}, es {self.shape}")

    @staticmethod
    def block(rows: Sequence[Sequence[object]]) -> "Expr":
        """Ensambla una matriz por bloques; None es un bloque nulo."""
        heights = [None] * len(rows)
        widths = [None] * len(rows[0])
        for i, row in enumerate(rows):
            if len(row) != len(widths):
                raise SdpModelError("filas de bloques de longitud distinta")
            for j, item in enumerate(row):
                if item is None:
                    continue
                shape = item.shape if isinstance(item, Expr) else np.atleast_2d(item).shape
                if heights[i] not in (None, shape[0]) or widths[j] not in (None, shape[1]):
                    raise SdpModelError("bloques de dimensiones incompatibles")
                heights[i], widths[j] = shape[0], shape[1]
        if None in heights or None in widths:
            raise SdpModelError("cada fila y columna de bloques necesita un bloque no nulo")
        shape = (sum(heights), sum(widths))
        out = Expr(shape)
        r0 = 0
        for i, row in enumerate(rows):
            c0 = 0
            for j, item in enumerate(row):
                if item is not None:
                    piece = item if isinstance(item, Expr) else Expr.const(item)
                    op = ops.placement_operator(shape, (r0, c0), piece.shape)
                    out = out + piece._map(op, shape)
                c0 += widths[j]
            r0 += heights[i]
        return out

    def evaluate(self, values: dict[int, np.ndarray]) -> np.ndarray:
        """Valor de la expresión para bloques dados {índice: matriz}."""
        out = np.zeros(self.shape[0] * self.shape[1], dtype=np.complex128)
        for k, v in self.terms.items():
            out += v @ _vec(values[k])
        if self.constant is not None:
            out += _vec(self.constant)
        return out.reshape(self.shape)


class ConicForm:
    """Forma cónica compilada (minimización) lista para el solver."""

    def __init__(self, c, A, b, cones, bases, offsets, sign, consistent, equality_residual):
        self.c = c
        self.A = A
        self.b = b
        self.cones = cones  # lista de (G_k csr complejo (n_k², N), h_k (n_k, n_k))
        self.bases = bases
        self.offsets = offsets
        self.sign = sign  # +1 minimizar, -1 maximizar (c ya negado)
        self.consistent = consistent
        self.equality_residual = equality_residual

    @property
    def n(self) -> int:
        return self.c.shape[0]

    @property
    def cone_dims(self) -> list[int]:
        return [h.shape[0] for _, h in self.cones]

    def blocks(self, x: np.ndarray) -> list[np.ndarray]:
        out = []
        for basis, (start, stop) in zip(self.bases, self.offsets):
            n = isqrt(basis.shape[0])
            m = (basis @ x[start:stop]).reshape(n, n)
            out.append(0.5 * (m + m.conj().T))
        return out


class SdpProblem:
    """
    SDP por bloques hermíticos. Se construye incrementalmente y queda inmutable
    al compilarse (la forma compilada se comparte en lectura).
    """

    def __init__(self, name: str = "sdp", sense: str = "max", field: str = "complex"):
        if sense not in ("max", "min"):
            raise SdpModelError(f"sentido desconocido: {sense!r}")
        if field not in ("complex", "real"):
            raise SdpModelError(f"cuerpo desconocido: {field!r}")
        self.name = name
        self.sense = sense
        self.field = field
        self.variables: list[Variable] = []
        self.objective: dict[int, np.ndarray] = {}
        self.equalities: list[tuple[Expr, np.ndarray, bool]] = []
        self.cones: list[tuple[str, Expr]] = []
        self._compiled: ConicForm | None = None

    # -- construcción ------------------------------------------------------------

    def _mutable(self) -> None:
        if self._compiled is not None:
            raise SdpModelError(f"el problema {self.name!r} ya fue compilado")

    def variable(self, name: str, dim: int) -> Variable:
        self._mutable()
        if dim < 1:
            raise SdpModelError(f"dimensión de bloque inválida: {dim}")
        var = Variable(len(self.variables), name, int(dim))
        self.variables.append(var)
        return var

    def add_objective(self, var: Variable, coefficient) -> None:
        """Suma Tr(C X_var) al objetivo; C hermítica."""
        self._mutable()
        self._check_variable(var)
        c = np.atleast_2d(np.asarray(coefficient, dtype=np.complex128))
        if c.shape != (var.dim, var.dim):
            raise SdpModelError(f"coeficiente {c.shape} incompatible con bloque {var.name} de {var.dim}")
        if np.max(np.abs(c - c.conj().T), initial=0.0) > COEFFICIENT_TOL:
            raise SdpModelError(f"coeficiente del objetivo no hermítico en {var.name}")
        self.objective[var.index] = self.objective.get(var.index, 0) + c

    def add_psd(self, expr: Expr, name: str | None = None) -> None:
        """Impone expr ⪰ 0 (expr debe ser hermítica para entradas hermíticas)."""
        self._mutable()
        if expr.shape[0] != expr.shape[1]:
            raise SdpModelError(f"restricción PSD sobre expresión no cuadrada {expr.shape}")
        self._check_terms(expr)
        self.cones.append((name or f"psd{len(self.cones)}", expr))

    def add_equality(self, expr: Expr, rhs, hermitian: bool = True) -> None:
        """Impone expr == rhs. Con hermitian=False se igualan partes real e imaginaria completas."""
        self._mutable()
        self._check_terms(expr)
        rhs = np.broadcast_to(np.asarray(rhs, dtype=np.complex128), expr.shape).copy()
        self.equalities.append((expr, rhs, hermitian))

    def _check_variable(self, var: Variable) -> None:
        if var.index >= len(self.variables) or self.variables[var.index] != var:
            raise SdpModelError(f"variable {var.name!r} no declarada en {self.name!r}")

    def _check_terms(self, expr: Expr) -> None:
        for k in expr.terms:
            if k >= len(self.variables):
                raise SdpModelError(f"la expresión usa un bloque no declarado ({k})")

    # -- compilación -------------------------------------------------------------

    def compile(self) -> ConicForm:
        if self._compiled is not None:
            return self._compiled
        if not self.variables:
            raise SdpModelError("el problema necesita al menos un bloque variable")
        bases = [hermitian_basis(v.dim, self.field) for v in self.variables]
        offsets, start = [], 0
        for basis in bases:
            offsets.append((start, start + basis.shape[1]))
            start += basis.shape[1]
        n = start

        def lift(expr: Expr) -> sp.csr_matrix:
            rows = expr.shape[0] * expr.shape[1]
            blocks = []
            for k, basis in enumerate(bases):
                if k in expr.terms:
                    blocks.append(sp.csr_matrix(expr.terms[k] @ basis))
                else:
                    blocks.append(sp.csr_matrix((rows, basis.shape[1]), dtype=np.complex128))
            return sp.hstack(blocks, format="csr")

        rng = np.random.default_rng(12345)
        probe = rng.standard_normal(n)

        c = np.zeros(n)
        for k, coeff in self.objective.items():
            lo, hi = offsets[k]
            c[lo:hi] = np.real(bases[k].conj().T @ _vec(coeff))
        sign = -1.0 if self.sense == "max" else 1.0
        c = sign * c

        cones = []
        for name, expr in self.cones:
            g = lift(expr)
            self._check_hermitian_image(name, g, expr.shape[0], probe)
            h = np.zeros(expr.shape, dtype=np.complex128) if expr.constant is None else expr.constant
            if np.max(np.abs(h - h.conj().T), initial=0.0) > COEFFICIENT_TOL:
                raise SdpModelError(f"término constante no hermítico en {name}")
            cones.append(((-g).tocsr(), 0.5 * (h + h.conj().T)))

        a_rows, b_rows = [], []
        for idx, (expr, rhs, hermitian) in enumerate(self.equalities):
            g = lift(expr)
            target = _vec(rhs) - (0 if expr.constant is None else _vec(expr.constant))
            if hermitian:
                if expr.shape[0] != expr.shape[1]:
                    raise SdpModelError("igualdad hermítica sobre expresión no cuadrada")
                self._check_hermitian_image(f"eq{idx}", g, expr.shape[0], probe)
                out_basis = hermitian_basis(expr.shape[0], self.field).conj().T
                a_rows.append(np.real((out_basis @ g).toarray()))
                b_rows.append(np.real(out_basis @ target))
            else:
                a_rows.append(np.real(g.toarray()))
                b_rows.append(np.real(target))
                if self.field == "complex":
                    a_rows.append(np.imag(g.toarray()))
                    b_rows.append(np.imag(target))
        if a_rows:
            a = np.vstack(a_rows)
            b = np.concatenate(b_rows)
        else:
            a = np.zeros((0, n))
            b = np.zeros(0)
        a, b, consistent, residual = reduce_equalities(a, b)
        self._compiled = ConicForm(c, a, b, cones, bases, offsets, sign, consistent, residual)
        return self._compiled

    @staticmethod
    def _check_hermitian_image(name: str, g: sp.csr_matrix, dim: int, probe: np.ndarray) -> None:
        image = (g @ probe).reshape(dim, dim)
        scale = 1.0 + np.max(np.abs(image), initial=0.0)
        if np.max(np.abs(image - image.conj().T), initial=0.0) > IMAGE_TOL * scale:
            raise SdpModelError(f"la restricción {name} no produce matrices hermíticas")

    @property
    def block_dims(self) -> list[int]:
        return [v.dim for v in self.variables]


def reduce_equalities(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray, bool, float]:
    """
    Elimina filas redundantes de A (QR con pivoteo sobre Aᵀ) y verifica
    consistencia del sistema A x = b.
    """
    if a.shape[0] == 0:
        return a, b, True, 0.0
    _, r, piv = scipy.linalg.qr(a.T, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    if diag.size == 0 or diag[0] == 0.0:
        keep = np.zeros(0, dtype=int)
    else:
        keep = np.sort(piv[: int(np.sum(diag > RANK_TOL * diag[0]))])
    a_k, b_k = a[keep], b[keep]
    if keep.size:
        x, *_ = scipy.linalg.lstsq(a_k, b_k)
        residual = float(np.linalg.norm(a @ x - b))
    else:
        residual = float(np.linalg.norm(b))
    consistent = residual <= CONSISTENCY_TOL * max(1.0, float(np.linalg.norm(b)))
    return a_k, b_k, consistent, residual


__all__ = ["SdpProblem", "Variable", "Expr", "ConicForm", "hermitian_basis", "reduce_equalities"]
