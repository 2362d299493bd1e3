"""
Álgebra lineal densa sobre espacios de Hilbert multipartitos.

Tipos inmutables (pydantic, arrays de solo lectura) y funciones puras: se pueden
llamar desde workers concurrentes sin estado compartido.
Convención de índices: el subsistema 0 es el más significativo (orden de np.kron).
"""

from functools import reduce
from itertools import combinations
from typing import Iterable, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

try:
    from ..config import config as app_config
    from .errors import UsageError
except ImportError:
    from entbound.config import config as app_config
    from entbound.core.errors import UsageError

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
NORM_TOL = 1e-12
PSD_TOL = 1e-10


def _frozen(array, ndim: int) -> np.ndarray:
    out = np.array(array, dtype=np.complex128)
    if ndim == 1:
        out = out.reshape(-1)
    out.setflags(write=False)
    return out


def hermitize(matrix: np.ndarray) -> np.ndarray:
    """Parte hermítica (M + M†)/2."""
    return 0.5 * (matrix + matrix.conj().T)


def sqrtm_psd(matrix: np.ndarray) -> np.ndarray:
    """Raíz cuadrada vía descomposición espectral, autovalores recortados en 0."""
    w, v = np.linalg.eigh(hermitize(matrix))
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


class SubsystemLayout(BaseModel):
    """Dimensiones locales ordenadas que definen la factorización tensorial."""

    model_config = ConfigDict(frozen=True)

    dims: tuple[int, ...] = Field(description="Dimensiones locales, en orden de factor")

    @field_validator("dims")
    @classmethod
    def check_dims(cls, v: tuple[int, ...]) -> tuple[int, ...]:
        if len(v) == 0:
            raise ValueError("el layout necesita al menos un subsistema")
        if any(d < 2 for d in v):
            raise ValueError(f"toda dimensión local debe ser >= 2: {v}")
        return v

    @classmethod
    def of(cls, dims: Union["SubsystemLayout", Iterable[int]]) -> "SubsystemLayout":
        if isinstance(dims, SubsystemLayout):
            return dims
        dims = tuple(int(d) for d in dims)
        if len(dims) > 0 and all(d >= 1 for d in dims) and any(d == 1 for d in dims):
            # Factores triviales solo aparecen como ancilla de un estado puro purificado
            return cls.model_construct(dims=dims)
        return cls(dims=dims)

    @property
    def total(self) -> int:
        return int(np.prod(self.dims))

    def __len__(self) -> int:
        return len(self.dims)

    def restrict(self, keep: Sequence[int]) -> "SubsystemLayout":
        return SubsystemLayout.of(self.dims[i] for i in keep)

    def label(self) -> str:
        return "x".join(str(d) for d in self.dims)


class PureState(BaseModel):
    """Vector unitario con su layout."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    amplitudes: np.ndarray
    layout: SubsystemLayout

    @field_validator("amplitudes", mode="before")
    @classmethod
    def to_array(cls, v):
        return _frozen(v, ndim=1)

    @field_validator("layout", mode="before")
    @classmethod
    def to_layout(cls, v):
        return SubsystemLayout.of(v)

    @model_validator(mode="after")
    def check_state(self) -> "PureState":
        if self.amplitudes.shape[0] != self.layout.total:
            raise ValueError(
                f"longitud {self.amplitudes.shape[0]} != dimensión total {self.layout.total}"
            )
        norm = float(np.linalg.norm(self.amplitudes))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"norma {norm!r} no es 1")
        return self

    @classmethod
    def normalized(cls, vector, dims) -> "PureState":
        vector = np.asarray(vector, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(vector)
        if norm == 0.0:
            raise UsageError("vector nulo")
        return cls(amplitudes=vector / norm, layout=dims)

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def density(self) -> "DensityMatrix":
        return DensityMatrix(matrix=self.projector(), layout=self.layout)

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.layout.dims)


class DensityMatrix(BaseModel):
    """Matriz hermítica, semidefinida positiva, de traza 1, con su layout."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    matrix: np.ndarray
    layout: SubsystemLayout

    @field_validator("matrix", mode="before")
    @classmethod
    def to_array(cls, v):
        return _frozen(v, ndim=2)

    @field_validator("layout", mode="before")
    @classmethod
    def to_layout(cls, v):
        return SubsystemLayout.of(v)

    @model_validator(mode="after")
    def check_state(self) -> "DensityMatrix":
        m = self.matrix
        d = self.layout.total
        if m.ndim != 2 or m.shape != (d, d):
            raise ValueError(f"se esperaba una matriz {d}x{d}, llegó {m.shape}")
        deviation = float(np.max(np.abs(m - m.conj().T)))
        if deviation > HERMITIAN_TOL:
            raise ValueError(f"matriz no hermítica (desviación {deviation:.3e})")
        trace = complex(np.trace(m))
        if abs(trace - 1.0) > TRACE_TOL:
            raise ValueError(f"traza {trace.real!r} distinta de 1")
        lowest = float(np.linalg.eigvalsh(m)[0])
        if lowest < -PSD_TOL:
            raise ValueError(f"autovalor mínimo {lowest:.3e} negativo")
        return self

    @classmethod
    def from_matrix(cls, matrix, dims, normalize: bool = False) -> "DensityMatrix":
        """Construye simetrizando (y opcionalmente normalizando la traza)."""
        m = hermitize(np.asarray(matrix, dtype=np.complex128))
        if normalize:
            m = m / np.trace(m).real
        return cls(matrix=m, layout=dims)

    @property
    def dim(self) -> int:
        return self.layout.total

    def eigh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.linalg.eigh(self.matrix)

    def rank(self, threshold: float | None = None) -> int:
        threshold = app_config.RANK_THRESHOLD if threshold is None else threshold
        w = np.linalg.eigvalsh(self.matrix)
        return int(np.sum(w > threshold * max(w[-1], 0.0)))


class ProductState(BaseModel):
    """Producto |φ1⟩⊗…⊗|φn⟩ de vectores locales unitarios."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    factors: tuple[np.ndarray, ...]

    @field_validator("factors", mode="before")
    @classmethod
    def to_arrays(cls, v):
        return tuple(_frozen(f, ndim=1) for f in v)

    @model_validator(mode="after")
    def check_factors(self) -> "ProductState":
        if not self.factors:
            raise ValueError("un estado producto necesita al menos un factor")
        for i, f in enumerate(self.factors):
            norm = float(np.linalg.norm(f))
            if abs(norm - 1.0) > NORM_TOL:
                raise ValueError(f"factor {i} con norma {norm!r}")
        return self

    @property
    def layout(self) -> SubsystemLayout:
        return SubsystemLayout.of(f.shape[0] for f in self.factors)

    def vector(self) -> np.ndarray:
        return reduce(np.kron, self.factors)

    def to_pure(self) -> PureState:
        return PureState.normalized(self.vector(), self.layout)


StateLike = Union[DensityMatrix, PureState, np.ndarray]


def _matrix_of(state: StateLike) -> np.ndarray:
    if isinstance(state, DensityMatrix):
        return state.matrix
    if isinstance(state, PureState):
        return state.projector()
    return np.asarray(state, dtype=np.complex128)


def _check_indices(indices: Iterable[int], count: int) -> tuple[int, ...]:
    out = tuple(sorted(set(int(i) for i in indices)))
    for i in out:
        if i < 0 or i >= count:
            raise UsageError(f"índice de subsistema {i} fuera de rango (hay {count})")
    return out


# -- Operaciones -----------------------------------------------------------------


def tensor_product(factors: Sequence[np.ndarray]) -> np.ndarray:
    """Producto de Kronecker de izquierda a derecha."""
    if len(factors) == 0:
        raise UsageError("tensor_product necesita al menos un factor")
    mats = []
    for f in factors:
        f = np.asarray(f)
        if f.ndim != 2 or f.shape[0] != f.shape[1]:
            raise UsageError(f"factor no cuadrado de forma {f.shape}")
        mats.append(f)
    return reduce(np.kron, mats)


def partial_trace_array(matrix: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Traza parcial conservando `keep` en el orden dado."""
    dims = tuple(dims)
    m = len(dims)
    traced = [i for i in range(m) if i not in keep]
    dk = int(np.prod([dims[i] for i in keep])) if keep else 1
    dt = int(np.prod([dims[i] for i in traced])) if traced else 1
    t = matrix.reshape(dims + dims)
    perm = list(keep) + traced + [m + i for i in keep] + [m + i for i in traced]
    t = t.transpose(perm).reshape(dk, dt, dk, dt)
    return np.einsum("ajbj->ab", t)


def partial_transpose_array(matrix: np.ndarray, dims: Sequence[int], systems: Iterable[int]) -> np.ndarray:
    dims = tuple(dims)
    m = len(dims)
    axes = list(range(2 * m))
    for i in systems:
        axes[i], axes[m + i] = axes[m + i], axes[i]
    d = int(np.prod(dims))
    return matrix.reshape(dims + dims).transpose(axes).reshape(d, d)


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Estado reducido sobre los subsistemas `keep` (en orden creciente)."""
    keep = _check_indices(keep, len(rho.layout))
    if not keep:
        raise UsageError("partial_trace necesita al menos un subsistema a conservar")
    reduced = partial_trace_array(rho.matrix, rho.layout.dims, keep)
    return DensityMatrix(matrix=hermitize(reduced), layout=rho.layout.restrict(keep))


def partial_transpose(rho: StateLike, transposed: Iterable[int], layout: SubsystemLayout | None = None) -> np.ndarray:
    """Transpone los índices de los subsistemas indicados."""
    if layout is None:
        if not isinstance(rho, DensityMatrix):
            raise UsageError("partial_transpose sobre una matriz cruda necesita layout")
        layout = rho.layout
    systems = _check_indices(transposed, len(layout))
    return partial_transpose_array(_matrix_of(rho), layout.dims, systems)


def purify(rho: DensityMatrix, threshold: float | None = None) -> PureState:
    """
    Purificación con la ancilla como PRIMER factor: layout [r] + rho.layout,
    r = rango numérico (autovalores > threshold * λmax).
    """
    threshold = app_config.RANK_THRESHOLD if threshold is None else threshold
    w, v = rho.eigh()
    keep = w > threshold * max(w[-1], 0.0)
    w = w[keep][::-1]
    v = v[:, keep][:, ::-1]
    amplitudes = (np.sqrt(w)[:, None] * v.T).reshape(-1)
    layout = SubsystemLayout.of((len(w),) + rho.layout.dims)
    return PureState.normalized(amplitudes, layout)


def fidelity(rho: StateLike, sigma: StateLike) -> float:
    """F(ρ,σ) = (Tr √(√ρ σ √ρ))², recortada a [0, 1]."""
    a = _matrix_of(rho)
    b = _matrix_of(sigma)
    if a.shape != b.shape:
        raise UsageError(f"dimensiones incompatibles: {a.shape} vs {b.shape}")
    root = sqrtm_psd(a)
    ev = np.clip(np.linalg.eigvalsh(hermitize(root @ b @ root)), 0.0, None)
    return float(min(1.0, np.sum(np.sqrt(ev)) ** 2))


def negativity(rho: DensityMatrix, bipartition: Iterable[int]) -> float:
    """(‖ρ^{T_S}‖₁ − 1)/2 respecto del corte S | complemento."""
    systems = _check_indices(bipartition, len(rho.layout))
    if not systems or len(systems) == len(rho.layout):
        raise UsageError("la bipartición debe ser un subconjunto propio y no vacío")
    ev = np.linalg.eigvalsh(hermitize(partial_transpose_array(rho.matrix, rho.layout.dims, systems)))
    return float(max(0.0, (np.sum(np.abs(ev)) - 1.0) / 2.0))


def ppt_cuts(dims: Sequence[int], mode: str | None = None) -> list[tuple[int, ...]]:
    """
    Cortes para restricciones PPT: "single" (cada subsistema contra el resto)
    o "all" (toda bipartición). Se omiten factores de dimensión 1 y cortes
    equivalentes por complemento.
    """
    mode = mode or app_config.PPT_CUT_MODE
    active = [i for i, d in enumerate(dims) if d > 1]
    if len(active) < 2:
        return []
    if mode == "single":
        candidates = [(i,) for i in active]
    elif mode == "all":
        candidates = [c for r in range(1, len(active)) for c in combinations(active, r)]
    else:
        raise UsageError(f"modo de cortes PPT desconocido: {mode!r}")
    seen: set[tuple[int, ...]] = set()
    cuts = []
    for cut in candidates:
        complement = tuple(i for i in active if i not in cut)
        key = min(cut, complement)
        if key in seen:
            continue
        seen.add(key)
        cuts.append(cut)
    return cuts


def negativity_profile(rho: DensityMatrix, mode: str | None = None) -> dict[str, float]:
    """Negatividad en cada corte de `ppt_cuts`, etiquetada "0", "0,2", ..."""
    return {
        ",".join(str(i) for i in cut): negativity(rho, cut)
        for cut in ppt_cuts(rho.layout.dims, mode)
    }


# -- Estados aleatorios ---------------------------------------------------------------


def _ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2.0)


def random_density_matrix(dim: int, rank: int, seed: int, layout=None) -> DensityMatrix:
    """Ginibre: G G† / Tr(G G†) con G de dim x rank."""
    if rank < 1:
        raise UsageError("el rango debe ser >= 1")
    if rank > dim:
        raise UsageError(f"rango {rank} mayor que la dimensión {dim}")
    layout = SubsystemLayout.of(layout if layout is not None else (dim,))
    if layout.total != dim:
        raise UsageError(f"layout {layout.dims} incompatible con dimensión {dim}")
    g = _ginibre(np.random.default_rng(seed), dim, rank)
    m = g @ g.conj().T
    return DensityMatrix.from_matrix(m / np.trace(m).real, layout)


def random_pure_state(layout, seed: int) -> PureState:
    layout = SubsystemLayout.of(layout)
    g = _ginibre(np.random.default_rng(seed), layout.total, 1)[:, 0]
    return PureState.normalized(g, layout)


def random_product_state(layout, rng: np.random.Generator) -> ProductState:
    layout = SubsystemLayout.of(layout)
    factors = []
    for d in layout.dims:
        f = _ginibre(rng, d, 1)[:, 0]
        factors.append(f / np.linalg.norm(f))
    return ProductState(factors=factors)


def random_separable_state(layout, n_terms: int, seed: int) -> DensityMatrix:
    """Mezcla convexa (pesos de Dirichlet) de estados producto aleatorios."""
    layout = SubsystemLayout.of(layout)
    rng = np.random.default_rng(seed)
    weights = rng.dirichlet(np.ones(n_terms))
    m = np.zeros((layout.total, layout.total), dtype=np.complex128)
    for p in weights:
        v = random_product_state(layout, rng).vector()
        m += p * np.outer(v, v.conj())
    return DensityMatrix.from_matrix(m, layout, normalize=True)


__all__ = [
    "SubsystemLayout",
    "PureState",
    "DensityMatrix",
    "ProductState",
    "tensor_product",
    "partial_trace",
    "partial_transpose",
    "purify",
    "fidelity",
    "negativity",
    "negativity_profile",
    "ppt_cuts",
    "random_density_matrix",
    "random_pure_state",
    "random_product_state",
    "random_separable_state",
    "hermitize",
    "sqrtm_psd",
]
