"""
Solver primal-dual de punto interior para la forma cónica compilada por
`SdpProblem.compile()`.

Escalado Nesterov-Todd por bloque, predictor-corrector de Mehrotra, pasos
primal y dual separados. Los fallos no se lanzan: se devuelven como status.
"""

import time
from enum import Enum

import numpy as np
import scipy.linalg
from pydantic import BaseModel, ConfigDict, Field

try:
    from ..config import config as app_config
    from ..core.errors import UsageError
    from ..infrastructure.logging_config import get_logger
    from ..infrastructure.metrics import record_solve
    from .embed import embed_complex
    from .problem import ConicForm, SdpProblem
except ImportError:
    from entbound.config import config as app_config
    from entbound.core.errors import UsageError
    from entbound.infrastructure.logging_config import get_logger
    from entbound.infrastructure.metrics import record_solve
    from entbound.sdp.embed import embed_complex
    from entbound.sdp.problem import ConicForm, SdpProblem

logger = get_logger("sdp.solver")

STEP_FRACTION = 0.98
DIVERGENCE_NORM = 1e10
STALL_STEP = 1e-8
STALL_ITERATIONS = 5
REGULARIZATION = (0.0, 1e-14, 1e-12, 1e-10)
# Un iterado cuyo mérito queda dentro de este múltiplo de la tolerancia se acepta
# como óptimo si el método se detiene por inestabilidad numérica.
NEAR_OPTIMAL_FACTOR = 10.0


class SolverStatus(str, Enum):
    OPTIMAL = "optimal"
    MAX_ITERATIONS = "max_iterations"
    NUMERICAL_FAILURE = "numerical_failure"
    INFEASIBLE = "infeasible"


class SdpSolution(BaseModel):
    """Resultado de un solve, en el sentido (max/min) del problema original."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    status: SolverStatus
    objective_value: float = Field(description="Objetivo primal en el iterado devuelto")
    dual_value: float = Field(description="Objetivo dual en el iterado devuelto")
    primal_blocks: list[np.ndarray] = Field(default_factory=list)
    duality_gap: float = Field(ge=0.0)
    primal_residual: float
    dual_residual: float
    iterations: int
    tolerance: float
    accuracy: float = Field(default=float("nan"), description="max(pres, dres, gap relativo) del iterado devuelto")
    wall_time: float = 0.0

    @property
    def optimal(self) -> bool:
        return self.status == SolverStatus.OPTIMAL


def _herm(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


def _inner(a: list[np.ndarray], b: list[np.ndarray]) -> float:
    return float(sum(np.real(np.vdot(u, v)) for u, v in zip(a, b)))


def _norm(blocks: list[np.ndarray]) -> float:
    return float(np.sqrt(sum(np.linalg.norm(m) ** 2 for m in blocks)))


class _Cone:
    __slots__ = ("g", "gh", "h", "n", "cols", "active")

    def __init__(self, g, h):
        self.g = g
        self.gh = g.conj().T.tocsr()
        self.h = h
        self.n = h.shape[0]
        csc = g.tocsc()
        self.cols = np.flatnonzero(np.diff(csc.indptr))
        self.active = csc[:, self.cols]


class _Factor:
    __slots__ = ("k", "ka", "sy")

    def __init__(self, k, ka, sy):
        self.k = k
        self.ka = ka
        self.sy = sy


class _InteriorPoint:
    """Espacio de trabajo de un solve: no se comparte entre llamadas."""

    def __init__(self, form: ConicForm, tolerance: float, max_iterations: int):
        self.form = form
        self.tol = tolerance
        self.max_iterations = max_iterations
        self.cones = [_Cone(g, h) for g, h in form.cones]
        self.a = form.A
        self.b = form.b
        self.c = form.c
        self.n = form.n
        self.p = form.A.shape[0]
        self.total_dim = sum(cone.n for cone in self.cones)
        self.h_norm = max(1.0, _norm([cone.h for cone in self.cones]))
        self.b_norm = max(1.0, float(np.linalg.norm(self.b)))
        self.c_norm = max(1.0, float(np.linalg.norm(self.c)))

    # -- operadores ----------------------------------------------------------------

    def g(self, x: np.ndarray) -> list[np.ndarray]:
        return [_herm((cone.g @ x).reshape(cone.n, cone.n)) for cone in self.cones]

    def gt(self, mats: list[np.ndarray]) -> np.ndarray:
        out = np.zeros(self.n)
        for cone, m in zip(self.cones, mats):
            out += np.real(cone.gh @ m.reshape(-1))
        return out

    @staticmethod
    def _cholesky(k: np.ndarray):
        scale = max(1.0, float(np.max(np.abs(np.diag(k)), initial=0.0)))
        eye = np.eye(k.shape[0])
        for reg in REGULARIZATION:
            try:
                return scipy.linalg.cho_factor(k + reg * scale * eye, lower=True)
            except np.linalg.LinAlgError:
                continue
        raise np.linalg.LinAlgError("sistema KKT no definido positivo")

    def factor(self, winvs: list[np.ndarray]) -> _Factor:
        m = np.zeros((self.n, self.n))
        for cone, winv in zip(self.cones, winvs):
            if cone.cols.size == 0:
                continue
            t = np.kron(winv, winv.conj())
            tg = (cone.active.T @ t.T).T
            block = np.real(cone.active.conj().T @ tg)
            m[np.ix_(cone.cols, cone.cols)] += block
        k = 0.5 * (m + m.T)
        if self.p:
            k += self.a.T @ self.a
        chol = self._cholesky(k)
        if not self.p:
            return _Factor(chol, None, None)
        ka = scipy.linalg.cho_solve(chol, self.a.T)
        sy = self._cholesky(0.5 * (self.a @ ka + (self.a @ ka).T))
        return _Factor(chol, ka, sy)

    def newton(self, fac, winvs, r_x, r_y, r_z, r_c):
        """Dirección de Newton para residuos (r_x, r_y, r_z) y término de complementariedad r_c."""
        r_zc = [u + v for u, v in zip(r_z, r_c)]
        rhs = -r_x - self.gt([w @ v @ w for w, v in zip(winvs, r_zc)])
        if self.p:
            u = scipy.linalg.cho_solve(fac.k, rhs - self.a.T @ r_y)
            dy = scipy.linalg.cho_solve(fac.sy, self.a @ u + r_y)
            dx = u - fac.ka @ dy
        else:
            dx = scipy.linalg.cho_solve(fac.k, rhs)
            dy = np.zeros(0)
        gdx = self.g(dx)
        dz = [_herm(w @ (gd + v) @ w) for w, gd, v in zip(winvs, gdx, r_zc)]
        ds = [-(rz + gd) for rz, gd in zip(r_z, gdx)]
        return dx, dy, dz, ds

    # -- escalado ----------------------------------------------------------------

    @staticmethod
    def _cholesky_pd(m: np.ndarray) -> np.ndarray:
        """Cholesky de un bloque del cono; cerca de la frontera se desplaza por ε·‖m‖."""
        scale = max(1.0, float(np.linalg.norm(m)))
        eye = np.eye(m.shape[0])
        for reg in REGULARIZATION:
            try:
                return np.linalg.cholesky(m + reg * scale * eye)
            except np.linalg.LinAlgError:
                continue
        raise np.linalg.LinAlgError("bloque del cono fuera del interior")

    @classmethod
    def nt_scaling(cls, s: np.ndarray, z: np.ndarray):
        """R con R⁻¹ S R⁻ᴴ = Rᴴ Z R = Λ; devuelve (R, R⁻¹, λ, W⁻¹)."""
        ls = cls._cholesky_pd(s)
        lz = cls._cholesky_pd(z)
        _, sv, vh = np.linalg.svd(lz.conj().T @ ls)
        r = (ls @ vh.conj().T) / np.sqrt(sv)
        rinv = np.linalg.inv(r)
        winv = _herm(rinv.conj().T @ rinv)
        return r, rinv, sv, winv

    @staticmethod
    def max_step(lam: np.ndarray, d_scaled: np.ndarray) -> float:
        root = 1.0 / np.sqrt(lam)
        low = float(np.linalg.eigvalsh(_herm(root[:, None] * d_scaled * root[None, :]))[0])
        return np.inf if low >= 0.0 else -1.0 / low

    # -- bucle principal ---------------------------------------------------------

    def initial_point(self):
        eye_w = [np.eye(cone.n, dtype=np.complex128) for cone in self.cones]
        fac = self.factor(eye_w)
        zeros = [np.zeros_like(w) for w in eye_w]
        x, _, _, _ = self.newton(fac, eye_w, np.zeros(self.n), -self.b, [-cone.h for cone in self.cones], zeros)
        s = [_herm(cone.h - gx) for cone, gx in zip(self.cones, self.g(x))]
        _, y, z, _ = self.newton(fac, eye_w, self.c, np.zeros(self.p), zeros, zeros)
        return x, self._shift(s), y, self._shift(z)

    @staticmethod
    def _shift(blocks: list[np.ndarray]) -> list[np.ndarray]:
        lowest = min(float(np.linalg.eigvalsh(m)[0]) for m in blocks)
        alpha = -lowest
        scale = max(1.0, _norm(blocks))
        if alpha >= -1e-8 * scale:
            blocks = [m + (1.0 + alpha) * np.eye(m.shape[0]) for m in blocks]
        return blocks

    def _breakdown(self, best: dict, info: dict, reason: str) -> tuple[SolverStatus, dict]:
        """Parada por inestabilidad: se devuelve el mejor iterado visto."""
        chosen = best or info
        accepted = bool(chosen) and chosen["merit"] <= NEAR_OPTIMAL_FACTOR * self.tol
        logger.debug(
            "parada numérica del solver",
            extra={"extra_fields": {
                "reason": reason, "iter": info.get("iterations"), "best_iter": chosen.get("iterations"),
                "merit": chosen.get("merit"), "accepted": accepted,
            }},
        )
        return (SolverStatus.OPTIMAL if accepted else SolverStatus.NUMERICAL_FAILURE), chosen

    def run(self) -> tuple[SolverStatus, dict]:
        x, s, y, z = self.initial_point()
        stalled = 0
        info: dict = {}
        best: dict = {}
        status = SolverStatus.MAX_ITERATIONS
        for it in range(self.max_iterations + 1):
            gx = self.g(x)
            r_z = [gxk + sk - cone.h for gxk, sk, cone in zip(gx, s, self.cones)]
            r_y = self.a @ x - self.b if self.p else np.zeros(0)
            r_x = self.gt(z) + (self.a.T @ y if self.p else 0.0) + self.c
            pobj = float(self.c @ x)
            dobj = -_inner([cone.h for cone in self.cones], z) - float(self.b @ y)
            gap = _inner(s, z)
            pres = max(_norm(r_z) / self.h_norm, float(np.linalg.norm(r_y)) / self.b_norm)
            dres = float(np.linalg.norm(r_x)) / self.c_norm
            scale = max(1.0, abs(pobj))
            merit = max(pres, dres, abs(gap) / scale, abs(pobj - dobj) / scale)
            info = dict(
                x=x, s=s, y=y, z=z, pobj=pobj, dobj=dobj, gap=gap, pres=pres, dres=dres, iterations=it, merit=merit,
            )
            if not np.all(np.isfinite([pobj, dobj, gap, pres, dres])):
                return self._breakdown(best, info, "no finito")
            if not best or merit < best["merit"]:
                best = info
            if (
                pres <= self.tol
                and dres <= self.tol
                and abs(gap) <= self.tol * scale
                and abs(pobj - dobj) <= self.tol * scale
            ):
                return SolverStatus.OPTIMAL, info
            if np.linalg.norm(x) > DIVERGENCE_NORM or _norm(z) > DIVERGENCE_NORM:
                return SolverStatus.INFEASIBLE, info
            if it == self.max_iterations:
                break

            try:
                scaling = [self.nt_scaling(sk, zk) for sk, zk in zip(s, z)]
                winvs = [sc[3] for sc in scaling]
                fac = self.factor(winvs)

                # Predictor (afín)
                dx, dy, dz, ds = self.newton(fac, winvs, r_x, r_y, r_z, [-sk for sk in s])
                ap, ad = self._steps(scaling, ds, dz)
                ap, ad = min(1.0, ap), min(1.0, ad)
                gap_aff = _inner(
                    [sk + ap * d for sk, d in zip(s, ds)], [zk + ad * d for zk, d in zip(z, dz)]
                )
                sigma = float(np.clip((max(gap_aff, 0.0) / gap) ** 3, 0.0, 1.0)) if gap > 0 else 0.0
                mu = gap / self.total_dim

                # Corrector
                r_c = []
                for (r, rinv, lam, _), dsa, dza in zip(scaling, ds, dz):
                    ds_t = rinv @ dsa @ rinv.conj().T
                    dz_t = r.conj().T @ dza @ r
                    t = sigma * mu * np.eye(lam.size) - np.diag(lam**2) - 0.5 * (ds_t @ dz_t + dz_t @ ds_t)
                    u = 2.0 * t / (lam[:, None] + lam[None, :])
                    r_c.append(_herm(r @ u @ r.conj().T))
                dx, dy, dz, ds = self.newton(fac, winvs, r_x, r_y, r_z, r_c)
                ap, ad = self._steps(scaling, ds, dz)
            except np.linalg.LinAlgError as e:
                return self._breakdown(best, info, f"álgebra lineal: {e}")

            ap = min(1.0, STEP_FRACTION * ap)
            ad = min(1.0, STEP_FRACTION * ad)
            x = x + ap * dx
            s = [_herm(sk + ap * d) for sk, d in zip(s, ds)]
            y = y + ad * dy
            z = [_herm(zk + ad * d) for zk, d in zip(z, dz)]

            logger.debug(
                "iteración sdp",
                extra={"extra_fields": {
                    "iter": it, "pobj": pobj, "dobj": dobj, "gap": gap,
                    "pres": pres, "dres": dres, "step_primal": ap, "step_dual": ad,
                }},
            )
            stalled = stalled + 1 if max(ap, ad) < STALL_STEP else 0
            if stalled >= STALL_ITERATIONS:
                return self._breakdown(best, info, "pasos estancados")
        return status, info

    def _steps(self, scaling, ds, dz) -> tuple[float, float]:
        ap = ad = np.inf
        for (r, rinv, lam, _), dsk, dzk in zip(scaling, ds, dz):
            ap = min(ap, self.max_step(lam, rinv @ dsk @ rinv.conj().T))
            ad = min(ad, self.max_step(lam, r.conj().T @ dzk @ r))
        return ap, ad


def solve(
    problem: SdpProblem,
    tolerance: float | None = None,
    max_iterations: int | None = None,
    real_embedding: bool = False,
) -> SdpSolution:
    """
    Resuelve el problema. Con real_embedding=True se resuelve la versión real
    simétrica de doble dimensión y los bloques se devuelven complejos.
    """
    tolerance = app_config.SDP_TOLERANCE if tolerance is None else float(tolerance)
    max_iterations = app_config.SDP_MAX_ITERATIONS if max_iterations is None else int(max_iterations)
    if tolerance <= 0.0:
        raise UsageError(f"la tolerancia debe ser positiva: {tolerance}")
    if max_iterations < 1:
        raise UsageError(f"max_iterations debe ser >= 1: {max_iterations}")

    if real_embedding:
        embedding = embed_complex(problem)
        solution = solve(embedding.problem, tolerance, max_iterations)
        return solution.model_copy(update={"primal_blocks": embedding.complex_blocks(solution.primal_blocks)})

    solution = _solve_form(problem, tolerance, max_iterations)
    if solution.status == SolverStatus.NUMERICAL_FAILURE and problem.field == "complex":
        logger.info(
            "reinicio con el embebido real",
            extra={"extra_fields": {"problem": problem.name, "accuracy": solution.accuracy}},
        )
        retry = solve(problem, tolerance, max_iterations, real_embedding=True)
        if retry.optimal or retry.accuracy < solution.accuracy:
            solution = retry.model_copy(update={"wall_time": solution.wall_time + retry.wall_time})
    return solution


def _solve_form(problem: SdpProblem, tolerance: float, max_iterations: int) -> SdpSolution:
    form = problem.compile()
    start = time.perf_counter()
    if not form.consistent:
        logger.info(
            "igualdades inconsistentes",
            extra={"extra_fields": {"problem": problem.name, "residual": form.equality_residual}},
        )
        status, info = SolverStatus.INFEASIBLE, {}
    else:
        engine = _InteriorPoint(form, tolerance, max_iterations)
        try:
            status, info = engine.run()
        except np.linalg.LinAlgError as e:
            logger.debug("fallo en el punto inicial", extra={"extra_fields": {"error": str(e)}})
            status, info = SolverStatus.NUMERICAL_FAILURE, {}
    elapsed = time.perf_counter() - start

    nan = float("nan")
    x = info.get("x")
    pobj, dobj = info.get("pobj", nan), info.get("dobj", nan)
    solution = SdpSolution(
        status=status,
        objective_value=form.sign * pobj,
        dual_value=form.sign * dobj,
        primal_blocks=form.blocks(x) if x is not None else [],
        duality_gap=abs(pobj - dobj) if np.isfinite(pobj - dobj) else float("inf"),
        primal_residual=info.get("pres", nan),
        dual_residual=info.get("dres", nan),
        iterations=info.get("iterations", 0),
        tolerance=tolerance,
        accuracy=info.get("merit", nan),
        wall_time=elapsed,
    )
    record_solve(elapsed, status.value, solution.iterations)
    logger.info(
        "solve terminado",
        extra={"extra_fields": {
            "problem": problem.name, "status": status.value, "objective": solution.objective_value,
            "gap": solution.duality_gap, "iterations": solution.iterations, "wall_time": elapsed,
        }},
    )
    return solution


__all__ = ["solve", "SdpSolution", "SolverStatus"]
