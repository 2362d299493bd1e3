import numpy as np
import pytest

from entbound.core.errors import SdpModelError, UsageError
from entbound.core.tensor import (
    fidelity,
    partial_trace_array,
    partial_transpose_array,
    random_density_matrix,
    random_pure_state,
)
from entbound.sdp import (
    Expr,
    SdpProblem,
    SolverStatus,
    embed_matrix,
    problem_to_dict,
    root_fidelity_block,
    solve,
)
from entbound.sdp.problem import hermitian_basis
from entbound.sdp.solver import NEAR_OPTIMAL_FACTOR, _InteriorPoint


def _random_hermitian(rng, n):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (g + g.conj().T)


def _max_eigenvalue_problem(c: np.ndarray) -> SdpProblem:
    problem = SdpProblem("eig", sense="max")
    x = problem.variable("x", c.shape[0])
    problem.add_psd(x.expr)
    problem.add_equality(x.expr.trace(), 1.0)
    problem.add_objective(x, c)
    return problem


def test_hermitian_basis_is_orthonormal():
    for field, count in (("complex", 9), ("real", 6)):
        basis = hermitian_basis(3, field).toarray()
        assert basis.shape == (9, count)
        gram = np.real(basis.conj().T @ basis)
        np.testing.assert_allclose(gram, np.eye(count), atol=1e-14)


def test_expression_operators_match_dense_versions(rng):
    problem = SdpProblem("ops")
    v = problem.variable("v", 6)
    m = _random_hermitian(rng, 6)
    values = {v.index: m}
    np.testing.assert_allclose(
        v.expr.partial_transpose((2, 3), [1]).evaluate(values), partial_transpose_array(m, (2, 3), [1]), atol=1e-14
    )
    np.testing.assert_allclose(
        v.expr.partial_trace((2, 3), [1]).evaluate(values), partial_trace_array(m, (2, 3), [1]), atol=1e-14
    )
    a = rng.standard_normal((2, 6))
    np.testing.assert_allclose((a @ v.expr).evaluate(values), a @ m, atol=1e-13)
    np.testing.assert_allclose(v.expr[0:2, 3:6].evaluate(values), m[0:2, 3:6])
    np.testing.assert_allclose(v.expr.trace().evaluate(values)[0, 0], np.trace(m))
    block = Expr.block([[np.eye(2), v.expr[0:2, 0:6]], [v.expr[0:2, 0:6].H, v.expr]])
    expected = np.block([[np.eye(2), m[0:2]], [m[0:2].conj().T, m]])
    np.testing.assert_allclose(block.evaluate(values), expected, atol=1e-14)


def test_max_eigenvalue(rng):
    c = _random_hermitian(rng, 4)
    solution = solve(_max_eigenvalue_problem(c))
    assert solution.status == SolverStatus.OPTIMAL
    assert solution.objective_value == pytest.approx(np.linalg.eigvalsh(c)[-1], abs=1e-6)
    x = solution.primal_blocks[0]
    assert np.trace(x).real == pytest.approx(1.0, abs=1e-6)
    assert np.linalg.eigvalsh(x)[0] > -1e-6


def test_min_sense_and_real_field(rng):
    c = np.real(_random_hermitian(rng, 3))
    problem = SdpProblem("min-eig", sense="min", field="real")
    x = problem.variable("x", 3)
    problem.add_psd(x.expr)
    problem.add_equality(x.expr.trace(), 1.0)
    problem.add_objective(x, c)
    solution = solve(problem)
    assert solution.optimal
    assert solution.objective_value == pytest.approx(np.linalg.eigvalsh(c)[0], abs=1e-6)


@pytest.mark.parametrize("rank", [4, 1])
def test_root_fidelity_block(rank):
    rho = random_density_matrix(4, rank, seed=21 + rank)
    sigma = random_density_matrix(4, 4, seed=3)
    problem = SdpProblem("fid", sense="max")
    block = root_fidelity_block(problem, rho.matrix, Expr.const(sigma.matrix))
    assert block.support == rank
    solution = solve(problem)
    assert solution.optimal
    assert solution.objective_value ** 2 == pytest.approx(fidelity(rho, sigma), abs=1e-6)


def test_fidelity_block_requires_max_sense():
    problem = SdpProblem("fid", sense="min")
    with pytest.raises(SdpModelError):
        root_fidelity_block(problem, np.eye(2) / 2, Expr.const(np.eye(2) / 2))


def test_real_embedding_gives_same_value():
    psi = random_pure_state((2, 2), seed=8)
    sigma = random_density_matrix(4, 4, seed=9)
    problem = SdpProblem("fid", sense="max")
    root_fidelity_block(problem, psi.projector(), Expr.const(sigma.matrix))
    direct = solve(problem)
    embedded = solve(problem, real_embedding=True)
    assert embedded.optimal
    assert embedded.objective_value == pytest.approx(direct.objective_value, abs=1e-6)


def test_embed_matrix_spectrum(rng):
    m = _random_hermitian(rng, 3)
    ev = np.linalg.eigvalsh(embed_matrix(m))
    np.testing.assert_allclose(ev, np.repeat(np.linalg.eigvalsh(m), 2), atol=1e-12)


def test_inconsistent_equalities_are_infeasible():
    problem = SdpProblem("bad")
    x = problem.variable("x", 2)
    problem.add_psd(x.expr)
    problem.add_equality(x.expr.trace(), 1.0)
    problem.add_equality(x.expr.trace(), 2.0)
    problem.add_objective(x, np.eye(2))
    assert solve(problem).status == SolverStatus.INFEASIBLE


def test_compiled_problem_is_frozen():
    problem = _max_eigenvalue_problem(np.eye(2))
    problem.compile()
    with pytest.raises(SdpModelError):
        problem.variable("y", 2)


def test_model_errors():
    problem = SdpProblem("bad")
    x = problem.variable("x", 2)
    with pytest.raises(SdpModelError):
        problem.add_objective(x, np.array([[0, 1], [0, 0]]))
    with pytest.raises(SdpModelError):
        problem.add_psd(x.expr[0:1, 0:2])
    with pytest.raises(SdpModelError):
        x.expr + np.eye(3)
    with pytest.raises(SdpModelError):
        SdpProblem("bad", sense="sideways")


def test_invalid_tolerance():
    with pytest.raises(UsageError):
        solve(_max_eigenvalue_problem(np.eye(2)), tolerance=0.0)


def test_max_iterations_status(rng):
    solution = solve(_max_eigenvalue_problem(_random_hermitian(rng, 4)), max_iterations=1)
    assert solution.status in (SolverStatus.MAX_ITERATIONS, SolverStatus.OPTIMAL)
    assert solution.iterations <= 1


def test_problem_dump_describes_conic_form():
    problem = _max_eigenvalue_problem(np.diag([1.0, 2.0]))
    data = problem_to_dict(problem)
    assert data["format"] == "entbound-sdp/1"
    assert data["n"] == 4
    assert data["blocks"] == [{"name": "x", "dim": 2, "offset": [0, 4]}]
    assert data["cones"][0]["dim"] == 2
    assert len(data["b"]) == 1


def test_optimal_solution_reports_accuracy(rng):
    solution = solve(_max_eigenvalue_problem(_random_hermitian(rng, 3)), tolerance=1e-8)
    assert solution.optimal
    assert solution.accuracy <= 1e-8


def test_breakdown_returns_best_iterate():
    engine = _InteriorPoint(_max_eigenvalue_problem(np.eye(2)).compile(), 1e-8, 10)
    best = {"merit": 0.5 * NEAR_OPTIMAL_FACTOR * 1e-8, "iterations": 3}
    last = {"merit": 1.0, "iterations": 7}
    status, info = engine._breakdown(best, last, "pasos estancados")
    assert status == SolverStatus.OPTIMAL
    assert info is best

    far = {"merit": 1e-4, "iterations": 3}
    status, info = engine._breakdown(far, last, "pasos estancados")
    assert status == SolverStatus.NUMERICAL_FAILURE
    assert info is far

    status, info = engine._breakdown({}, last, "no finito")
    assert status == SolverStatus.NUMERICAL_FAILURE
    assert info is last


def test_cone_cholesky_on_boundary():
    singular = np.diag([1.0, 0.0]).astype(np.complex128)
    factor = _InteriorPoint._cholesky_pd(singular)
    np.testing.assert_allclose(factor @ factor.conj().T, singular, atol=1e-9)
    with pytest.raises(np.linalg.LinAlgError):
        _InteriorPoint._cholesky_pd(-np.eye(2, dtype=np.complex128))
