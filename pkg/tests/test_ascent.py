import numpy as np
import pytest
from pydantic import ValidationError

from entbound.ascent import Ensemble, closest_product_state, product_ascent, ub_mixed, ub_pure
from entbound.ascent.mixed import initial_decomposition
from entbound.bounds import exact_two_qubit
from entbound.config.models import AscentConfig
from entbound.core.errors import UsageError
from entbound.core.tensor import DensityMatrix, PureState, fidelity, negativity, random_density_matrix
from entbound.states.library import bell, ghz, hr1, product_basis, sigma_star, w


def test_ub_pure_reference_states(ascent):
    assert ub_pure(ghz(3), ascent).value == pytest.approx(0.5, abs=1e-6)
    assert ub_pure(w(3), ascent).value == pytest.approx(5.0 / 9.0, abs=1e-6)
    assert ub_pure(product_basis("101"), ascent).value == pytest.approx(0.0, abs=1e-10)


def test_closest_product_state_of_w(ascent):
    state, overlap = closest_product_state(w(3), ascent)
    assert overlap**2 == pytest.approx(4.0 / 9.0, abs=1e-6)
    assert abs(np.vdot(state.vector(), w(3).amplitudes)) == pytest.approx(overlap, abs=1e-12)
    # Los factores del óptimo de W son iguales salvo fase: |a_i|² = (2/3, 1/3)
    for factor in state.factors:
        assert abs(factor[0]) ** 2 == pytest.approx(2.0 / 3.0, abs=1e-4)


def test_product_ascent_is_reproducible():
    config = AscentConfig(restarts=4, seed=11, max_iterations=500)
    a = product_ascent(w(3), config)
    b = product_ascent(w(3), config)
    assert a.overlap == b.overlap
    assert a.iterations == b.iterations


def test_product_ascent_needs_two_parties(ascent):
    with pytest.raises(UsageError):
        product_ascent(PureState.normalized([1, 1], (2,)), ascent)


def test_ub_mixed_certificate_is_a_separable_ensemble(ascent):
    rho = random_density_matrix(4, 3, seed=17, layout=(2, 2))
    bound, ensemble = ub_mixed(rho, ascent)
    assert bound.direction == "upper" and bound.method == "ascent"
    assert ensemble.separable
    sigma = bound.certificate["sigma"]
    assert ensemble.reconstructs(sigma, tol=1e-12)
    assert bound.value == pytest.approx(1.0 - fidelity(rho.matrix, sigma), abs=1e-12)
    for product, state in zip(ensemble.products, ensemble.states):
        np.testing.assert_allclose(product.vector(), state.amplitudes, atol=1e-14)


def test_ub_mixed_rank_one_uses_product_search(ascent):
    bound, ensemble = ub_mixed(bell().density(), ascent)
    assert len(ensemble.states) == 1
    assert bound.value == pytest.approx(0.5, abs=1e-8)


def test_ub_mixed_separable_and_maximally_mixed(ascent, maximally_mixed_qubits):
    bound, _ = ub_mixed(maximally_mixed_qubits, ascent)
    assert bound.value == pytest.approx(0.0, abs=1e-5)
    rho = product_basis("01").density()
    assert ub_mixed(rho, ascent)[0].value == pytest.approx(0.0, abs=1e-10)


def test_sigma_star_certifies_hr1():
    rho = hr1()
    assert negativity(sigma_star(), [0]) < 1e-12
    assert fidelity(rho, sigma_star()) == pytest.approx(2.0 / 3.0, abs=1e-12)


def test_initial_decomposition_reproduces_rho(rng):
    rho = random_density_matrix(4, 2, seed=3, layout=(2, 2))
    p, psi = initial_decomposition(rho, 16, rng)
    assert p.shape == (16,)
    np.testing.assert_allclose(np.linalg.norm(psi, axis=1), 1.0, atol=1e-12)
    np.testing.assert_allclose((psi.T * p) @ psi.conj(), rho.matrix, atol=1e-12)


def test_ensemble_validation():
    states = [product_basis("0"), product_basis("1")]
    with pytest.raises(ValidationError):
        Ensemble(weights=[0.7, 0.7], states=states)
    with pytest.raises(ValidationError):
        Ensemble(weights=[1.2, -0.2], states=states)
    with pytest.raises(ValidationError):
        Ensemble(weights=[1.0], states=states)
    e = Ensemble(weights=[0.25, 0.75], states=states)
    assert not e.separable
    np.testing.assert_allclose(e.density(), np.diag([0.25, 0.75]))


def test_upper_bound_dominates_exact_mixture(ascent):
    rho = DensityMatrix.from_matrix(0.8 * bell().projector() + 0.2 * np.eye(4) / 4, (2, 2))
    bound, _ = ub_mixed(rho, ascent)
    assert bound.value >= exact_two_qubit(rho) - 1e-8
    assert bound.value - exact_two_qubit(rho) < 1e-4
