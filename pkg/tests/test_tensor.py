import numpy as np
import pytest
from pydantic import ValidationError

from entbound.core.errors import UsageError
from entbound.core.tensor import (
    DensityMatrix,
    ProductState,
    PureState,
    SubsystemLayout,
    fidelity,
    negativity,
    negativity_profile,
    partial_trace,
    partial_transpose,
    ppt_cuts,
    purify,
    random_density_matrix,
    random_product_state,
    random_separable_state,
    tensor_product,
)
from entbound.states.library import bell, ghz, horodecki_3x3


def test_layout_rejects_empty_and_trivial_dims():
    with pytest.raises(ValidationError):
        SubsystemLayout(dims=())
    with pytest.raises(ValidationError):
        SubsystemLayout(dims=(2, 1))
    # Solo la ancilla de una purificación puede tener dimensión 1
    assert SubsystemLayout.of((1, 2, 2)).total == 4


def test_density_matrix_invariants():
    with pytest.raises(ValidationError):
        DensityMatrix(matrix=np.eye(4) / 2.0, layout=(2, 2))
    with pytest.raises(ValidationError):
        DensityMatrix(matrix=np.diag([1.5, -0.5]), layout=(2,))
    with pytest.raises(ValidationError):
        DensityMatrix(matrix=np.array([[0.5, 0.1], [0.2, 0.5]]), layout=(2,))
    rho = DensityMatrix.from_matrix(np.diag([2.0, 1.0, 1.0]), (3,), normalize=True)
    assert rho.matrix[0, 0] == pytest.approx(0.5)
    with pytest.raises(ValueError):
        rho.matrix[0, 0] = 1.0


def test_pure_state_normalization():
    psi = PureState.normalized([1, 1j], (2,))
    assert np.linalg.norm(psi.amplitudes) == pytest.approx(1.0)
    with pytest.raises(UsageError):
        PureState.normalized([0, 0], (2,))
    with pytest.raises(ValidationError):
        PureState(amplitudes=[1.0, 1.0], layout=(2,))


def test_partial_trace_of_product_returns_factor(rng):
    a = random_density_matrix(2, 2, seed=1)
    b = random_density_matrix(3, 3, seed=2)
    rho = DensityMatrix.from_matrix(tensor_product([a.matrix, b.matrix]), (2, 3))
    np.testing.assert_allclose(partial_trace(rho, [0]).matrix, a.matrix, atol=1e-12)
    np.testing.assert_allclose(partial_trace(rho, [1]).matrix, b.matrix, atol=1e-12)
    assert partial_trace(rho, [1]).layout.dims == (3,)


def test_partial_trace_rejects_bad_indices():
    rho = ghz(3).density()
    with pytest.raises(UsageError):
        partial_trace(rho, [3])
    with pytest.raises(UsageError):
        partial_trace(rho, [])


def test_partial_transpose_is_an_involution():
    rho = random_density_matrix(6, 6, seed=3, layout=(2, 3))
    once = partial_transpose(rho, [1])
    twice = partial_transpose(once, [1], layout=rho.layout)
    np.testing.assert_allclose(twice, rho.matrix, atol=1e-14)
    with pytest.raises(UsageError):
        partial_transpose(rho.matrix, [0])


def test_purification_marginal_recovers_state():
    rho = random_density_matrix(4, 3, seed=5, layout=(2, 2))
    psi = purify(rho)
    assert psi.layout.dims == (3, 2, 2)
    marginal = partial_trace(psi.density(), [1, 2])
    np.testing.assert_allclose(marginal.matrix, rho.matrix, atol=1e-12)


def test_purification_of_pure_state_has_trivial_ancilla():
    psi = purify(bell().density())
    assert psi.layout.dims == (1, 2, 2)


def test_fidelity_values():
    a = bell("phi+")
    b = bell("psi+")
    assert fidelity(a.density(), a.density()) == pytest.approx(1.0, abs=1e-12)
    assert fidelity(a.density(), b.density()) == pytest.approx(0.0, abs=1e-12)
    mixed = DensityMatrix.from_matrix(np.eye(4) / 4.0, (2, 2))
    assert fidelity(a.density(), mixed) == pytest.approx(0.25, abs=1e-12)


def test_negativity_bell_and_bound_entangled():
    assert negativity(bell().density(), [0]) == pytest.approx(0.5, abs=1e-12)
    assert negativity(horodecki_3x3(0.5), [0]) <= 1e-12
    with pytest.raises(UsageError):
        negativity(bell().density(), [0, 1])


def test_ppt_cuts_modes():
    assert ppt_cuts((3, 3), "single") == [(0,)]
    assert ppt_cuts((2, 2, 2), "single") == [(0,), (1,), (2,)]
    assert ppt_cuts((2, 2, 2), "all") == [(0,), (1,), (2,)]
    assert len(ppt_cuts((2, 2, 2, 2), "all")) == 7
    assert ppt_cuts((1, 2, 2), "single") == [(1,)]
    assert ppt_cuts((4,), "single") == []
    with pytest.raises(UsageError):
        ppt_cuts((2, 2), "nope")


def test_negativity_profile_labels():
    profile = negativity_profile(ghz(3).density(), "single")
    assert set(profile) == {"0", "1", "2"}
    assert all(v == pytest.approx(0.5, abs=1e-12) for v in profile.values())


def test_random_states_are_reproducible_and_valid(check_density):
    a = random_density_matrix(9, 4, seed=11, layout=(3, 3))
    b = random_density_matrix(9, 4, seed=11, layout=(3, 3))
    np.testing.assert_array_equal(a.matrix, b.matrix)
    assert a.rank() == 4
    check_density(a)
    with pytest.raises(UsageError):
        random_density_matrix(4, 5, seed=0)


def test_random_separable_state_is_ppt(check_density):
    rho = random_separable_state((3, 3), 6, seed=2)
    check_density(rho)
    assert negativity(rho, [0]) < 1e-10


def test_product_state_vector(rng):
    p = random_product_state((2, 3), rng)
    assert isinstance(p, ProductState)
    assert p.layout.dims == (2, 3)
    np.testing.assert_allclose(p.vector(), np.kron(p.factors[0], p.factors[1]))
    assert np.linalg.norm(p.to_pure().amplitudes) == pytest.approx(1.0)
