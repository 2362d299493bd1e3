import numpy as np
import pytest
from pydantic import ValidationError

from entbound.core.errors import CapacityError, UsageError
from entbound.core.tensor import DensityMatrix, PureState, negativity, partial_trace
from entbound.states import (
    amplitude_damping,
    apply_local_channel,
    build_state,
    depolarizing,
    ghz,
    hamiltonian,
    horodecki_3x3,
    hr0,
    hr1,
    load_state,
    m32,
    parse_constructor,
    thermal_state,
    thermal_xxx,
    w,
    xxx_closed_form,
)
from entbound.states.channels import KrausChannel
from entbound.states.registry import noisy, random_density
from entbound.states.spin import (
    SpinModel,
    xxx_reference_state,
    ground_xxx,
    hexagon_bdf,
    total_sz,
    xx_model,
    xxx_model,
)


# -- biblioteca ---------------------------------------------------------------------------


def test_ghz_and_w_amplitudes():
    np.testing.assert_allclose(ghz(3).amplitudes[[0, 7]], [2**-0.5, 2**-0.5])
    amps = w(3).amplitudes
    assert set(np.flatnonzero(amps)) == {1, 2, 4}
    np.testing.assert_allclose(amps[[1, 2, 4]], 3**-0.5)
    with pytest.raises(UsageError):
        ghz(1)


@pytest.mark.parametrize("a", [0.0, 0.01, 0.5, 1.0])
def test_horodecki_family_is_ppt(a, check_density):
    rho = horodecki_3x3(a)
    check_density(rho)
    assert negativity(rho, [0]) <= 1e-12


def test_horodecki_rejects_out_of_range():
    with pytest.raises(UsageError):
        horodecki_3x3(1.5)


def test_reference_ground_states_are_valid(check_density):
    for rho in (m32(), hr1(), hr0()):
        check_density(rho)
        assert rho.layout.dims == (2, 2, 2)
    with pytest.raises(UsageError):
        xxx_reference_state("m99")


# -- cadenas de espines --------------------------------------------------------------------


def test_two_site_xx_spectra():
    open_chain = hamiltonian(xx_model(n=2, J=1.0, periodic=False))
    np.testing.assert_allclose(np.linalg.eigvalsh(open_chain), [-1.0, 0.0, 0.0, 1.0], atol=1e-12)
    # Con n=2 el enlace periódico duplica el enlace abierto
    ring = hamiltonian(xx_model(n=2, J=1.0, periodic=True))
    np.testing.assert_allclose(np.linalg.eigvalsh(ring), [-2.0, 0.0, 0.0, 2.0], atol=1e-12)


@pytest.mark.parametrize("model", [xx_model(n=4, J=0.7, h=0.3), xxx_model(n=3, h=1.2)])
def test_hamiltonian_conserves_magnetization(model):
    h = hamiltonian(model)
    sz = total_sz(model.n)
    np.testing.assert_allclose(h @ sz - sz @ h, 0.0, atol=1e-12)
    np.testing.assert_allclose(h, h.conj().T)


def test_spin_model_limits():
    with pytest.raises(ValidationError):
        SpinModel(n=1)
    with pytest.raises(ValidationError):
        SpinModel(n=11)
    with pytest.raises(CapacityError):
        hamiltonian(SpinModel(n=9, Jx=1.0))
    assert SpinModel(n=3, periodic=False).bonds == [(0, 1), (1, 2)]
    assert SpinModel(n=3).bonds == [(0, 1), (1, 2), (2, 0)]


def test_thermal_state_limits():
    h = hamiltonian(xx_model(n=3))
    np.testing.assert_allclose(thermal_state(h, 0.0, (2, 2, 2)).matrix, np.eye(8) / 8, atol=1e-14)
    with pytest.raises(UsageError):
        thermal_state(h, -1.0, (2, 2, 2))
    with pytest.raises(UsageError):
        thermal_state(h, float("nan"), (2, 2, 2))
    with pytest.raises(UsageError):
        thermal_state(np.array([[0, 1], [0, 0]]), 1.0, (2,))


def test_large_beta_approaches_ground_state():
    h = hamiltonian(xxx_model(n=3, h=1.0))
    hot = thermal_state(h, 60.0, (2, 2, 2))
    np.testing.assert_allclose(hot.matrix, thermal_state(h, np.inf, (2, 2, 2)).matrix, atol=1e-12)


def test_closed_form_matches_numerical_thermal_state():
    for beta, h in ((5.0, 1.0), (0.7, 0.0), (2.0, 2.5)):
        numeric = thermal_xxx(beta, h=h, J=-1.0)
        closed = xxx_closed_form(beta, h, 1.0)
        assert np.max(np.abs(numeric.matrix - closed.matrix)) <= 1e-10


def test_ground_states_match_reference_states():
    np.testing.assert_allclose(ground_xxx(1.0).matrix, hr1().matrix, atol=1e-10)
    np.testing.assert_allclose(ground_xxx(0.0).matrix, hr0().matrix, atol=1e-10)
    np.testing.assert_allclose(ground_xxx(1.5).matrix, m32().matrix, atol=1e-10)
    polarized = np.zeros((8, 8))
    polarized[7, 7] = 1.0
    np.testing.assert_allclose(ground_xxx(2.0).matrix, polarized, atol=1e-10)


def test_hexagon_marginal(check_density):
    rho = hexagon_bdf(1.0, h=0.2)
    assert rho.layout.dims == (2, 2, 2)
    check_density(rho)
    pair = partial_trace(rho, (0, 1))
    assert pair.layout.dims == (2, 2)


# -- canales ------------------------------------------------------------------------------


def test_kraus_completeness_is_checked():
    for channel in (amplitude_damping(0.3), depolarizing(0.6)):
        total = sum(op.conj().T @ op for op in channel.operators)
        np.testing.assert_allclose(total, np.eye(2), atol=1e-14)
    with pytest.raises(ValidationError):
        KrausChannel(operators=[np.array([[1.0, 0.0], [0.0, 0.5]])])
    with pytest.raises(UsageError):
        amplitude_damping(1.2)


def test_full_amplitude_damping_drives_ghz_to_ground():
    rho = apply_local_channel(amplitude_damping(1.0), ghz(3).density())
    expected = np.zeros((8, 8))
    expected[0, 0] = 1.0
    np.testing.assert_allclose(rho.matrix, expected, atol=1e-14)


def test_depolarizing_fixes_maximally_mixed_and_preserves_trace(check_density):
    mixed = DensityMatrix.from_matrix(np.eye(2) / 2, (2,))
    np.testing.assert_allclose(apply_local_channel(depolarizing(0.4), mixed).matrix, np.eye(2) / 2, atol=1e-15)
    rho = apply_local_channel(depolarizing(0.3), w(3).density(), sites=[1])
    check_density(rho)
    full = apply_local_channel(depolarizing(1.0), ghz(2).density())
    np.testing.assert_allclose(full.matrix, np.eye(4) / 4, atol=1e-14)


def test_channel_site_validation():
    with pytest.raises(UsageError):
        apply_local_channel(amplitude_damping(0.5), ghz(3).density(), sites=[3])
    with pytest.raises(UsageError):
        apply_local_channel(amplitude_damping(0.5), horodecki_3x3(0.5), sites=[0])


# -- registro de constructores --------------------------------------------------------------


def test_parse_constructor():
    assert parse_constructor("ghz(3)") == ("ghz", [3], {})
    assert parse_constructor(" thermal_xx(beta=0.7, J=-1) ") == ("thermal_xx", [], {"beta": 0.7, "J": -1})
    assert parse_constructor("hr1") == ("hr1", [], {})
    for bad in ("ghz(", "ghz(n)", "os.system('x')", "ghz(**{})", "1 + 2"):
        with pytest.raises(UsageError):
            parse_constructor(bad)


def test_build_state_dispatch():
    assert isinstance(build_state("w(4)"), PureState)
    rho = build_state("noisy('w', 'dep', 0.2, n=3)")
    assert isinstance(rho, DensityMatrix) and rho.layout.dims == (2, 2, 2)
    assert build_state("random_density('2x3', rank=2, seed=4)").rank() == 2
    with pytest.raises(UsageError):
        build_state("nothing(1)")
    with pytest.raises(UsageError):
        build_state("ghz(1, 2, 3)")


def test_noisy_validation():
    with pytest.raises(UsageError):
        noisy("bell")
    with pytest.raises(UsageError):
        noisy("ghz", "phase")


def test_load_state_reads_files(tmp_path):
    from entbound.core.matrix_io import write_matrix

    rho = random_density("2x2", seed=1)
    path = tmp_path / "rho.txt"
    write_matrix(path, rho.matrix, rho.layout.dims)
    loaded = load_state(str(path))
    np.testing.assert_array_equal(loaded.matrix, rho.matrix)
    with pytest.raises(UsageError):
        load_state(str(tmp_path / "missing.json"))
