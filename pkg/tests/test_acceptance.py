"""Escenarios de referencia a escala completa (pytest -m slow)."""

import numpy as np
import pytest

from entbound.ascent import closest_product_state
from entbound.bounds import lb_k_extension, lb_ppt_fidelity, lb_purity_full, lb_purity_reduced, pure_sdp_estimate
from entbound.config.models import AscentConfig, SweepGrid, SweepSpec
from entbound.core.tensor import negativity_profile, random_density_matrix
from entbound.harness import run_sweep
from entbound.states import ghz, w
from entbound.states.spin import thermal_xx

pytestmark = pytest.mark.slow

ASCENT = AscentConfig(restarts=5, seed=11)


def _sweep(experiment: str, name: str, values, **kwargs):
    spec = SweepSpec(
        experiment=experiment,
        grid=SweepGrid(name=name, values=list(values)),
        ascent=ASCENT,
        workers=2,
        **kwargs,
    )
    return run_sweep(spec)


def test_horodecki_bound_entanglement_sweep():
    rows = _sweep("horodecki", "a", [0.1, 0.3, 0.5, 0.7, 0.9], lb_method="lb4")
    for row in rows:
        assert row.status in ("ok", "precision-limited")
        assert row.extras["negativity"] <= 1e-12
        assert row.lower > 0.0
        assert row.gap <= 1e-5


def test_pure_oracles_agree():
    for psi, expected in ((ghz(3), 0.5), (w(3), 5.0 / 9.0)):
        sdp = pure_sdp_estimate(psi)
        _, overlap = closest_product_state(psi, ASCENT)
        assert sdp.value == pytest.approx(expected, abs=1e-6)
        assert 1.0 - overlap**2 == pytest.approx(expected, abs=1e-6)
        assert abs(sdp.value - expected) <= sdp.accuracy + 1e-7


def test_bound_hierarchy_on_random_qutrit_pairs():
    lb2k3_vs_lb4 = []
    for seed in range(20):
        rho = random_density_matrix(9, 9, seed=500 + seed, layout=(3, 3))
        lb1 = lb_ppt_fidelity(rho).value
        lb2 = lb_k_extension(rho, 2).value
        lb2k3 = lb_k_extension(rho, 3).value
        lb3 = lb_purity_reduced(rho).value
        lb4 = lb_purity_full(rho).value
        assert lb1 <= lb2 + 1e-7
        assert lb2 <= lb2k3 + 2e-7
        assert lb3 <= lb4 + 1e-7
        lb2k3_vs_lb4.append(abs(lb2k3 - lb4))
    assert max(lb2k3_vs_lb4) <= 2e-6


@pytest.mark.parametrize("J, onset, negativity_onset", [(1.0, 0.68, 0.706), (-1.0, 0.65, 0.781)])
def test_xx_thermal_thresholds(J, onset, negativity_onset):
    grid = [round(0.55 + 0.01 * i, 2) for i in range(26)]
    rows = _sweep("xx-thermal", "beta", grid, lb_method="lb4", options={"J": J})
    first = next(r.param for r in rows if r.lower is not None and r.lower > 1e-6)
    assert first == pytest.approx(onset, abs=0.02)

    fine = np.arange(0.60, 0.90, 0.001)
    negative = next(b for b in fine if max(negativity_profile(thermal_xx(b, J=J)).values()) > 1e-12)
    assert negative == pytest.approx(negativity_onset, abs=0.01)


def test_xx_ppt_window_is_witnessed():
    rows = _sweep("xx-ppt-window", "beta", [0.74], lb_method="lb4")
    row = rows[0]
    assert row.extras["ppt"] is True
    assert row.lower > 1e-6


def test_noise_curves():
    q = [round(0.1 * i, 1) for i in range(10)]
    ghz_rows = _sweep("noise-ad", "q", q, lb_method="lb4", options={"state": "ghz"})
    w_rows = _sweep("noise-ad", "q", q, lb_method="lb4", options={"state": "w"})
    assert all(r.gap <= 1e-4 for r in ghz_rows + w_rows)
    ghz_at = {r.param: r.lower for r in ghz_rows}
    w_at = {r.param: r.lower for r in w_rows}
    assert ghz_at[0.1] > w_at[0.1]
    assert w_at[0.9] > ghz_at[0.9]

    p = [round(0.1 * i, 1) for i in range(2, 10)]
    ghz_dep = _sweep("noise-dep", "p", p, lb_method="lb4", options={"state": "ghz"})
    w_dep = _sweep("noise-dep", "p", p, lb_method="lb4", options={"state": "w"})
    for a, b in zip(ghz_dep, w_dep):
        assert abs(a.lower - b.lower) <= 0.02


@pytest.mark.parametrize(
    "h, entangled",
    [(0.0, False), (0.3, True), (0.5, True), (2.0, False)],
)
def test_hexagon_activation(h, entangled):
    row = _sweep("hexagon", "h", [h], lb_method="lb4", options={"beta": 5.0})[0]
    assert row.status in ("ok", "precision-limited")
    if entangled:
        assert row.lower > 1e-4
    else:
        assert row.lower <= 1e-6
    if h == 0.3:
        assert all(v <= 1e-9 for v in row.extras["pairwise"].values())
