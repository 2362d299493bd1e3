"""Biblioteca de estados: familias de referencia, cadenas de espines, canales y registro de constructores."""

try:
    from .channels import KrausChannel, amplitude_damping, apply_local_channel, depolarizing
    from .library import bell, ghz, ghz_w_mixture, hr0, hr1, horodecki_3x3, m32, product_basis, sigma_star, w, werner
    from .registry import CONSTRUCTORS, build_state, load_state, parse_constructor
    from .spin import (
        SpinModel,
        ground_state,
        hamiltonian,
        hexagon_bdf,
        thermal_hexagon,
        thermal_state,
        thermal_xx,
        thermal_xxx,
        xxx_closed_form,
        xxx_reference_state,
    )
except ImportError:
    from entbound.states.channels import KrausChannel, amplitude_damping, apply_local_channel, depolarizing
    from entbound.states.library import (
        bell, ghz, ghz_w_mixture, hr0, hr1, horodecki_3x3, m32, product_basis, sigma_star, w, werner,
    )
    from entbound.states.registry import CONSTRUCTORS, build_state, load_state, parse_constructor
    from entbound.states.spin import (
        SpinModel,
        ground_state,
        hamiltonian,
        hexagon_bdf,
        thermal_hexagon,
        thermal_state,
        thermal_xx,
        thermal_xxx,
        xxx_closed_form,
        xxx_reference_state,
    )

__all__ = [
    "KrausChannel",
    "amplitude_damping",
    "apply_local_channel",
    "depolarizing",
    "bell",
    "ghz",
    "ghz_w_mixture",
    "hr0",
    "hr1",
    "horodecki_3x3",
    "m32",
    "product_basis",
    "sigma_star",
    "w",
    "werner",
    "CONSTRUCTORS",
    "build_state",
    "load_state",
    "parse_constructor",
    "SpinModel",
    "xxx_reference_state",
    "ground_state",
    "hamiltonian",
    "hexagon_bdf",
    "thermal_hexagon",
    "thermal_state",
    "thermal_xx",
    "thermal_xxx",
    "xxx_closed_form",
]
