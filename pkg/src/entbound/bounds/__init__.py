"""
Cotas inferiores SDP (lb1-lb4), estimador puro y fórmula exacta de dos qubits.
`entbound.bounds.estimate` combina cotas inferiores y superiores.
"""

try:
    from .exact import concurrence, exact_bound, exact_two_qubit
    from .lower import (
        build_lower,
        lb_k_extension,
        lb_ppt_fidelity,
        lb_purity_full,
        lb_purity_reduced,
        lower_bound,
    )
    from .pure import pure_sdp_estimate
    from .results import BoundResult, PureEstimate
except ImportError:
    from entbound.bounds.exact import concurrence, exact_bound, exact_two_qubit
    from entbound.bounds.lower import (
        build_lower,
        lb_k_extension,
        lb_ppt_fidelity,
        lb_purity_full,
        lb_purity_reduced,
        lower_bound,
    )
    from entbound.bounds.pure import pure_sdp_estimate
    from entbound.bounds.results import BoundResult, PureEstimate

__all__ = [
    "BoundResult",
    "PureEstimate",
    "lb_ppt_fidelity",
    "lb_k_extension",
    "lb_purity_reduced",
    "lb_purity_full",
    "lower_bound",
    "build_lower",
    "pure_sdp_estimate",
    "exact_two_qubit",
    "exact_bound",
    "concurrence",
]
