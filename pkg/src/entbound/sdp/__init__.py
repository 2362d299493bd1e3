"""Modelado y solver SDP hermítico."""

try:
    from .dump import dump_problem, problem_to_dict
    from .embed import RealEmbedding, embed_complex, embed_matrix
    from .fidelity import FidelityBlock, root_fidelity_block
    from .problem import Expr, SdpProblem, Variable
    from .solver import SdpSolution, SolverStatus, solve
except ImportError:
    from entbound.sdp.dump import dump_problem, problem_to_dict
    from entbound.sdp.embed import RealEmbedding, embed_complex, embed_matrix
    from entbound.sdp.fidelity import FidelityBlock, root_fidelity_block
    from entbound.sdp.problem import Expr, SdpProblem, Variable
    from entbound.sdp.solver import SdpSolution, SolverStatus, solve

__all__ = [
    "Expr",
    "SdpProblem",
    "Variable",
    "SdpSolution",
    "SolverStatus",
    "solve",
    "embed_complex",
    "embed_matrix",
    "RealEmbedding",
    "root_fidelity_block",
    "FidelityBlock",
    "dump_problem",
    "problem_to_dict",
]
