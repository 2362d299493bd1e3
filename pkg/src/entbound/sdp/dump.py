"""
Volcado JSON autodescriptivo de la forma cónica compilada, para contrastar
con solvers externos:

    minimizar cᵀx  sujeto a  h_k − G_k x ⪰ 0 (bloques hermíticos),  A x = b

G_k en COO con partes real e imaginaria (filas = vec por filas del bloque).
"""

import json
from pathlib import Path
from typing import Any, Dict

import numpy as np
import scipy.sparse as sp

try:
    from ..config import config as app_config
    from .problem import SdpProblem
except ImportError:
    from entbound.config import config as app_config
    from entbound.sdp.problem import SdpProblem

DUMP_FORMAT = "entbound-sdp/1"


def _coo(matrix) -> Dict[str, Any]:
    m = sp.coo_matrix(matrix)
    return {
        "shape": list(m.shape),
        "row": m.row.tolist(),
        "col": m.col.tolist(),
        "re": np.real(m.data).tolist(),
        "im": np.imag(m.data).tolist(),
    }


def problem_to_dict(problem: SdpProblem) -> Dict[str, Any]:
    form = problem.compile()
    return {
        "format": DUMP_FORMAT,
        "generator": f"entbound {app_config.VERSION}",
        "name": problem.name,
        "sense": problem.sense,
        "field": problem.field,
        "objective_sign": form.sign,
        "blocks": [
            {"name": v.name, "dim": v.dim, "offset": list(off)}
            for v, off in zip(problem.variables, form.offsets)
        ],
        "n": form.n,
        "c": form.c.tolist(),
        "A": form.A.tolist(),
        "b": form.b.tolist(),
        "equalities_consistent": form.consistent,
        "cones": [
            {
                "name": name,
                "dim": h.shape[0],
                "G": _coo(g),
                "h": {"re": np.real(h).tolist(), "im": np.imag(h).tolist()},
            }
            for (name, _), (g, h) in zip(problem.cones, form.cones)
        ],
    }


def dump_problem(problem: SdpProblem, path: str | Path) -> None:
    Path(path).write_text(json.dumps(problem_to_dict(problem)) + "\n", encoding="utf-8")


__all__ = ["dump_problem", "problem_to_dict", "DUMP_FORMAT"]
