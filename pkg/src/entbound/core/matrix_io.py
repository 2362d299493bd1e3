"""
E/S de matrices en texto plano y JSON.

Texto: primera línea "dims: d1 d2 ... dk", luego una fila por línea con
entradas "re+imj". JSON: {"dims": [...], "re": [[...]], "im": [[...]]}.
Ambos con 17 cifras significativas (ida y vuelta exacta).
"""

import json
from pathlib import Path
from typing import Any, Dict, Sequence

import numpy as np
from pydantic import ValidationError

try:
    from .errors import MatrixFormatError
    from .tensor import DensityMatrix
except ImportError:
    from entbound.core.errors import MatrixFormatError
    from entbound.core.tensor import DensityMatrix


def _token(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}j"


def format_matrix_text(matrix: np.ndarray, dims: Sequence[int]) -> str:
    lines = ["dims: " + " ".join(str(int(d)) for d in dims)]
    for row in np.asarray(matrix, dtype=np.complex128):
        lines.append(" ".join(_token(z) for z in row))
    return "\n".join(lines) + "\n"


def parse_matrix_text(text: str) -> tuple[np.ndarray, tuple[int, ...]]:
    """Devuelve (matriz, dims). Líneas vacías y comentarios '#' se ignoran."""
    dims: tuple[int, ...] | None = None
    rows: list[list[complex]] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if dims is None:
            if not line.startswith("dims:"):
                raise MatrixFormatError("se esperaba la cabecera 'dims: d1 d2 ...'", number)
            try:
                dims = tuple(int(tok) for tok in line[len("dims:"):].split())
            except ValueError:
                raise MatrixFormatError("dimensiones no enteras en la cabecera", number)
            if not dims or any(d < 1 for d in dims):
                raise MatrixFormatError(f"dimensiones inválidas {dims}", number)
            total = int(np.prod(dims))
            continue
        try:
            row = [complex(tok) for tok in line.split()]
        except ValueError as e:
            raise MatrixFormatError(f"entrada compleja inválida ({e})", number)
        if len(row) != total:
            raise MatrixFormatError(f"la fila tiene {len(row)} entradas, se esperaban {total}", number)
        if len(rows) == total:
            raise MatrixFormatError("filas de más", number)
        rows.append(row)
    if dims is None:
        raise MatrixFormatError("archivo vacío", 1)
    if len(rows) != total:
        raise MatrixFormatError(f"se leyeron {len(rows)} filas, se esperaban {total}")
    return np.array(rows, dtype=np.complex128), dims


def matrix_to_json(matrix: np.ndarray, dims: Sequence[int]) -> Dict[str, Any]:
    m = np.asarray(matrix, dtype=np.complex128)
    return {
        "dims": [int(d) for d in dims],
        "re": [[float(f"{x:.17g}") for x in row] for row in m.real],
        "im": [[float(f"{x:.17g}") for x in row] for row in m.imag],
    }


def matrix_from_json(obj: Dict[str, Any]) -> tuple[np.ndarray, tuple[int, ...]]:
    try:
        dims = tuple(int(d) for d in obj["dims"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    except (KeyError, TypeError, ValueError) as e:
        raise MatrixFormatError(f"JSON de matriz inválido: {e}")
    total = int(np.prod(dims))
    if re.shape != (total, total) or im.shape != (total, total):
        raise MatrixFormatError(f"forma {re.shape}/{im.shape} incompatible con dims {dims}")
    return re + 1j * im, dims


def read_matrix(path: str | Path) -> tuple[np.ndarray, tuple[int, ...]]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise MatrixFormatError(f"{path}: no es texto UTF-8 (byte {e.start})")
    except OSError as e:
        raise MatrixFormatError(f"{path}: no se puede leer ({e.strerror or e})")
    if path.suffix.lower() == ".json":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as e:
            raise MatrixFormatError(f"JSON inválido: {e.msg}", e.lineno)
        return matrix_from_json(obj)
    return parse_matrix_text(text)


def read_density_matrix(path: str | Path) -> DensityMatrix:
    """Lee y valida un estado; una violación de invariantes es un error de formato."""
    matrix, dims = read_matrix(path)
    try:
        return DensityMatrix(matrix=matrix, layout=dims)
    except ValidationError as e:
        first = e.errors()[0]
        raise MatrixFormatError(f"{path}: {first['msg']}")


def write_matrix(path: str | Path, matrix: np.ndarray, dims: Sequence[int], fmt: str | None = None) -> None:
    path = Path(path)
    fmt = fmt or ("json" if path.suffix.lower() == ".json" else "text")
    if fmt == "json":
        path.write_text(json.dumps(matrix_to_json(matrix, dims)) + "\n", encoding="utf-8")
    else:
        path.write_text(format_matrix_text(matrix, dims), encoding="utf-8")


__all__ = [
    "format_matrix_text",
    "parse_matrix_text",
    "matrix_to_json",
    "matrix_from_json",
    "read_matrix",
    "read_density_matrix",
    "write_matrix",
]
