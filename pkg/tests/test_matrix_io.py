import json

import numpy as np
import pytest

from entbound.core.errors import MatrixFormatError
from entbound.core.matrix_io import (
    format_matrix_text,
    matrix_from_json,
    matrix_to_json,
    parse_matrix_text,
    read_density_matrix,
    write_matrix,
)
from entbound.core.tensor import random_density_matrix


def test_text_round_trip_is_exact(tmp_path):
    rho = random_density_matrix(4, 4, seed=9, layout=(2, 2))
    path = tmp_path / "rho.txt"
    write_matrix(path, rho.matrix, rho.layout.dims)
    back = read_density_matrix(path)
    np.testing.assert_array_equal(back.matrix, rho.matrix)
    assert back.layout.dims == (2, 2)


def test_json_format(tmp_path):
    rho = random_density_matrix(3, 2, seed=4)
    obj = matrix_to_json(rho.matrix, (3,))
    assert obj["dims"] == [3]
    matrix, dims = matrix_from_json(json.loads(json.dumps(obj)))
    np.testing.assert_array_equal(matrix, rho.matrix)
    assert dims == (3,)


def test_comments_and_blank_lines_are_ignored():
    text = "# estado\n\ndims: 2\n0.5+0j 0+0j  # fila 1\n0+0j 0.5+0j\n"
    matrix, dims = parse_matrix_text(text)
    assert dims == (2,)
    np.testing.assert_array_equal(matrix, np.eye(2) / 2)


@pytest.mark.parametrize(
    "text, line",
    [
        ("2 0\n0 2\n", 1),
        ("dims: 2\n0.5 0\n0 abc\n", 3),
        ("dims: 2\n0.5 0 0\n", 2),
        ("dims: 2\n0.5 0\n0 0.5\n0 0\n", 4),
    ],
)
def test_parse_errors_name_the_line(text, line):
    with pytest.raises(MatrixFormatError) as info:
        parse_matrix_text(text)
    assert info.value.line == line
    assert f"línea {line}" in str(info.value)


def test_non_unit_trace_is_a_format_error(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text(format_matrix_text(np.eye(2), (2,)), encoding="utf-8")
    with pytest.raises(MatrixFormatError, match="traza"):
        read_density_matrix(path)


def test_invalid_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"dims": [2], "re": [[1, 0]]}', encoding="utf-8")
    with pytest.raises(MatrixFormatError):
        read_density_matrix(path)


def test_unreadable_files_are_format_errors(tmp_path):
    with pytest.raises(MatrixFormatError, match="no se puede leer"):
        read_density_matrix(tmp_path / "missing.txt")
    binary = tmp_path / "binary.txt"
    binary.write_bytes(b"dims: 2\n\xff\xfe\x00\n")
    with pytest.raises(MatrixFormatError, match="UTF-8"):
        read_density_matrix(binary)
