import numpy as np
import pytest

from pixelmiso.antenna.io import read_matrix, write_matrix, write_port_model
from pixelmiso.antenna.port_model import load_port_model
from pixelmiso.exceptions import MatrixFileError


def test_port_model_file(tmp_path, port_model):
    path = tmp_path / "antenna.txt"
    write_port_model(path, port_model)
    loaded = load_port_model(path)
    assert (loaded.q, loaded.k) == (5, 6)
    assert np.array_equal(loaded.z_full, port_model.z_full)
    assert np.array_equal(loaded.e_oc, port_model.e_oc)


def test_matrix_block_format(tmp_path):
    path = tmp_path / "m.txt"
    write_matrix(path, [[1 + 2j, 3]])
    assert path.read_text().splitlines() == ["1 1", "1 2 3 0"]
    assert np.array_equal(read_matrix(path), [[1 + 2j, 3]])


@pytest.mark.parametrize(
    "content",
    [
        "",
        "1 x\n",
        "1 2\n1 2\n",
        "1 1\n1\n",
        "1 1\n1 a\n",
        "1 1\n1 0\n2 0\n",
    ],
)
def test_malformed_matrix(tmp_path, content):
    path = tmp_path / "m.txt"
    path.write_text(content)
    with pytest.raises(MatrixFileError):
        read_matrix(path)


def test_missing_port_model_file(tmp_path):
    with pytest.raises(MatrixFileError):
        load_port_model(tmp_path / "missing.txt")
