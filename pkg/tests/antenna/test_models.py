import numpy as np
import pytest
from pydantic import BaseModel, ValidationError

from pixelmiso.antenna.fields import ComplexMatrix, as_bits
from pixelmiso.antenna.models import AntennaCoder


class M(BaseModel):
    matrix: ComplexMatrix


def test_array_field_is_read_only_copy():
    source = np.eye(2)
    m = M(matrix=source)
    source[0, 0] = 5
    assert m.matrix[0, 0] == 1
    assert m.matrix.dtype == complex
    with pytest.raises(ValueError):
        m.matrix[0, 0] = 2


def test_array_field_wrong_input():
    with pytest.raises(ValidationError):
        M(matrix=[1, 2])
    with pytest.raises(ValidationError):
        M(matrix=[[np.nan, 0]])
    with pytest.raises(ValidationError):
        M(matrix="test")


def test_antenna_coder_string():
    coder = AntennaCoder.from_string("01101\n")
    assert coder.q == 5
    assert str(coder) == "01101"
    assert np.array_equal(as_bits(coder), [0, 1, 1, 0, 1])
    assert coder.key() == AntennaCoder(bits=[0, 1, 1, 0, 1]).key()


def test_antenna_coder_is_binary():
    with pytest.raises(ValidationError):
        AntennaCoder(bits=[0, 2])


def test_antenna_coder_is_immutable():
    coder = AntennaCoder.zeros(3)
    with pytest.raises(TypeError):
        coder.bits = np.ones(3)
