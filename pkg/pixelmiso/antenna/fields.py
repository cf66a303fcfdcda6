from typing import Optional

import numpy as np


def Array(dtype=complex, ndim: Optional[int] = None):
    """
    Returns a pydantic-compatible field type for numpy arrays.
    Validated values are copied, cast to `dtype`, checked for
    dimensionality and made read-only. The stored value is a plain
    `numpy.ndarray`.

    :param dtype: numpy dtype of the stored array
    :param ndim: Optional[int] - required number of dimensions
    """

    class NewType(np.ndarray):
        _dtype = np.dtype(dtype)
        _ndim = ndim

        @classmethod
        def __get_validators__(cls):
            yield cls.validate

        @classmethod
        def validate(cls, v):
            try:
                array = np.array(v, dtype=cls._dtype, copy=True)
            except (TypeError, ValueError, OverflowError):
                raise TypeError(f"Value is not castable to {cls._dtype}")
            if cls._ndim is not None and array.ndim != cls._ndim:
                raise ValueError(
                    f"Expected {cls._ndim}-d array, got shape {array.shape}"
                )
            if array.dtype.kind in "fc" and not np.all(np.isfinite(array)):
                raise ValueError("Array has non-finite entries")
            array.setflags(write=False)
            return array

        @classmethod
        def __modify_schema__(cls, field_schema):
            field_schema.update(type="array", examples=[[0, 1, 0, 1]])

    NewType.__name__ = f"Array {np.dtype(dtype).name} {ndim}d"
    return NewType


class ComplexScalar(complex):
    """
    Complex number field. Accepts python and numpy scalars.
    """

    @classmethod
    def __get_validators__(cls):
        yield cls.validate

    @classmethod
    def validate(cls, v):
        try:
            value = complex(v)
        except (TypeError, ValueError):
            raise TypeError("Value must be a complex number")
        if not np.isfinite(value):
            raise ValueError("Complex value must be finite")
        return value

    @classmethod
    def __modify_schema__(cls, field_schema):
        field_schema.update(type="string", examples=["(50+1j)"])


ComplexVector = Array(complex, 1)
ComplexMatrix = Array(complex, 2)
RealVector = Array(float, 1)
RealMatrix = Array(float, 2)
BitVector = Array(np.uint8, 1)
BitMatrix = Array(np.uint8, 2)


def as_bits(b) -> np.ndarray:
    """
    Get the bit vector of an antenna coder or an array-like of bits

    :param b: AntennaCoder or array-like of {0, 1}
    :return: np.ndarray of uint8
    """
    bits = getattr(b, "bits", b)
    return np.asarray(bits, dtype=np.uint8)
