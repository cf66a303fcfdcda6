import numpy as np


def improves(value: float, reference: float, tol: float) -> bool:
    """
    True when `value` beats `reference` by more than `tol` relative.
    Any finite value improves on a non-finite reference.

    :param value: float
    :param reference: float
    :param tol: float - relative tolerance
    :return: bool
    """
    if not value > reference:
        return False
    if not np.isfinite(reference):
        return True
    scale = max(abs(reference), np.finfo(float).tiny)
    return value - reference > tol * scale


def frobenius_power(p: np.ndarray) -> float:
    return float(np.sum(np.abs(p) ** 2))
