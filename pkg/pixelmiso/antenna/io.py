import logging
from pathlib import Path
from typing import Iterator, List, TextIO, Tuple, Union

import numpy as np

from pixelmiso.exceptions import MatrixFileError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _header(lines: Iterator[Tuple[int, str]], size: int) -> List[int]:
    try:
        number, line = next(lines)
    except StopIteration:
        raise MatrixFileError("Unexpected end of file, header expected")
    parts = line.split()
    if len(parts) != size:
        raise MatrixFileError(
            f"Line {number}: expected {size} integers, got {line!r}"
        )
    try:
        values = [int(part) for part in parts]
    except ValueError:
        raise MatrixFileError(f"Line {number}: malformed header {line!r}")
    if any(value < 0 for value in values):
        raise MatrixFileError(f"Line {number}: negative dimension")
    return values


def _content_lines(stream: TextIO) -> Iterator[Tuple[int, str]]:
    for number, line in enumerate(stream, start=1):
        if line.strip():
            yield number, line


def read_matrix_block(lines: Iterator[Tuple[int, str]]) -> np.ndarray:
    """
    Read one `R C` matrix block of interleaved (re, im) pairs

    :param lines: iterator of (line number, line) pairs
    :return: complex np.ndarray of shape (R, C)
    """
    rows, cols = _header(lines, 2)
    matrix = np.empty((rows, cols), dtype=complex)
    for r in range(rows):
        try:
            number, line = next(lines)
        except StopIteration:
            raise MatrixFileError(
                f"Unexpected end of file, {rows} rows expected, got {r}"
            )
        try:
            values = np.array([float(x) for x in line.split()])
        except ValueError:
            raise MatrixFileError(f"Line {number}: malformed float")
        if values.shape[0] != 2 * cols:
            raise MatrixFileError(
                f"Line {number}: expected {2 * cols} floats, "
                f"got {values.shape[0]}"
            )
        matrix[r] = values[0::2] + 1j * values[1::2]
    return matrix


def write_matrix_block(stream: TextIO, matrix: np.ndarray):
    """
    Write a complex matrix as an `R C` block with 17 significant digits

    :param stream: text stream
    :param matrix: 2-d array-like
    """
    matrix = np.atleast_2d(np.asarray(matrix, dtype=complex))
    rows, cols = matrix.shape
    stream.write(f"{rows} {cols}\n")
    for row in matrix:
        pairs = np.empty(2 * cols)
        pairs[0::2] = row.real
        pairs[1::2] = row.imag
        stream.write(" ".join(f"{x:.17g}" for x in pairs) + "\n")


def read_matrix(path: PathLike) -> np.ndarray:
    with open(path) as stream:
        lines = _content_lines(stream)
        matrix = read_matrix_block(lines)
        if next(lines, None) is not None:
            raise MatrixFileError(f"{path}: trailing content after matrix")
    return matrix


def write_matrix(path: PathLike, matrix: np.ndarray):
    with open(path, "w") as stream:
        write_matrix_block(stream, matrix)


def read_port_model_blocks(
    path: PathLike,
) -> Tuple[int, int, np.ndarray, np.ndarray]:
    """
    Read the raw blocks of a PortModel file: `Q K`, then Z, then E_oc

    :param path: file path
    :return: (q, k, z, e_oc)
    """
    path = Path(path)
    if not path.is_file():
        raise MatrixFileError(f"{path}: no such file")
    with open(path) as stream:
        lines = _content_lines(stream)
        q, k = _header(lines, 2)
        z = read_matrix_block(lines)
        e_oc = read_matrix_block(lines)
        if next(lines, None) is not None:
            raise MatrixFileError(f"{path}: trailing content after E_oc")
    logger.debug(f"Read port model blocks from {path}: Q={q}, K={k}")
    return q, k, z, e_oc


def write_port_model(path: PathLike, model):
    """
    Write a PortModel in the text matrix format

    :param path: file path
    :param model: PortModel
    """
    with open(path, "w") as stream:
        stream.write(f"{model.q} {model.k}\n")
        write_matrix_block(stream, model.z_full)
        write_matrix_block(stream, model.e_oc)
    logger.info(f"Port model with Q={model.q}, K={model.k} written to {path}")
