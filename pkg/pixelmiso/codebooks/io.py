import logging
from pathlib import Path
from typing import Iterator, List, Tuple

import numpy as np
from pydantic import ValidationError

from pixelmiso.antenna.io import PathLike
from pixelmiso.codebooks.models import FlatCodebook, HierarchicalCodebook
from pixelmiso.exceptions import CodebookFileError

logger = logging.getLogger(__name__)


def _lines(path: PathLike) -> Iterator[Tuple[int, str]]:
    path = Path(path)
    if not path.is_file():
        raise CodebookFileError(f"{path}: no such file")
    with open(path) as stream:
        for number, line in enumerate(stream, start=1):
            if line.strip():
                yield number, line.strip()


def _header(lines, size: int) -> List[int]:
    try:
        number, line = next(lines)
    except StopIteration:
        raise CodebookFileError("Empty codebook file")
    try:
        values = [int(x) for x in line.split()]
    except ValueError:
        raise CodebookFileError(f"Line {number}: malformed header {line!r}")
    if len(values) != size or any(v < 0 for v in values):
        raise CodebookFileError(f"Line {number}: malformed header {line!r}")
    return values


def _codewords(lines, q: int, count: int) -> np.ndarray:
    words = np.zeros((count, q), dtype=np.uint8)
    for row in range(count):
        try:
            number, line = next(lines)
        except StopIteration:
            raise CodebookFileError(
                f"Unexpected end of file, {count} codewords expected, "
                f"got {row}"
            )
        if len(line) != q or set(line) - {"0", "1"}:
            raise CodebookFileError(
                f"Line {number}: expected {q} characters from {{0,1}}"
            )
        words[row] = [int(ch) for ch in line]
    return words


def _finish(lines, path: PathLike):
    extra = next(lines, None)
    if extra is not None:
        raise CodebookFileError(
            f"{path}: trailing content at line {extra[0]}"
        )


def _format(words: np.ndarray) -> str:
    return "".join("".join(str(int(b)) for b in row) + "\n" for row in words)


def write_codebook(path: PathLike, cb: FlatCodebook):
    """
    Write a flat codebook: `Q M`, then one line of Q bits per codeword

    :param path: file path
    :param cb: FlatCodebook
    """
    with open(path, "w") as stream:
        stream.write(f"{cb.q} {cb.size}\n")
        stream.write(_format(cb.codewords))
    logger.info(f"Codebook with {cb.size} codewords written to {path}")


def read_codebook(path: PathLike) -> FlatCodebook:
    lines = _lines(path)
    q, m = _header(lines, 2)
    words = _codewords(lines, q, m)
    _finish(lines, path)
    try:
        return FlatCodebook(codewords=words)
    except ValidationError as e:
        raise CodebookFileError(f"{path}: {e}")


def write_hierarchy(path: PathLike, hc: HierarchicalCodebook):
    """
    Write a hierarchical codebook: `Q A L`, then layers 1..L with their
    sub-codebooks in index order, one codeword per line

    :param path: file path
    :param hc: HierarchicalCodebook
    """
    with open(path, "w") as stream:
        stream.write(f"{hc.q} {hc.branching} {hc.n_layers}\n")
        for layer in hc.layers:
            stream.write(_format(layer))
    logger.info(
        f"Hierarchical codebook A={hc.branching}, L={hc.n_layers} "
        f"written to {path}"
    )


def read_hierarchy(path: PathLike) -> HierarchicalCodebook:
    lines = _lines(path)
    q, a, n_layers = _header(lines, 3)
    if a < 2 or n_layers < 1:
        raise CodebookFileError(f"{path}: invalid tree A={a}, L={n_layers}")
    layers = [
        _codewords(lines, q, a ** depth) for depth in range(1, n_layers + 1)
    ]
    _finish(lines, path)
    try:
        return HierarchicalCodebook(branching=a, layers=layers)
    except ValidationError as e:
        raise CodebookFileError(f"{path}: {e}")
