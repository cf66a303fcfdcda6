import csv
from typing import Sequence, TextIO

import numpy as np

from pixelmiso.antenna.pixel import PixelAntenna
from pixelmiso.harness.models import BenchRow, ResultRow

RESULT_HEADER = ["snr_db", "mean_rate", "stderr", "mean_time_s", "evals"]
BENCH_HEADER = ["algorithm"] + RESULT_HEADER
PATTERN_HEADER = ["codeword", "sample", "elevation", "azimuth"]


def format_float(value: float) -> str:
    return f"{value:.9g}"


def _row_values(row: ResultRow):
    return [format_float(getattr(row, name)) for name in RESULT_HEADER]


def write_results(stream: TextIO, rows: Sequence[ResultRow]):
    """
    CSV of a sweep, one line per SNR point

    :param stream: text stream
    :param rows: Sequence[ResultRow]
    """
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(RESULT_HEADER)
    for row in rows:
        writer.writerow(_row_values(row))


def write_bench(stream: TextIO, rows: Sequence[BenchRow]):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(BENCH_HEADER)
    for row in rows:
        writer.writerow([row.algorithm.value] + _row_values(row))


def codeword_patterns(codewords, antenna: PixelAntenna) -> np.ndarray:
    """
    Radiation pattern magnitudes of every codeword

    :param codewords: uint8 (M, Q)
    :param antenna: PixelAntenna
    :return: float (M, 2K), elevation block first
    """
    codewords = np.atleast_2d(np.asarray(codewords, dtype=np.uint8))
    return np.abs(np.stack([antenna.pattern(c) for c in codewords]))


def write_patterns(stream: TextIO, patterns: np.ndarray):
    """
    CSV of codeword patterns, one line per (codeword, spatial sample)

    :param stream: text stream
    :param patterns: float (M, 2K) from codeword_patterns
    """
    k = patterns.shape[1] // 2
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(PATTERN_HEADER)
    for m, pattern in enumerate(patterns):
        for sample in range(k):
            writer.writerow(
                [
                    m,
                    sample,
                    format_float(pattern[sample]),
                    format_float(pattern[k + sample]),
                ]
            )
