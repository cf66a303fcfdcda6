import logging
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import List, Optional

import click
import numpy as np

from pixelmiso.antenna.io import write_port_model
from pixelmiso.antenna.port_model import synthesize_surrogate
from pixelmiso.codebooks.io import read_codebook, write_codebook
from pixelmiso.codebooks.io import write_hierarchy
from pixelmiso.exceptions import (
    CandidateSearchFailure,
    CodebookFileError,
    CodebookTrainingError,
    ConfigurationError,
    MatrixFileError,
    NonReciprocalNetwork,
    PassivityViolation,
    SearchCostMismatch,
)
from pixelmiso.harness.export import (
    codeword_patterns,
    write_bench,
    write_patterns,
    write_results,
)
from pixelmiso.harness.models import Algorithm
from pixelmiso.harness.runner import (
    bench as run_bench,
    build_antenna,
    run_sweep,
    train_flat,
    train_tree,
)
from pixelmiso.harness.settings import load_config

logger = logging.getLogger(__name__)

#: Failures reported as a one-line error instead of a traceback
REPORTED_ERRORS = (
    CandidateSearchFailure,
    CodebookFileError,
    CodebookTrainingError,
    MatrixFileError,
    NonReciprocalNetwork,
    PassivityViolation,
    SearchCostMismatch,
    OSError,
)


def parse_snr_range(value: Optional[str]) -> Optional[List[float]]:
    """
    Parse `a:b:step` (inclusive), a comma separated list or one value

    :param value: Optional[str]
    :return: Optional[List[float]]
    """
    if value is None:
        return None
    try:
        if ":" in value:
            start, stop, step = (float(x) for x in value.split(":"))
            if step <= 0 or stop < start:
                raise ValueError
            count = int(np.floor((stop - start) / step + 1e-9)) + 1
            return [round(start + i * step, 12) for i in range(count)]
        return [float(x) for x in value.split(",")]
    except ValueError:
        raise click.BadParameter(
            f"expected a:b:step, a comma list or a number, got {value!r}"
        )


@contextmanager
def reported_errors():
    try:
        yield
    except ConfigurationError as e:
        raise click.UsageError(str(e))
    except REPORTED_ERRORS as e:
        raise click.ClickException(str(e))


@contextmanager
def output(path: Optional[str]):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as stream:
            yield stream


def settings_from(config, **overrides):
    with reported_errors():
        return load_config(Path(config) if config else None, **overrides)


common_options = [
    click.option(
        "-c",
        "--config",
        required=False,
        type=click.Path(exists=True, dir_okay=False),
        help="TOML file of key = value experiment settings",
    ),
    click.option("--seed", required=False, type=int, help="Master seed"),
    click.option(
        "-o",
        "--out",
        required=False,
        type=click.Path(dir_okay=False),
        help="Output file, stdout by default",
    ),
]


def with_common_options(func):
    for option in reversed(common_options):
        func = option(func)
    return func


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Debug logging")
def cli(verbose):
    logging.basicConfig(
        format="%(message)s",
        level=logging.DEBUG if verbose else logging.INFO,
    )


@cli.command()
@click.option("-q", "--q", "q", required=False, type=int, help="Switches")
@click.option("-k", "--k", "k", required=False, type=int, help="Samples")
@with_common_options
def gen_antenna(q, k, config, seed, out):
    """
    Write a seeded surrogate port model in the matrix file format
    """
    settings = settings_from(config, q=q, k=k, antenna_seed=seed)
    if out is None:
        raise click.UsageError("gen-antenna needs --out")
    model = synthesize_surrogate(
        settings.q, settings.k, settings.antenna_seed
    )
    with reported_errors():
        write_port_model(out, model)


@cli.command()
@click.option("-d", "--d", "d", required=False, type=int, help="Bits D")
@with_common_options
def train_codebook(d, config, seed, out):
    """
    Train a flat codebook of 2^D codewords
    """
    settings = settings_from(config, d=d, seed=seed)
    if out is None:
        raise click.UsageError("train-codebook needs --out")
    with reported_errors():
        cb = train_flat(settings, build_antenna(settings))
        write_codebook(out, cb)
    logger.info(f"Training trace: {cb.report.objective_trace}")


@cli.command()
@click.option("-a", "--a", "a", required=False, type=int, help="Branching")
@click.option(
    "-l", "--layers", "layers", required=False, type=int, help="Layers"
)
@with_common_options
def train_hierarchy(a, layers, config, seed, out):
    """
    Train a hierarchical codebook with A-ary branching and L layers
    """
    settings = settings_from(config, a=a, layers=layers, seed=seed)
    if out is None:
        raise click.UsageError("train-hierarchy needs --out")
    with reported_errors():
        hc = train_tree(settings, build_antenna(settings))
        write_hierarchy(out, hc)


@cli.command()
@click.option(
    "--algorithm",
    required=False,
    type=click.Choice([a.value for a in Algorithm]),
    help="Optimization strategy",
)
@click.option("--snr-db", required=False, type=str, help="a:b:step")
@click.option("--trials", required=False, type=int, help="Trials per SNR")
@click.option("--workers", required=False, type=int, help="Worker processes")
@click.option(
    "--codebook",
    "codebook_path",
    required=False,
    type=click.Path(exists=True, dir_okay=False),
    help="Pre-trained codebook file",
)
@with_common_options
def run(algorithm, snr_db, trials, workers, codebook_path, config, seed, out):
    """
    Monte Carlo sum-rate sweep of one algorithm
    """
    settings = settings_from(
        config,
        algorithm=algorithm,
        snr_db=parse_snr_range(snr_db),
        trials=trials,
        workers=workers,
        codebook_path=codebook_path,
        seed=seed,
    )
    with reported_errors():
        rows = run_sweep(settings)
        with output(out) as stream:
            write_results(stream, rows)


@cli.command()
@click.option(
    "--algorithm",
    "algorithms",
    multiple=True,
    type=click.Choice([a.value for a in Algorithm]),
    help="Algorithms to compare, repeatable; all by default",
)
@click.option("--snr-db", required=False, type=str, help="a:b:step")
@click.option("--trials", required=False, type=int, help="Trials per SNR")
@click.option("--workers", required=False, type=int, help="Worker processes")
@with_common_options
def bench(algorithms, snr_db, trials, workers, config, seed, out):
    """
    Compare algorithms on identical channels with timing
    """
    settings = settings_from(
        config,
        algorithms=list(algorithms) or None,
        snr_db=parse_snr_range(snr_db),
        trials=trials,
        workers=workers,
        seed=seed,
        record_timing=True,
    )
    with reported_errors():
        rows = run_bench(settings)
        with output(out) as stream:
            write_bench(stream, rows)


@cli.command()
@click.option(
    "--codebook",
    "codebook_path",
    required=True,
    type=click.Path(exists=True, dir_okay=False),
    help="Flat codebook file",
)
@with_common_options
def patterns(codebook_path, config, seed, out):
    """
    Radiation pattern magnitudes of every codeword as CSV
    """
    settings = settings_from(config, antenna_seed=seed)
    with reported_errors():
        cb = read_codebook(codebook_path)
        antenna = build_antenna(settings)
        if cb.q != antenna.q:
            raise ConfigurationError(
                f"Codebook has Q={cb.q}, antenna has Q={antenna.q}"
            )
        with output(out) as stream:
            write_patterns(
                stream, codeword_patterns(cb.codewords, antenna)
            )


if __name__ == "__main__":
    cli()
