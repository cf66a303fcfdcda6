import click
import pytest
from click.testing import CliRunner

from pixelmiso.antenna.port_model import load_port_model
from pixelmiso.codebooks.io import read_codebook, read_hierarchy
from pixelmiso.executors.cli import cli, parse_snr_range


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "experiment.toml"
    path.write_text(
        "n = 2\nu = 2\nq = 3\nk = 2\ntrials = 2\n"
        "training_size = 6\ntraining_rounds = 2\n"
    )
    return str(path)


def test_parse_snr_range():
    assert parse_snr_range("0:10:5") == [0.0, 5.0, 10.0]
    assert parse_snr_range("-5:5:2.5") == [-5.0, -2.5, 0.0, 2.5, 5.0]
    assert parse_snr_range("3") == [3.0]
    assert parse_snr_range("1,4") == [1.0, 4.0]
    assert parse_snr_range(None) is None
    for value in ["bad", "10:0:1", "0:1:0"]:
        with pytest.raises(click.BadParameter):
            parse_snr_range(value)


def test_gen_antenna(runner, tmp_path):
    out = tmp_path / "antenna.txt"
    result = runner.invoke(
        cli, ["gen-antenna", "--q", "3", "--k", "2", "--out", str(out)]
    )
    assert result.exit_code == 0, result.output
    model = load_port_model(out)
    assert (model.q, model.k) == (3, 2)


def test_gen_antenna_needs_output(runner):
    result = runner.invoke(cli, ["gen-antenna", "--q", "3", "--k", "2"])
    assert result.exit_code == 2


def test_run(runner, tmp_path, config_file):
    out = tmp_path / "results.csv"
    result = runner.invoke(
        cli,
        [
            "run",
            "-c",
            config_file,
            "--algorithm",
            "conventional",
            "--snr-db",
            "0:10:5",
            "--out",
            str(out),
        ],
    )
    assert result.exit_code == 0, result.output
    lines = out.read_text().splitlines()
    assert lines[0] == "snr_db,mean_rate,stderr,mean_time_s,evals"
    assert [line.split(",")[0] for line in lines[1:]] == ["0", "5", "10"]


def test_run_rejects_zero_forcing_overload(runner, tmp_path):
    path = tmp_path / "experiment.toml"
    path.write_text("n = 1\nu = 2\nq = 3\nk = 2\n")
    result = runner.invoke(
        cli, ["run", "-c", str(path), "--algorithm", "zf_alt"]
    )
    assert result.exit_code == 2


def test_train_and_plot_codebook(runner, tmp_path, config_file):
    codebook = tmp_path / "cb.txt"
    result = runner.invoke(
        cli,
        ["train-codebook", "-c", config_file, "--d", "2", "-o", str(codebook)],
    )
    assert result.exit_code == 0, result.output
    assert read_codebook(codebook).size == 4

    patterns = tmp_path / "patterns.csv"
    result = runner.invoke(
        cli,
        [
            "patterns",
            "-c",
            config_file,
            "--codebook",
            str(codebook),
            "-o",
            str(patterns),
        ],
    )
    assert result.exit_code == 0, result.output
    assert len(patterns.read_text().splitlines()) == 1 + 4 * 2


def test_train_hierarchy(runner, tmp_path, config_file):
    out = tmp_path / "tree.txt"
    result = runner.invoke(
        cli,
        [
            "train-hierarchy",
            "-c",
            config_file,
            "--a",
            "2",
            "--layers",
            "2",
            "-o",
            str(out),
        ],
    )
    assert result.exit_code == 0, result.output
    hc = read_hierarchy(out)
    assert (hc.branching, hc.n_layers, hc.q) == (2, 2, 3)


def test_bench(runner, tmp_path, config_file):
    out = tmp_path / "bench.csv"
    result = runner.invoke(
        cli,
        [
            "bench",
            "-c",
            config_file,
            "--algorithm",
            "conventional",
            "--algorithm",
            "zf_alt",
            "--snr-db",
            "10",
            "-o",
            str(out),
        ],
    )
    assert result.exit_code == 0, result.output
    lines = out.read_text().splitlines()
    assert [line.split(",")[0] for line in lines[1:]] == [
        "conventional",
        "zf_alt",
    ]


def test_broken_antenna_file_is_reported(runner, tmp_path):
    antenna = tmp_path / "antenna.txt"
    antenna.write_text("3 2\nnot a matrix\n")
    path = tmp_path / "experiment.toml"
    path.write_text(f'n = 2\nu = 2\nantenna_path = "{antenna.as_posix()}"\n')
    result = runner.invoke(
        cli, ["run", "-c", str(path), "--algorithm", "conventional"]
    )
    assert result.exit_code == 1
    assert "Error:" in result.output


def test_missing_antenna_file_is_reported(runner, tmp_path):
    path = tmp_path / "experiment.toml"
    missing = (tmp_path / "absent.txt").as_posix()
    path.write_text(f'n = 2\nu = 2\nantenna_path = "{missing}"\n')
    out = str(tmp_path / "cb.txt")
    result = runner.invoke(
        cli, ["train-codebook", "-c", str(path), "-o", out]
    )
    assert result.exit_code == 1
    assert "absent.txt" in result.output


def test_unwritable_output_is_reported(runner, tmp_path):
    out = tmp_path / "missing" / "antenna.txt"
    result = runner.invoke(
        cli, ["gen-antenna", "--q", "3", "--k", "2", "--out", str(out)]
    )
    assert result.exit_code == 1
    assert "Error:" in result.output
