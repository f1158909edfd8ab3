"""Test the command line interface cli."""

import json
from pathlib import Path

import mock
import numpy as np
import pytest
from pytest_mock import MockerFixture
from typer.testing import CliRunner

from almost_lossless.cli import main, read_symbols, run, write_symbols
from almost_lossless.codec import HEADER_BYTES, iter_blocks
from almost_lossless.tests import read_csv, write_symbol_file

GEOMETRIC_ENVELOPE = "envelope-geom:c=2,r=0.5"


def test_encode_decode(runner: CliRunner, work_dir: Path) -> None:
    """Test that decoding restores the encoded file."""
    source = write_symbol_file(work_dir / "in.txt", [1, 4, 2, 8, 8, 3, 1, 1])
    for coder in ("kt", "static"):
        coded = work_dir / f"{coder}.alwc"
        restored = work_dir / f"{coder}.txt"
        res1 = runner.invoke(
            main, ["encode", str(source), str(coded), "--k", "8", "--coder", coder]
        )
        assert res1.exit_code == 0
        res2 = runner.invoke(main, ["decode", str(coded), str(restored)])
        assert res2.exit_code == 0
        assert restored.read_bytes() == source.read_bytes()


def test_encode_quantizes(runner: CliRunner, work_dir: Path) -> None:
    """Test that symbols beyond k come back as k."""
    source = write_symbol_file(work_dir / "in.txt", [1, 2, 9, 3, 40])
    coded, restored = work_dir / "out.alwc", work_dir / "out.txt"
    args = ["--source", "geometric:p=0.5"]
    res1 = runner.invoke(
        main,
        ["encode", str(source), str(coded), "--k", "3", "--coder", "static"] + args,
    )
    assert res1.exit_code == 0
    res2 = runner.invoke(main, ["decode", str(coded), str(restored)] + args)
    assert res2.exit_code == 0
    assert read_symbols(restored).tolist() == [1, 2, 3, 3, 3]


def test_decode_static_without_source(
    runner: CliRunner, work_dir: Path, mocker: MockerFixture
) -> None:
    """Test that decoding static blocks with the uniform model is logged."""
    source = write_symbol_file(work_dir / "in.txt", [1, 2, 1, 3])
    coded, restored = work_dir / "out.alwc", work_dir / "out.txt"
    encode_args = ["encode", str(source), str(coded), "--k", "3"]
    res = runner.invoke(
        main,
        encode_args + ["--coder", "static", "--source", "geometric:p=0.5"],
    )
    assert res.exit_code == 0
    mock_warning = mocker.patch("almost_lossless.cli.logger.warning")
    runner.invoke(main, ["decode", str(coded), str(restored)])
    mock_warning.assert_called_once()
    mock_warning.reset_mock()
    res = runner.invoke(
        main,
        ["decode", str(coded), str(restored), "--source", "geometric:p=0.5"],
    )
    assert res.exit_code == 0
    assert read_symbols(restored).tolist() == [1, 2, 1, 3]
    mock_warning.assert_not_called()
    runner.invoke(main, encode_args + ["--coder", "kt"])
    runner.invoke(main, ["decode", str(coded), str(restored)])
    mock_warning.assert_not_called()


def test_reruns_are_identical(runner: CliRunner, work_dir: Path) -> None:
    """Test that repeated commands write the same bytes."""
    source = write_symbol_file(work_dir / "in.txt", [1, 4, 2, 8, 8, 3, 1, 1] * 50)
    commands = {
        "encode": ["encode", str(source), "{out}", "--k", "6"],
        "radius": [
            "radius",
            "--envelope",
            GEOMETRIC_ENVELOPE,
            "--k-schedule",
            "sqrt-u-star",
            "--n-grid",
            "1024,4096",
            "--out",
            "{out}",
        ],
        "entropy-est": [
            "entropy-est",
            "--source",
            "geometric:p=0.5",
            "--min-n",
            "1024",
            "--max-n",
            "4096",
            "--seed",
            "3",
            "--out",
            "{out}",
        ],
    }
    for name, command in commands.items():
        outputs = []
        for rerun in range(2):
            out = work_dir / f"{name}-{rerun}.out"
            args = [str(out) if arg == "{out}" else arg for arg in command]
            res = runner.invoke(main, args)
            assert res.exit_code == 0
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1]
        assert len(outputs[0]) > 0


def test_binary_symbols(runner: CliRunner, work_dir: Path) -> None:
    """Test the 32-bit symbol format."""
    source = work_dir / "in.bin"
    write_symbols(source, np.asarray([3, 1, 2, 2]), binary=True)
    assert source.stat().st_size == 16
    assert read_symbols(source, binary=True).tolist() == [3, 1, 2, 2]
    coded, restored = work_dir / "out.alwc", work_dir / "out.bin"
    res1 = runner.invoke(
        main, ["encode", str(source), str(coded), "--k", "4", "--binary"]
    )
    assert res1.exit_code == 0
    res2 = runner.invoke(main, ["decode", str(coded), str(restored), "--binary"])
    assert res2.exit_code == 0
    assert restored.read_bytes() == source.read_bytes()


def test_static_alternating(runner: CliRunner, work_dir: Path) -> None:
    """Test the length of a uniform code of an alternating sequence."""
    source = write_symbol_file(work_dir / "in.txt", [1, 2] * 512)
    coded = work_dir / "out.alwc"
    res = runner.invoke(
        main, ["encode", str(source), str(coded), "--k", "2", "--coder", "static"]
    )
    assert res.exit_code == 0
    (block,) = list(iter_blocks(coded.read_bytes()))
    assert 1024 <= block.payload_bits <= 1026
    assert coded.stat().st_size <= HEADER_BYTES + 129


def test_decode_errors(
    runner: CliRunner, work_dir: Path, mocker: MockerFixture
) -> None:
    """Test that damaged input exits with a data error."""
    source = write_symbol_file(work_dir / "in.txt", [1, 2, 3] * 10)
    coded = work_dir / "out.alwc"
    runner.invoke(main, ["encode", str(source), str(coded), "--k", "3"])
    coded.write_bytes(coded.read_bytes()[:-1])
    mock_error = mocker.patch("almost_lossless.cli.logger.error")
    res = runner.invoke(main, ["decode", str(coded), str(work_dir / "out.txt")])
    assert res.exit_code == 2
    mock_error.assert_called_once()
    res = runner.invoke(main, ["decode", str(work_dir / "missing"), "x.txt"])
    assert res.exit_code == 2
    bad = write_symbol_file(work_dir / "bad.txt", [1, 0, 2])
    res = runner.invoke(main, ["encode", str(bad), str(coded), "--k", "3"])
    assert res.exit_code == 2


def test_rd(runner: CliRunner, work_dir: Path) -> None:
    """Test the rate-distortion table."""
    out1, out2 = work_dir / "rd1.csv", work_dir / "rd2.csv"
    res = runner.invoke(main, ["rd", "--source", "geometric:p=0.5", "--out", str(out1)])
    assert res.exit_code == 0
    rows = read_csv(out1)
    assert [float(row["d"]) for row in rows][-2:] == [1e-4, 0.0]
    assert float(rows[-2]["entropy_gap_bits"]) <= 0.01
    assert float(rows[-1]["rate_bits"]) == pytest.approx(2.0)
    runner.invoke(main, ["rd", "--source", "geometric:p=0.5", "--out", str(out2)])
    assert out1.read_bytes() == out2.read_bytes()
    res = runner.invoke(
        main, ["rd", "--source", "geometric:p=0.5", "--d-grid", "0.9,0.1"]
    )
    assert res.exit_code == 0
    assert "out_of_range" in res.stdout
    res = runner.invoke(main, ["rd", "--source", "poisson:lambda=1"])
    assert res.exit_code == 2


def test_experiment(runner: CliRunner, work_dir: Path) -> None:
    """Test experiments configured by options and by file."""
    flags = [
        "experiment",
        "--source",
        "geometric:p=0.5",
        "--n-grid",
        "64,128",
        "--tau",
        "0.5",
        "--trials",
        "2",
    ]
    first, second = work_dir / "first.csv", work_dir / "second.csv"
    res1 = runner.invoke(main, flags + ["--out", str(first)])
    assert res1.exit_code == 0
    res2 = runner.invoke(main, flags + ["--out", str(second)])
    assert res2.exit_code == 0
    assert first.read_bytes() == second.read_bytes()
    summary = work_dir / "first.csv.summary.csv"
    assert [row["k"] for row in read_csv(summary)] == ["8", "12"]
    assert len(read_csv(first)) == 4

    config = work_dir / "config.json"
    config.write_text(
        json.dumps(
            {
                "source": "geometric:p=0.5",
                "n_grid": [64, 128],
                "tau": 0.5,
                "trials": 2,
                "out": str(work_dir / "third.csv"),
            }
        )
    )
    res3 = runner.invoke(main, ["experiment", "--config", str(config)])
    assert res3.exit_code == 0
    assert (work_dir / "third.csv").read_bytes() == first.read_bytes()


def test_experiment_errors(runner: CliRunner, work_dir: Path) -> None:
    """Test the usage and data errors of the experiment command."""
    out = str(work_dir / "out.csv")
    res = runner.invoke(main, ["experiment", "--out", out])
    assert res.exit_code == 2
    res = runner.invoke(
        main, ["experiment", "--source", "geometric:p=0.5", "--n-grid", "64"]
    )
    assert res.exit_code == 2
    res = runner.invoke(
        main,
        [
            "experiment",
            "--source",
            "geometric:p=0.5",
            "--n-grid",
            "64",
            "--tau",
            "0.5",
            "--k",
            "4",
            "--out",
            out,
        ],
    )
    assert res.exit_code == 2
    config = work_dir / "config.json"
    config.write_text(json.dumps({"source": "geometric:p=0.5", "n_grid": "64"}))
    res = runner.invoke(main, ["experiment", "--config", str(config), "--out", out])
    assert res.exit_code == 2


def test_radius(runner: CliRunner, work_dir: Path) -> None:
    """Test the regime table."""
    out = work_dir / "radius.csv"
    grid = ["--n-grid", "1024,4096,16384"]
    res = runner.invoke(
        main, ["radius", "--envelope", GEOMETRIC_ENVELOPE, "--out", str(out)] + grid
    )
    assert res.exit_code == 0
    assert {row["regime"] for row in read_csv(out)} == {"no_gain"}
    res = runner.invoke(
        main,
        [
            "radius",
            "--envelope",
            GEOMETRIC_ENVELOPE,
            "--k-schedule",
            "sqrt-u-star",
            "--out",
            str(out),
        ]
        + grid,
    )
    assert res.exit_code == 0
    assert {row["regime"] for row in read_csv(out)} == {"gain"}
    res = runner.invoke(main, ["radius", "--envelope", "envelope-geom:c=1,r=2"])
    assert res.exit_code == 2


def test_entropy_est(runner: CliRunner, work_dir: Path) -> None:
    """Test the code length entropy estimate."""
    out = work_dir / "entropy.csv"
    res = runner.invoke(
        main,
        [
            "entropy-est",
            "--source",
            "explicit:[1]",
            "--min-n",
            "1024",
            "--max-n",
            "4096",
            "--out",
            str(out),
        ],
    )
    assert res.exit_code == 0
    rows = read_csv(out)
    assert [row["n"] for row in rows] == ["1024", "2048", "4096"]
    assert float(rows[-1]["H_hat_bits"]) <= 0.05

    res = runner.invoke(
        main,
        [
            "entropy-est",
            "--source",
            "geometric:p=0.5",
            "--min-n",
            "16384",
            "--out",
            str(out),
        ],
    )
    assert res.exit_code == 0
    assert abs(float(read_csv(out)[-1]["H_hat_bits"]) - 2.0) <= 0.15

    symbols = write_symbol_file(work_dir / "ones.txt", [1] * 2048)
    res = runner.invoke(
        main,
        ["entropy-est", "--input", str(symbols), "--min-n", "512", "--out", str(out)],
    )
    assert res.exit_code == 0
    assert [row["n"] for row in read_csv(out)] == ["512", "1024", "2048"]


def test_entropy_est_usage(runner: CliRunner, work_dir: Path) -> None:
    """Test that exactly one data source is accepted."""
    symbols = write_symbol_file(work_dir / "ones.txt", [1] * 16)
    assert runner.invoke(main, ["entropy-est"]).exit_code == 2
    res = runner.invoke(
        main,
        ["entropy-est", "--source", "explicit:[1]", "--input", str(symbols)],
    )
    assert res.exit_code == 2


def test_run_exit_codes(work_dir: Path) -> None:
    """Test the exit codes of the console script."""
    out = str(work_dir / "out.csv")
    with mock.patch("sys.argv", ["alwc", "experiment", "--out", out]):
        with pytest.raises(SystemExit) as error:
            run()
        assert error.value.code == 1
    with mock.patch("sys.argv", ["alwc", "decode", str(work_dir / "none"), out]):
        with pytest.raises(SystemExit) as error:
            run()
        assert error.value.code == 2
    with mock.patch(
        "sys.argv",
        ["alwc", "rd", "--source", "geometric:p=0.5", "--out", out],
    ):
        with pytest.raises(SystemExit) as error:
            run()
        assert error.value.code == 0
