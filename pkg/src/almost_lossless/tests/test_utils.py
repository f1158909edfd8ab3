"""Test the utility functions and the logger."""

import logging
import math
import warnings
from pathlib import Path

import numpy as np
import pytest
from pytest_mock import MockerFixture

from almost_lossless.exceptions import DomainError, SpecError
from almost_lossless.logger import Logger
from almost_lossless.utils import (
    csv_line,
    format_value,
    mix_seed,
    search_first,
    search_first_array,
    validate_experiment_config,
)


def test_search_first() -> None:
    """Test the monotone integer search."""
    assert search_first(lambda u: u >= 0) == 0
    assert search_first(lambda u: u * u >= 1000) == 32
    assert search_first(lambda u: u >= 5, start=3) == 5
    assert search_first(lambda u: 2.0**-u <= 1e-300) == 997
    with pytest.raises(DomainError):
        search_first(lambda u: False, limit=1000)


def test_search_first_array() -> None:
    """Test the elementwise search against the scalar one."""
    targets = np.asarray([0, 1, 7, 100, 12345], dtype=np.int64)
    found = search_first_array(lambda u: u >= targets, len(targets))
    assert found.tolist() == targets.tolist()
    thresholds = np.asarray([1e-3, 1e-9])
    found = search_first_array(
        lambda u: 2.0 ** (-u.astype(float)) <= thresholds, 2, start=1
    )
    assert found.tolist() == [
        search_first(lambda u: 2.0**-u <= 1e-3, start=1),
        search_first(lambda u: 2.0**-u <= 1e-9, start=1),
    ]


def test_mix_seed() -> None:
    """Test that trial seeds are reproducible and distinct."""
    assert mix_seed(0, 1024, 3) == mix_seed(0, 1024, 3)
    seeds = {mix_seed(0, n, trial) for n in (64, 128) for trial in range(50)}
    assert len(seeds) == 100
    assert mix_seed(1, 64, 0) != mix_seed(0, 64, 0)
    assert 0 <= mix_seed(2**64 - 1, 1, 1) < 2**64


def test_format_value() -> None:
    """Test the CSV cell formatting."""
    assert format_value(None) == ""
    assert format_value(True) == "true"
    assert format_value(np.int64(12)) == "12"
    assert format_value(0.1) == "0.10000000000000001"
    assert float(format_value(math.pi)) == math.pi
    assert format_value("gain") == "gain"
    assert csv_line([1, None, 0.5, False]) == "1,,0.5,false\n"


def test_validate_experiment_config() -> None:
    """Test the structural check of config files."""
    validate_experiment_config({"source": "zeta:alpha=2", "n_grid": [64]})
    invalid = [
        {"n_grid": [64]},
        {"source": "zeta:alpha=2", "n_grid": []},
        {"source": "zeta:alpha=2", "n_grid": [0]},
        {"source": "zeta:alpha=2", "n_grid": [64], "tau": 1},
        {"source": "zeta:alpha=2", "n_grid": [64], "coder": "lz"},
        {"source": "zeta:alpha=2", "n_grid": [64], "seed": -1},
        {"source": "zeta:alpha=2", "n_grid": [64], "colour": "red"},
    ]
    for data in invalid:
        with pytest.raises(SpecError):
            validate_experiment_config(data)


def test_logger_levels() -> None:
    """Test that all handlers follow the logger level."""
    logger = Logger(debug=True)
    assert logger.level == logging.DEBUG
    logger.setLevel("WARNING")
    assert logger.level == logging.WARNING
    assert {handle.level for handle in logger.handlers} == {logging.WARNING}
    assert logger._file_handle.level == logging.WARNING
    assert Logger().level == logging.INFO


def test_logger_debug_switch(tmp_path: Path) -> None:
    """Test the debug switch and the location of the log file."""
    logger = Logger(log_dir=tmp_path)
    assert logger.log_file == tmp_path / "almost-lossless.log"
    logger.set_debug(True)
    assert {handle.level for handle in logger.handlers} == {logging.DEBUG}
    logger.set_debug(False)
    assert logger.level == logging.INFO


def test_numeric_warnings(tmp_path: Path, mocker: MockerFixture) -> None:
    """Test that numerical warnings are turned into log records."""
    logger = Logger(log_dir=tmp_path)
    mock_warning = mocker.patch.object(logger, "warning")
    with logger.numeric_warnings():
        np.log(np.zeros(1))
    mock_warning.assert_called_once()
    assert mock_warning.call_args.args[1] == "RuntimeWarning"
    mock_warning.reset_mock()
    with pytest.raises(DomainError):
        with logger.numeric_warnings():
            warnings.warn("slow convergence", UserWarning)
            raise DomainError("failed")
    mock_warning.assert_called_once()
    mock_warning.reset_mock()
    with logger.numeric_warnings():
        np.log(np.ones(1))
    mock_warning.assert_not_called()
