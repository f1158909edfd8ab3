"""Definition of pytest fixtures."""

from pathlib import Path
from typing import Iterator

import pytest
from typer.testing import CliRunner

from almost_lossless.distributions import Envelope, Pmf


@pytest.fixture(scope="session")
def geometric_half() -> Iterator[Pmf]:
    """The geometric source with parameter 1/2, entropy 2 bits."""
    yield Pmf.geometric(0.5)


@pytest.fixture(scope="session")
def point_mass() -> Iterator[Pmf]:
    """The deterministic source emitting 1."""
    yield Pmf.point_mass(1)


@pytest.fixture(scope="session")
def tight_envelope() -> Iterator[Envelope]:
    """``f(x) = 2**-x``, its envelope probability is geometric(1/2)."""
    yield Envelope.geometric(scale=1.0, ratio=0.5)


@pytest.fixture(scope="session")
def geometric_envelope() -> Iterator[Envelope]:
    """``f(x) = 2**(1-x)``, the geometric-type envelope with l_f = 2."""
    yield Envelope.geometric(scale=2.0, ratio=0.5)


@pytest.fixture(scope="function")
def runner() -> Iterator[CliRunner]:
    """Command line test runner."""
    yield CliRunner()


@pytest.fixture(scope="function")
def work_dir(tmp_path: Path) -> Iterator[Path]:
    """Scratch directory for input and output files."""
    yield tmp_path
