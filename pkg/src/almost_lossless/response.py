"""Collection of output records and their CSV streams."""

import math
from typing import Annotated, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .distributions import Pmf, entropy, restricted_entropy
from .exceptions import DistortionRangeError
from .radius_lab import RegimeReport
from .rate_distortion import RdPoint, rate_distortion
from .utils import csv_line, logger

TRIAL_COLUMNS = (
    "n",
    "k",
    "trial",
    "seed",
    "emp_rate",
    "emp_rate_with_header",
    "emp_distortion",
    "redundancy_vs_H",
    "redundancy_vs_restricted",
    "payload_bits",
    "header_bytes",
)
SUMMARY_COLUMNS = (
    "n",
    "k",
    "trials",
    "mean_rate",
    "std_rate",
    "mean_rate_with_header",
    "mean_distortion",
    "std_distortion",
    "mean_redundancy_vs_H",
    "mean_redundancy_vs_restricted",
    "std_redundancy_vs_restricted",
    "tail_mass",
    "entropy_bits",
    "restricted_entropy_bits",
    "kt_budget_bits",
)
RD_COLUMNS = (
    "d",
    "theta",
    "kappa",
    "k_cut",
    "tilde_entropy_bits",
    "rate_bits",
    "entropy_gap_bits",
    "status",
)
RADIUS_COLUMNS = (
    "n",
    "k_n",
    "u_star",
    "lower_bits",
    "upper_bits",
    "restricted_upper_bits",
    "ratio_proxy",
    "admissible",
    "regime",
    "warning",
)
ENTROPY_COLUMNS = ("n", "k", "H_hat_bits")


class TrialRecord(BaseModel):
    """Outcome of one coded block of a Monte Carlo experiment."""

    model_config = ConfigDict(frozen=True)

    n: int
    k: int
    trial: int
    seed: Annotated[int, Field(description="Seed of the trial generator.")]
    emp_rate: Annotated[float, Field(description="Payload bits per symbol.")]
    emp_rate_with_header: Annotated[
        float, Field(description="Payload and header bits per symbol.")
    ]
    emp_distortion: Annotated[float, Field(description="Hamming distortion.")]
    redundancy_vs_H: float
    redundancy_vs_restricted: float
    payload_bits: int
    header_bytes: int

    def values(self) -> Tuple[object, ...]:
        """Row values in column order."""
        return tuple(getattr(self, column) for column in TRIAL_COLUMNS)


class SummaryRecord(BaseModel):
    """Aggregate of all trials at one block length."""

    model_config = ConfigDict(frozen=True)

    n: int
    k: int
    trials: int
    mean_rate: float
    std_rate: float
    mean_rate_with_header: float
    mean_distortion: float
    std_distortion: float
    mean_redundancy_vs_H: float
    mean_redundancy_vs_restricted: float
    std_redundancy_vs_restricted: float
    tail_mass: Annotated[float, Field(description="Expected distortion P(X > k).")]
    entropy_bits: float
    restricted_entropy_bits: float
    kt_budget_bits: Annotated[
        float, Field(description="((k-1)/2) log2(n) / n.")
    ]

    def values(self) -> Tuple[object, ...]:
        """Row values in column order."""
        return tuple(getattr(self, column) for column in SUMMARY_COLUMNS)


def _std(values: Sequence[float]) -> float:
    if len(values) < 2:
        return 0.0
    return float(np.std(values, ddof=1))


def summarize(records: Sequence[TrialRecord], pmf: Pmf) -> SummaryRecord:
    """Means and sample standard deviations of the trials of one block
    length, next to the theoretical references."""
    n, k = records[0].n, records[0].k
    rates = [r.emp_rate for r in records]
    distortions = [r.emp_distortion for r in records]
    vs_restricted = [r.redundancy_vs_restricted for r in records]
    return SummaryRecord(
        n=n,
        k=k,
        trials=len(records),
        mean_rate=float(np.mean(rates)),
        std_rate=_std(rates),
        mean_rate_with_header=float(
            np.mean([r.emp_rate_with_header for r in records])
        ),
        mean_distortion=float(np.mean(distortions)),
        std_distortion=_std(distortions),
        mean_redundancy_vs_H=float(np.mean([r.redundancy_vs_H for r in records])),
        mean_redundancy_vs_restricted=float(np.mean(vs_restricted)),
        std_redundancy_vs_restricted=_std(vs_restricted),
        tail_mass=pmf.survival(k),
        entropy_bits=entropy(pmf),
        restricted_entropy_bits=restricted_entropy(pmf, k),
        kt_budget_bits=(k - 1) / 2 * math.log2(n) / n,
    )


def trial_csv_stream(records: Iterable[TrialRecord]) -> Iterator[str]:
    """CSV lines of trial records, header first."""
    yield csv_line(TRIAL_COLUMNS)
    for record in records:
        yield csv_line(record.values())


def summary_csv_stream(records: Iterable[SummaryRecord]) -> Iterator[str]:
    """CSV lines of summary records, header first."""
    yield csv_line(SUMMARY_COLUMNS)
    for record in records:
        yield csv_line(record.values())


def rd_csv_stream(pmf: Pmf, d_grid: Sequence[float]) -> Iterator[str]:
    """Rate-distortion rows along ``d_grid``.

    Distortions outside the validity range produce a row with empty values
    and status ``out_of_range``.
    """
    yield csv_line(RD_COLUMNS)
    for d in d_grid:
        point: Optional[RdPoint] = None
        try:
            point = rate_distortion(pmf, d)
        except DistortionRangeError as error:
            logger.warning("Skipping d=%r: %s", d, error)
        if point is None:
            yield csv_line([d, None, None, None, None, None, None, "out_of_range"])
            continue
        yield csv_line(
            [
                point.d,
                point.theta,
                point.kappa,
                point.k_cut,
                point.tilde_entropy,
                point.rate,
                point.entropy_gap,
                "ok",
            ]
        )


def radius_csv_stream(report: RegimeReport) -> Iterator[str]:
    """CSV lines of a regime report."""
    yield csv_line(RADIUS_COLUMNS)
    for row in report.rows:
        yield csv_line(getattr(row, column) for column in RADIUS_COLUMNS)


def entropy_csv_stream(estimates: List[Tuple[int, int, float]]) -> Iterator[str]:
    """CSV lines of entropy estimates."""
    yield csv_line(ENTROPY_COLUMNS)
    for estimate in estimates:
        yield csv_line(estimate)
