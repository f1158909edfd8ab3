"""Monte Carlo experiments of the two-stage code.

Every trial draws its block from its own generator seeded with
``mix_seed(seed, n, trial)``, so results do not depend on the order or the
process the trials run in.
"""

from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import IO, Iterator, List, Optional, Sequence, Tuple

from .codec import HEADER_BYTES, entropy_estimate, two_stage_encode
from .distributions import parse_source, sample
from .response import (
    SummaryRecord,
    TrialRecord,
    summarize,
    summary_csv_stream,
    trial_csv_stream,
)
from .schema import ExperimentConfig
from .utils import IntArray, logger, mix_seed


def run_trial(
    source: str, n: int, k: int, trial: int, seed: int, coder: str
) -> TrialRecord:
    """Sample, code and decode one block."""
    pmf = parse_source(source)
    trial_seed = mix_seed(seed, n, trial)
    x = sample(pmf, trial_seed, n)
    _, _, stats = two_stage_encode(x, k, coder, pmf)
    assert stats.redundancy_vs_h is not None
    assert stats.redundancy_vs_restricted is not None
    return TrialRecord(
        n=n,
        k=k,
        trial=trial,
        seed=trial_seed,
        emp_rate=stats.emp_rate,
        emp_rate_with_header=stats.emp_rate_with_header,
        emp_distortion=stats.emp_distortion,
        redundancy_vs_H=stats.redundancy_vs_h,
        redundancy_vs_restricted=stats.redundancy_vs_restricted,
        payload_bits=stats.payload_bits,
        header_bytes=HEADER_BYTES,
    )


def _run_trial(args: Tuple[str, int, int, int, int, str]) -> TrialRecord:
    return run_trial(*args)


def run_experiment(
    config: ExperimentConfig,
) -> Iterator[Tuple[List[TrialRecord], SummaryRecord]]:
    """Run all trials, one block length after the other.

    Yields the trials of each block length sorted by trial index together
    with their summary.
    """
    pool: Optional[ProcessPoolExecutor] = None
    if config.workers > 1:
        pool = ProcessPoolExecutor(max_workers=config.workers)
    try:
        for n, k in zip(config.n_grid, config.k_values):
            tasks = [
                (config.source, n, k, trial, config.seed, config.coder)
                for trial in range(config.trials)
            ]
            logger.info("Running %i trials at n=%i, k=%i", len(tasks), n, k)
            if pool is None:
                records = [_run_trial(task) for task in tasks]
            else:
                records = list(pool.map(_run_trial, tasks))
            records.sort(key=lambda record: (record.n, record.trial))
            yield records, summarize(records, config.pmf)
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)


def write_experiment(
    config: ExperimentConfig, trials_out: IO[str], summary_out: IO[str]
) -> List[SummaryRecord]:
    """Stream the experiment CSVs; every block length is flushed as soon as
    it completes so an interrupted run keeps its finished rows."""
    trial_lines = trial_csv_stream(())
    summary_lines = summary_csv_stream(())
    trials_out.write(next(trial_lines))
    summary_out.write(next(summary_lines))
    summaries: List[SummaryRecord] = []
    try:
        for records, summary in run_experiment(config):
            trials_out.writelines(list(trial_csv_stream(records))[1:])
            summary_out.writelines(list(summary_csv_stream([summary]))[1:])
            trials_out.flush()
            summary_out.flush()
            summaries.append(summary)
    except KeyboardInterrupt:
        logger.warning(
            "Interrupted, %i of %i block lengths written",
            len(summaries),
            len(config.n_grid),
        )
        raise
    return summaries


def summary_path(out: Path) -> Path:
    """Summary CSV path belonging to a per-trial CSV path."""
    return out.with_name(out.name + ".summary.csv")


def doubling_sizes(first: int, last: int) -> List[int]:
    """``first, 2 first, 4 first, ...`` up to ``last``."""
    sizes = []
    n = first
    while n <= last:
        sizes.append(n)
        n *= 2
    return sizes


def estimate_entropy(
    symbols: IntArray, tau: float, block_sizes: Sequence[int]
) -> List[Tuple[int, int, float]]:
    """Entropy estimates on growing prefixes of ``symbols``."""
    sizes = [n for n in block_sizes if n <= len(symbols)]
    if len(sizes) < len(block_sizes):
        logger.warning("Stream of %i symbols, larger blocks skipped", len(symbols))
    return entropy_estimate(symbols, tau, sizes)


def estimate_source_entropy(
    source: str, tau: float, block_sizes: Sequence[int], seed: int
) -> List[Tuple[int, int, float]]:
    """Entropy estimates on one synthetic trajectory of ``source``."""
    pmf = parse_source(source)
    symbols = sample(pmf, mix_seed(seed, max(block_sizes), 0), max(block_sizes))
    return entropy_estimate(symbols, tau, block_sizes)
