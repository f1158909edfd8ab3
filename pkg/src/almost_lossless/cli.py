"""Command line interface (cli) of the almost lossless coding toolkit."""

import os
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Iterable, Iterator, List, Optional

import click
import numpy as np
import typer
from pydantic import ValidationError

from .codec import (
    StaticModel,
    TailQuantizer,
    build_model,
    decode_stream,
    encode_stream,
    iter_blocks,
)
from .distributions import parse_envelope, parse_source
from .exceptions import AlwcError, SpecError
from .experiments import (
    doubling_sizes,
    estimate_entropy,
    estimate_source_entropy,
    summary_path,
    write_experiment,
)
from .radius_lab import classify_regime
from .response import entropy_csv_stream, radius_csv_stream, rd_csv_stream
from .schema import ExperimentConfig
from .utils import IntArray, logger

main = typer.Typer(help="Almost lossless universal coding on countable alphabets.")

DEFAULT_D_GRID = "0.2,0.1,0.05,0.02,0.01,0.001,0.0001,0"
DEFAULT_N_GRID = "1024,4096,16384,65536,262144,1048576"


@contextmanager
def _data_errors() -> Iterator[None]:
    """Turn data and format errors into exit code 2."""
    try:
        with logger.numeric_warnings():
            yield
    except (AlwcError, ValidationError, OSError) as error:
        logger.error("%s", error)
        logger.debug("Data error details", exc_info=error)
        raise typer.Exit(code=2) from error


def _set_debug(debug: bool) -> None:
    if debug:
        logger.set_debug(True)


def _int_list(text: str) -> List[int]:
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError as error:
        raise SpecError(f"expected comma separated integers, got {text!r}") from error


def _float_list(text: str) -> List[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError as error:
        raise SpecError(f"expected comma separated numbers, got {text!r}") from error


def read_symbols(path: Path, binary: bool = False) -> IntArray:
    """Read newline separated integers or 32-bit little endian symbols."""
    if binary:
        data = path.read_bytes()
        if len(data) % 4:
            raise SpecError(f"{path}: binary symbol files hold 4-byte words")
        return np.frombuffer(data, dtype="<u4").astype(np.int64)
    try:
        values = [int(line) for line in path.read_text().split()]
    except ValueError as error:
        raise SpecError(f"{path}: symbols have to be integers") from error
    return np.asarray(values, dtype=np.int64)


def write_symbols(path: Path, symbols: IntArray, binary: bool = False) -> None:
    """Counterpart of :func:`read_symbols`."""
    if binary:
        path.write_bytes(np.asarray(symbols, dtype="<u4").tobytes())
        return
    path.write_text("".join(f"{int(s)}\n" for s in symbols))


def _emit(lines: Iterable[str], out: Optional[Path]) -> None:
    if out is None:
        for line in lines:
            typer.echo(line, nl=False)
        return
    with out.open("w", encoding="utf-8", newline="") as stream:
        stream.writelines(lines)
    logger.info("Wrote %s", out)


@main.command()
def encode(
    input_file: Path = typer.Argument(..., help="Symbol file to encode."),
    output_file: Path = typer.Argument(..., help="Container file to write."),
    k: int = typer.Option(..., "--k", min=2, help="Truncation size."),
    coder: str = typer.Option("kt", help="Second stage coder: static or kt."),
    source: Optional[str] = typer.Option(
        None, help="Source spec of the static model, uniform if omitted."
    ),
    binary: bool = typer.Option(
        False, help="Read 32-bit little endian symbols instead of text."
    ),
    debug: bool = typer.Option(
        bool(int(os.environ.get("DEBUG", 0))), help="Turn on debug mode."
    ),
) -> None:
    """Quantize and encode a symbol file."""
    _set_debug(debug)
    with _data_errors():
        symbols = read_symbols(input_file, binary)
        pmf = parse_source(source) if source else None
        quantized = TailQuantizer(k=k).quantize(symbols)
        data = encode_stream(build_model(coder, k, pmf), quantized)
        output_file.write_bytes(data)
        logger.info(
            "Encoded %i symbols into %i bytes", len(symbols), len(data)
        )


@main.command()
def decode(
    input_file: Path = typer.Argument(..., help="Container file to decode."),
    output_file: Path = typer.Argument(..., help="Symbol file to write."),
    source: Optional[str] = typer.Option(
        None,
        help=(
            "Source spec the static blocks were encoded with; without it "
            "static blocks decode with the uniform model."
        ),
    ),
    binary: bool = typer.Option(
        False, help="Write 32-bit little endian symbols instead of text."
    ),
    debug: bool = typer.Option(
        bool(int(os.environ.get("DEBUG", 0))), help="Turn on debug mode."
    ),
) -> None:
    """Decode a container file."""
    _set_debug(debug)
    with _data_errors():
        pmf = parse_source(source) if source else None
        data = input_file.read_bytes()
        if pmf is None and any(
            block.coder_id == StaticModel.coder_id for block in iter_blocks(data)
        ):
            logger.warning(
                "Decoding static blocks with the uniform model, pass --source "
                "if they were encoded with a source model"
            )
        symbols = decode_stream(data, pmf)
        write_symbols(output_file, symbols, binary)
        logger.info("Decoded %i symbols", len(symbols))


@main.command()
def rd(
    source: str = typer.Option(..., help="Source spec, e.g. geometric:p=0.5."),
    d_grid: str = typer.Option(
        DEFAULT_D_GRID, help="Comma separated distortions."
    ),
    out: Optional[Path] = typer.Option(None, help="CSV file, stdout if omitted."),
    debug: bool = typer.Option(
        bool(int(os.environ.get("DEBUG", 0))), help="Turn on debug mode."
    ),
) -> None:
    """Tabulate the rate-distortion function."""
    _set_debug(debug)
    with _data_errors():
        pmf = parse_source(source)
        _emit(list(rd_csv_stream(pmf, _float_list(d_grid))), out)


@main.command()
def experiment(
    config: Optional[Path] = typer.Option(
        None, help="JSON experiment config, replaces the options below."
    ),
    source: Optional[str] = typer.Option(None, help="Source spec."),
    n_grid: Optional[str] = typer.Option(
        None, help="Comma separated block lengths."
    ),
    tau: Optional[float] = typer.Option(None, help="Truncation exponent."),
    k: Optional[str] = typer.Option(
        None, "--k", help="Comma separated truncation size per block length."
    ),
    trials: int = typer.Option(1, min=1, help="Trials per block length."),
    seed: int = typer.Option(
        int(os.environ.get("ALWC_SEED", "0")), help="Master seed."
    ),
    coder: str = typer.Option("kt", help="Second stage coder: static or kt."),
    workers: int = typer.Option(
        int(os.environ.get("ALWC_WORKERS", "1")),
        min=1,
        help="Worker processes.",
    ),
    out: Optional[Path] = typer.Option(
        None, help="Per-trial CSV; summaries go to <out>.summary.csv."
    ),
    debug: bool = typer.Option(
        bool(int(os.environ.get("DEBUG", 0))), help="Turn on debug mode."
    ),
) -> None:
    """Run a Monte Carlo experiment of the two-stage code."""
    _set_debug(debug)
    with _data_errors():
        if config is not None:
            settings = ExperimentConfig.from_file(config)
        else:
            if source is None or n_grid is None:
                raise click.UsageError("give --config or --source and --n-grid")
            settings = ExperimentConfig(
                source=source,
                n_grid=_int_list(n_grid),
                tau=tau,
                k_schedule=_int_list(k) if k else None,
                trials=trials,
                seed=seed,
                coder=coder,  # type: ignore[arg-type]
                workers=workers,
            )
        target = out or (Path(settings.out) if settings.out else None)
        if target is None:
            raise click.UsageError("give --out or set out in the config")
        with target.open("w", encoding="utf-8", newline="") as trials_out:
            with summary_path(target).open(
                "w", encoding="utf-8", newline=""
            ) as summary_out:
                write_experiment(settings, trials_out, summary_out)
        logger.info("Wrote %s and %s", target, summary_path(target))


@main.command()
def radius(
    envelope: str = typer.Option(
        ..., help="Envelope spec, e.g. envelope-geom:c=1,r=0.5."
    ),
    n_grid: str = typer.Option(DEFAULT_N_GRID, help="Comma separated block lengths."),
    k_schedule: str = typer.Option(
        "u-star",
        help=(
            "u-star, u-star+<j>, sqrt-u-star, tau=<t>, fixed=<k> or a comma "
            "separated list."
        ),
    ),
    out: Optional[Path] = typer.Option(None, help="CSV file, stdout if omitted."),
    debug: bool = typer.Option(
        bool(int(os.environ.get("DEBUG", 0))), help="Turn on debug mode."
    ),
) -> None:
    """Tabulate redundancy bounds and the gain regime of a schedule."""
    _set_debug(debug)
    with _data_errors():
        report = classify_regime(
            parse_envelope(envelope), k_schedule, _int_list(n_grid)
        )
        _emit(list(radius_csv_stream(report)), out)


@main.command("entropy-est")
def entropy_est(
    source: Optional[str] = typer.Option(None, help="Synthetic source spec."),
    input_file: Optional[Path] = typer.Option(
        None, "--input", help="Symbol file instead of a synthetic source."
    ),
    tau: float = typer.Option(0.4, help="Truncation exponent."),
    min_n: int = typer.Option(256, min=1, help="Smallest block length."),
    max_n: int = typer.Option(16384, min=1, help="Largest block length."),
    seed: int = typer.Option(
        int(os.environ.get("ALWC_SEED", "0")), help="Seed of the synthetic source."
    ),
    binary: bool = typer.Option(False, help="Binary symbol file."),
    out: Optional[Path] = typer.Option(None, help="CSV file, stdout if omitted."),
    debug: bool = typer.Option(
        bool(int(os.environ.get("DEBUG", 0))), help="Turn on debug mode."
    ),
) -> None:
    """Estimate the entropy by the per-letter code length."""
    _set_debug(debug)
    if (source is None) == (input_file is None):
        raise click.UsageError("give exactly one of --source and --input")
    with _data_errors():
        sizes = doubling_sizes(min_n, max_n)
        if input_file is not None:
            estimates = estimate_entropy(read_symbols(input_file, binary), tau, sizes)
        else:
            assert source is not None
            estimates = estimate_source_entropy(source, tau, sizes, seed)
        _emit(list(entropy_csv_stream(estimates)), out)


def run() -> None:
    """Console script entry point: 0 ok, 1 usage error, 2 data error."""
    try:
        code = main(standalone_mode=False)
    except click.exceptions.UsageError as error:
        error.show()
        sys.exit(1)
    except click.exceptions.Abort:
        sys.exit(1)
    sys.exit(code if isinstance(code, int) else 0)


if __name__ == "__main__":
    run()
