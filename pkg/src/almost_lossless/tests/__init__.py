"""Unit tests."""

import csv
import io
from pathlib import Path
from typing import Dict, Iterable, List, Union


def read_csv(source: Union[Path, str]) -> List[Dict[str, str]]:
    """Read the rows of a CSV file, or of CSV text, as dictionaries."""
    if isinstance(source, Path):
        source = source.read_text(encoding="utf-8")
    return list(csv.DictReader(io.StringIO(source)))


def write_symbol_file(path: Path, symbols: Iterable[int]) -> Path:
    """Write newline separated symbols."""
    path.write_text("".join(f"{s}\n" for s in symbols), encoding="utf-8")
    return path
