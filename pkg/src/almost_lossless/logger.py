"""Definition of the central logging system.

Standard output is reserved for CSV tables, all log records go to standard
error and to a rotating log file.
"""

import logging
import os
import warnings
from contextlib import contextmanager
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Iterator, Optional, Union

import rich.console
import rich.logging

logger_format = logging.Formatter(
    "%(name)s - %(asctime)s - %(levelname)s: %(message)s",
    datefmt="%Y-%m-%dT%H:%M:%S",
)


class Logger(logging.Logger):
    """Logger of the coding toolkit.

    Every record goes to a rich console handler on standard error and to a
    rotating log file, both kept at the same level. Numerical warnings of
    numpy and scipy can be routed into the same handlers with
    :meth:`numeric_warnings`.

    Attributes
    ----------
        name: str
            Name of the logger.
    """

    name: str = "almost-lossless"

    def __init__(
        self, debug: bool = False, log_dir: Optional[Union[str, Path]] = None
    ) -> None:
        """Create the logger and its handlers.

        Parameters:
            debug: bool
                Turn on debugging mode.
            log_dir: str, Path
                Directory of the log file, defaults to ``$ALWC_LOGDIR``.
        """
        super().__init__(self.name)
        self._file_handle = self._get_file_handle(log_dir)
        self.addHandler(self._console_handler())
        self.addHandler(self._file_handle)
        self.set_debug(debug)

    @property
    def log_file(self) -> Path:
        """Path of the current log file."""
        return Path(self._file_handle.baseFilename)

    def _console_handler(self) -> rich.logging.RichHandler:
        """Rich handler on standard error."""
        handler = rich.logging.RichHandler(
            console=rich.console.Console(stderr=True),
            rich_tracebacks=True,
            show_path=False,
        )
        handler.setFormatter(logger_format)
        return handler

    def _get_file_handle(
        self, log_dir: Optional[Union[str, Path]]
    ) -> RotatingFileHandler:
        """Get a file log handle for the logger."""
        directory = Path(
            log_dir
            or os.environ.get("ALWC_LOGDIR")
            or Path("/tmp") / self.name / "log"
        )
        directory.mkdir(exist_ok=True, parents=True)
        handle = RotatingFileHandler(
            directory / f"{self.name}.log",
            mode="a",
            maxBytes=5 * 1024**2,
            backupCount=5,
            encoding="utf-8",
            delay=True,
        )
        handle.setFormatter(logger_format)
        return handle

    def set_debug(self, debug: bool) -> None:
        """Switch between DEBUG and INFO."""
        self.setLevel(logging.DEBUG if debug else logging.INFO)

    @contextmanager
    def numeric_warnings(self) -> Iterator[None]:
        """Log the warnings raised inside the block instead of printing them.

        Integration and root finding warnings of scipy and floating point
        warnings of numpy end up next to the other records of a run.
        """
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            try:
                yield
            finally:
                for record in caught:
                    self.warning(
                        "%s: %s", record.category.__name__, record.message
                    )

    def setLevel(self, level: Union[int, str]) -> None:
        """
        Overrides the setLevel method to synchronize the log level with the
        handlers.

        Parameters:
            level int, str:
                Log level to be set.
        """
        super().setLevel(level)
        for handle in self.handlers:
            handle.setLevel(level)
