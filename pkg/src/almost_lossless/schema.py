"""Definition of all input schemas."""

import json
from functools import cached_property
from pathlib import Path
from typing import Annotated, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .codec import schedule_k
from .distributions import Pmf, parse_source
from .exceptions import SpecError
from .utils import logger, validate_experiment_config


class ExperimentConfig(BaseModel):
    """Configuration of a Monte Carlo coding experiment."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    source: Annotated[
        str,
        Field(
            description="Source spec, e.g. geometric:p=0.5.",
            examples=["geometric:p=0.5"],
        ),
    ]
    n_grid: Annotated[
        List[int],
        Field(
            min_length=1,
            description="Strictly ascending block lengths.",
            examples=[[256, 1024, 4096]],
        ),
    ]
    tau: Annotated[
        Optional[float],
        Field(gt=0, lt=1, description="Truncation exponent, k = ceil(n**tau)."),
    ] = None
    k_schedule: Annotated[
        Optional[List[int]],
        Field(description="Explicit truncation size per block length."),
    ] = None
    trials: Annotated[int, Field(ge=1, description="Trials per block length.")] = 1
    seed: Annotated[
        int, Field(ge=0, lt=2**64, description="Master seed.")
    ] = 0
    coder: Annotated[
        Literal["static", "kt"], Field(description="Second stage coder.")
    ] = "kt"
    workers: Annotated[int, Field(ge=1, description="Worker processes.")] = 1
    out: Annotated[
        Optional[str], Field(description="Path of the per-trial CSV.")
    ] = None

    @field_validator("n_grid")
    @classmethod
    def _check_grid(cls, n_grid: List[int]) -> List[int]:
        if any(n < 1 for n in n_grid):
            raise ValueError("block lengths have to be positive")
        if any(b <= a for a, b in zip(n_grid, n_grid[1:])):
            raise ValueError("n_grid has to be strictly ascending")
        return n_grid

    @field_validator("source")
    @classmethod
    def _check_source(cls, source: str) -> str:
        parse_source(source)
        return source

    @model_validator(mode="after")
    def _check_schedule(self) -> "ExperimentConfig":
        if (self.tau is None) == (self.k_schedule is None):
            raise ValueError("give exactly one of tau and k_schedule")
        if self.k_schedule is not None:
            if len(self.k_schedule) != len(self.n_grid):
                raise ValueError("k_schedule and n_grid differ in length")
            if any(k < 2 for k in self.k_schedule):
                raise ValueError("truncation sizes have to be at least 2")
        return self

    @cached_property
    def pmf(self) -> Pmf:
        """The parsed source."""
        return parse_source(self.source)

    @property
    def k_values(self) -> List[int]:
        """Truncation size for every block length."""
        if self.k_schedule is not None:
            return list(self.k_schedule)
        assert self.tau is not None
        return [schedule_k(n, self.tau) for n in self.n_grid]

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "ExperimentConfig":
        """Read and validate a JSON config file."""
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as error:
            raise SpecError(f"{path} is not valid JSON: {error}") from error
        validate_experiment_config(data)
        logger.debug("Loaded experiment config %s", path)
        return cls(**data)
