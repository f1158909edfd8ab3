"""Finite partitions of the positive integers."""

from typing import Annotated, Literal, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..utils import FloatArray
from .core import MassFunction


class PartitionSpec(BaseModel):
    """A finite partition of the alphabet.

    ``tail`` partitions are ``{1}, ..., {k-1}`` plus the residual cell
    ``{k, k+1, ...}``. ``explicit`` partitions list disjoint cells covering
    ``1..M`` followed by the residual cell ``{M+1, ...}``.
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["tail", "explicit"]
    k: Annotated[
        Optional[int],
        Field(ge=2, description="Truncation size of a tail partition."),
    ] = None
    cells: Annotated[
        Tuple[Tuple[int, ...], ...],
        Field(description="Explicit cells, the residual cell is implied."),
    ] = ()

    @model_validator(mode="after")
    def _check_cells(self) -> "PartitionSpec":
        if self.kind == "tail":
            if self.k is None:
                raise ValueError("tail partitions need k >= 2")
            return self
        symbols = sorted(x for cell in self.cells for x in cell)
        if any(not cell for cell in self.cells):
            raise ValueError("cells have to be nonempty")
        if symbols != list(range(1, len(symbols) + 1)):
            raise ValueError(
                "explicit cells have to be disjoint and cover 1..M"
            )
        return self

    @classmethod
    def tail_cells(cls, k: int) -> "PartitionSpec":
        """The tail partition of size ``k``."""
        return cls(kind="tail", k=k)

    @classmethod
    def explicit(cls, cells: Sequence[Sequence[int]]) -> "PartitionSpec":
        """Partition given by explicit cells plus the residual cell."""
        return cls(kind="explicit", cells=tuple(tuple(c) for c in cells))

    @property
    def cell_count(self) -> int:
        """Number of cells including the residual cell."""
        if self.kind == "tail":
            assert self.k is not None
            return self.k
        return len(self.cells) + 1

    def cell_masses(self, function: MassFunction) -> FloatArray:
        """Mass of every cell, the residual cell last."""
        if self.kind == "tail":
            assert self.k is not None
            singles = function.masses(np.arange(1, self.k, dtype=np.int64))
            return np.append(singles, function.survival(self.k - 1))
        covered = sum(len(cell) for cell in self.cells)
        masses = [
            float(np.sum(function.masses(np.asarray(cell, dtype=np.int64))))
            for cell in self.cells
        ]
        return np.asarray(
            masses + [function.survival(covered)], dtype=np.float64
        )
