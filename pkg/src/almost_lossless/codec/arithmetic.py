"""Integer arithmetic coder with a 64-bit state register.

Underflow (straddling the midpoint) is resolved with pending bits, the
stream is terminated with two bits that select a quarter of the final
interval. The decoder reads zeros past the end of the payload.
"""

from typing import List, Sequence

import numpy as np

from ..exceptions import CodecError
from ..utils import IntArray
from .models import CoderModel

STATE_BITS = 64
FULL_RANGE = 1 << STATE_BITS
HALF_RANGE = FULL_RANGE >> 1
QUARTER_RANGE = HALF_RANGE >> 1
STATE_MASK = FULL_RANGE - 1
MAX_TOTAL = QUARTER_RANGE + 2
"""Largest frequency total for which every symbol keeps a nonempty range."""


class ArithmeticEncoder:
    """Encoder writing single bits to an in-memory list."""

    def __init__(self) -> None:
        self.low = 0
        self.high = STATE_MASK
        self.pending = 0
        self.bits: List[int] = []

    def _emit(self, bit: int) -> None:
        self.bits.append(bit)
        if self.pending:
            self.bits.extend([bit ^ 1] * self.pending)
            self.pending = 0

    def write(self, low_count: int, high_count: int, total: int) -> None:
        """Narrow the interval to ``[low_count, high_count) / total``."""
        if total > MAX_TOTAL:
            raise CodecError(f"frequency total {total} exceeds {MAX_TOTAL}")
        span = self.high - self.low + 1
        self.high = self.low + span * high_count // total - 1
        self.low = self.low + span * low_count // total
        while True:
            if self.high < HALF_RANGE:
                self._emit(0)
            elif self.low >= HALF_RANGE:
                self._emit(1)
                self.low -= HALF_RANGE
                self.high -= HALF_RANGE
            elif self.low >= QUARTER_RANGE and self.high < 3 * QUARTER_RANGE:
                self.pending += 1
                self.low -= QUARTER_RANGE
                self.high -= QUARTER_RANGE
            else:
                break
            self.low = (self.low << 1) & STATE_MASK
            self.high = ((self.high << 1) & STATE_MASK) | 1

    def finish(self) -> List[int]:
        """Terminate the stream and return all emitted bits."""
        self.pending += 1
        self._emit(0 if self.low < QUARTER_RANGE else 1)
        return self.bits


class ArithmeticDecoder:
    """Decoder mirroring :class:`ArithmeticEncoder`."""

    def __init__(self, bits: Sequence[int]) -> None:
        self._bits = bits
        self._position = 0
        self.low = 0
        self.high = STATE_MASK
        self.code = 0
        for _ in range(STATE_BITS):
            self.code = (self.code << 1) | self._next_bit()

    def _next_bit(self) -> int:
        position = self._position
        self._position += 1
        if position < len(self._bits):
            return self._bits[position]
        return 0

    def read(self, model: CoderModel) -> int:
        """Decode one index with the current state of ``model``."""
        total = model.total
        span = self.high - self.low + 1
        value = ((self.code - self.low + 1) * total - 1) // span
        index = model.find(value)
        if not 0 <= index < model.k:
            raise CodecError("payload does not decode to a valid symbol")
        low_count, high_count = model.interval(index)
        self.high = self.low + span * high_count // total - 1
        self.low = self.low + span * low_count // total
        while True:
            if self.high < HALF_RANGE:
                pass
            elif self.low >= HALF_RANGE:
                self.low -= HALF_RANGE
                self.high -= HALF_RANGE
                self.code -= HALF_RANGE
            elif self.low >= QUARTER_RANGE and self.high < 3 * QUARTER_RANGE:
                self.low -= QUARTER_RANGE
                self.high -= QUARTER_RANGE
                self.code -= QUARTER_RANGE
            else:
                break
            self.low = (self.low << 1) & STATE_MASK
            self.high = ((self.high << 1) & STATE_MASK) | 1
            self.code = ((self.code << 1) & STATE_MASK) | self._next_bit()
        return index


def encode_indices(model: CoderModel, indices: IntArray) -> List[int]:
    """Arithmetic-code 0-based ``indices``; ``model`` is updated in place."""
    if len(indices) == 0:
        return []
    encoder = ArithmeticEncoder()
    for index in np.asarray(indices, dtype=np.int64).tolist():
        low_count, high_count = model.interval(index)
        encoder.write(low_count, high_count, model.total)
        model.update(index)
    return encoder.finish()


def decode_indices(model: CoderModel, bits: Sequence[int], n: int) -> IntArray:
    """Decode ``n`` 0-based indices; ``model`` is updated in place."""
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    decoder = ArithmeticDecoder(bits)
    out = np.empty(n, dtype=np.int64)
    for position in range(n):
        index = decoder.read(model)
        model.update(index)
        out[position] = index
    return out
