"""Byte layout of one coded block.

``magic(4) version(1) n(u32) k(u32) coder_id(u8) payload_bits(u64)``
followed by the payload bits packed MSB first and zero padded to a byte
boundary. All integers are little endian; files may hold several blocks
back to back.
"""

import struct
from typing import Annotated, Iterator, List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..exceptions import ContainerFormatError
from ..utils import logger
from .arithmetic import MAX_TOTAL

MAGIC = b"ALWC"
VERSION = 1
HEADER = struct.Struct("<4sBIIBQ")
HEADER_BYTES = HEADER.size
CODER_IDS = (0, 1)
MAX_BLOCK = 1 << 20
"""Longest block a single container holds."""
MAX_K = 1 << 20
"""Largest truncation size a container holds."""


class CodedBlock(BaseModel):
    """Header fields and packed payload of one block."""

    model_config = ConfigDict(frozen=True)

    n: Annotated[int, Field(ge=0, lt=2**32, description="Block length.")]
    k: Annotated[int, Field(ge=1, lt=2**32, description="Truncation size.")]
    coder_id: Annotated[
        int, Field(ge=0, le=1, description="0 = static, 1 = KT.")
    ]
    payload_bits: Annotated[
        int, Field(ge=0, lt=2**64, description="Number of payload bits.")
    ]
    payload: Annotated[bytes, Field(description="Packed payload bits.")]

    @model_validator(mode="after")
    def _check_payload(self) -> "CodedBlock":
        if len(self.payload) != (self.payload_bits + 7) // 8:
            raise ValueError("payload length does not match payload_bits")
        return self

    @classmethod
    def from_bits(
        cls, bits: List[int], n: int, k: int, coder_id: int
    ) -> "CodedBlock":
        """Pack a list of bits into a block."""
        packed = np.packbits(np.asarray(bits, dtype=np.uint8)).tobytes()
        return cls(
            n=n, k=k, coder_id=coder_id, payload_bits=len(bits), payload=packed
        )

    def bits(self) -> List[int]:
        """Unpacked payload bits without the padding."""
        unpacked = np.unpackbits(np.frombuffer(self.payload, dtype=np.uint8))
        return [int(b) for b in unpacked[: self.payload_bits]]

    @property
    def size(self) -> int:
        """Bytes of the serialized block, header included."""
        return HEADER_BYTES + len(self.payload)

    def to_bytes(self) -> bytes:
        """Serialize header and payload."""
        header = HEADER.pack(
            MAGIC, VERSION, self.n, self.k, self.coder_id, self.payload_bits
        )
        return header + self.payload

    @classmethod
    def from_bytes(cls, data: bytes, offset: int = 0) -> Tuple["CodedBlock", int]:
        """Parse the block starting at ``offset``.

        Returns the block and the offset right after it.

        Raises
        ------
        ContainerFormatError: on a bad header or a truncated payload.
        """
        if len(data) - offset < HEADER_BYTES:
            raise ContainerFormatError("truncated block header")
        magic, version, n, k, coder_id, payload_bits = HEADER.unpack_from(
            data, offset
        )
        if magic != MAGIC:
            raise ContainerFormatError(f"bad magic {magic!r}")
        if version != VERSION:
            raise ContainerFormatError(f"unsupported container version {version}")
        if coder_id not in CODER_IDS:
            raise ContainerFormatError(f"unknown coder id {coder_id}")
        if not 1 <= k <= MAX_K:
            raise ContainerFormatError(f"truncation size {k} outside 1..{MAX_K}")
        if n > MAX_BLOCK:
            raise ContainerFormatError(
                f"block length {n} exceeds the maximum of {MAX_BLOCK}"
            )
        if coder_id == 1 and k + 2 * n > MAX_TOTAL:
            raise ContainerFormatError(
                f"k={k} and n={n} overflow the adaptive frequency total"
            )
        start = offset + HEADER_BYTES
        end = start + (payload_bits + 7) // 8
        if end > len(data):
            raise ContainerFormatError(
                f"truncated payload: {end - len(data)} byte(s) missing"
            )
        block = cls(
            n=n,
            k=k,
            coder_id=coder_id,
            payload_bits=payload_bits,
            payload=bytes(data[start:end]),
        )
        return block, end


def iter_blocks(data: bytes) -> Iterator[CodedBlock]:
    """Parse every block of a concatenated container stream."""
    offset = 0
    while offset < len(data):
        block, offset = CodedBlock.from_bytes(data, offset)
        logger.debug(
            "Read block n=%i k=%i coder=%i bits=%i",
            block.n,
            block.k,
            block.coder_id,
            block.payload_bits,
        )
        yield block
