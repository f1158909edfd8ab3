"""Two-stage almost lossless code: tail quantization followed by
arithmetic coding of the quantized block."""

from typing import Annotated, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..distributions import Pmf, entropy, restricted_entropy
from ..exceptions import CodecError, ContainerFormatError
from ..utils import IntArray, logger
from .arithmetic import decode_indices, encode_indices
from .container import (
    HEADER_BYTES,
    MAX_BLOCK,
    MAX_K,
    CodedBlock,
    iter_blocks,
)
from .models import CoderModel, KTModel, StaticModel, build_model
from .quantizer import TailQuantizer, hamming_distortion, schedule_k


class CodecStats(BaseModel):
    """Rate, distortion and redundancy of one coded block."""

    model_config = ConfigDict(frozen=True)

    n: Annotated[int, Field(ge=0, description="Block length.")]
    k: Annotated[int, Field(ge=1, description="Truncation size.")]
    payload_bits: Annotated[int, Field(ge=0, description="Emitted bits.")]
    header_bytes: Annotated[int, Field(ge=0, description="Container header.")]
    ideal_bits: Annotated[
        float, Field(ge=0, description="-log2 of the model probability.")
    ]
    emp_rate: Annotated[
        float, Field(ge=0, description="Payload bits per symbol.")
    ]
    emp_rate_with_header: Annotated[
        float, Field(ge=0, description="Payload and header bits per symbol.")
    ]
    emp_distortion: Annotated[
        float, Field(ge=0, le=1, description="Hamming distortion.")
    ]
    entropy_bits: Annotated[
        Optional[float], Field(description="Entropy of the source.")
    ] = None
    restricted_entropy_bits: Annotated[
        Optional[float],
        Field(description="Entropy of the quantized source."),
    ] = None

    @property
    def redundancy_vs_h(self) -> Optional[float]:
        """Payload rate minus the source entropy."""
        if self.entropy_bits is None:
            return None
        return self.emp_rate - self.entropy_bits

    @property
    def redundancy_vs_restricted(self) -> Optional[float]:
        """Payload rate minus the entropy of the quantized source."""
        if self.restricted_entropy_bits is None:
            return None
        return self.emp_rate - self.restricted_entropy_bits


def encode_block(model: CoderModel, y: IntArray) -> CodedBlock:
    """Code the indices ``y`` in ``1..k``; ``model`` itself is not changed.

    Raises
    ------
    SymbolRangeError: if an index is outside ``1..k``.
    """
    if model.k > MAX_K:
        raise CodecError(f"containers hold truncation sizes up to {MAX_K}")
    indices = model.check(y)
    if len(indices) > MAX_BLOCK:
        raise CodecError(
            f"blocks hold at most {MAX_BLOCK} symbols, use encode_stream"
        )
    bits = encode_indices(model.copy(), indices)
    return CodedBlock.from_bits(bits, len(indices), model.k, model.coder_id)


def model_for_block(block: CodedBlock, pmf: Optional[Pmf] = None) -> CoderModel:
    """Fresh decoder model matching the header of ``block``."""
    if block.coder_id == KTModel.coder_id:
        return KTModel(block.k)
    if pmf is None:
        return StaticModel.uniform(block.k)
    return StaticModel.from_pmf(pmf, block.k)


def decode_block(
    block: CodedBlock, model: Optional[CoderModel] = None
) -> IntArray:
    """Invert :func:`encode_block`.

    Without a model the model is rebuilt from the header, static blocks
    then decode with the uniform model.
    """
    if model is None:
        model = model_for_block(block)
    if model.coder_id != block.coder_id or model.k != block.k:
        raise ContainerFormatError(
            f"block was coded with coder {block.coder_id} and k={block.k}, "
            f"got coder {model.coder_id} and k={model.k}"
        )
    return decode_indices(model.copy(), block.bits(), block.n) + 1


def encode_stream(model: CoderModel, y: IntArray) -> bytes:
    """Code arbitrarily long inputs as a sequence of independent blocks."""
    symbols = np.asarray(y, dtype=np.int64)
    chunks = [
        symbols[start : start + MAX_BLOCK]
        for start in range(0, max(len(symbols), 1), MAX_BLOCK)
    ]
    return b"".join(encode_block(model, chunk).to_bytes() for chunk in chunks)


def decode_stream(data: bytes, pmf: Optional[Pmf] = None) -> IntArray:
    """Decode every block of a concatenated container stream."""
    parts: List[IntArray] = [
        decode_block(block, model_for_block(block, pmf))
        for block in iter_blocks(data)
    ]
    if not parts:
        return np.zeros(0, dtype=np.int64)
    return np.concatenate(parts)


def two_stage_encode(
    x: IntArray,
    k: int,
    coder: str = "kt",
    pmf: Optional[Pmf] = None,
) -> Tuple[CodedBlock, IntArray, CodecStats]:
    """Quantize, code and decode one block of source symbols.

    ``pmf`` is the source law when known: it feeds the static model and the
    entropy references of the returned statistics.
    """
    symbols = np.asarray(x, dtype=np.int64)
    quantizer = TailQuantizer(k=k)
    y = quantizer.quantize(symbols)
    model = build_model(coder, k, pmf)
    block = encode_block(model, y)
    reconstruction = quantizer.dequantize(decode_block(block, model))
    n = len(symbols)
    stats = CodecStats(
        n=n,
        k=k,
        payload_bits=block.payload_bits,
        header_bytes=HEADER_BYTES,
        ideal_bits=model.ideal_code_length(y),
        emp_rate=block.payload_bits / n if n else 0.0,
        emp_rate_with_header=(
            (block.payload_bits + 8 * HEADER_BYTES) / n if n else 0.0
        ),
        emp_distortion=hamming_distortion(symbols, reconstruction),
        entropy_bits=None if pmf is None else entropy(pmf),
        restricted_entropy_bits=(
            None if pmf is None else restricted_entropy(pmf, k)
        ),
    )
    logger.debug(
        "Coded n=%i k=%i with %s: %i bits, distortion %.3g",
        n,
        k,
        coder,
        block.payload_bits,
        stats.emp_distortion,
    )
    return block, reconstruction, stats


def entropy_estimate(
    symbols: IntArray, tau: float, block_sizes: Sequence[int]
) -> List[Tuple[int, int, float]]:
    """Per-letter code length of the universal two-stage code on growing
    prefixes of one trajectory.

    Returns ``(n, k_n, bits per symbol)`` for every block size.
    """
    stream = np.asarray(symbols, dtype=np.int64)
    sizes = list(block_sizes)
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise CodecError("block sizes have to increase")
    if sizes and sizes[-1] > len(stream):
        raise CodecError(
            f"need {sizes[-1]} symbols, the stream holds {len(stream)}"
        )
    estimates = []
    for n in sizes:
        k = schedule_k(n, tau)
        y = TailQuantizer(k=k).quantize(stream[:n])
        block = encode_block(KTModel(k), y)
        estimates.append((n, k, block.payload_bits / n))
    return estimates
