"""Two-stage almost lossless codec."""

from .arithmetic import ArithmeticDecoder, ArithmeticEncoder
from .container import (
    HEADER_BYTES,
    MAX_BLOCK,
    MAX_K,
    CodedBlock,
    iter_blocks,
)
from .models import (
    CoderModel,
    FenwickTree,
    KTModel,
    StaticModel,
    build_model,
    empirical_entropy,
    ideal_code_length,
)
from .quantizer import (
    TailQuantizer,
    envelope_distortion_bound,
    expected_distortion,
    hamming_distortion,
    quantize_block,
    schedule_k,
)
from .two_stage import (
    CodecStats,
    decode_block,
    decode_stream,
    encode_block,
    encode_stream,
    entropy_estimate,
    model_for_block,
    two_stage_encode,
)

__all__ = [
    "HEADER_BYTES",
    "MAX_BLOCK",
    "MAX_K",
    "ArithmeticDecoder",
    "ArithmeticEncoder",
    "CodecStats",
    "CodedBlock",
    "CoderModel",
    "FenwickTree",
    "KTModel",
    "StaticModel",
    "TailQuantizer",
    "build_model",
    "decode_block",
    "decode_stream",
    "empirical_entropy",
    "encode_block",
    "encode_stream",
    "entropy_estimate",
    "envelope_distortion_bound",
    "expected_distortion",
    "hamming_distortion",
    "ideal_code_length",
    "iter_blocks",
    "model_for_block",
    "quantize_block",
    "schedule_k",
    "two_stage_encode",
]
