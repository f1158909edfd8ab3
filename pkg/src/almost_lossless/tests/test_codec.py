"""Unit tests for the two-stage codec."""

import itertools
import math
import struct

import numpy as np
import pytest
from pytest_mock import MockerFixture

from almost_lossless.codec import (
    HEADER_BYTES,
    MAX_BLOCK,
    MAX_K,
    CodedBlock,
    FenwickTree,
    KTModel,
    StaticModel,
    TailQuantizer,
    build_model,
    decode_block,
    decode_stream,
    empirical_entropy,
    encode_block,
    encode_stream,
    entropy_estimate,
    envelope_distortion_bound,
    expected_distortion,
    ideal_code_length,
    iter_blocks,
    quantize_block,
    schedule_k,
    two_stage_encode,
)
from almost_lossless.distributions import Envelope, Pmf, sample
from almost_lossless.exceptions import (
    CodecError,
    ContainerFormatError,
    DomainError,
    SymbolRangeError,
)


def test_quantizer() -> None:
    """Test the tail quantizer."""
    quantizer = TailQuantizer(k=4)
    assert quantize_block(quantizer, np.asarray([1, 2, 3, 4, 5, 9])).tolist() == [
        1,
        2,
        3,
        4,
        4,
        4,
    ]
    assert quantizer.quantize(np.asarray([1, 3, 2])).tolist() == [1, 3, 2]
    assert quantizer.dequantize(np.asarray([4, 1])).tolist() == [4, 1]
    with pytest.raises(DomainError):
        quantizer.quantize(np.asarray([0, 1]))


def test_expected_distortion(
    geometric_half: Pmf, geometric_envelope: Envelope
) -> None:
    """Test the exact distortion and its bounds."""
    exact, bound = expected_distortion(geometric_half, 4)
    assert exact == pytest.approx(0.0625)
    assert bound == pytest.approx(0.125)
    assert expected_distortion(Pmf.explicit([0.5, 0.5]), 2)[0] == 0.0
    assert envelope_distortion_bound(geometric_envelope, 4) == pytest.approx(0.25)


@pytest.mark.parametrize(
    "n, tau, k",
    [(1024, 0.5, 32), (10, 0.5, 4), (2**14, 0.5, 128), (1, 0.5, 2), (4096, 0.4, 28)],
)
def test_schedule_k(n: int, tau: float, k: int) -> None:
    """Test the truncation schedule."""
    assert schedule_k(n, tau) == k


def test_schedule_k_errors() -> None:
    """Test that invalid exponents are rejected."""
    with pytest.raises(DomainError):
        schedule_k(100, 1.0)
    with pytest.raises(DomainError):
        schedule_k(0, 0.5)


def test_distortion_law(geometric_half: Pmf) -> None:
    """Test the empirical distortion of the tail quantizer."""
    x = sample(geometric_half, 7, 100_000)
    _, reconstruction, stats = two_stage_encode(x, 8, "kt", geometric_half)
    p = 2.0**-8
    assert abs(stats.emp_distortion - p) <= 3 * math.sqrt(p * (1 - p) / 100_000)
    assert stats.emp_distortion <= geometric_half.survival(7)
    assert np.array_equal(reconstruction, np.minimum(x, 8))


def test_fenwick_tree() -> None:
    """Test prefix sums and the inverse lookup."""
    tree = FenwickTree(5, 1)
    tree.add(2, 4)
    assert [tree.prefix(i) for i in range(6)] == [0, 1, 2, 7, 8, 9]
    assert [tree.find(v) for v in range(9)] == [0, 1, 2, 2, 2, 2, 2, 3, 4]
    other = tree.copy()
    other.add(0, 1)
    assert tree.prefix(1) == 1


def test_ideal_code_length() -> None:
    """Test the ideal code lengths of both models."""
    uniform = StaticModel.uniform(2)
    y = np.asarray([1, 2, 2, 1, 1, 2, 1])
    assert ideal_code_length(uniform, y) == pytest.approx(7.0)
    kt = KTModel(2)
    assert ideal_code_length(kt, np.asarray([1, 1, 1, 1])) == pytest.approx(
        math.log2(384 / 105), abs=1e-12
    )
    assert kt.counts.tolist() == [0, 0]


def test_encode_block_lengths() -> None:
    """Test the emitted length against the ideal length."""
    block = encode_block(StaticModel.uniform(4), np.asarray([1, 2, 3, 4]))
    assert 8 <= block.payload_bits <= 10
    assert decode_block(block).tolist() == [1, 2, 3, 4]

    y = np.asarray([1, 1, 1, 1])
    ideal = math.log2(384 / 105)
    block = encode_block(KTModel(2), y)
    assert ideal < block.payload_bits <= ideal + 2 + 1e-6
    assert decode_block(block).tolist() == [1, 1, 1, 1]

    alternating = np.tile([1, 2], 512)
    block = encode_block(StaticModel.uniform(2), alternating)
    assert 1024 <= block.payload_bits <= 1026


def test_encode_empty_block() -> None:
    """Test that an empty block holds only the header."""
    block = encode_block(KTModel(3), np.zeros(0, dtype=np.int64))
    assert block.payload_bits == 0
    assert block.to_bytes() == block.to_bytes()[:HEADER_BYTES]
    assert len(block.to_bytes()) == HEADER_BYTES
    assert len(decode_block(block)) == 0
    assert len(decode_stream(encode_stream(KTModel(3), np.zeros(0)))) == 0


def test_roundtrip() -> None:
    """Test bit exact decoding and the coding overhead of 1008 random blocks."""
    rng = np.random.default_rng(2024)
    pmf = Pmf.geometric(0.3)
    for k, n, coder, trial in itertools.product(
        (2, 4, 16, 256), (1, 10, 1000), ("static", "kt"), range(42)
    ):
        y = rng.integers(1, k + 1, size=n)
        model = build_model(coder, k, pmf if trial % 2 else None)
        block = encode_block(model, y)
        overhead = block.payload_bits - ideal_code_length(model, y)
        assert -1e-6 <= overhead <= 2 + 1e-6
        restored, _ = CodedBlock.from_bytes(block.to_bytes())
        assert restored == block
        assert np.array_equal(decode_block(restored, model), y)


def test_models_are_not_changed() -> None:
    """Test that encoding leaves the caller's model untouched."""
    model = KTModel(3)
    encode_block(model, np.asarray([1, 2, 3, 3]))
    assert model.counts.tolist() == [0, 0, 0]
    assert model.total == 3


def test_kt_redundancy_envelope() -> None:
    """Test the pointwise KT redundancy on every short sequence."""
    for k, n in ((2, 12), (3, 7)):
        budget = (k - 1) / 2 * math.log2(n) + math.log2(k)
        for sequence in itertools.product(range(1, k + 1), repeat=n):
            y = np.asarray(sequence)
            ideal = KTModel(k).ideal_code_length(y)
            assert ideal <= n * empirical_entropy(y, k) + budget + 1e-9


def test_static_model_from_pmf(geometric_half: Pmf) -> None:
    """Test the static model of the quantized source."""
    model = StaticModel.from_pmf(geometric_half, 3)
    assert model.frequencies == [2**31, 2**30, 2**30]
    assert ideal_code_length(model, np.asarray([1, 2, 3])) == pytest.approx(5.0)
    assert StaticModel.from_pmf(Pmf.point_mass(1), 2).frequencies == [2**32, 1]


def test_symbol_range() -> None:
    """Test that out of range indices are rejected."""
    with pytest.raises(SymbolRangeError):
        encode_block(KTModel(2), np.asarray([1, 3]))
    with pytest.raises(SymbolRangeError):
        encode_block(KTModel(2), np.asarray([0, 1]))
    with pytest.raises(DomainError):
        build_model("huffman", 4)


def test_container_errors() -> None:
    """Test that damaged containers are rejected."""
    data = encode_block(KTModel(4), np.asarray([1, 2, 3, 4, 4, 4])).to_bytes()
    with pytest.raises(ContainerFormatError):
        CodedBlock.from_bytes(b"XXXX" + data[4:])
    with pytest.raises(ContainerFormatError):
        CodedBlock.from_bytes(data[:10])
    with pytest.raises(ContainerFormatError):
        CodedBlock.from_bytes(data[:-1])
    with pytest.raises(ContainerFormatError):
        CodedBlock.from_bytes(data[:4] + b"\x07" + data[5:])
    with pytest.raises(ContainerFormatError):
        CodedBlock.from_bytes(data[:13] + b"\x05" + data[14:])
    block, _ = CodedBlock.from_bytes(data)
    with pytest.raises(ContainerFormatError):
        decode_block(block, StaticModel.uniform(4))
    with pytest.raises(ContainerFormatError):
        decode_block(block, KTModel(5))


def test_container_limits(mocker: MockerFixture) -> None:
    """Test that headers announcing oversized blocks are rejected early."""
    block = encode_block(KTModel(4), np.asarray([1, 2, 3, 4, 4, 4]))
    data = bytearray(block.to_bytes())
    for offset, value in (
        (5, 2**32 - 1),
        (5, MAX_BLOCK + 1),
        (9, 2**31),
        (9, MAX_K + 1),
        (9, 0),
    ):
        damaged = bytearray(data)
        struct.pack_into("<I", damaged, offset, value)
        with pytest.raises(ContainerFormatError):
            CodedBlock.from_bytes(damaged)
        with pytest.raises(ContainerFormatError):
            decode_stream(bytes(damaged))
    largest = bytearray(data)
    struct.pack_into("<I", largest, 9, MAX_K)
    block, _ = CodedBlock.from_bytes(largest)
    assert block.k == MAX_K
    mocker.patch("almost_lossless.codec.container.MAX_TOTAL", 10)
    with pytest.raises(ContainerFormatError):
        CodedBlock.from_bytes(data)
    with pytest.raises(CodecError):
        encode_block(KTModel(MAX_K + 1), np.asarray([1]))


def test_stream(mocker: MockerFixture) -> None:
    """Test that long inputs are split into independent blocks."""
    mocker.patch("almost_lossless.codec.two_stage.MAX_BLOCK", 8)
    y = np.asarray([1, 2, 3] * 7)
    data = encode_stream(KTModel(3), y)
    blocks = list(iter_blocks(data))
    assert [block.n for block in blocks] == [8, 8, 5]
    assert np.array_equal(decode_stream(data), y)
    with pytest.raises(CodecError):
        encode_block(KTModel(3), y)


def test_static_stream(geometric_half: Pmf) -> None:
    """Test that static streams need the source to decode."""
    y = np.asarray([1, 1, 2, 1, 3, 1, 2])
    data = encode_stream(StaticModel.from_pmf(geometric_half, 3), y)
    assert np.array_equal(decode_stream(data, geometric_half), y)


def test_two_stage_encode(geometric_half: Pmf) -> None:
    """Test the statistics of the two-stage code."""
    x = np.asarray([1, 2, 3, 1, 1, 2])
    block, reconstruction, stats = two_stage_encode(x, 4, "static", geometric_half)
    assert np.array_equal(reconstruction, x)
    assert stats.emp_distortion == 0.0
    assert stats.n == 6
    assert stats.emp_rate == block.payload_bits / 6
    assert stats.emp_rate_with_header == pytest.approx(
        (block.payload_bits + 8 * HEADER_BYTES) / 6
    )
    assert stats.redundancy_vs_h == pytest.approx(stats.emp_rate - 2.0)
    _, _, universal = two_stage_encode(x, 2, "kt")
    assert universal.emp_distortion == pytest.approx(1 / 6)
    assert universal.redundancy_vs_h is None
    assert universal.redundancy_vs_restricted is None


def test_entropy_estimate(geometric_half: Pmf, point_mass: Pmf) -> None:
    """Test the code length based entropy estimate."""
    constant = sample(point_mass, 0, 4096)
    estimates = entropy_estimate(constant, 0.4, [1024, 4096])
    assert [(n, k) for n, k, _ in estimates] == [(1024, 16), (4096, 28)]
    assert estimates[-1][2] < 0.05
    stream = sample(geometric_half, 5, 2**14)
    n, _, estimate = entropy_estimate(stream, 0.4, [2**14])[0]
    assert n == 2**14
    assert abs(estimate - 2.0) <= 0.15
    long_stream = sample(geometric_half, 11, 2**16)
    sizes = [2**10, 2**12, 2**14, 2**16]
    errors = [
        abs(value - 2.0) for _, _, value in entropy_estimate(long_stream, 0.4, sizes)
    ]
    assert sum(b > a for a, b in zip(errors, errors[1:])) <= 1
    assert errors[-1] < errors[0]
    assert errors[-1] <= 0.05
    with pytest.raises(CodecError):
        entropy_estimate(constant, 0.4, [4096, 1024])
    with pytest.raises(CodecError):
        entropy_estimate(constant, 0.4, [8192])
