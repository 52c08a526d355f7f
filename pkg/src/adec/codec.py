"""Bit-exact storage of decimated sigma-delta samples.

The decimated vector ``rho^r A_r q`` is formed from the integer level
indices, so every entry is ``n * delta / 2`` with an exact integer ``n``.
Each numerator is written as a ``b``-bit two's-complement field.

File layout (all multi-byte header fields little-endian)::

    b"ADEC" | version u8 = 1 | m u32 | rho u32 | L u32 | r u8 | b u8 | delta f64
    payload: eta * (re, im) numerators, b bits each, MSB first, zero-padded
"""
from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np

from .errors import Malformed, Overflow, RangeViolation
from .operators import DecimationPlan, adapted_scaled, int_matmul
from .quantizer import QuantizationOutput

MAGIC = b"ADEC"
VERSION = 1
_HEADER = struct.Struct("<4sBIIIBBd")


def n_max(L: int, m: int, r: int) -> int:
    """Largest admissible numerator magnitude, ``2L (2m)^r + 2^r m``."""
    return 2 * L * (2 * m) ** r + 2**r * m


def field_width(L: int, m: int, r: int) -> int:
    """Bits per numerator: ``ceil(log2(2 N_max + 1))``."""
    # 2 N_max + 1 is odd and > 1, so its bit length is the ceiling of its log2
    return (2 * n_max(L, m, r) + 1).bit_length()


def bit_budget(plan: DecimationPlan, L: int, m: int | None = None) -> float:
    """``2 eta r log2(2m) + 2 eta log2(2L)`` bits."""
    m = plan.m if m is None else m
    eta = plan.eta
    return 2 * eta * plan.r * math.log2(2 * m) + 2 * eta * math.log2(2 * L)


@dataclass(frozen=True)
class EncodedBlock:
    m: int
    rho: int
    r: int
    L: int
    delta: float
    width: int
    payload: bytes

    @property
    def eta(self) -> int:
        return self.m // self.rho

    @property
    def payload_bits(self) -> int:
        return 2 * self.eta * self.width

    def to_bytes(self) -> bytes:
        head = _HEADER.pack(MAGIC, VERSION, self.m, self.rho, self.L, self.r, self.width, self.delta)
        return head + self.payload

    @classmethod
    def from_bytes(cls, data: bytes) -> "EncodedBlock":
        if len(data) < _HEADER.size:
            raise Malformed(f"stream of {len(data)} bytes is shorter than the header")
        magic, version, m, rho, L, r, width, delta = _HEADER.unpack_from(data)
        if magic != MAGIC:
            raise Malformed(f"bad magic {magic!r}")
        if version != VERSION:
            raise Malformed(f"unsupported version {version}")
        if rho == 0 or m % rho:
            raise Malformed(f"block size {rho} does not divide m={m}")
        block = cls(m=m, rho=rho, r=r, L=L, delta=delta, width=width, payload=bytes(data[_HEADER.size :]))
        if len(block.payload) != (block.payload_bits + 7) // 8:
            raise Malformed(f"payload has {len(block.payload)} bytes, expected {(block.payload_bits + 7) // 8}")
        return block


def decimated_numerators(levels: np.ndarray, plan: DecimationPlan) -> list[int]:
    """Exact integers ``rho^r A_r (2 levels + 1)`` for one channel."""
    odd = (2 * np.asarray(levels, dtype=np.int64) + 1)[:, None]
    out = int_matmul(adapted_scaled(plan), odd)
    return [int(v) for v in out[:, 0]]


def _pack(values: list[int], width: int) -> bytes:
    acc = 0
    mask = (1 << width) - 1
    for v in values:
        acc = (acc << width) | (v & mask)
    nbits = width * len(values)
    pad = (-nbits) % 8
    return (acc << pad).to_bytes((nbits + pad) // 8, "big")


def _unpack(payload: bytes, width: int, count: int) -> list[int]:
    nbits = width * count
    acc = int.from_bytes(payload, "big") >> ((-nbits) % 8)
    mask = (1 << width) - 1
    sign = 1 << (width - 1)
    out = []
    for i in range(count):
        v = (acc >> ((count - 1 - i) * width)) & mask
        out.append(v - (1 << width) if v & sign else v)
    return out


def encode(quantization: QuantizationOutput, plan: DecimationPlan) -> EncodedBlock:
    """Encode ``rho^r A_r q``; a real run stores zero imaginary numerators."""
    if quantization.m != plan.m:
        raise ValueError(f"quantized length {quantization.m} != plan length {plan.m}")
    L = quantization.alphabet.L
    re = decimated_numerators(quantization.levels_re, plan)
    if quantization.levels_im is None:
        im = [0] * plan.eta
    else:
        im = decimated_numerators(quantization.levels_im, plan)
    limit = n_max(L, plan.m, plan.r)
    if any(abs(v) > limit for v in re + im):
        raise Overflow(f"numerator exceeds N_max={limit}")
    width = field_width(L, plan.m, plan.r)
    values = [v for pair in zip(re, im) for v in pair]
    return EncodedBlock(
        m=plan.m, rho=plan.rho, r=plan.r, L=L, delta=float(quantization.alphabet.delta),
        width=width, payload=_pack(values, width),
    )


def decode(block: EncodedBlock) -> tuple[np.ndarray, list[tuple[int, int]]]:
    """Return the decimated complex samples and their exact ``(re, im)`` numerators."""
    eta = block.eta
    if len(block.payload) != (block.payload_bits + 7) // 8:
        raise Malformed("payload length does not match the header")
    if eta == 0:
        return np.zeros(0, dtype=np.complex128), []
    values = _unpack(block.payload, block.width, 2 * eta)
    limit = n_max(block.L, block.m, block.r)
    if any(abs(v) > limit for v in values):
        raise RangeViolation(f"decoded numerator exceeds N_max={limit}")
    pairs = list(zip(values[0::2], values[1::2]))
    half = block.delta / 2
    samples = np.array([complex(a * half, b * half) for a, b in pairs], dtype=np.complex128)
    return samples, pairs


def write(path, block: EncodedBlock) -> None:
    with open(path, "wb") as fh:
        fh.write(block.to_bytes())


def read(path) -> EncodedBlock:
    with open(path, "rb") as fh:
        return EncodedBlock.from_bytes(fh.read())
