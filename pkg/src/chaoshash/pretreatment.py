"""Message normalization: text -> (D, x0).

The pipeline is encode -> pad_and_mark -> mirror -> expand -> fold.  For
"The original text" and n = 256 it reproduces the worked example bit for
bit, see ``tests/test_pretreatment.py``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .bitcore import BitString, Configuration, encode_ascii7, reverse

__all__ = [
    "NormalizedMessage",
    "pad_and_mark",
    "mirror",
    "expand_to_512",
    "fold_xor",
    "block_size",
    "normalize",
    "normalize_bits",
]

BLOCK = 512


@dataclass(frozen=True)
class NormalizedMessage:
    d: BitString
    x0: Configuration


def pad_and_mark(msg_bits: BitString) -> BitString:
    """Append '1', then the binary length, then '1' again if the result is even.

    The length block encodes the length *after* the first '1' (120 for a
    119-bit message) in minimal width, MSB first.
    """
    if msg_bits.length < 1:
        raise ValueError("cannot pad an empty message")
    r = msg_bits + BitString(1, 1)
    r = r + BitString.from_str(format(r.length, "b"))
    if r.length % 2 == 0:
        r = r + BitString(1, 1)
    return r


def mirror(b: BitString) -> BitString:
    return b + reverse(b)


def expand_to_512(b: BitString, block: int = BLOCK) -> BitString:
    """Repeat ``b`` and cut it at the smallest multiple of ``block`` >= len(b)."""
    if b.length < 1:
        raise ValueError("cannot expand an empty bit string")
    target = block * math.ceil(b.length / block)
    return b if target == b.length else b.repeat_to(target)


def fold_xor(d: BitString, n: int) -> Configuration:
    """XOR all consecutive n-bit blocks of ``d`` together."""
    if n < 1 or d.length % n:
        raise ValueError(f"length {d.length} is not a multiple of n={n}")
    if n % 8 == 0:
        blocks = np.frombuffer(d.to_bytes(), dtype=np.uint8).reshape(-1, n // 8)
        return Configuration(int.from_bytes(np.bitwise_xor.reduce(blocks, axis=0).tobytes(), "big"), n)
    folded = np.bitwise_xor.reduce(d.to_array().reshape(-1, n), axis=0)
    return Configuration.of(BitString.from_array(folded))


def block_size(n: int) -> int:
    """Length unit of D: 512 for n = 256, in general lcm(512, 2n)."""
    return math.lcm(BLOCK, 2 * n)


def normalize_bits(msg_bits: BitString, n: int = 256) -> NormalizedMessage:
    """Normalize a message already given as bits (skips the ASCII step)."""
    if n < 4 or n % 4:
        raise ValueError(f"digest size must be a positive multiple of 4, got {n}")
    d = expand_to_512(mirror(pad_and_mark(msg_bits)), block_size(n))
    return NormalizedMessage(d, fold_xor(d, n))


def normalize(message: Union[str, bytes], n: int = 256) -> NormalizedMessage:
    if not message:
        raise ValueError("message must be non-empty")
    return normalize_bits(encode_ascii7(message), n)
