"""Bit strings and configurations.

Bits are numbered 1..len from left to right; bit 1 is the most significant
bit of the packed integer.  Every operation here is defined position-wise on
that ordering, so the packed representation never leaks into the contract.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

import numpy as np

__all__ = [
    "BitString",
    "Configuration",
    "EncodingError",
    "LengthMismatchError",
    "encode_ascii7",
    "reverse",
    "xor",
    "to_hex",
    "from_hex",
]


class EncodingError(ValueError):
    """A character or byte falls outside the 7-bit ASCII range."""

    def __init__(self, position: int, value: int):
        self.position = position
        self.value = value
        super().__init__(
            f"character at position {position} has code {value}, outside 7-bit ASCII"
        )


class LengthMismatchError(ValueError):
    def __init__(self, left: int, right: int):
        self.left = left
        self.right = right
        super().__init__(f"bit strings differ in length: {left} != {right}")


@dataclass(frozen=True, eq=False)
class BitString:
    """Immutable ordered sequence of bits packed into a Python integer.

    Equality is by bits only, so a Configuration equals the BitString
    holding the same bits.
    """

    value: int
    length: int

    def __eq__(self, other):
        if not isinstance(other, BitString):
            return NotImplemented
        return self.value == other.value and self.length == other.length

    def __hash__(self):
        return hash((self.value, self.length))

    def __post_init__(self) -> None:
        if self.length < 0:
            raise ValueError("length must be non-negative")
        if self.value < 0 or self.value >> self.length:
            raise ValueError(f"value does not fit in {self.length} bits")

    # -- construction -----------------------------------------------------
    @classmethod
    def from_str(cls, bits: str) -> "BitString":
        """Parse a string of '0'/'1'; whitespace is ignored."""
        bits = "".join(bits.split())
        if bits.strip("01"):
            raise ValueError(f"not a bit string: {bits!r}")
        return cls(int(bits, 2) if bits else 0, len(bits))

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitString":
        return cls.from_str("".join("1" if b else "0" for b in bits))

    @classmethod
    def from_bytes(cls, data: bytes) -> "BitString":
        """Eight bits per byte, most significant bit first."""
        return cls(int.from_bytes(data, "big"), 8 * len(data))

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "BitString":
        """Build from a 1-D array of 0/1 values."""
        arr = np.asarray(arr, dtype=np.uint8)
        n = arr.size
        if n == 0:
            return cls(0, 0)
        packed = np.packbits(arr)
        return cls(int.from_bytes(packed.tobytes(), "big") >> (8 * packed.size - n), n)

    @classmethod
    def zeros(cls, length: int) -> "BitString":
        return cls(0, length)

    @classmethod
    def random(cls, length: int, rng: random.Random) -> "BitString":
        return cls(rng.getrandbits(length) if length else 0, length)

    # -- views ------------------------------------------------------------
    def __len__(self) -> int:
        return self.length

    def bit(self, i: int) -> int:
        """Bit at 1-based position ``i``."""
        if not 1 <= i <= self.length:
            raise IndexError(f"bit position {i} outside 1..{self.length}")
        return (self.value >> (self.length - i)) & 1

    def __getitem__(self, idx: Union[int, slice]) -> Union[int, "BitString"]:
        # 0-based, Python-style; bit(i) is the 1-based accessor
        if isinstance(idx, slice):
            start, stop, step = idx.indices(self.length)
            if step == 1:
                width = max(0, stop - start)
                return BitString((self.value >> (self.length - start - width)) & ((1 << width) - 1), width)
            return BitString.from_str(str(self)[idx])
        if idx < 0:
            idx += self.length
        return self.bit(idx + 1)

    def __iter__(self) -> Iterator[int]:
        return (int(c) for c in str(self))

    def __str__(self) -> str:
        return format(self.value, f"0{self.length}b") if self.length else ""

    def to_array(self) -> np.ndarray:
        """Return the bits as a uint8 array of 0/1 values."""
        if self.length == 0:
            return np.zeros(0, dtype=np.uint8)
        pad = -self.length % 8
        raw = (self.value << pad).to_bytes((self.length + pad) // 8, "big")
        return np.unpackbits(np.frombuffer(raw, dtype=np.uint8))[: self.length]

    def to_bytes(self) -> bytes:
        """Pack into bytes; the length must be a multiple of 8."""
        if self.length % 8:
            raise ValueError("length is not a multiple of 8")
        return self.value.to_bytes(self.length // 8, "big")

    def popcount(self) -> int:
        return self.value.bit_count()

    # -- algebra ----------------------------------------------------------
    def __add__(self, other: "BitString") -> "BitString":
        """Concatenation."""
        return BitString((self.value << other.length) | other.value, self.length + other.length)

    def __xor__(self, other: "BitString") -> "BitString":
        return xor(self, other)

    def reverse(self) -> "BitString":
        return reverse(self)

    def repeat_to(self, length: int) -> "BitString":
        """Cyclically repeat the bits and truncate to ``length``."""
        if self.length == 0:
            raise ValueError("cannot repeat an empty bit string")
        return BitString.from_array(np.resize(self.to_array(), length))

    def flip(self, i: int) -> "BitString":
        """Copy with the 1-based bit ``i`` inverted."""
        if not 1 <= i <= self.length:
            raise IndexError(f"bit position {i} outside 1..{self.length}")
        return type(self)(self.value ^ (1 << (self.length - i)), self.length)


@dataclass(frozen=True, eq=False)
class Configuration(BitString):
    """System state x = (x_1, ..., x_n) with n >= 1."""

    def __post_init__(self) -> None:
        super().__post_init__()
        if self.length < 1:
            raise ValueError("a configuration needs at least one bit")

    @property
    def n(self) -> int:
        return self.length

    @classmethod
    def of(cls, bits: BitString) -> "Configuration":
        return cls(bits.value, bits.length)


# 7-bit codes of every byte value, MSB first, as rows of a lookup table
_ASCII7_TABLE = np.unpackbits(np.arange(128, dtype=np.uint8)[:, None], axis=1)[:, 1:]


def encode_ascii7(text: Union[str, bytes]) -> BitString:
    """Replace each character by its 7-bit ASCII code, MSB first.

    ``bytes`` input is accepted as a sequence of code points.  Anything above
    127 raises :class:`EncodingError` rather than being masked.
    """
    if isinstance(text, str):
        try:
            data = text.encode("ascii")
        except UnicodeEncodeError as exc:
            raise EncodingError(exc.start, ord(text[exc.start])) from None
    else:
        data = bytes(text)
    if not data:
        return BitString(0, 0)
    codes = np.frombuffer(data, dtype=np.uint8)
    bad = np.flatnonzero(codes > 127)
    if bad.size:
        raise EncodingError(int(bad[0]), int(codes[bad[0]]))
    return BitString.from_array(_ASCII7_TABLE[codes].ravel())


def reverse(b: BitString) -> BitString:
    if b.length == 0:
        return b
    return type(b).from_array(b.to_array()[::-1])


def xor(a: BitString, b: BitString) -> BitString:
    if a.length != b.length:
        raise LengthMismatchError(a.length, b.length)
    return type(a)(a.value ^ b.value, a.length)


def to_hex(c: BitString) -> str:
    """Uppercase hex, one digit per 4-bit group read left to right."""
    if c.length % 4:
        raise ValueError(f"bit length {c.length} is not a multiple of 4")
    return format(c.value, f"0{c.length // 4}X") if c.length else ""


def from_hex(text: str) -> Configuration:
    """Inverse of :func:`to_hex`; accepts either letter case."""
    text = text.strip()
    if not text:
        raise ValueError("empty hex string")
    return Configuration(int(text, 16), 4 * len(text))
