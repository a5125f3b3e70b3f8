"""Seed derivation and strategy generation.

The index generator is a combination of three xorshift-family generators
run in lockstep.  Each 32-bit output is

    out = ((xorshift32() ^ xor128()) + xorwow()) mod 2**32

with the transitions

    xorshift32:  a ^= a << 13;  a ^= a >> 17;  a ^= a << 5;          -> a
    xor128:      t = x ^ (x << 11);  (x, y, z) = (y, z, w);
                 w = w ^ (w >> 19) ^ t ^ (t >> 8);                      -> w
    xorwow:      t = v0 ^ (v0 >> 2);  (v0, v1, v2, v3) = (v1, v2, v3, v4);
                 v4 = v4 ^ (v4 << 4) ^ t ^ (t << 1);  d += 362437;      -> v4 + d

all arithmetic on 32-bit words.  That is 12 XOR, 9 shifts and 3 additions
per output word.  The 256-bit state produced by :func:`condense_seed` is
read as eight big-endian words w0..w7 and loaded as

    a = w0;  (x, y, z, w) = (w1, w2, w3, w4);
    (v0, v1, v2, v3, v4) = (w5, w6, w7, w2 ^ w6, w3 ^ w7);  d = w0 ^ w4

after which ``WARMUP`` outputs are discarded.  This definition is normative
for the package; ``_kernels`` implements the same generator and the tests
check both agree word for word.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Tuple, Union

import numpy as np

from .bitcore import BitString, encode_ascii7

__all__ = [
    "Strategy",
    "CombinedXorshift",
    "derive_seed",
    "condense_seed",
    "next_index",
    "gen_strategy",
    "strategy_from_key",
    "key_bits",
    "STATE_BITS",
    "WARMUP",
]

M32 = 0xFFFFFFFF
STATE_BITS = 256
WARMUP = 16
WEYL_STEP = 362437
# substituted for any all-zero state word (first words of the SHA-256 IV)
ZERO_FIX = (
    0x6A09E667, 0xBB67AE85, 0x3C6EF372, 0xA54FF53A,
    0x510E527F, 0x9B05688C, 0x1F83D9AB, 0x5BE0CD19,
)


@dataclass(frozen=True)
class Strategy:
    """Finite sequence of 1-based component indices."""

    indices: Tuple[int, ...]
    n: int

    def __post_init__(self) -> None:
        bad = [s for s in self.indices if not 1 <= s <= self.n]
        if bad:
            raise ValueError(f"strategy index {bad[0]} outside 1..{self.n}")

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __getitem__(self, i):
        return self.indices[i]

    @cached_property
    def flip_mask(self) -> int:
        """Packed n-bit mask with bit i set iff index i occurs an odd number of times."""
        mask = 0
        for i in self.indices:
            mask ^= 1 << (self.n - i)
        return mask

    def reversed(self) -> "Strategy":
        return Strategy(self.indices[::-1], self.n)

    def to_csv(self) -> str:
        return ",".join(map(str, self.indices))


def key_bits(key: Union[str, bytes, BitString]) -> BitString:
    bits = key if isinstance(key, BitString) else encode_ascii7(key)
    if bits.length == 0:
        raise ValueError("key must be non-empty")
    return bits


def derive_seed(d: BitString, key: Union[str, bytes, BitString]) -> BitString:
    """XOR ``d`` with the key's 7-bit encoding repeated to ``len(d)``.

    A :class:`BitString` key is used as-is, without ASCII encoding.
    """
    return d ^ key_bits(key).repeat_to(d.length)


def condense_seed(seed: BitString, state_bits: int = STATE_BITS) -> Tuple[int, ...]:
    """Fold ``seed`` into ``state_bits // 32`` words.

    The seed is cut into ``state_bits`` chunks (the last one zero-padded on
    the right) which are XORed together.  Zero words are replaced by the
    matching ``ZERO_FIX`` constant so that no subgenerator starts stuck.
    """
    if state_bits not in (128, 192, 256):
        raise ValueError(f"state_bits must be 128, 192 or 256, got {state_bits}")
    pad = -seed.length % state_bits
    padded = BitString(seed.value << pad, seed.length + pad)
    if padded.length == 0:
        padded = BitString(0, state_bits)
    chunks = np.frombuffer(padded.to_bytes(), dtype=">u4").reshape(-1, state_bits // 32)
    words = [int(w) for w in np.bitwise_xor.reduce(chunks, axis=0)]
    return tuple(w if w else ZERO_FIX[k] for k, w in enumerate(words))


class CombinedXorshift:
    """Single-owner mutable generator; see the module docstring."""

    def __init__(self, words: Sequence[int], warmup: int = WARMUP):
        if len(words) != 8:
            raise ValueError("the combined generator needs eight 32-bit state words")
        w = [int(x) & M32 for x in words]
        self.a = w[0]
        self.x, self.y, self.z, self.w = w[1], w[2], w[3], w[4]
        self.v = [w[5], w[6], w[7], w[2] ^ w[6], w[3] ^ w[7]]
        self.d = w[0] ^ w[4]
        for _ in range(warmup):
            self.next_u32()

    @classmethod
    def from_seed(cls, seed: BitString) -> "CombinedXorshift":
        return cls(condense_seed(seed, STATE_BITS))

    def next_u32(self) -> int:
        a = self.a
        a ^= (a << 13) & M32
        a ^= a >> 17
        a ^= (a << 5) & M32
        self.a = a

        t = self.x ^ ((self.x << 11) & M32)
        self.x, self.y, self.z = self.y, self.z, self.w
        self.w = self.w ^ (self.w >> 19) ^ t ^ (t >> 8)

        v = self.v
        t = v[0] ^ (v[0] >> 2)
        v4 = v[4] ^ ((v[4] << 4) & M32) ^ t ^ ((t << 1) & M32)
        self.v = [v[1], v[2], v[3], v[4], v4]
        self.d = (self.d + WEYL_STEP) & M32

        return (((a ^ self.w) + ((v4 + self.d) & M32))) & M32


def next_index(gen: CombinedXorshift, n: int) -> int:
    """Uniform index in 1..n by rejection sampling on 32-bit words."""
    if n < 1:
        raise ValueError("n must be positive")
    limit = ((1 << 32) // n) * n
    while True:
        word = gen.next_u32()
        if word < limit:
            return word % n + 1


def gen_strategy(seed: BitString, n: int, length: int) -> Strategy:
    if length < 1:
        raise ValueError("strategy length must be at least 1")
    gen = CombinedXorshift.from_seed(seed)
    return Strategy(tuple(next_index(gen, n) for _ in range(length)), n)


def strategy_from_key(d: BitString, key: Union[str, bytes, BitString], n: int) -> Strategy:
    """The hash pipeline's strategy: 2n indices seeded by ``D`` and ``key``."""
    return gen_strategy(derive_seed(d, key), n, 2 * n)
