"""The chaotic keyed hash and the post-treatment wrapper."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Union

from .bitcore import BitString, Configuration, encode_ascii7, to_hex
from .dynamics import BooleanMap, iterate, negation, unapply_F
from .pretreatment import normalize_bits
from .strategy import Strategy, key_bits, gen_strategy, strategy_from_key

__all__ = [
    "ChaosHashParams",
    "PostTreatKey",
    "InnerHash",
    "DimensionMismatchError",
    "chaos_digest",
    "chaos_hash",
    "chaos_inner_hash",
    "xor_fold_hash",
    "post_treat",
    "post_treat_strategy",
    "invert_post_treat",
]

Message = Union[str, bytes, BitString]
Key = Union[str, bytes, BitString]


class DimensionMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class ChaosHashParams:
    key: Key
    n: int = 256

    def __post_init__(self) -> None:
        if self.n < 4 or self.n % 4:
            raise ValueError(f"digest size must be a positive multiple of 4, got {self.n}")
        key_bits(self.key)


def _message_bits(message: Message) -> BitString:
    bits = message if isinstance(message, BitString) else encode_ascii7(message)
    if bits.length == 0:
        raise ValueError("message must be non-empty")
    return bits


def chaos_digest(params: ChaosHashParams, message: Message) -> Configuration:
    """Final configuration of the keyed iterations of the negation map.

    Text and bytes go through the 7-bit ASCII encoding; a :class:`BitString`
    is taken as the already encoded message.
    """
    norm = normalize_bits(_message_bits(message), params.n)
    s = strategy_from_key(norm.d, params.key, params.n)
    return iterate(negation(params.n), s, norm.x0)


def chaos_hash(params: ChaosHashParams, message: Message) -> str:
    return to_hex(chaos_digest(params, message))


@dataclass(frozen=True)
class PostTreatKey:
    """(K1, K2, N): inner-hash key, strategy seed, iteration count.

    ``iterations=None`` means 2n for whatever digest size it is used with.
    """

    k1: BitString
    k2: BitString
    iterations: Optional[int] = None

    def __post_init__(self) -> None:
        if self.k1.length < 1 or self.k2.length < 1:
            raise ValueError("K1 and K2 must be non-empty bit strings")
        if self.iterations is not None and self.iterations < 1:
            raise ValueError("the iteration count N must be at least 1")

    def steps(self, n: int) -> int:
        return 2 * n if self.iterations is None else self.iterations


@dataclass(frozen=True)
class InnerHash:
    """A keyed hash h(k, m) with a fixed n-bit output."""

    digest_bits: int
    evaluate: Callable[[BitString, BitString], BitString]
    name: str = "inner"

    def __call__(self, key: BitString, message: BitString) -> Configuration:
        out = self.evaluate(key, message)
        if out.length != self.digest_bits:
            raise DimensionMismatchError(
                f"inner hash {self.name!r} returned {out.length} bits, declared {self.digest_bits}"
            )
        return Configuration.of(out)


def chaos_inner_hash(n: int = 256) -> InnerHash:
    return InnerHash(n, lambda k, m: chaos_digest(ChaosHashParams(k, n), m), "chaos")


def xor_fold_hash(n: int = 8) -> InnerHash:
    """Deliberately weak toy hash: XOR-fold of the message, then of the key.

    Both are zero-padded on the right to a multiple of n.  Collisions are
    trivial to find, which is the point when checking what post-treatment
    does and does not change.
    """

    def fold(b: BitString) -> int:
        acc, v = 0, b.value << (-b.length % n)
        mask = (1 << n) - 1
        while v:
            acc ^= v & mask
            v >>= n
        return acc

    return InnerHash(n, lambda k, m: BitString(fold(m) ^ fold(k), n), "xor-fold")


def post_treat_strategy(key: PostTreatKey, n: int) -> Strategy:
    """S(K2): the N indices driving the post-treatment iterations."""
    return gen_strategy(key.k2, n, key.steps(n))


def post_treat(
    inner: InnerHash,
    key: PostTreatKey,
    f: BooleanMap,
    message: BitString,
    strategy: Optional[Strategy] = None,
) -> Configuration:
    """X = h(K1, m), then N asynchronous steps of f driven by S(K2).

    ``strategy`` lets callers reuse a precomputed :func:`post_treat_strategy`.
    """
    if inner.digest_bits != f.n:
        raise DimensionMismatchError(f"inner digest has {inner.digest_bits} bits, map has {f.n}")
    x = inner(key.k1, message)
    s = strategy if strategy is not None else post_treat_strategy(key, f.n)
    return iterate(f, s, x)


def invert_post_treat(
    key: PostTreatKey,
    f: BooleanMap,
    digest: BitString,
    strategy: Optional[Strategy] = None,
) -> Configuration:
    """Recover the inner digest by undoing each step, last one first.

    Raises :class:`~chaoshash.dynamics.NotInvertibleError` when a step of
    ``f`` has no unique preimage.
    """
    if digest.length != f.n:
        raise DimensionMismatchError(f"digest has {digest.length} bits, map has {f.n}")
    s = strategy if strategy is not None else post_treat_strategy(key, f.n)
    y = Configuration.of(digest)
    if f.flips:
        # each step is its own inverse and the steps commute, so replaying
        # the strategy backwards is one XOR with the same flip mask
        return Configuration(y.value ^ s.flip_mask, f.n)
    for i in reversed(s.indices):
        y = unapply_F(f, i, y)
    return y
