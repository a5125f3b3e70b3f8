"""Distance on strategy x configuration space, over finite strategy prefixes.

The strategy part is the discounted series

    d_s(S, T) = 9/n * sum_k |S^k - T^k| / 10^k

truncated to the first K terms.  Everything is exact: the partial sum is a
:class:`~fractions.Fraction` and the neglected tail is bounded by
(n - 1) / (n * 10^K).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np

from .bitcore import BitString, LengthMismatchError
from .strategy import Strategy

__all__ = ["MetricPoint", "d_e", "d_s", "d_s_tail", "d_s_interval", "d_s_numerators", "d"]


@dataclass(frozen=True)
class MetricPoint:
    strategy_prefix: Strategy
    config: BitString

    @property
    def K(self) -> int:
        return len(self.strategy_prefix)


def d_e(a: BitString, b: BitString) -> int:
    """Hamming distance."""
    if a.length != b.length:
        raise LengthMismatchError(a.length, b.length)
    return (a.value ^ b.value).bit_count()


def _prefix(a: Strategy, b: Strategy, K: Optional[int]) -> int:
    if a.n != b.n:
        raise ValueError(f"strategies over different ranges: 1..{a.n} vs 1..{b.n}")
    if K is None:
        K = min(len(a), len(b))
    if len(a) < K or len(b) < K:
        raise ValueError(f"need {K} terms, have {len(a)} and {len(b)}")
    return K


def d_s(a: Strategy, b: Strategy, K: Optional[int] = None) -> Fraction:
    """Partial sum of the strategy distance over the first K terms."""
    K = _prefix(a, b, K)
    num = 0
    for k in range(K):
        num = 10 * num + abs(a[k] - b[k])
    return Fraction(9 * num, a.n * 10**K)


def d_s_tail(n: int, K: int) -> Fraction:
    """Upper bound on the terms beyond K."""
    return Fraction(n - 1, n * 10**K)


def d_s_interval(a: Strategy, b: Strategy, K: Optional[int] = None) -> Tuple[Fraction, Fraction]:
    """Interval containing d_s of any infinite extensions of the prefixes."""
    K = _prefix(a, b, K)
    lo = d_s(a, b, K)
    return lo, lo + d_s_tail(a.n, K)


def d_s_numerators(A: np.ndarray, B: np.ndarray, n: int) -> np.ndarray:
    """Row-wise d_s of two (m, K) index arrays, scaled by n * 10^K.

    Exact in int64 for K <= 16; divide by ``n * 10**K`` for the value.
    """
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    K = A.shape[-1]
    if K > 16:
        raise ValueError("int64 numerators are exact only up to K = 16")
    weights = 10 ** np.arange(K - 1, -1, -1, dtype=np.int64)
    return 9 * (np.abs(A - B) @ weights)


def d(x: MetricPoint, y: MetricPoint, K: Optional[int] = None) -> Fraction:
    return d_e(x.config, y.config) + d_s(x.strategy_prefix, y.strategy_prefix, K)
