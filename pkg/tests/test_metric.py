import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from chaoshash.bitcore import BitString, Configuration, LengthMismatchError
from chaoshash.metric import MetricPoint, d, d_e, d_s, d_s_interval, d_s_numerators, d_s_tail
from chaoshash.strategy import Strategy

from oracles import all_prefixes, floor_law_violations, prefix_law_violations, triangle_violations


def S(*idx, n=4):
    return Strategy(tuple(idx), n)


class TestHamming:
    def test_examples(self):
        x = Configuration(0b1011, 4)
        assert d_e(x, x) == 0
        assert d_e(x, Configuration(0b0100, 4)) == 4
        assert d_e(BitString.from_str("0000"), BitString.from_str("0101")) == 2

    def test_mismatch(self):
        with pytest.raises(LengthMismatchError):
            d_e(BitString(0, 4), BitString(0, 5))

    @given(st.integers(1, 64).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, 2**n - 1), st.integers(0, 2**n - 1))))
    def test_symmetric_and_bounded(self, t):
        n, a, b = t
        x, y = Configuration(a, n), Configuration(b, n)
        assert d_e(x, y) == d_e(y, x)
        assert 0 <= d_e(x, y) <= n


class TestStrategyDistance:
    def test_single_term(self):
        a = S(1, 3, 3, 2, 4, 1)
        b = S(2, 3, 3, 2, 4, 1)
        assert d_s(a, b, 6) == Fraction(225, 1000)

    def test_identical_interval(self):
        a = S(1, 2, 3, 4, 1, 2)
        lo, hi = d_s_interval(a, a, 6)
        assert lo == 0
        assert hi == d_s_tail(4, 6) == Fraction(3, 4 * 10**6)

    def test_bound(self):
        a, b = S(1, 1, 1, 1, n=4), S(4, 4, 4, 4, n=4)
        assert d_s(a, b) < Fraction(9, 4) * Fraction(10, 9) * Fraction(3, 4)

    def test_default_K_is_common_prefix(self):
        assert d_s(S(1, 2, 3), S(1, 2)) == d_s(S(1, 2), S(1, 2))

    def test_errors(self):
        with pytest.raises(ValueError):
            d_s(S(1, 2), S(1, 2), 3)
        with pytest.raises(ValueError):
            d_s(S(1, n=4), S(1, n=5))
        with pytest.raises(ValueError):
            d_s_numerators(np.ones((1, 17)), np.ones((1, 17)), 4)

    def test_numerators_match_fractions(self):
        rng = np.random.default_rng(3)
        A = rng.integers(1, 9, size=(200, 7))
        B = rng.integers(1, 9, size=(200, 7))
        nums = d_s_numerators(A, B, 8)
        for a, b, num in zip(A, B, nums):
            assert d_s(Strategy(tuple(a.tolist()), 8), Strategy(tuple(b.tolist()), 8)) == Fraction(int(num), 8 * 10**7)

    def test_prefix_law_exhaustive(self):
        assert len(all_prefixes(4, 6)) == 4096
        assert prefix_law_violations(4, 6) == 0

    def test_prefix_law_needs_small_n(self):
        # with n >= 10 a unit difference at term k weighs 9/n * 10^-k < 10^-k
        a, b = Strategy((1, 1), 16), Strategy((1, 2), 16)
        assert d_s(a, b) < Fraction(1, 10)


class TestDistance:
    def test_self_distance(self, rng):
        x = MetricPoint(S(1, 2, 3, n=8), Configuration(rng.getrandbits(8), 8))
        assert d(x, x) == 0

    def test_floor_law(self, rng):
        assert floor_law_violations(rng, 500) == 0

    def test_triangle(self, rng):
        assert triangle_violations(rng, 500) == 0

    def test_symmetry(self, rng):
        from oracles import random_point

        for _ in range(200):
            x, y = random_point(rng, 12, 8), random_point(rng, 12, 8)
            assert d(x, y) == d(y, x)

    def test_point_K(self):
        assert MetricPoint(S(1, 2, 3), Configuration(1, 4)).K == 3
