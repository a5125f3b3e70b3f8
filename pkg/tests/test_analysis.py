import io
import math

import numpy as np
import pytest

from chaoshash.analysis import (
    BenchRow,
    DiffusionReport,
    SacReport,
    dependence_matrix,
    diffusion_stats,
    diffusion_test,
    diffusion_trials,
    digest_size_benchmark,
    reference_diffusion,
    repartition_export,
    sac_summary,
    sac_test,
    scaling_benchmark,
    write_csv,
)
from chaoshash.bitcore import EncodingError
from chaoshash.hashing import ChaosHashParams, chaos_hash

P = ChaosHashParams("my key")


class TestDiffusionStats:
    def test_single_trial(self):
        r = diffusion_stats([128], 256)
        assert (r.b_mean, r.p_mean, r.delta_b, r.delta_p) == (128, 50.0, 0, 0)
        assert r.b_min == r.b_max == 128

    def test_three_values(self):
        r = diffusion_stats([126, 128, 130], 256)
        assert r.b_mean == 128
        assert r.delta_b == pytest.approx(math.sqrt(8 / 3), abs=1e-12)
        assert r.delta_p == pytest.approx(100 * math.sqrt(8 / 3) / 256, abs=1e-12)
        assert r.histogram == {126: 1, 128: 1, 130: 1}

    def test_order_independent(self):
        b = np.random.default_rng(0).integers(100, 156, 5000)
        assert diffusion_stats(b, 256) == diffusion_stats(b[::-1], 256)
        assert diffusion_stats(b, 256).row() == diffusion_stats(np.sort(b), 256).row()

    def test_empty(self):
        with pytest.raises(ValueError):
            diffusion_stats([], 8)


class TestDiffusion:
    def test_invariants(self):
        r = diffusion_test(P, 200, 300, rng_seed=1)
        assert 0 <= r.b_min <= r.b_mean <= r.b_max <= 256
        assert r.p_mean == pytest.approx(100 * r.b_mean / 256)
        assert sum(r.histogram.values()) == 300

    def test_deterministic(self):
        assert diffusion_test(P, 64, 50, 9).row() == diffusion_test(P, 64, 50, 9).row()
        assert diffusion_test(P, 64, 50, 9).row() != diffusion_test(P, 64, 50, 10).row()

    def test_chunked_equals_sequential(self):
        whole = diffusion_trials(P, 80, range(40), 3)
        parts = [diffusion_trials(P, 80, range(lo, lo + 10), 3) for lo in (30, 0, 20, 10)]
        merged = np.concatenate(parts)
        assert diffusion_stats(merged, 256).row() == diffusion_test(P, 80, 40, 3).row()
        assert sorted(merged.tolist()) == sorted(whole.tolist())

    def test_trial_matches_reference_hash(self):
        # rebuild trial 0 from its seed and hash it through the reference path
        from chaoshash.analysis import _random_text_bits
        from chaoshash.bitcore import BitString
        from chaoshash.hashing import chaos_digest

        rng = np.random.default_rng([5, 0])
        bits = BitString.from_array(_random_text_bits(rng, 10))
        flip = int(rng.integers(0, 70))
        want = (chaos_digest(P, bits) ^ chaos_digest(P, bits.flip(flip + 1))).popcount()
        assert diffusion_trials(P, 80, [0], 5)[0] == want

    def test_exhaustive(self):
        r = diffusion_test(P, 40, rng_seed=2, exhaustive=True)
        assert r.t == 35

    @pytest.mark.parametrize("bits, t", [(0, 5), (12, 5), (8, 0)])
    def test_bad_arguments(self, bits, t):
        with pytest.raises(ValueError):
            diffusion_test(P, bits, t)

    @pytest.mark.parametrize("n", [256, 512, 1024])
    def test_reference_calibration(self, n):
        t = 4000
        r = reference_diffusion(n, t, rng_seed=1)
        assert abs(r.b_mean - n / 2) <= 3 * (math.sqrt(n) / 2) / math.sqrt(t)
        assert abs(r.delta_b - math.sqrt(n) / 2) <= 0.05 * math.sqrt(n) / 2

    def test_csv(self):
        out = io.StringIO()
        r = diffusion_stats([1, 3], 4)
        write_csv(out, r.HEADER, [r.row()])
        lines = out.getvalue().splitlines()
        assert lines[0] == ",".join(DiffusionReport.HEADER)
        assert lines[1].startswith("4,2,1,3,2.0000,50.0000,1.0000,25.0000")


class TestSac:
    def test_constant_function(self):
        msgs = np.random.default_rng(0).integers(0, 2, (20, 12), dtype=np.uint8)
        J = dependence_matrix(lambda m: np.zeros((m.shape[0], 8), dtype=np.uint8), msgs)
        assert J.shape == (12, 8) and not J.any()

    def test_identity_function(self):
        msgs = np.random.default_rng(0).integers(0, 2, (20, 12), dtype=np.uint8)
        J = dependence_matrix(lambda m: m, msgs)
        assert np.array_equal(J, np.eye(12))

    def test_harness_with_custom_function(self):
        rep = sac_test(P, size_samples=3, r=5, rng_seed=1, max_size=20,
                       f=lambda m: np.zeros((m.shape[0], 4), dtype=np.uint8))
        assert (rep.mean, rep.min, rep.max, rep.std) == (0, 0, 0, 0)
        assert len(set(rep.sizes)) == 3 and all(1 <= s <= 20 for s in rep.sizes)

    def test_chaos_hash_small(self):
        rep = sac_test(ChaosHashParams("my key", 64), size_samples=4, r=100, rng_seed=2, max_size=60)
        assert 0 <= rep.min <= rep.mean <= rep.max <= 1
        assert abs(rep.mean - 0.5) < 0.02
        assert rep.m == 64

    def test_deterministic(self):
        a = sac_test(ChaosHashParams("k", 16), 2, 20, 3, 30)
        assert a == sac_test(ChaosHashParams("k", 16), 2, 20, 3, 30)

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            sac_test(P, 0, 10)
        with pytest.raises(ValueError):
            sac_test(P, 11, 10, max_size=10)

    def test_tiny_sizes_spread_for_an_ideal_hash(self):
        # a 5-bit input has 16 distinct (x, x ^ e_i) pairs, so even a random
        # function gives entries far from 1/2
        msgs = np.random.default_rng(1).integers(0, 2, size=(1000, 5), dtype=np.uint8)
        table = np.random.default_rng(2).integers(0, 2, size=(32, 256), dtype=np.uint8)
        w = 1 << np.arange(4, -1, -1)
        J = dependence_matrix(lambda m: table[m @ w], msgs)
        assert J.min() < 0.38 and J.max() > 0.62
        assert abs(J.mean() - 0.5) < 0.03

    def test_summary(self):
        rep = sac_summary([np.array([[0.0, 1.0]]), np.array([[0.5, 0.5]])], r=2, sizes=[1, 1])
        assert rep == SacReport(0.5, 0.0, 1.0, math.sqrt(0.125), 2, (1, 1), 2)


class TestRepartition:
    def test_rows(self):
        rep = repartition_export("Hello", P)
        assert rep.source == [(72, 1), (101, 2), (108, 3), (108, 4), (111, 5)]
        digest = chaos_hash(P, "Hello")
        assert rep.digest == [(int(h, 16), i) for i, h in enumerate(digest, 1)]
        assert len(rep.digest) == 64

    def test_positions_increase(self):
        rep = repartition_export("0" * 500, P)
        for table in (rep.source, rep.digest):
            pos = [p for _, p in table]
            assert pos == sorted(set(pos))
        assert {v for v, _ in rep.source} == {48}
        assert len({v for v, _ in rep.digest}) > 8

    def test_row_meaning(self):
        rep = repartition_export("x", ChaosHashParams("k", 80))
        digest = chaos_hash(ChaosHashParams("k", 80), "x")
        assert (int(digest[16], 16), 17) in rep.digest
        assert len(list(rep.rows())) == 1 + 20

    def test_non_ascii(self):
        with pytest.raises(EncodingError):
            repartition_export("café", P)


class TestBench:
    def test_rows(self):
        rows = scaling_benchmark(P, [64, 128], repeats=1)
        assert [r.size for r in rows] == [64, 128]
        assert rows[0].ratio is None and rows[1].ratio > 0
        assert rows[1].per_unit == pytest.approx(rows[1].seconds / 128)

    @pytest.mark.parametrize("lengths", [[], [64], [128, 64], [64, 64]])
    def test_bad_lengths(self, lengths):
        with pytest.raises(ValueError):
            scaling_benchmark(P, lengths, repeats=1)

    def test_digest_sizes(self):
        rows = digest_size_benchmark("k", [8, 16], repeats=1)
        assert [r.size for r in rows] == [8, 16]
        with pytest.raises(ValueError):
            digest_size_benchmark("k", [16], repeats=1)

    def test_row_format(self):
        assert BenchRow(4, 1.0, 0.25, None).row() == (4, "1.000000e+00", "2.500000e-01", "")
