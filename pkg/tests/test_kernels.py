"""The compiled batch path must agree bit for bit with the reference pipeline."""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chaoshash import _kernels
from chaoshash.bitcore import BitString, encode_ascii7
from chaoshash.hashing import ChaosHashParams, chaos_digest
from chaoshash.pretreatment import block_size
from chaoshash.strategy import CombinedXorshift, WARMUP, condense_seed


def kernel_digest(msg: BitString, key: str, n: int) -> BitString:
    out = _kernels.hash_bits(msg.to_array(), encode_ascii7(key).to_array(), n)
    return BitString.from_array(out)


@pytest.mark.parametrize("n", [4, 12, 100, 256, 512, 1024])
@pytest.mark.parametrize("L", [1, 7, 255, 256, 511, 512, 1000, 3000])
def test_digest_agreement(n, L):
    rng = np.random.default_rng([n, L])
    msg = BitString.from_array(rng.integers(0, 2, L, dtype=np.uint8))
    assert kernel_digest(msg, "my key", n) == chaos_digest(ChaosHashParams("my key", n), msg)


@settings(max_examples=60, deadline=None)
@given(st.binary(min_size=1, max_size=40).map(lambda b: bytes(c & 0x7F for c in b)),
       st.text(alphabet=st.characters(min_codepoint=32, max_codepoint=126), min_size=1, max_size=12),
       st.sampled_from([8, 64, 256]))
def test_digest_agreement_property(data, key, n):
    msg = encode_ascii7(data)
    assert kernel_digest(msg, key, n) == chaos_digest(ChaosHashParams(key, n), data)


@pytest.mark.parametrize("n", [4, 100, 256, 768, 1000])
def test_block_size(n):
    assert _kernels.block_size(n) == block_size(n)


def test_generator_words():
    words = condense_seed(BitString.random(512, __import__("random").Random(9)))
    gen = CombinedXorshift(words, WARMUP)
    ref = [gen.next_u32() for _ in range(1000)]
    got = _kernels.gen_words(np.array(words, dtype=np.uint32), 1000, WARMUP)
    assert got.tolist() == ref


def test_diffusion_distances_match():
    rng = np.random.default_rng(2)
    msgs = rng.integers(0, 2, size=(5, 70), dtype=np.uint8)
    flips = rng.integers(0, 70, size=5)
    key = encode_ascii7("k").to_array()
    got = _kernels.diffusion_distances(msgs, flips, key, 64)
    p = ChaosHashParams("k", 64)
    for m, f, dist in zip(msgs, flips, got):
        a = BitString.from_array(m)
        assert (chaos_digest(p, a) ^ chaos_digest(p, a.flip(int(f) + 1))).popcount() == dist


def test_sac_counts_match_dependence():
    from chaoshash.analysis import dependence_matrix

    rng = np.random.default_rng(4)
    msgs = rng.integers(0, 2, size=(6, 9), dtype=np.uint8)
    key = encode_ascii7("k").to_array()
    p = ChaosHashParams("k", 16)

    def f(batch):
        return np.array([chaos_digest(p, BitString.from_array(m)).to_array() for m in batch])

    assert np.array_equal(_kernels.sac_counts(msgs, key, 16) / 6, dependence_matrix(f, msgs))
