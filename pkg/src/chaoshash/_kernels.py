"""Compiled hash kernel for the statistical experiments.

Operates on uint8 arrays holding one bit per element.  It computes exactly
what ``hashing.chaos_digest`` computes on bit input; ``tests/test_kernels.py``
checks the two paths against each other.
"""
import numpy as np
from numba import njit

from .strategy import WARMUP, WEYL_STEP, ZERO_FIX

M32 = np.uint64(0xFFFFFFFF)
_ZERO_FIX = np.array(ZERO_FIX, dtype=np.uint64)


@njit(cache=True)
def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@njit(cache=True)
def block_size(n):
    m = 2 * n
    return 512 * m // _gcd(512, m)


@njit(cache=True)
def _gen_init(words, warmup):
    # layout: [a, x, y, z, w, v0, v1, v2, v3, v4, d]
    st = np.empty(11, dtype=np.uint64)
    st[0] = words[0]
    st[1] = words[1]
    st[2] = words[2]
    st[3] = words[3]
    st[4] = words[4]
    st[5] = words[5]
    st[6] = words[6]
    st[7] = words[7]
    st[8] = words[2] ^ words[6]
    st[9] = words[3] ^ words[7]
    st[10] = words[0] ^ words[4]
    for _ in range(warmup):
        _gen_next(st)
    return st


@njit(cache=True)
def _gen_next(st):
    m = np.uint64(0xFFFFFFFF)
    a = st[0]
    a ^= (a << np.uint64(13)) & m
    a ^= a >> np.uint64(17)
    a ^= (a << np.uint64(5)) & m
    st[0] = a

    x = st[1]
    t = x ^ ((x << np.uint64(11)) & m)
    st[1] = st[2]
    st[2] = st[3]
    st[3] = st[4]
    w = st[4]
    w = w ^ (w >> np.uint64(19)) ^ t ^ (t >> np.uint64(8))
    st[4] = w

    v0 = st[5]
    t = v0 ^ (v0 >> np.uint64(2))
    v4 = st[9]
    v4 = v4 ^ ((v4 << np.uint64(4)) & m) ^ t ^ ((t << np.uint64(1)) & m)
    st[5] = st[6]
    st[6] = st[7]
    st[7] = st[8]
    st[8] = st[9]
    st[9] = v4
    st[10] = (st[10] + np.uint64(WEYL_STEP)) & m

    return ((a ^ w) + ((v4 + st[10]) & m)) & m


@njit(cache=True)
def gen_words(words, count, warmup):
    st = _gen_init(words, warmup)
    out = np.empty(count, dtype=np.uint64)
    for k in range(count):
        out[k] = _gen_next(st)
    return out


@njit(cache=True)
def _next_index(st, n):
    limit = np.uint64((4294967296 // n) * n)
    while True:
        word = _gen_next(st)
        if word < limit:
            return np.int64(word % np.uint64(n))


@njit(cache=True)
def hash_bits(msg, key, n):
    """Digest bits of a bit-level message under a bit-level key."""
    L = msg.shape[0]
    # pad_and_mark: msg | 1 | bin(L+1) | optional 1
    L1 = L + 1
    width = 0
    tmp = L1
    while tmp:
        width += 1
        tmp >>= 1
    rlen = L1 + width
    if rlen % 2 == 0:
        rlen += 1
    r = np.empty(rlen, dtype=np.uint8)
    r[:L] = msg
    r[L] = 1
    for k in range(width):
        r[L1 + k] = (L1 >> (width - 1 - k)) & 1
    if rlen > L1 + width:
        r[rlen - 1] = 1
    # mirror
    m = 2 * rlen
    mir = np.empty(m, dtype=np.uint8)
    for k in range(rlen):
        mir[k] = r[k]
        mir[m - 1 - k] = r[k]
    blk = block_size(n)
    total = ((m + blk - 1) // blk) * blk
    # fold D into x0 (n bits) and D ^ keychain into the 256-bit state
    x0 = np.zeros(n, dtype=np.uint8)
    sbits = np.zeros(256, dtype=np.uint8)
    klen = key.shape[0]
    pm = 0
    pk = 0
    pn = 0
    ps = 0
    for p in range(total):
        bit = mir[pm]
        x0[pn] ^= bit
        sbits[ps] ^= bit ^ key[pk]
        pm += 1
        if pm == m:
            pm = 0
        pk += 1
        if pk == klen:
            pk = 0
        pn += 1
        if pn == n:
            pn = 0
        ps += 1
        if ps == 256:
            ps = 0
    words = np.empty(8, dtype=np.uint64)
    for k in range(8):
        wv = np.uint64(0)
        for j in range(32):
            wv = (wv << np.uint64(1)) | np.uint64(sbits[32 * k + j])
        if wv == 0:
            wv = _ZERO_FIX[k]
        words[k] = wv
    st = _gen_init(words, WARMUP)
    for _ in range(2 * n):
        x0[_next_index(st, n)] ^= 1
    return x0


@njit(cache=True)
def diffusion_distances(msgs, flips, key, n):
    """Hamming distance between the digests of each message and its flip."""
    t = msgs.shape[0]
    out = np.empty(t, dtype=np.int64)
    for i in range(t):
        a = hash_bits(msgs[i], key, n)
        msg = msgs[i].copy()
        msg[flips[i]] ^= 1
        b = hash_bits(msg, key, n)
        out[i] = np.sum(a != b)
    return out


@njit(cache=True)
def sac_counts(msgs, key, n):
    """Dependence counts: J[i, j] = #messages where flipping bit i flips digest bit j."""
    r, L = msgs.shape
    J = np.zeros((L, n), dtype=np.int64)
    for q in range(r):
        msg = msgs[q].copy()
        base = hash_bits(msg, key, n)
        for i in range(L):
            msg[i] ^= 1
            other = hash_bits(msg, key, n)
            msg[i] ^= 1
            for j in range(n):
                J[i, j] += base[j] ^ other[j]
    return J
