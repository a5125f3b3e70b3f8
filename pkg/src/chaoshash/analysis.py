"""Statistical evaluation: diffusion, strict avalanche, repartition, timing.

All experiments are deterministic in ``rng_seed``.  Trial ``i`` draws its
randomness from ``numpy.random.default_rng([rng_seed, i])``, so a trial's
outcome does not depend on the order trials are run in.
"""
from __future__ import annotations

import csv
import statistics
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, TextIO, Tuple

import numpy as np

from . import _kernels
from .bitcore import _ASCII7_TABLE, BitString, encode_ascii7, to_hex
from .hashing import ChaosHashParams, chaos_digest
from .strategy import key_bits

__all__ = [
    "DiffusionReport",
    "SacReport",
    "RepartitionExport",
    "BenchRow",
    "diffusion_stats",
    "diffusion_trials",
    "diffusion_test",
    "reference_diffusion",
    "dependence_matrix",
    "sac_summary",
    "sac_test",
    "repartition_export",
    "scaling_benchmark",
    "digest_size_benchmark",
    "write_csv",
]

BatchHash = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class DiffusionReport:
    n: int
    t: int
    b_min: int
    b_max: int
    b_mean: float
    p_mean: float
    delta_b: float
    delta_p: float
    histogram: Dict[int, int] = field(default_factory=dict, compare=False)

    HEADER = ("n", "t", "b_min", "b_max", "b_mean", "p_mean_pct", "delta_b", "delta_p_pct")

    def row(self) -> tuple:
        return (self.n, self.t, self.b_min, self.b_max, f"{self.b_mean:.4f}",
                f"{self.p_mean:.4f}", f"{self.delta_b:.4f}", f"{self.delta_p:.4f}")


@dataclass(frozen=True)
class SacReport:
    mean: float
    min: float
    max: float
    std: float
    r: int
    sizes: Tuple[int, ...]
    m: int

    HEADER = ("m", "r", "num_sizes", "entries", "j_mean", "j_min", "j_max", "j_std")

    def row(self) -> tuple:
        return (self.m, self.r, len(self.sizes), self.m * sum(self.sizes), f"{self.mean:.6f}",
                f"{self.min:.6f}", f"{self.max:.6f}", f"{self.std:.6f}")


@dataclass(frozen=True)
class RepartitionExport:
    source: List[Tuple[int, int]]
    digest: List[Tuple[int, int]]

    HEADER = ("table", "value", "position")

    def rows(self):
        for table, pairs in (("source", self.source), ("digest", self.digest)):
            for value, pos in pairs:
                yield table, value, pos


@dataclass(frozen=True)
class BenchRow:
    size: int
    seconds: float
    per_unit: float
    ratio: Optional[float]

    def row(self) -> tuple:
        return (self.size, f"{self.seconds:.6e}", f"{self.per_unit:.6e}",
                "" if self.ratio is None else f"{self.ratio:.4f}")


def write_csv(out: TextIO, header: Sequence[str], rows) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)


# -- diffusion -----------------------------------------------------------

def diffusion_stats(distances: Sequence[int], n: int) -> DiffusionReport:
    """Aggregate changed-bit counts B_i into B-bar, P, delta B, delta P.

    Dispersions use the 1/t (population) normalization.  P and delta P are
    in percent.  The input is sorted first, so the floating-point result does
    not depend on the order the trials finished in.
    """
    b = np.sort(np.asarray(distances, dtype=np.float64))
    t = b.size
    if t == 0:
        raise ValueError("no trials")
    mean = float(b.mean())
    delta_b = float(np.sqrt(np.mean((b - mean) ** 2)))
    delta_p = float(np.sqrt(np.mean((b / n - mean / n) ** 2)))
    values, counts = np.unique(b.astype(np.int64), return_counts=True)
    return DiffusionReport(
        n=n, t=t,
        b_min=int(b.min()), b_max=int(b.max()),
        b_mean=mean, p_mean=100.0 * mean / n,
        delta_b=delta_b, delta_p=100.0 * delta_p,
        histogram=dict(zip(values.tolist(), counts.tolist())),
    )


def _random_text_bits(rng: np.random.Generator, nchars: int) -> np.ndarray:
    # printable ASCII only, so every message encodes
    return _ASCII7_TABLE[rng.integers(32, 127, size=nchars)].ravel()


def diffusion_trials(
    params: ChaosHashParams, msg_len_bits: int, trials: Sequence[int], rng_seed: int = 0
) -> np.ndarray:
    """Changed-bit counts B_i for the given trial indices.

    Each trial depends only on ``(rng_seed, i)``, so disjoint index ranges
    can be computed separately and concatenated.
    """
    if msg_len_bits < 8 or msg_len_bits % 8:
        raise ValueError("msg_len_bits must be a positive multiple of 8")
    nchars = msg_len_bits // 8
    msgs = np.empty((len(trials), 7 * nchars), dtype=np.uint8)
    flips = np.empty(len(trials), dtype=np.int64)
    for row, i in enumerate(trials):
        rng = np.random.default_rng([rng_seed, i])
        msgs[row] = _random_text_bits(rng, nchars)
        flips[row] = rng.integers(0, 7 * nchars)
    return _kernels.diffusion_distances(msgs, flips, key_bits(params.key).to_array(), params.n)


def diffusion_test(
    params: ChaosHashParams,
    msg_len_bits: int = 1000,
    t: int = 10_000,
    rng_seed: int = 0,
    exhaustive: bool = False,
) -> DiffusionReport:
    """Hash random messages and their one-bit variants; compare digests.

    A message of ``msg_len_bits`` is ``msg_len_bits // 8`` printable
    characters.  The toggled bit is chosen in the 7-bit encoded stream.
    With ``exhaustive`` a single message is drawn and every one of its
    encoded bits is toggled in turn (``t`` is then ignored).
    """
    if msg_len_bits < 8 or msg_len_bits % 8:
        raise ValueError("msg_len_bits must be a positive multiple of 8")
    if t < 1:
        raise ValueError("t must be at least 1")
    if exhaustive:
        base = _random_text_bits(np.random.default_rng([rng_seed, 0]), msg_len_bits // 8)
        msgs = np.tile(base, (base.size, 1))
        flips = np.arange(base.size, dtype=np.int64)
        key = key_bits(params.key).to_array()
        dist = _kernels.diffusion_distances(msgs, flips, key, params.n)
    else:
        dist = diffusion_trials(params, msg_len_bits, range(t), rng_seed)
    return diffusion_stats(dist, params.n)


def reference_diffusion(n: int, t: int = 10_000, rng_seed: int = 0) -> DiffusionReport:
    """The same statistics for an ideal hash: two independent fair-coin digests per trial."""
    dist = np.empty(t, dtype=np.int64)
    for i in range(t):
        rng = np.random.default_rng([rng_seed, i])
        a, b = rng.integers(0, 2, size=(2, n), dtype=np.uint8)
        dist[i] = int(np.count_nonzero(a != b))
    return diffusion_stats(dist, n)


# -- strict avalanche ------------------------------------------------------

def dependence_matrix(f: BatchHash, msgs: np.ndarray) -> np.ndarray:
    """J[i, j]: fraction of messages for which toggling input bit i toggles output bit j.

    ``f`` maps an (r, L) array of message bits to an (r, m) array of digest bits.
    """
    msgs = np.asarray(msgs, dtype=np.uint8)
    r, L = msgs.shape
    base = np.asarray(f(msgs), dtype=np.uint8)
    J = np.zeros((L, base.shape[1]), dtype=np.int64)
    for i in range(L):
        flipped = msgs.copy()
        flipped[:, i] ^= 1
        J[i] = np.sum(base ^ np.asarray(f(flipped), dtype=np.uint8), axis=0)
    return J / r


def sac_summary(matrices: Sequence[np.ndarray], r: int, sizes: Sequence[int]) -> SacReport:
    entries = np.concatenate([np.ravel(j) for j in matrices])
    return SacReport(
        mean=float(entries.mean()), min=float(entries.min()), max=float(entries.max()),
        std=float(entries.std()), r=r, sizes=tuple(sizes), m=int(matrices[0].shape[1]),
    )


def sac_test(
    params: ChaosHashParams,
    size_samples: int = 100,
    r: int = 1000,
    rng_seed: int = 0,
    max_size: int = 1000,
    f: Optional[BatchHash] = None,
) -> SacReport:
    """Dependence matrices over ``size_samples`` distinct message sizes in 1..max_size.

    Messages are raw bit vectors hashed below the character layer.  ``f``
    replaces the chaos hash with another batch function (used to check the
    harness itself).
    """
    if size_samples < 1 or r < 1:
        raise ValueError("size_samples and r must be at least 1")
    if size_samples > max_size:
        raise ValueError("cannot draw more distinct sizes than max_size")
    sizes = np.random.default_rng([rng_seed]).choice(
        np.arange(1, max_size + 1), size=size_samples, replace=False
    )
    key = key_bits(params.key).to_array()
    mats = []
    for k, L in enumerate(sizes.tolist()):
        msgs = np.random.default_rng([rng_seed, k + 1]).integers(0, 2, size=(r, L), dtype=np.uint8)
        if f is None:
            mats.append(_kernels.sac_counts(msgs, key, params.n) / r)
        else:
            mats.append(dependence_matrix(f, msgs))
    return sac_summary(mats, r, sizes.tolist())


# -- value repartition -------------------------------------------------------

def repartition_export(text: str, params: ChaosHashParams) -> RepartitionExport:
    """(code, position) pairs for the text and (hex digit, position) pairs for its digest."""
    encode_ascii7(text)  # rejects non-ASCII input before hashing
    digest = to_hex(chaos_digest(params, text))
    return RepartitionExport(
        source=[(ord(c), i) for i, c in enumerate(text, 1)],
        digest=[(int(h, 16), i) for i, h in enumerate(digest, 1)],
    )


# -- timing -------------------------------------------------------------------

def _median_time(fn: Callable[[], object], repeats: int) -> float:
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return statistics.median(times)


def _rows(sizes: Sequence[int], times: Sequence[float]) -> List[BenchRow]:
    rows = []
    for k, (s, sec) in enumerate(zip(sizes, times)):
        ratio = None if k == 0 else sec / times[k - 1]
        rows.append(BenchRow(s, sec, sec / s, ratio))
    return rows


def scaling_benchmark(
    params: ChaosHashParams, lengths: Sequence[int], repeats: int = 5, rng_seed: int = 0
) -> List[BenchRow]:
    """Median wall time of ``chaos_digest`` for random messages of each bit length.

    ``ratio`` is the time relative to the previous length.
    """
    lengths = list(lengths)
    if len(lengths) < 2 or any(b <= a for a, b in zip(lengths, lengths[1:])) or lengths[0] < 1:
        raise ValueError("need at least two strictly increasing positive lengths")
    rng = np.random.default_rng(rng_seed)
    times = []
    chaos_digest(params, BitString(1, 1))  # warm caches
    for L in lengths:
        msg = BitString.from_array(rng.integers(0, 2, size=L, dtype=np.uint8))
        times.append(_median_time(lambda: chaos_digest(params, msg), repeats))
    return _rows(lengths, times)


def digest_size_benchmark(
    key: str, sizes: Sequence[int], msg_bits: int = 64, repeats: int = 5, rng_seed: int = 0
) -> List[BenchRow]:
    """Median hash time of one short message as the digest size grows."""
    sizes = list(sizes)
    if len(sizes) < 2 or any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError("need at least two strictly increasing digest sizes")
    msg = BitString.from_array(np.random.default_rng(rng_seed).integers(0, 2, size=msg_bits, dtype=np.uint8))
    times = [
        _median_time(lambda: chaos_digest(ChaosHashParams(key, n), msg), repeats) for n in sizes
    ]
    return _rows(sizes, times)
