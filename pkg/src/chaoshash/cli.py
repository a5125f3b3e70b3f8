"""Command line interface.

Exit codes: 0 success, 1 usage error, 2 data error (non-ASCII input,
dimension mismatch, non-invertible map, unreadable file).
"""
from __future__ import annotations

import argparse
import contextlib
import os
import sys
from typing import Iterator, List, Optional, Sequence, TextIO

import numpy as np

from . import analysis
from .bitcore import BitString, EncodingError, encode_ascii7, from_hex, to_hex
from .dynamics import (
    NotInvertibleError,
    check_bijective_iteration,
    check_bijective_step,
    constant,
    identity,
    negation,
    rotation,
)
from .hashing import (
    ChaosHashParams,
    DimensionMismatchError,
    PostTreatKey,
    chaos_digest,
    chaos_inner_hash,
    invert_post_treat,
    post_treat,
    xor_fold_hash,
)
from .pretreatment import normalize_bits
from .strategy import Strategy, strategy_from_key

MAPS = {"negation": negation, "identity": identity, "rotation": rotation, "constant": constant}
INNER = {"chaos": chaos_inner_hash, "xorfold": xor_fold_hash}
DEFAULT_KEY = "my key"


class UsageError(Exception):
    def __init__(self, message: str, synopsis: str = ""):
        super().__init__(message)
        self.synopsis = synopsis


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message, self.format_usage().strip())


# -- argument types ----------------------------------------------------------

def _digest_size(text: str) -> int:
    n = int(text)
    if n < 4 or n % 4:
        raise argparse.ArgumentTypeError(f"must be a positive multiple of 4, got {text}")
    return n


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


def _seed(text: str) -> int:
    if not text.isdigit() or int(text) >= 1 << 64:
        raise argparse.ArgumentTypeError(f"must be an unsigned 64-bit decimal, got {text!r}")
    return int(text)


def _hex_bits(text: str) -> BitString:
    try:
        return from_hex(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a hex string: {text!r}") from None


def _int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


# -- shared option groups ------------------------------------------------------

def _add_key(p: argparse.ArgumentParser, required: bool) -> None:
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--key", help="ASCII key")
    g.add_argument("--key-hex", type=_hex_bits, help="key given as a bit string in hex")
    g.add_argument("--key-env", metavar="VAR", help="read the ASCII key from this environment variable")


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("--file", help="read the message from this file instead of standard input")


def _add_out(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="write CSV here instead of standard output")


def _key(args, parser: argparse.ArgumentParser):
    if args.key_hex is not None:
        return args.key_hex
    if args.key_env is not None:
        if args.key_env not in os.environ:
            raise UsageError(f"environment variable {args.key_env} is not set", parser.format_usage().strip())
        return os.environ[args.key_env]
    return args.key if args.key is not None else DEFAULT_KEY


def _read_input(args, stdin) -> bytes:
    if args.file:
        with open(args.file, "rb") as fh:
            return fh.read()
    return stdin.buffer.read() if hasattr(stdin, "buffer") else stdin.read().encode("latin-1")


@contextlib.contextmanager
def _output(args, stdout) -> Iterator[TextIO]:
    if getattr(args, "out", None):
        with open(args.out, "w", newline="") as fh:
            yield fh
    else:
        yield stdout


# -- subcommands ---------------------------------------------------------------

def cmd_hash(args, parser, stdin, stdout) -> None:
    params = ChaosHashParams(_key(args, parser), args.n)
    data = _read_input(args, stdin)
    if not data:
        raise ValueError("empty message")
    stdout.write(to_hex(chaos_digest(params, data)) + "\n")


def cmd_strategy(args, parser, stdin, stdout) -> None:
    key = _key(args, parser)
    data = _read_input(args, stdin)
    if not data:
        raise ValueError("empty message")
    params = ChaosHashParams(key, args.n)
    norm = normalize_bits(encode_ascii7(data), params.n)
    stdout.write(strategy_from_key(norm.d, key, params.n).to_csv() + "\n")


def cmd_posttreat(args, parser, stdin, stdout) -> None:
    inner = INNER[args.inner](args.n)
    f = MAPS[args.map](args.n)
    key = PostTreatKey(args.k1, args.k2, args.iters)
    if args.invert is not None:
        out = invert_post_treat(key, f, args.invert)
    else:
        out = post_treat(inner, key, f, BitString.from_bytes(_read_input(args, stdin)))
    stdout.write(to_hex(out) + "\n")


def cmd_verify(args, parser, stdin, stdout) -> None:
    f = MAPS[args.map](args.n)
    if args.index is not None:
        ok, _ = check_bijective_step(f, args.index)
    else:
        rng = np.random.default_rng(args.seed)
        s = Strategy(tuple(int(v) for v in rng.integers(1, args.n + 1, size=args.strategy_len)), args.n)
        ok = check_bijective_iteration(f, s)
    stdout.write(f"bijective: {'true' if ok else 'false'}\n")


def cmd_diffusion(args, parser, stdin, stdout) -> None:
    params = ChaosHashParams(_key(args, parser), args.n)
    rep = analysis.diffusion_test(params, args.msg_bits, args.trials, args.seed, args.exhaustive)
    with _output(args, stdout) as out:
        analysis.write_csv(out, rep.HEADER, [rep.row()])


def cmd_sac(args, parser, stdin, stdout) -> None:
    params = ChaosHashParams(_key(args, parser), args.m)
    rep = analysis.sac_test(params, args.sizes, args.r, args.seed, args.max_size)
    with _output(args, stdout) as out:
        analysis.write_csv(out, rep.HEADER, [rep.row()])


def cmd_repartition(args, parser, stdin, stdout) -> None:
    params = ChaosHashParams(_key(args, parser), args.n)
    data = _read_input(args, stdin)
    if not data:
        raise ValueError("empty message")
    encode_ascii7(data)
    rep = analysis.repartition_export(data.decode("ascii"), params)
    with _output(args, stdout) as out:
        analysis.write_csv(out, rep.HEADER, rep.rows())


def cmd_bench(args, parser, stdin, stdout) -> None:
    key = _key(args, parser)
    if args.digest_sizes:
        rows = analysis.digest_size_benchmark(key, args.digest_sizes, args.msg_bits, args.repeats)
        header = ("n", "median_seconds", "seconds_per_digest_bit", "ratio_to_previous")
    else:
        rows = analysis.scaling_benchmark(ChaosHashParams(key, args.n), args.lengths, args.repeats)
        header = ("length_bits", "median_seconds", "seconds_per_bit", "ratio_to_previous")
    with _output(args, stdout) as out:
        analysis.write_csv(out, header, [r.row() for r in rows])


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chaoshash", description="Chaotic keyed hash and its evaluation tools.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("hash", help="hash a message read from a file or standard input")
    _add_key(p, required=True)
    p.add_argument("--n", type=_digest_size, default=256)
    _add_input(p)
    p.set_defaults(func=cmd_hash)

    p = sub.add_parser("strategy-dump", help="print the strategy used for a message")
    _add_key(p, required=True)
    p.add_argument("--n", type=_digest_size, default=256)
    _add_input(p)
    p.set_defaults(func=cmd_strategy)

    p = sub.add_parser("posttreat", help="post-treat the digest of an inner keyed hash")
    p.add_argument("--k1", type=_hex_bits, required=True, help="inner-hash key (hex)")
    p.add_argument("--k2", type=_hex_bits, required=True, help="strategy seed (hex)")
    p.add_argument("--iters", type=_positive, default=None, help="iteration count N (default 2n)")
    p.add_argument("--inner", choices=sorted(INNER), default="chaos")
    p.add_argument("--map", choices=["negation", "identity"], default="negation")
    p.add_argument("--n", type=_digest_size, default=256)
    p.add_argument("--invert", type=_hex_bits, metavar="DIGEST", help="undo the post-treatment of DIGEST")
    _add_input(p)
    p.set_defaults(func=cmd_posttreat)

    p = sub.add_parser("verify-bijectivity", help="exhaustively check that a step or an iteration is a permutation")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--map", choices=sorted(MAPS), default="negation")
    p.add_argument("--index", type=_positive, help="check the single step on this component")
    p.add_argument("--strategy-len", type=_positive, default=50)
    p.add_argument("--seed", type=_seed, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("diffusion", help="one-bit-flip diffusion statistics (CSV)")
    _add_key(p, required=False)
    p.add_argument("--n", type=_digest_size, default=256)
    p.add_argument("--msg-bits", type=_positive, default=1000)
    p.add_argument("--trials", type=_positive, default=10_000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--exhaustive", action="store_true", help="toggle every bit of one message")
    _add_out(p)
    p.set_defaults(func=cmd_diffusion)

    p = sub.add_parser("sac", help="strict avalanche dependence-matrix summary (CSV)")
    _add_key(p, required=False)
    p.add_argument("--sizes", type=_positive, default=100, help="number of message sizes sampled")
    p.add_argument("--r", type=_positive, default=1000, help="messages per size")
    p.add_argument("--m", type=_digest_size, default=256, help="digest size")
    p.add_argument("--max-size", type=_positive, default=1000)
    p.add_argument("--seed", type=_seed, default=0)
    _add_out(p)
    p.set_defaults(func=cmd_sac)

    p = sub.add_parser("repartition", help="(value, position) tables of a text and its digest (CSV)")
    _add_key(p, required=False)
    p.add_argument("--n", type=_digest_size, default=256)
    _add_input(p)
    _add_out(p)
    p.set_defaults(func=cmd_repartition)

    p = sub.add_parser("bench", help="hash timing against message length or digest size (CSV)")
    _add_key(p, required=False)
    p.add_argument("--n", type=_digest_size, default=256)
    p.add_argument("--lengths", type=_int_list, default=[2**k for k in range(10, 21)])
    p.add_argument("--digest-sizes", type=_int_list, help="time a fixed short message for these n instead")
    p.add_argument("--msg-bits", type=_positive, default=64)
    p.add_argument("--repeats", type=_positive, default=5)
    _add_out(p)
    p.set_defaults(func=cmd_bench)
    return parser


def run(argv: Optional[Sequence[str]] = None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.func(args, parser, stdin, stdout)
    except UsageError as exc:
        stderr.write(f"error: {exc}\n")
        if exc.synopsis:
            stderr.write(exc.synopsis + "\n")
        return 1
    except (EncodingError, DimensionMismatchError, NotInvertibleError, ValueError, OSError) as exc:
        stderr.write(f"error: {exc}\n")
        return 2
    return 0


def main() -> None:
    sys.exit(run())
