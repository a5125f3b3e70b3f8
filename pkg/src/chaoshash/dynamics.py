"""Asynchronous iterations of Boolean maps.

A configuration of n bits is handled as an integer whose bit for component
i (1-based, leftmost first) sits at shift ``n - i``.  Component rules are
written against that integer with plain shifts and masks, so the same rule
evaluates one state or a whole numpy array of states at once; the
exhaustive bijectivity oracles rely on the latter.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from .bitcore import Configuration
from .strategy import Strategy

__all__ = [
    "BooleanMap",
    "SystemPoint",
    "StrategyExhausted",
    "NotInvertibleError",
    "negation",
    "identity",
    "rotation",
    "constant",
    "apply_F",
    "unapply_F",
    "step_G",
    "iterate",
    "iterate_states",
    "check_bijective_step",
    "check_bijective_iteration",
    "find_collision",
    "MAX_ORACLE_N",
]

MAX_ORACLE_N = 16

# rule(i, x) -> f_i(x); x is an int or an integer ndarray of packed states
Rule = Callable[[int, "int | np.ndarray"], "int | np.ndarray"]


class StrategyExhausted(IndexError):
    pass


class NotInvertibleError(ValueError):
    pass


@dataclass(frozen=True)
class BooleanMap:
    """f: B^n -> B^n given by its component functions f_1..f_n."""

    n: int
    rule: Rule
    name: str = "custom"
    # True when every f_i(x) is x_i negated; enables the bit-flip fast path
    flips: bool = False

    def component(self, i: int, x: Configuration) -> int:
        return int(self.rule(i, x.value)) & 1

    def __call__(self, x: Configuration) -> Configuration:
        """Synchronous evaluation f(x) of all components."""
        value = 0
        for i in range(1, self.n + 1):
            value = (value << 1) | self.component(i, x)
        return Configuration(value, self.n)


def _bit(x, n: int, i: int):
    return (x >> (n - i)) & 1


def negation(n: int) -> BooleanMap:
    return BooleanMap(n, lambda i, x: _bit(x, n, i) ^ 1, "negation", flips=True)


def identity(n: int) -> BooleanMap:
    return BooleanMap(n, lambda i, x: _bit(x, n, i), "identity")


def rotation(n: int) -> BooleanMap:
    """Cyclic shift by one position: f(x)_i = x_{i-1}, f(x)_1 = x_n."""
    return BooleanMap(n, lambda i, x: _bit(x, n, (i - 2) % n + 1), "rotation")


def constant(n: int, value: int = 0) -> BooleanMap:
    return BooleanMap(n, lambda i, x: x * 0 + (value & 1), f"constant-{value & 1}")


@dataclass(frozen=True)
class SystemPoint:
    strategy: Strategy
    config: Configuration

    def __post_init__(self) -> None:
        if self.strategy.n != self.config.n:
            raise ValueError(f"strategy is over 1..{self.strategy.n} but config has {self.config.n} bits")


def _check_index(f: BooleanMap, i: int) -> None:
    if not 1 <= i <= f.n:
        raise IndexError(f"component index {i} outside 1..{f.n}")


def apply_F(f: BooleanMap, i: int, x: Configuration) -> Configuration:
    """Replace component i of x by f_i(x)."""
    _check_index(f, i)
    if x.n != f.n:
        raise ValueError(f"map is on {f.n} bits, configuration has {x.n}")
    shift = f.n - i
    new = f.component(i, x)
    return Configuration((x.value & ~(1 << shift)) | (new << shift), x.n)


def unapply_F(f: BooleanMap, i: int, y: Configuration) -> Configuration:
    """The unique x with apply_F(f, i, x) == y.

    Only component i can differ between x and y, so both candidates are
    tried.  Zero or two solutions mean the step is not a bijection.
    """
    _check_index(f, i)
    shift = f.n - i
    sols = []
    for b in (0, 1):
        cand = Configuration((y.value & ~(1 << shift)) | (b << shift), y.n)
        if f.component(i, cand) == y.bit(i):
            sols.append(cand)
    if len(sols) != 1:
        raise NotInvertibleError(
            f"step on component {i} of map {f.name!r} has {len(sols)} preimages of {y}"
        )
    return sols[0]


def step_G(f: BooleanMap, point: SystemPoint) -> SystemPoint:
    """G_f(S, x) = (shifted S, F_f(S head, x))."""
    if len(point.strategy) == 0:
        raise StrategyExhausted("cannot step with an empty strategy")
    head = point.strategy[0]
    rest = Strategy(point.strategy.indices[1:], point.strategy.n)
    return SystemPoint(rest, apply_F(f, head, point.config))


def iterate(f: BooleanMap, strategy: Strategy, x0: Configuration) -> Configuration:
    """Apply F_f once per strategy term, in order, and return the last state."""
    if strategy.n != f.n or x0.n != f.n:
        raise ValueError("map, strategy and configuration sizes differ")
    n = f.n
    if f.flips:
        # each step flips one bit, so only the parity of each index matters
        return Configuration(x0.value ^ strategy.flip_mask, n)
    x = x0
    for s in strategy.indices:
        x = apply_F(f, s, x)
    return x


def iterate_states(f: BooleanMap, strategy: Strategy, states: np.ndarray) -> np.ndarray:
    """Run the iteration on every packed state of ``states`` simultaneously."""
    states = np.array(states, dtype=np.int64)
    for s in strategy.indices:
        _check_index(f, s)
        shift = f.n - s
        new = np.asarray(f.rule(s, states), dtype=np.int64) & 1
        states = (states & ~np.int64(1 << shift)) | (new << shift)
    return states


def _all_states(n: int) -> np.ndarray:
    if n > MAX_ORACLE_N:
        raise ValueError(f"exhaustive oracle limited to n <= {MAX_ORACLE_N}, got {n}")
    return np.arange(1 << n, dtype=np.int64)


def _is_permutation(images: np.ndarray) -> bool:
    return np.unique(images).size == images.size


def check_bijective_step(f: BooleanMap, s: int) -> Tuple[bool, np.ndarray]:
    """Enumerate x -> F_f(s, x) over all of B^n.

    Returns whether it is a permutation, and the image table indexed by the
    packed state value.
    """
    _check_index(f, s)
    table = iterate_states(f, Strategy((s,), f.n), _all_states(f.n))
    return _is_permutation(table), table


def check_bijective_iteration(f: BooleanMap, strategy: Strategy) -> bool:
    table = iterate_states(f, strategy, _all_states(f.n))
    return _is_permutation(table)


def find_collision(table: np.ndarray) -> Optional[Tuple[int, int]]:
    """Two states with the same image, or None for a permutation."""
    seen = {}
    for x, y in enumerate(table.tolist()):
        if y in seen:
            return seen[y], x
        seen[y] = x
    return None
