"""Bipartite no-signalling boxes with binary outputs.

A box is the conditional table P(a, b | x, y) for one round of a two-party
nonlocal resource: Alice feeds x and reads a, Bob feeds y and reads b, with
a, b in {0, 1} and the input alphabets arbitrary finite sets indexed from 0.
Tables are stored dense with shape (x_size, y_size, 2, 2).

No-signalling means each party's output marginal is independent of the other
party's input; :func:`check_no_signalling` measures the worst deviation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ArgumentContractError, BoxShapeError, DomainError
from .distributions import NEGATIVE_CLIP, PROB_ATOL

SIGNALLING_ATOL = 1e-9


@dataclass(frozen=True)
class NoSignallingBox:
    """Conditional table P(a, b | x, y), validated on construction.

    Construction checks normalization per input pair and nonnegativity; the
    no-signalling property itself is reported by :func:`check_no_signalling`
    rather than enforced, so that deliberately signalling tables can still be
    built and diagnosed in tests.
    """

    table: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        table = np.asarray(self.table, dtype=float)
        if table.ndim != 4 or table.shape[2:] != (2, 2):
            raise BoxShapeError(
                f"box table shape {table.shape}, expected (x_size, y_size, 2, 2)")
        if table.min() < -NEGATIVE_CLIP:
            raise BoxShapeError(f"negative box entry {table.min()}")
        table = table.copy()
        np.clip(table, 0.0, None, out=table)
        sums = table.sum(axis=(2, 3))
        if np.max(np.abs(sums - 1.0)) > PROB_ATOL:
            raise BoxShapeError("box outcomes do not sum to 1 for every input pair")
        table.setflags(write=False)
        object.__setattr__(self, "table", table)

    @property
    def x_size(self) -> int:
        return self.table.shape[0]

    @property
    def y_size(self) -> int:
        return self.table.shape[1]

    def to_json_dict(self) -> dict:
        return {
            "x_size": self.x_size,
            "y_size": self.y_size,
            "table": self.table.tolist(),
        }

    @staticmethod
    def from_json_dict(data: dict) -> "NoSignallingBox":
        table = np.asarray(data["table"], dtype=float)
        if table.shape[:2] != (data.get("x_size"), data.get("y_size")):
            raise BoxShapeError("box JSON sizes disagree with table shape")
        return NoSignallingBox(table)


@dataclass(frozen=True)
class SignallingReport:
    """Worst marginal deviation of each party's output across the other
    party's inputs, and whether both are below the 1e-9 gate."""

    alice_deviation: float
    bob_deviation: float
    passed: bool


@dataclass(frozen=True)
class BiasVector:
    """Per-input winning biases E = 2 P(win) - 1 of some game evaluation.

    ``labels`` identifies Bob's inputs: 1-based target indices k for the
    random-access game, integer-encoded strings y for the inner-product game.
    """

    values: tuple[float, ...]
    labels: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.values) != len(self.labels):
            raise ArgumentContractError("bias values and labels differ in length")

    def sum_of_squares(self) -> float:
        return float(sum(v * v for v in self.values))

    def mean(self) -> float:
        return float(np.mean(self.values)) if self.values else 0.0

    def to_json_list(self) -> list[float]:
        return [float(v) for v in self.values]


def isotropic_box(bias: float) -> NoSignallingBox:
    """Binary-input box winning the AND game with probability (1 + E)/2.

    P(a, b | x, y) = (1 + (-1)^(a + b + xy) E) / 4: uniform local marginals,
    and a + b = xy mod 2 holds with probability (1 + E)/2 for every input
    pair.  E = 1 is the extremal no-signalling box, E = 1/sqrt(2) the most a
    quantum system can do, E <= 1/2 the classical range.
    """
    if not -1.0 <= bias <= 1.0:
        raise DomainError(f"isotropic bias {bias} outside [-1, 1]")
    table = np.empty((2, 2, 2, 2))
    for x in range(2):
        for y in range(2):
            for a in range(2):
                for b in range(2):
                    sign = -1.0 if (a ^ b) != (x & y) else 1.0
                    table[x, y, a, b] = (1.0 + sign * bias) / 4.0
    return NoSignallingBox(table)


def pr_box() -> NoSignallingBox:
    """The extremal no-signalling box (isotropic with E = 1)."""
    return isotropic_box(1.0)


def local_deterministic_box(
    x_size: int,
    y_size: int,
    alice_fn: Callable[[int], int] | Sequence[int],
    bob_fn: Callable[[int], int] | Sequence[int],
) -> NoSignallingBox:
    """Product box with deterministic outputs a = f(x), b = g(y)."""
    f = _as_lookup(alice_fn, x_size, "alice_fn")
    g = _as_lookup(bob_fn, y_size, "bob_fn")
    table = np.zeros((x_size, y_size, 2, 2))
    for x in range(x_size):
        for y in range(y_size):
            table[x, y, f[x], g[y]] = 1.0
    return NoSignallingBox(table)


def _as_lookup(fn, size: int, what: str) -> list[int]:
    if callable(fn):
        out = [int(fn(i)) for i in range(size)]
    else:
        out = [int(v) for v in fn]
        if len(out) != size:
            raise ArgumentContractError(f"{what} table has length {len(out)}, expected {size}")
    if any(v not in (0, 1) for v in out):
        raise ArgumentContractError(f"{what} must output bits")
    return out


def check_no_signalling(box: NoSignallingBox) -> SignallingReport:
    """Worst-case marginal shift of either party across the other's inputs."""
    # P(a | x, y) should not depend on y; P(b | x, y) should not depend on x.
    alice = box.table.sum(axis=3)
    bob = box.table.sum(axis=2)
    alice_dev = float(np.max(alice.max(axis=1) - alice.min(axis=1)))
    bob_dev = float(np.max(bob.max(axis=0) - bob.min(axis=0)))
    return SignallingReport(
        alice_deviation=alice_dev,
        bob_deviation=bob_dev,
        passed=alice_dev <= SIGNALLING_ATOL and bob_dev <= SIGNALLING_ATOL,
    )


def mix(boxes: Sequence[NoSignallingBox], weights: Sequence[float]) -> NoSignallingBox:
    """Convex combination of same-shape boxes."""
    if len(boxes) != len(weights) or not boxes:
        raise ArgumentContractError("mix needs matching nonempty boxes and weights")
    shape = boxes[0].table.shape
    if any(b.table.shape != shape for b in boxes):
        raise BoxShapeError("mix requires identical box shapes")
    w = np.asarray(weights, dtype=float)
    if w.min() < 0.0 or abs(w.sum() - 1.0) > PROB_ATOL:
        raise ArgumentContractError(f"mix weights {weights} are not a distribution")
    table = sum(wi * b.table for wi, b in zip(w, boxes))
    return NoSignallingBox(table)


def correlator(
    box: NoSignallingBox,
    x: int,
    y: int,
    wins: Callable[[int, int], bool],
) -> float:
    """E = 2 P(win) - 1 at one input pair, for a caller-supplied win test.

    ``wins(a, b)`` decides each outcome; the caller closes over (x, y) when
    the winning condition depends on the inputs, e.g. a + b = xy mod 2.
    """
    if not (0 <= x < box.x_size and 0 <= y < box.y_size):
        raise ArgumentContractError(f"input pair ({x}, {y}) outside box alphabets")
    value = 0.0
    for a in range(2):
        for b in range(2):
            sign = 1.0 if wins(a, b) else -1.0
            value += sign * box.table[x, y, a, b]
    return float(value)
