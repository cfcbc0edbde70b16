"""Unit-vector realization of target bias vectors, and quadratic bound checks.

Any bias vector with sum of squares at most 1 can be realized by a
quantum-style vector system: give Bob's input y the basis vector v_y = e_y
and give Alice's string x the vector

    u_x = sum_y (-1)^(x.y) E_y e_y

in the same space (dimension = number of Bob inputs).  Then
(-1)^(x.y) u_x . v_y = E_y for every x, so the induced box wins the
inner-product round at (x, y) with bias exactly E_y, and
|u_x|^2 = sum_y E_y^2 <= 1 certifies feasibility.  The induced box

    P(a, b | x, y) = (1 + (-1)^(a + b + x.y) E_y) / 4

has uniform marginals and is no-signalling by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bitstrings import dot_mod2, unit_string
from .boxes import NoSignallingBox
from .distributions import PROB_ATOL, binary_entropy
from .errors import ArgumentContractError, DomainError, InfeasibleBiasError

FEASIBILITY_ATOL = 1e-9
SATURATION_ATOL = 1e-6
TWO_LN_2 = 2.0 * math.log(2.0)


@dataclass(frozen=True)
class GramSystem:
    """Vectors realizing a target bias vector.

    ``bob_inputs`` lists the integer-encoded strings y in column order:
    ``alice_vectors[x, j]`` is the component of u_x along e_{bob_inputs[j]},
    and ``bob_vectors`` is the identity (v_y are the basis vectors).
    """

    n: int
    bob_inputs: tuple[int, ...]
    target_biases: tuple[float, ...]
    alice_vectors: np.ndarray = field(repr=False)
    bob_vectors: np.ndarray = field(repr=False)

    def norms_squared(self) -> np.ndarray:
        return np.sum(self.alice_vectors ** 2, axis=1)

    def achieved_bias(self, x: int, j: int) -> float:
        """(-1)^(x.y_j) u_x . v_j, which should equal the target at j."""
        sign = -1.0 if dot_mod2(x, self.bob_inputs[j]) else 1.0
        return float(sign * np.dot(self.alice_vectors[x], self.bob_vectors[:, j]))


def gram_construct(
    target_biases: Sequence[float],
    n: int,
    bob_inputs: Sequence[int] | None = None,
) -> GramSystem:
    """Build the vector system for a feasible target bias vector.

    ``bob_inputs`` defaults to all 2**n strings when the target vector has
    2**n entries and to the n weight-1 strings when it has n entries (the
    access-game convention).  Raises InfeasibleBiasError when
    sum E_y^2 > 1 + 1e-9.
    """
    targets = tuple(float(v) for v in target_biases)
    if bob_inputs is None:
        if len(targets) == (1 << n):
            bob_inputs = tuple(range(1 << n))
        elif len(targets) == n:
            bob_inputs = tuple(unit_string(k, n) for k in range(1, n + 1))
        else:
            raise ArgumentContractError(
                f"{len(targets)} biases fit neither 2**n nor n Bob inputs; "
                "pass bob_inputs explicitly")
    else:
        bob_inputs = tuple(int(y) for y in bob_inputs)
        if len(bob_inputs) != len(targets):
            raise ArgumentContractError("bob_inputs and target_biases differ in length")
        if len(set(bob_inputs)) != len(bob_inputs):
            raise ArgumentContractError("bob_inputs repeats a string")
        if any(not 0 <= y < (1 << n) for y in bob_inputs):
            raise ArgumentContractError("bob_inputs contains a string outside n bits")

    total = sum(v * v for v in targets)
    if total > 1.0 + FEASIBILITY_ATOL:
        raise InfeasibleBiasError(
            f"sum of squared biases {total} exceeds 1; no vector system exists")

    d = len(bob_inputs)
    alice = np.empty((1 << n, d))
    for x in range(1 << n):
        for j, y in enumerate(bob_inputs):
            sign = -1.0 if dot_mod2(x, y) else 1.0
            alice[x, j] = sign * targets[j]
    alice.setflags(write=False)
    bob = np.eye(d)
    bob.setflags(write=False)
    return GramSystem(
        n=n,
        bob_inputs=bob_inputs,
        target_biases=targets,
        alice_vectors=alice,
        bob_vectors=bob,
    )


def gram_to_box(system: GramSystem) -> NoSignallingBox:
    """Box winning the inner-product round at (x, y_j) with bias exactly the
    target E_j, with uniform local marginals."""
    d = len(system.bob_inputs)
    table = np.empty((1 << system.n, d, 2, 2))
    for x in range(1 << system.n):
        for j, y in enumerate(system.bob_inputs):
            target_parity = dot_mod2(x, y)
            e = system.target_biases[j]
            for a in range(2):
                for b in range(2):
                    sign = 1.0 if (a ^ b) == target_parity else -1.0
                    table[x, j, a, b] = (1.0 + sign * e) / 4.0
    return NoSignallingBox(table)


# -- quadratic bound checks ---------------------------------------------------


@dataclass(frozen=True)
class BoundReport:
    """One bound comparison: lhs <= rhs with a saturation window of 1e-6."""

    kind: str
    lhs: float
    rhs: float
    status: str  # "holds" | "saturated" | "violated"

    def to_json_dict(self) -> dict:
        return {"kind": self.kind, "lhs": self.lhs, "rhs": self.rhs,
                "status": self.status}


def _classify(kind: str, lhs: float, rhs: float) -> BoundReport:
    if abs(lhs - rhs) < SATURATION_ATOL:
        status = "saturated"
    elif lhs > rhs:
        status = "violated"
    else:
        status = "holds"
    return BoundReport(kind=kind, lhs=float(lhs), rhs=float(rhs), status=status)


def information_quadratic_bound(biases: Sequence[float], m: int) -> BoundReport:
    """sum E_k^2 <= 2 m ln 2, the quadratic relaxation of the information
    bound for an m-bit message."""
    if m < 1:
        raise ArgumentContractError(f"need m >= 1, got {m}")
    lhs = sum(float(v) ** 2 for v in biases)
    return _classify("information-quadratic", lhs, m * TWO_LN_2)


def vector_quadratic_bound(biases: Sequence[float]) -> BoundReport:
    """sum E_y^2 <= 1, the vector-realizability bound on winning biases."""
    lhs = sum(float(v) ** 2 for v in biases)
    return _classify("vector-quadratic", lhs, 1.0)


def generalized_quadratic_bound(
    biases: Sequence[float], input_probs: Sequence[float]
) -> BoundReport:
    """sum E_y^2 <= 2**n sum_x p(x)^2 for a non-uniform Alice distribution,
    where the biases are E_y = sum_x p(x) E_xy."""
    p = np.asarray(input_probs, dtype=float)
    size = p.shape[0]
    n = size.bit_length() - 1
    if size != (1 << n):
        raise ArgumentContractError(f"input_probs length {size} is not a power of 2")
    if p.min() < 0.0 or abs(p.sum() - 1.0) > PROB_ATOL:
        raise ArgumentContractError("input_probs is not a distribution")
    lhs = sum(float(v) ** 2 for v in biases)
    rhs = float((1 << n) * np.sum(p ** 2))
    return _classify("generalized-quadratic", lhs, rhs)


def quadratic_bound_check(
    biases: Sequence[float],
    kind: str,
    m: int = 1,
    input_probs: Sequence[float] | None = None,
) -> BoundReport:
    """Dispatch on ``kind``: "information", "vector" or "generalized"."""
    if kind == "information":
        return information_quadratic_bound(biases, m)
    if kind == "vector":
        return vector_quadratic_bound(biases)
    if kind == "generalized":
        if input_probs is None:
            raise ArgumentContractError("generalized bound needs input_probs")
        return generalized_quadratic_bound(biases, input_probs)
    raise ArgumentContractError(f"unknown bound kind {kind!r}")


def binary_entropy_bias_inequality(p: float) -> float:
    """Slack of 1 - h(p) >= (2p - 1)^2 / (2 ln 2) on p in [1/2, 1].

    This is the pointwise inequality that turns per-target information into
    squared bias; its slack vanishes at p = 1/2 and reaches
    1 - 1/(2 ln 2) at p = 1.
    """
    if not 0.5 <= p <= 1.0:
        raise DomainError(f"inequality is stated on [1/2, 1], got {p}")
    gain = 1.0 - binary_entropy(p)
    bias = 2.0 * p - 1.0
    return gain - bias * bias / TWO_LN_2
