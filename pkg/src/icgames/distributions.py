"""Finite joint distributions with named variables, and Shannon quantities.

Conventions
-----------
* A :class:`JointDistribution` stores a dense table over an ordered list of
  named variables; entry order is row major over that variable order.
* All entropies are in bits (base-2 logarithms) and 0*log(0) is taken as 0.
* Marginalization, conditioning and channel application address variables by
  name.  Name-based addressing is deliberate: the multi-term entropy chains in
  :mod:`icgames.analysis` mix many small marginals of one large joint, and
  positional indexing is where such code usually goes wrong.
* Random tables used by the property suites are drawn by normalizing i.i.d.
  uniform entries of a seeded generator, so every test run is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ArgumentContractError,
    DistributionError,
    DomainError,
    StochasticMatrixError,
    UnknownVariableError,
)

PROB_ATOL = 1e-9
NEGATIVE_CLIP = 1e-12


def entropy_of_probs(probs: np.ndarray) -> float:
    """Shannon entropy in bits of a bare probability vector or table."""
    p = np.asarray(probs, dtype=float).ravel()
    nz = p[p > 0.0]
    return float(-np.sum(nz * np.log2(nz)))


def binary_entropy(p: float) -> float:
    """Entropy in bits of a {p, 1-p} coin.

    Raises DomainError outside [0, 1].  Exact 0.0 at both endpoints.
    """
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"binary_entropy argument {p} outside [0, 1]")
    if p == 0.0 or p == 1.0:
        return 0.0
    q = 1.0 - p
    return float(-p * np.log2(p) - q * np.log2(q))


@dataclass(frozen=True)
class EntropyReport:
    """One named entropic quantity: a value in bits plus the variable sets
    it was computed from (one frozenset of names per operand)."""

    name: str
    value: float
    operands: tuple[frozenset[str], ...] = ()


@dataclass(frozen=True)
class JointDistribution:
    """Dense joint distribution over named finite variables.

    Parameters
    ----------
    names : tuple of str
        Variable names, order fixes the table axes.
    cards : tuple of int
        Cardinality of each variable, aligned with ``names``.
    table : np.ndarray
        Probabilities with ``shape == cards``.  May be passed flat; it is
        reshaped row major.  Entries must be nonnegative and sum to 1 within
        1e-9.  Stray negatives above -1e-12 (mixture round-off) are clipped.
    """

    names: tuple[str, ...]
    cards: tuple[int, ...]
    table: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        names = tuple(self.names)
        cards = tuple(int(c) for c in self.cards)
        if len(names) != len(cards):
            raise ArgumentContractError("names and cards differ in length")
        if len(set(names)) != len(names):
            raise ArgumentContractError(f"duplicate variable names in {names}")
        if any(c < 1 for c in cards):
            raise ArgumentContractError("every cardinality must be >= 1")
        table = np.asarray(self.table, dtype=float)
        expected = int(np.prod(cards))
        if table.size != expected:
            raise DistributionError(
                f"table has {table.size} entries, variables need {expected}")
        table = table.reshape(cards).copy()
        if table.min(initial=0.0) < -NEGATIVE_CLIP:
            raise DistributionError(
                f"negative probability {table.min()} in table")
        np.clip(table, 0.0, None, out=table)
        total = float(table.sum())
        if abs(total - 1.0) > PROB_ATOL:
            raise DistributionError(f"table sums to {total}, expected 1")
        table.setflags(write=False)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "cards", cards)
        object.__setattr__(self, "table", table)

    # -- variable addressing ------------------------------------------------

    def axes_of(self, names: tuple[str, ...] | list[str]) -> tuple[int, ...]:
        try:
            return tuple(self.names.index(n) for n in names)
        except ValueError as exc:
            missing = [n for n in names if n not in self.names]
            raise UnknownVariableError(f"unknown variable(s) {missing}") from exc

    def card_of(self, name: str) -> int:
        return self.cards[self.axes_of((name,))[0]]

    def marginal(self, keep: tuple[str, ...] | list[str]) -> "JointDistribution":
        """Marginal over ``keep``, in this distribution's variable order."""
        keep = tuple(keep)
        if len(set(keep)) != len(keep):
            raise ArgumentContractError(f"duplicate names in marginal: {keep}")
        self.axes_of(keep)
        ordered = tuple(n for n in self.names if n in keep)
        drop = tuple(i for i, n in enumerate(self.names) if n not in keep)
        sub = self.table.sum(axis=drop) if drop else self.table
        cards = tuple(self.cards[self.names.index(n)] for n in ordered)
        return JointDistribution(ordered, cards, sub)

    # -- serialization ------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "variables": [
                {"name": n, "cardinality": c}
                for n, c in zip(self.names, self.cards)
            ],
            "table": [float(v) for v in self.table.ravel()],
        }

    @staticmethod
    def from_json_dict(data: dict) -> "JointDistribution":
        try:
            names = tuple(v["name"] for v in data["variables"])
            cards = tuple(int(v["cardinality"]) for v in data["variables"])
            table = np.asarray(data["table"], dtype=float)
        except (KeyError, TypeError) as exc:
            raise DistributionError(f"bad distribution JSON: {exc}") from exc
        return JointDistribution(names, cards, table)


def product_distribution(*parts: JointDistribution) -> JointDistribution:
    """Independent product of several joints (disjoint variable names)."""
    names: tuple[str, ...] = ()
    cards: tuple[int, ...] = ()
    table = np.asarray(1.0)
    for part in parts:
        if set(part.names) & set(names):
            raise ArgumentContractError("product parts share variable names")
        table = np.multiply.outer(table, part.table)
        names += part.names
        cards += part.cards
    return JointDistribution(names, cards, table)


def uniform_bit(name: str) -> JointDistribution:
    return JointDistribution((name,), (2,), np.array([0.5, 0.5]))


# -- entropies --------------------------------------------------------------


def shannon_entropy(dist: JointDistribution, names: tuple[str, ...] | list[str]) -> float:
    """H of the marginal on ``names``, in bits."""
    if not names:
        raise ArgumentContractError("shannon_entropy needs at least one variable")
    return entropy_of_probs(dist.marginal(tuple(names)).table)


def conditional_entropy(
    dist: JointDistribution,
    target: tuple[str, ...] | list[str],
    given: tuple[str, ...] | list[str],
) -> float:
    """H(target | given) = H(target, given) - H(given)."""
    target = tuple(target)
    given = tuple(given)
    if set(target) & set(given):
        raise ArgumentContractError("conditional_entropy variable sets overlap")
    if not given:
        return shannon_entropy(dist, target)
    return shannon_entropy(dist, target + given) - shannon_entropy(dist, given)


def mutual_information(
    dist: JointDistribution,
    left: tuple[str, ...] | list[str],
    right: tuple[str, ...] | list[str],
) -> float:
    """I(left : right) = H(left) + H(right) - H(left, right)."""
    left = tuple(left)
    right = tuple(right)
    if set(left) & set(right):
        raise ArgumentContractError("mutual_information variable sets overlap")
    return (
        shannon_entropy(dist, left)
        + shannon_entropy(dist, right)
        - shannon_entropy(dist, left + right)
    )


# -- inequality suite -------------------------------------------------------


def entropy_inequality_suite(
    dist: JointDistribution,
    x_vars: tuple[str, ...] | list[str],
    y_vars: tuple[str, ...] | list[str],
    z_vars: tuple[str, ...] | list[str],
) -> list[EntropyReport]:
    """Slack of the four basic entropy inequalities on a (X, Y, Z) split.

    Returned values are slacks (lhs of "<= 0" rearranged so that every healthy
    slack is >= 0):

    * ``subadditivity``              H(X) + H(Y) - H(XY)
    * ``strong_subadditivity``       H(XY) + H(YZ) - H(XYZ) - H(Y)
    * ``iterated_conditional_subadditivity``
                                     sum_i H(Xi|Y) - H(X|Y), Xi single vars
    * ``conditional_entropy_positivity``  H(X|Y)

    The three sets must be disjoint and nonempty.
    """
    x_vars, y_vars, z_vars = tuple(x_vars), tuple(y_vars), tuple(z_vars)
    if not x_vars or not y_vars or not z_vars:
        raise ArgumentContractError("suite needs nonempty X, Y and Z")
    sets = (set(x_vars), set(y_vars), set(z_vars))
    if sets[0] & sets[1] or sets[0] & sets[2] or sets[1] & sets[2]:
        raise ArgumentContractError("suite variable sets overlap")

    h = lambda *groups: shannon_entropy(dist, sum(groups, ()))
    ops = (frozenset(x_vars), frozenset(y_vars), frozenset(z_vars))

    sub = h(x_vars) + h(y_vars) - h(x_vars, y_vars)
    ssa = (
        h(x_vars, y_vars) + h(y_vars, z_vars)
        - h(x_vars, y_vars, z_vars) - h(y_vars)
    )
    iterated = (
        sum(conditional_entropy(dist, (v,), y_vars) for v in x_vars)
        - conditional_entropy(dist, x_vars, y_vars)
    )
    positivity = conditional_entropy(dist, x_vars, y_vars)

    return [
        EntropyReport("subadditivity", sub, ops),
        EntropyReport("strong_subadditivity", ssa, ops),
        EntropyReport("iterated_conditional_subadditivity", iterated, ops),
        EntropyReport("conditional_entropy_positivity", positivity, ops),
    ]


def mutual_information_chain_gap(
    dist: JointDistribution,
    x_vars: tuple[str, ...] | list[str],
    y_vars: tuple[str, ...] | list[str],
    z_vars: tuple[str, ...] | list[str],
) -> float:
    """(I(X:YZ) - I(X:Z)) - (I(XZ:Y) - I(Z:Y)); identically zero.

    Both sides equal the conditional mutual information I(X:Y|Z), so the gap
    is a pure-arithmetic identity check used by the property suite.
    """
    x_vars, y_vars, z_vars = tuple(x_vars), tuple(y_vars), tuple(z_vars)
    lhs = (
        mutual_information(dist, x_vars, y_vars + z_vars)
        - mutual_information(dist, x_vars, z_vars)
    )
    rhs = (
        mutual_information(dist, x_vars + z_vars, y_vars)
        - mutual_information(dist, z_vars, y_vars)
    )
    return lhs - rhs


# -- channels ---------------------------------------------------------------


def apply_channel(
    dist: JointDistribution, name: str, matrix: np.ndarray
) -> JointDistribution:
    """Push one variable through a column-stochastic channel.

    ``matrix[i, j]`` is P(out = i | in = j); column sums must be 1 within
    1e-9 and the column count must match the variable's cardinality.  The
    output cardinality (row count) may differ.  The transformed variable keeps
    its name and position.
    """
    axis = dist.axes_of((name,))[0]
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2:
        raise StochasticMatrixError("channel matrix must be 2-dimensional")
    out_card, in_card = matrix.shape
    if in_card != dist.cards[axis]:
        raise StochasticMatrixError(
            f"channel expects input cardinality {in_card}, "
            f"variable {name!r} has {dist.cards[axis]}")
    if matrix.min(initial=0.0) < -NEGATIVE_CLIP:
        raise StochasticMatrixError("channel matrix has negative entries")
    col_sums = matrix.sum(axis=0)
    if np.max(np.abs(col_sums - 1.0)) > PROB_ATOL:
        raise StochasticMatrixError(
            f"channel columns sum to {col_sums}, expected all 1")

    table = np.tensordot(matrix, dist.table, axes=([1], [axis]))
    # tensordot puts the new axis first; rotate it back into place.
    table = np.moveaxis(table, 0, axis)
    cards = list(dist.cards)
    cards[axis] = out_card
    return JointDistribution(dist.names, tuple(cards), table)


def discard_slack(
    before: JointDistribution,
    after: JointDistribution,
    processed: tuple[str, ...] | list[str],
    rest: tuple[str, ...] | list[str],
) -> float:
    """Data-processing slack of a channel on ``processed``:
    (H_after(rest, processed) - H_before(rest, processed))
    - (H_after(processed) - H_before(processed)), which is >= 0 for classical
    channels (local processing cannot raise the joint entropy by less than it
    raises the processed part)."""
    processed, rest = tuple(processed), tuple(rest)
    d_joint = (
        shannon_entropy(after, rest + processed)
        - shannon_entropy(before, rest + processed)
    )
    d_local = shannon_entropy(after, processed) - shannon_entropy(before, processed)
    return d_joint - d_local


# -- random generators for the property suites ------------------------------


def random_joint(
    rng: np.random.Generator,
    cards: tuple[int, ...],
    names: tuple[str, ...] | None = None,
) -> JointDistribution:
    """Joint with i.i.d. uniform entries normalized to sum 1."""
    if names is None:
        names = tuple(f"v{i}" for i in range(len(cards)))
    raw = rng.uniform(size=tuple(cards)) + 1e-12
    return JointDistribution(names, tuple(cards), raw / raw.sum())


def random_channel(
    rng: np.random.Generator, out_card: int, in_card: int
) -> np.ndarray:
    """Column-stochastic matrix with i.i.d. uniform columns normalized."""
    raw = rng.uniform(size=(out_card, in_card)) + 1e-12
    return raw / raw.sum(axis=0, keepdims=True)
