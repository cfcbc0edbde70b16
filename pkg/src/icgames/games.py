"""The two guessing games and their exact evaluators.

Random-access game: Alice holds an n-bit string x, sends an m-bit message,
and Bob must output bit x_k for a target k he alone holds.  The figure of
merit is either the average success probability or the summed mutual
information I = sum_k I(x_k : guess_k), computed from the exact joint the
strategy induces.

Inner-product game: Alice holds x, Bob holds y (both n-bit strings), no
message is sent, and the parity of their outputs must equal the inner product
x . y mod 2.  Playing it through a box directly measures the box's per-input
winning biases E_y.

Both evaluators enumerate every input and every resource outcome; nothing is
sampled.  Reports carry the per-target joints so the entropic analysis can be
run on exactly the distribution the game produced.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bitstrings import bit_table, dot_mod2, hamming_weight, unit_string
from .boxes import BiasVector, NoSignallingBox, local_deterministic_box
from .distributions import (
    PROB_ATOL,
    JointDistribution,
    entropy_of_probs,
    mutual_information,
    shannon_entropy,
)
from .errors import (
    ArgumentContractError,
    DistributionError,
    ResourceLimitError,
    WiringError,
)
from .strategies import Strategy, transferred_box_strategy

DEFAULT_N_CAP = 8


def _as_distribution(probs, size: int, what: str) -> np.ndarray:
    p = np.asarray(probs, dtype=float)
    if p.shape != (size,):
        raise ArgumentContractError(f"{what} must have length {size}")
    if p.min() < 0.0 or abs(p.sum() - 1.0) > PROB_ATOL:
        raise DistributionError(f"{what} is not a probability distribution")
    p = p.copy()
    p.setflags(write=False)
    return p


@dataclass(frozen=True)
class RacGame:
    """Random-access game instance: string length, message budget and the
    input/target distributions (uniform unless given)."""

    n: int
    m: int
    input_probs: np.ndarray = field(default=None)  # over 2**n strings
    target_probs: np.ndarray = field(default=None)  # over targets 1..n

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ArgumentContractError(f"need n >= 1, got {self.n}")
        if not 1 <= self.m <= self.n:
            raise ArgumentContractError(f"need 1 <= m <= n, got m={self.m}")
        size = 1 << self.n
        p_x = (np.full(size, 1.0 / size) if self.input_probs is None
               else self.input_probs)
        p_k = (np.full(self.n, 1.0 / self.n) if self.target_probs is None
               else self.target_probs)
        object.__setattr__(self, "input_probs", _as_distribution(p_x, size, "input_probs"))
        object.__setattr__(self, "target_probs", _as_distribution(p_k, self.n, "target_probs"))

    def inputs_are_independent_bits(self, atol: float = 1e-9) -> bool:
        """True when the string distribution factorizes over the n bits."""
        table = self.input_probs.reshape((2,) * self.n)
        product = np.asarray(1.0)
        for axis in range(self.n):
            drop = tuple(i for i in range(self.n) if i != axis)
            product = np.multiply.outer(product, table.sum(axis=drop))
        return bool(np.max(np.abs(table - product)) <= atol)

    def inputs_are_uniform(self, atol: float = 1e-9) -> bool:
        return bool(np.max(np.abs(self.input_probs - self.input_probs[0])) <= atol)


@dataclass(frozen=True)
class InnerProductGame:
    """Inner-product game instance over n-bit strings with input
    distributions for both parties (uniform unless given)."""

    n: int
    x_probs: np.ndarray = field(default=None)
    y_probs: np.ndarray = field(default=None)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ArgumentContractError(f"need n >= 1, got {self.n}")
        size = 1 << self.n
        p_x = np.full(size, 1.0 / size) if self.x_probs is None else self.x_probs
        p_y = np.full(size, 1.0 / size) if self.y_probs is None else self.y_probs
        object.__setattr__(self, "x_probs", _as_distribution(p_x, size, "x_probs"))
        object.__setattr__(self, "y_probs", _as_distribution(p_y, size, "y_probs"))


def restrict_to_hamming_weight_one(game: InnerProductGame) -> InnerProductGame:
    """Same game with Bob's input uniform over the n weight-1 strings.

    The quadratic bias bound does not care about Bob's input distribution, so
    restricting y to the strings that probe single bits of x turns the
    inner-product game into the random-access game with the message treated
    as Alice's box output.
    """
    p_y = np.zeros(1 << game.n)
    for k in range(1, game.n + 1):
        p_y[unit_string(k, game.n)] = 1.0 / game.n
    return InnerProductGame(game.n, x_probs=game.x_probs, y_probs=p_y)


# Alias: the transfer construction is strategy wiring, defined with the other
# protocols; it is re-exported here because it is how boxes enter this game.
transfer_nonlocal_to_rac = transferred_box_strategy


def classical_saturator_box(n: int, alpha: int) -> NoSignallingBox:
    """Deterministic box a = alpha . x, b = 0: wins the inner-product game
    exactly on y = alpha, losing nothing on average elsewhere, so its bias
    vector is the unit vector at alpha."""
    if not 0 <= alpha < (1 << n):
        raise ArgumentContractError(f"alpha {alpha} is not an n-bit string")
    size = 1 << n
    return local_deterministic_box(
        size, size, lambda x: dot_mod2(alpha, x), lambda y: 0)


@dataclass(frozen=True)
class GameReport:
    """Everything one exact evaluation produced.

    For the random-access game, ``pair_joints[k-1]`` is the joint of
    (x_k, guess) and ``full_joints[k-1]`` the joint of all input bits, the
    shared-randomness component B (classical strategies only), the message
    and the guess; variable names are "x1".."xn", "B", "alpha", "beta".
    ``entropic_terms`` carries the named entropy combinations used by the
    information bound chain.  Inner-product reports fill only the bias and
    success fields.
    """

    kind: str
    n: int
    m: int
    success_probability: float
    biases: BiasVector
    per_target_success: tuple[float, ...]
    per_target_information: tuple[float, ...] | None = None
    information_bits: float | None = None
    pair_joints: tuple[JointDistribution, ...] | None = None
    full_joints: tuple[JointDistribution, ...] | None = None
    entropic_terms: tuple[tuple[str, float], ...] = ()
    classical: bool = False
    independent_input_bits: bool = True
    uniform_inputs: bool = True
    strategy_label: str = ""

    def terms(self) -> dict[str, float]:
        return dict(self.entropic_terms)

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "m": self.m,
            "strategy": self.strategy_label,
            "success_probability": self.success_probability,
            "bias_per_k": self.biases.to_json_list(),
            "bias_labels": list(self.biases.labels),
            "per_target_success": list(self.per_target_success),
            "I_bits": self.information_bits,
            "entropic_terms": [[name, value] for name, value in self.entropic_terms],
            "classical": self.classical,
        }

    def csv_rows(self) -> list[list]:
        """Per-target rows: (k, E_k, I_k) for the access game, (y, E_y) for
        the inner-product game."""
        if self.kind == "rac":
            return [
                ["k", "E_k", "I_k_bits"],
                *[
                    [k, e, i]
                    for k, e, i in zip(
                        self.biases.labels, self.biases.values,
                        self.per_target_information)
                ],
            ]
        return [
            ["y", "E_y"],
            *[[y, e] for y, e in zip(self.biases.labels, self.biases.values)],
        ]


def _chain_terms(
    pair_joints: list[JointDistribution],
    reference_joint: JointDistribution,
    x_names: tuple[str, ...],
    classical: bool,
) -> tuple[tuple[str, float], ...]:
    """Entropy combinations for the information bound chain.

    The always-computable endpoints need only the observable variables; the
    interior lines additionally need the shared-randomness variable B, which
    exists in the joint exactly when the strategy is classical.
    """
    sum_guess_residual = sum(
        shannon_entropy(j, j.names) - shannon_entropy(j, ("beta",))
        for j in pair_joints
    )
    h_x = shannon_entropy(reference_joint, x_names)
    h_alpha = shannon_entropy(reference_joint, ("alpha",))
    terms: list[tuple[str, float]] = [
        ("sum_H(xk|beta_k)", float(sum_guess_residual)),
        ("H(x)", float(h_x)),
        ("H(alpha)", float(h_alpha)),
    ]
    if classical:
        cond = ("alpha", "B")
        h_x_ab = (
            shannon_entropy(reference_joint, x_names + cond)
            - shannon_entropy(reference_joint, cond)
        )
        sum_single = 0.0
        for k in range(1, len(pair_joints) + 1):
            sum_single += (
                shannon_entropy(reference_joint, (f"x{k}",) + cond)
                - shannon_entropy(reference_joint, cond)
            )
        h_xab = shannon_entropy(reference_joint, x_names + cond)
        h_ab = shannon_entropy(reference_joint, cond)
        h_b = shannon_entropy(reference_joint, ("B",))
        h_xb = shannon_entropy(reference_joint, x_names + ("B",))
        terms.extend([
            ("sum_H(xk|alpha,B)", float(sum_single)),
            ("H(x|alpha,B)", float(h_x_ab)),
            ("H(x,alpha,B)-H(alpha,B)", float(h_xab - h_ab)),
            ("H(x,alpha,B)-H(B)-H(alpha)", float(h_xab - h_b - h_alpha)),
            ("H(alpha|x,B)+H(x)-H(alpha)", float(h_xab - h_xb + h_x - h_alpha)),
        ])
    terms.append(("H(x)-H(alpha)", float(h_x - h_alpha)))
    return tuple(terms)


def evaluate_rac(
    game: RacGame, strategy: Strategy, n_cap: int = DEFAULT_N_CAP
) -> GameReport:
    """Exact evaluation of a strategy on the random-access game.

    Enumerates all 2**n inputs and, inside the strategy, all resource
    outcomes.  Fills success, per-target biases, per-target and summed mutual
    information, the per-target joints and the entropic terms.
    """
    if game.n > n_cap:
        raise ResourceLimitError(
            f"n={game.n} exceeds the enumeration cap {n_cap}; raise n_cap to force")
    if strategy.n != game.n or strategy.m != game.m:
        raise WiringError(
            f"strategy is for n={strategy.n}, m={strategy.m}; "
            f"game has n={game.n}, m={game.m}")

    n, m = game.n, game.m
    components = strategy.classical_components()
    classical = components is not None
    x_names = tuple(f"x{k}" for k in range(1, n + 1))
    if classical:
        names = x_names + ("B", "alpha", "beta")
        cards = (2,) * n + (len(components), 1 << m, 2)
    else:
        names = x_names + ("alpha", "beta")
        cards = (2,) * n + (1 << m, 2)

    tables = [np.zeros(cards) for _ in range(n)]
    bits_of = bit_table(n)
    for x in range(1 << n):
        w = float(game.input_probs[x])
        if w == 0.0:
            continue
        bits = tuple(int(v) for v in bits_of[x])
        if classical:
            for r, (wr, det) in enumerate(components):
                alpha = int(det.message_map[x])
                for k in range(n):
                    beta = int(det.guess_map[alpha, k])
                    tables[k][bits + (r, alpha, beta)] += w * wr
        else:
            conditional = strategy.respond(x)
            for k in range(n):
                tables[k][bits] += w * conditional[k]

    full_joints = [JointDistribution(names, cards, t) for t in tables]
    pair_joints = [
        full_joints[k].marginal((f"x{k + 1}", "beta")) for k in range(n)
    ]

    per_success = []
    per_info = []
    for k in range(n):
        table = pair_joints[k].table
        per_success.append(float(table[0, 0] + table[1, 1]))
        per_info.append(mutual_information(pair_joints[k], (f"x{k + 1}",), ("beta",)))
    biases = tuple(2.0 * p - 1.0 for p in per_success)
    success = float(np.dot(game.target_probs, per_success))
    information = float(sum(per_info))
    terms = _chain_terms(pair_joints, full_joints[0], x_names, classical)

    return GameReport(
        kind="rac",
        n=n,
        m=m,
        success_probability=success,
        biases=BiasVector(values=biases, labels=tuple(range(1, n + 1))),
        per_target_success=tuple(per_success),
        per_target_information=tuple(per_info),
        information_bits=information,
        pair_joints=tuple(pair_joints),
        full_joints=tuple(full_joints),
        entropic_terms=terms,
        classical=classical,
        independent_input_bits=game.inputs_are_independent_bits(),
        uniform_inputs=game.inputs_are_uniform(),
        strategy_label=strategy.describe(),
    )


def _box_y_index(box: NoSignallingBox, n: int, y: int) -> int:
    """Map a game string y onto the box's Bob-input alphabet."""
    if box.y_size == (1 << n):
        return y
    if box.y_size == n:
        if hamming_weight(y) != 1:
            raise WiringError(
                f"box only answers weight-1 strings, game asked for y={y}")
        # unit_string(k, n) == 1 << (n - k); invert to the 0-based index k - 1.
        return n - int(y).bit_length()
    raise WiringError(
        f"box has {box.y_size} Bob inputs; game needs {1 << n} or weight-1 ({n})")


def evaluate_inner_product(
    game: InnerProductGame, box: NoSignallingBox, n_cap: int = DEFAULT_N_CAP
) -> GameReport:
    """Exact evaluation of a box on the inner-product game.

    For every y in the support of Bob's distribution the per-input bias is
    E_y = sum_x p(x) E_xy with E_xy the winning correlator at (x, y); success
    is (1 + sum_y q(y) E_y) / 2.  The bias vector is reported over the support
    of y in increasing encoding order.
    """
    if game.n > n_cap:
        raise ResourceLimitError(
            f"n={game.n} exceeds the enumeration cap {n_cap}; raise n_cap to force")
    if box.x_size != (1 << game.n):
        raise WiringError(
            f"box has {box.x_size} Alice inputs, the game needs {1 << game.n}")

    support = [y for y in range(1 << game.n) if game.y_probs[y] > 0.0]
    table = box.table
    corr = table[:, :, 0, 0] + table[:, :, 1, 1] - table[:, :, 0, 1] - table[:, :, 1, 0]
    biases = []
    success = 0.0
    for y in support:
        column = corr[:, _box_y_index(box, game.n, y)]
        signs = np.array([1.0 if dot_mod2(x, y) == 0 else -1.0
                          for x in range(1 << game.n)])
        e_y = float(np.dot(game.x_probs, signs * column))
        biases.append(e_y)
        success += float(game.y_probs[y]) * (1.0 + e_y) / 2.0

    per_success = tuple((1.0 + e) / 2.0 for e in biases)
    return GameReport(
        kind="inner-product",
        n=game.n,
        m=0,
        success_probability=float(success),
        biases=BiasVector(values=tuple(biases), labels=tuple(support)),
        per_target_success=per_success,
        independent_input_bits=True,
        uniform_inputs=bool(np.max(np.abs(game.x_probs - game.x_probs[0])) <= 1e-9),
        strategy_label="box",
    )
