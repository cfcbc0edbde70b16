"""Strategies for the random-access guessing game.

A strategy tells Alice, who holds an n-bit string x, how to produce an m-bit
message, and tells Bob, who holds a target index k and the message, how to
guess the bit x_k.  The two may share classical randomness and any number of
independent no-signalling boxes; Bob's box inputs may depend on k and on his
earlier box outputs but never on the message (message-dependent box use is a
different, larger strategy class and is out of scope here).

Every strategy exposes its exact conditional behavior
``respond(x)[k-1, alpha, beta] = P(message=alpha, guess=beta | x, k)``
so game evaluation is exact enumeration, never sampling.  Box strategies
compute it by summing over every combination of box outcomes; classical
strategies expose in addition their decomposition into deterministic maps,
which is what materializes the shared-randomness variable in the entropic
accounting of :mod:`icgames.analysis`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Callable, Sequence

import numpy as np

from .bitstrings import bit_table, bits_to_int, int_to_bits, unit_string
from .boxes import NoSignallingBox, isotropic_box
from .distributions import PROB_ATOL, entropy_of_probs
from .errors import (
    ArgumentContractError,
    DomainError,
    ResourceLimitError,
    SpecFormatError,
    WiringError,
)

MAX_ENUMERATED_BOXES = 12
MAX_ORACLE_STRATEGIES = 1 << 20


class Strategy:
    """Base interface: exact conditional response tables plus metadata."""

    n: int
    m: int

    def respond(self, x: int) -> np.ndarray:
        """Array of shape (n, 2**m, 2): P(alpha, beta | x, k) for k = 1..n."""
        raise NotImplementedError

    def classical_components(self) -> tuple[tuple[float, "DeterministicStrategy"], ...] | None:
        """Decomposition into weighted deterministic maps, if one exists."""
        return None

    def describe(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class DeterministicStrategy(Strategy):
    """Deterministic message map f: x -> alpha and guess map g: (alpha, k) -> bit.

    ``message_map`` has shape (2**n,) with values in range(2**m);
    ``guess_map`` has shape (2**m, n) with bit values.
    """

    n: int
    m: int
    message_map: np.ndarray
    guess_map: np.ndarray
    label: str = "classical"

    def __post_init__(self) -> None:
        f = np.asarray(self.message_map, dtype=np.int64)
        g = np.asarray(self.guess_map, dtype=np.int64)
        if f.shape != (1 << self.n,):
            raise ArgumentContractError(
                f"message map shape {f.shape}, expected ({1 << self.n},)")
        if g.shape != (1 << self.m, self.n):
            raise ArgumentContractError(
                f"guess map shape {g.shape}, expected ({1 << self.m}, {self.n})")
        if f.min() < 0 or f.max() >= (1 << self.m):
            raise ArgumentContractError("message map value outside message alphabet")
        if g.min() < 0 or g.max() > 1:
            raise ArgumentContractError("guess map must produce bits")
        f.setflags(write=False)
        g.setflags(write=False)
        object.__setattr__(self, "message_map", f)
        object.__setattr__(self, "guess_map", g)

    def respond(self, x: int) -> np.ndarray:
        out = np.zeros((self.n, 1 << self.m, 2))
        alpha = int(self.message_map[x])
        for k in range(self.n):
            out[k, alpha, int(self.guess_map[alpha, k])] = 1.0
        return out

    def classical_components(self):
        return ((1.0, self),)

    def describe(self) -> str:
        return self.label


class MixtureStrategy(Strategy):
    """Shared-randomness mixture: run strategy i with probability w_i.

    The conditional response is the weighted average of the children's
    responses, which is exactly how shared randomness acts on the joint
    behavior; per-target information is computed from this averaged joint,
    never averaged across children.
    """

    def __init__(self, parts: Sequence[Strategy], weights: Sequence[float]):
        if len(parts) != len(weights) or not parts:
            raise ArgumentContractError("mixture needs matching nonempty parts and weights")
        n, m = parts[0].n, parts[0].m
        if any(p.n != n or p.m != m for p in parts):
            raise ArgumentContractError("mixture parts disagree on n or m")
        w = np.asarray(weights, dtype=float)
        if w.min() < 0.0 or abs(w.sum() - 1.0) > PROB_ATOL:
            raise ArgumentContractError(f"mixture weights {weights} are not a distribution")
        self.n = n
        self.m = m
        self.parts = tuple(parts)
        self.weights = tuple(float(v) for v in w)

    def respond(self, x: int) -> np.ndarray:
        out = np.zeros((self.n, 1 << self.m, 2))
        for w, part in zip(self.weights, self.parts):
            out += w * part.respond(x)
        return out

    def classical_components(self):
        flat: list[tuple[float, DeterministicStrategy]] = []
        for w, part in zip(self.weights, self.parts):
            inner = part.classical_components()
            if inner is None:
                return None
            flat.extend((w * wi, det) for wi, det in inner)
        return tuple(flat)

    def describe(self) -> str:
        inner = ";".join(f"{p.describe()},{w:g}" for p, w in zip(self.parts, self.weights))
        return f"mix:{inner}"


class BoxProtocolStrategy(Strategy):
    """One-bit-message protocol over independent no-signalling boxes.

    Alice feeds every box in a fixed order; her input to box i may depend on
    x and on her outputs from boxes 0..i-1 (``alice_wiring`` receives the full
    outcome vector but must only read earlier entries).  Bob queries the boxes
    listed by ``bob_plan(k)`` with inputs fixed by k, and always guesses
    beta = alpha XOR (parity of his box outputs), which is the decoding used
    by every protocol in this package.

    ``respond`` sums over all 2**(number of boxes) outcome vectors of Alice
    and all outcome vectors of Bob's queried boxes, weighting by the product
    of per-box conditional probabilities; boxes Bob does not touch contribute
    Alice's output marginal (well defined because the boxes are no-signalling).
    """

    def __init__(
        self,
        n: int,
        boxes: Sequence[NoSignallingBox],
        alice_wiring: Callable[[tuple[int, ...], tuple[int, ...]], tuple[tuple[int, ...], int]],
        bob_plan: Callable[[int], tuple[tuple[int, int], ...]],
        label: str = "box-protocol",
    ):
        if not boxes:
            raise WiringError("box protocol needs at least one box")
        if len(boxes) > MAX_ENUMERATED_BOXES:
            raise ResourceLimitError(
                f"{len(boxes)} boxes exceeds the enumeration cap of {MAX_ENUMERATED_BOXES}")
        self.n = n
        self.m = 1
        self.boxes = tuple(boxes)
        self.alice_wiring = alice_wiring
        self.label = label
        nb = len(self.boxes)
        self._a_vectors = bit_table(nb)
        # Alice's output marginal per box; any fixed y gives the same column
        # when the box is no-signalling.
        self._marginals = [b.table[:, 0, :, :].sum(axis=2) for b in self.boxes]
        self._plans = []
        for k in range(1, n + 1):
            plan = tuple((int(i), int(y)) for i, y in bob_plan(k))
            for i, y in plan:
                if not 0 <= i < nb:
                    raise WiringError(f"bob_plan({k}) names box {i}, have {nb}")
                if not 0 <= y < self.boxes[i].y_size:
                    raise WiringError(f"bob_plan({k}) feeds box {i} input {y}")
            if len({i for i, _ in plan}) != len(plan):
                raise WiringError(f"bob_plan({k}) queries a box twice")
            self._plans.append(plan)

    def respond(self, x: int) -> np.ndarray:
        nb = len(self.boxes)
        bits = int_to_bits(x, self.n)
        n_avec = 1 << nb
        inputs = np.empty((n_avec, nb), dtype=np.int64)
        alphas = np.empty(n_avec, dtype=np.int64)
        for row in range(n_avec):
            a_vec = tuple(int(v) for v in self._a_vectors[row])
            box_inputs, alpha = self.alice_wiring(bits, a_vec)
            inputs[row] = box_inputs
            alphas[row] = alpha
        for i, box in enumerate(self.boxes):
            if inputs[:, i].min() < 0 or inputs[:, i].max() >= box.x_size:
                raise WiringError(f"alice_wiring feeds box {i} an input outside its alphabet")

        marg = np.empty((n_avec, nb))
        for i in range(nb):
            marg[:, i] = self._marginals[i][inputs[:, i], self._a_vectors[:, i]]

        out = np.zeros((self.n, 2, 2))
        for k0, plan in enumerate(self._plans):
            on_path = [i for i, _ in plan]
            off_path = [i for i in range(nb) if i not in on_path]
            weight = np.prod(marg[:, off_path], axis=1) if off_path else np.ones(n_avec)
            depth = len(plan)
            b_vectors = bit_table(depth)
            w = np.repeat(weight[:, None], 1 << depth, axis=1)
            for j, (i, y) in enumerate(plan):
                slab = self.boxes[i].table[:, y, :, :]
                per_a = slab[inputs[:, i], self._a_vectors[:, i], :]
                w = w * per_a[:, b_vectors[:, j]]
            parity = b_vectors.sum(axis=1) & 1
            betas = alphas[:, None] ^ parity[None, :]
            cells = (alphas[:, None] << 1) | betas
            out[k0] = np.bincount(
                cells.ravel(), weights=w.ravel(), minlength=4).reshape(2, 2)
        return out

    def describe(self) -> str:
        return self.label


# -- named constructions -----------------------------------------------------


def mixture_strategy(parts: Sequence[Strategy], weights: Sequence[float]) -> MixtureStrategy:
    """Shared-randomness mixture of same-shape strategies."""
    return MixtureStrategy(parts, weights)


def send_first_m_strategy(n: int, m: int) -> DeterministicStrategy:
    """Alice sends x_1..x_m verbatim; Bob reads bit k of the message when
    k <= m and guesses 0 otherwise."""
    if not 1 <= m <= n:
        raise ArgumentContractError(f"need 1 <= m <= n, got m={m}, n={n}")
    f = np.arange(1 << n, dtype=np.int64) >> (n - m)
    g = np.zeros((1 << m, n), dtype=np.int64)
    for alpha in range(1 << m):
        for k in range(1, m + 1):
            g[alpha, k - 1] = (alpha >> (m - k)) & 1
    return DeterministicStrategy(n, m, f, g, label=f"send-first:{m}")


def send_bit_strategy(n: int, position: int) -> DeterministicStrategy:
    """One-bit message: Alice sends x at ``position`` (1-based), Bob echoes it."""
    if not 1 <= position <= n:
        raise ArgumentContractError(f"bit position {position} outside 1..{n}")
    f = (np.arange(1 << n, dtype=np.int64) >> (n - position)) & 1
    g = np.tile(np.arange(2, dtype=np.int64)[:, None], (1, n))
    return DeterministicStrategy(n, 1, f, g, label=f"send-bit:{position}")


def majority_vote_strategy(n: int) -> DeterministicStrategy:
    """Alice sends the majority bit of x (ties resolved to x_1), Bob echoes it."""
    values = np.arange(1 << n, dtype=np.int64)
    weights = bit_table(n).sum(axis=1)
    first_bits = values >> (n - 1)
    f = np.where(
        2 * weights > n, 1,
        np.where(2 * weights < n, 0, first_bits),
    ).astype(np.int64)
    g = np.tile(np.arange(2, dtype=np.int64)[:, None], (1, n))
    return DeterministicStrategy(n, 1, f, g, label="majority")


def explicit_classical_strategy(
    n: int,
    m: int,
    message_map: Sequence[int],
    guess_map: Sequence[Sequence[int]] | Callable[[int, int], int],
    label: str = "classical",
) -> DeterministicStrategy:
    """Wrap explicit lookup tables; ``guess_map`` may be a callable (alpha, k) -> bit."""
    if callable(guess_map):
        g = np.array(
            [[guess_map(alpha, k) for k in range(1, n + 1)] for alpha in range(1 << m)],
            dtype=np.int64)
    else:
        g = np.asarray(guess_map, dtype=np.int64)
    return DeterministicStrategy(n, m, np.asarray(message_map, dtype=np.int64), g, label=label)


def chsh_strategy(bias: float) -> BoxProtocolStrategy:
    """The two-bit protocol through one isotropic box.

    Alice feeds x_1 XOR x_2 and sends alpha = a XOR x_1; Bob feeds k - 1 and
    guesses beta = alpha XOR b.  When the box output parity equals the product
    of its inputs, beta = x_k exactly, so each target is guessed with
    probability (1 + E)/2.
    """
    return _pyramid(bias, 1, label=f"chsh:{bias:g}")


def pyramid_strategy(bias: float, levels: int) -> BoxProtocolStrategy:
    """Nested protocol on n = 2**levels bits through 2**levels - 1 boxes.

    The boxes form a binary tree over the input string.  Each leaf box runs
    the two-bit protocol on an adjacent bit pair, producing a one-bit virtual
    message; each inner box runs the same protocol again on its children's
    virtual messages.  Alice sends the root's message bit.  Bob walks from the
    root toward bit k, feeding each box on the path the branch bit of k - 1 at
    that depth, and XORs all his outputs into the message.  Each level flips
    the guess independently with probability (1 - E)/2, so the per-target
    bias is exactly E**levels.
    """
    return _pyramid(bias, levels, label=f"pyramid:{bias:g}:{levels}")


def _pyramid(bias: float, levels: int, label: str) -> BoxProtocolStrategy:
    if levels < 1:
        raise ArgumentContractError(f"pyramid needs levels >= 1, got {levels}")
    n = 1 << levels
    box_count = (1 << levels) - 1
    if box_count > MAX_ENUMERATED_BOXES:
        raise ResourceLimitError(
            f"pyramid with {levels} levels needs {box_count} boxes, "
            f"cap is {MAX_ENUMERATED_BOXES}")

    # Nodes are created children first, so node i's wiring only reads
    # outcomes of boxes with smaller indices.  Leaves store their bit offset,
    # inner nodes their child node ids.
    leaves: dict[int, int] = {}
    children: dict[int, tuple[int, int]] = {}

    def build(lo: int, size: int) -> int:
        if size == 2:
            node = len(leaves) + len(children)
            leaves[node] = lo
            return node
        left = build(lo, size // 2)
        right = build(lo + size // 2, size // 2)
        node = len(leaves) + len(children)
        children[node] = (left, right)
        return node

    root = build(0, n)

    def alice_wiring(bits: tuple[int, ...], a_vec: tuple[int, ...]):
        inputs = [0] * box_count
        virtual = [0] * box_count
        for node in range(box_count):
            if node in leaves:
                lo = leaves[node]
                inputs[node] = bits[lo] ^ bits[lo + 1]
                virtual[node] = a_vec[node] ^ bits[lo]
            else:
                left, right = children[node]
                inputs[node] = virtual[left] ^ virtual[right]
                virtual[node] = a_vec[node] ^ virtual[left]
        return tuple(inputs), virtual[root]

    def bob_plan(k: int) -> tuple[tuple[int, int], ...]:
        j = k - 1
        plan = []
        node = root
        for depth in range(levels):
            side = (j >> (levels - 1 - depth)) & 1
            plan.append((node, side))
            if node in children:
                node = children[node][side]
        return tuple(plan)

    boxes = [isotropic_box(bias) for _ in range(box_count)]
    return BoxProtocolStrategy(n, boxes, alice_wiring, bob_plan, label=label)


def transferred_box_strategy(box: NoSignallingBox, n: int) -> BoxProtocolStrategy:
    """Play the guessing game through one box without any encoding.

    Alice feeds her whole string, sends alpha = a; Bob feeds his target and
    guesses alpha XOR b.  The box must accept all 2**n strings on Alice's
    side and, on Bob's side, either the n targets directly (y_size = n,
    y = k - 1) or integer-encoded strings (y_size = 2**n, fed the weight-1
    string selecting bit k).
    """
    if box.x_size != (1 << n):
        raise WiringError(
            f"box has {box.x_size} Alice inputs, the game needs {1 << n}")
    if box.y_size == n:
        plans = {k: ((0, k - 1),) for k in range(1, n + 1)}
    elif box.y_size == (1 << n):
        plans = {k: ((0, unit_string(k, n)),) for k in range(1, n + 1)}
    else:
        raise WiringError(
            f"box has {box.y_size} Bob inputs, the game needs {n} or {1 << n}")

    def alice_wiring(bits: tuple[int, ...], a_vec: tuple[int, ...]):
        return (bits_to_int(bits),), a_vec[0]

    return BoxProtocolStrategy(
        n, (box,), alice_wiring, lambda k: plans[k], label="transferred-box")


# -- closed forms ------------------------------------------------------------


def classical_success_formula(n: int) -> float:
    """Best classical one-bit-message success for uniform inputs and targets:
    (1 + binom(n-1, floor((n-1)/2)) / 2**(n-1)) / 2."""
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    return 0.5 * (1.0 + math.comb(n - 1, (n - 1) // 2) / float(2 ** (n - 1)))


def asymptotic_classical_success(n: int) -> float:
    """Large-n approximation (1 + sqrt(2 / (pi n))) / 2 of the classical optimum."""
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    return 0.5 * (1.0 + math.sqrt(2.0 / (math.pi * n)))


def quantum_success_formula(n: int) -> float:
    """Best quantum one-bit-message success (1 + 1/sqrt(n)) / 2."""
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    return 0.5 * (1.0 + 1.0 / math.sqrt(n))


# -- exhaustive classical oracle ---------------------------------------------


def enumerate_classical_strategies(n: int, m: int, limit: int = MAX_ORACLE_STRATEGIES):
    """Yield every deterministic (message map, guess map) pair.

    There are 2**(m * 2**n) message maps and 2**(n * 2**m) guess maps; the
    guess map varies fastest.  Raises ResourceLimitError when the product
    exceeds ``limit``.
    """
    count = 2 ** (m * 2 ** n) * 2 ** (n * 2 ** m)
    if count > limit:
        raise ResourceLimitError(
            f"{count} strategies exceed the enumeration cap {limit}")
    n_inputs = 1 << n
    n_alpha = 1 << m
    for f_digits in product(range(n_alpha), repeat=n_inputs):
        f = np.array(f_digits, dtype=np.int64)
        for g_bits in product(range(2), repeat=n_alpha * n):
            g = np.array(g_bits, dtype=np.int64).reshape(n_alpha, n)
            yield DeterministicStrategy(n, m, f, g, label=_map_label(f, g))


@dataclass(frozen=True)
class OracleSummary:
    """Exhaustive scan results over all deterministic strategies."""

    n: int
    m: int
    count: int
    max_success: float
    best_success_label: str
    max_information: float
    best_information_label: str
    max_sum_sq_bias: float
    min_endpoint_slack: float

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "count": self.count,
            "max_success": self.max_success,
            "best_success_strategy": self.best_success_label,
            "max_information_bits": self.max_information,
            "best_information_strategy": self.best_information_label,
            "max_sum_sq_bias": self.max_sum_sq_bias,
            "min_endpoint_slack": self.min_endpoint_slack,
        }


def _map_label(f: np.ndarray, g: np.ndarray) -> str:
    f_part = "".join(str(int(v)) for v in f)
    g_part = "|".join("".join(str(int(v)) for v in row) for row in g)
    return f"f={f_part} g={g_part}"


def classical_oracle(
    n: int,
    m: int,
    input_probs: np.ndarray | None = None,
    limit: int = MAX_ORACLE_STRATEGIES,
) -> OracleSummary:
    """Scan every deterministic strategy, recording extremal success and
    information plus worst cases of two sanity quantities: the largest sum of
    squared per-target biases and the smallest slack of
    sum_k H(x_k | guess_k) >= H(x) - H(alpha).

    Success and information are computed directly from the lookup tables
    (uniform targets; ``input_probs`` defaults to uniform strings), which
    keeps the full n = 3 scan fast; agreement with the general game evaluator
    is pinned by tests.
    """
    n_inputs = 1 << n
    p_x = (
        np.full(n_inputs, 1.0 / n_inputs)
        if input_probs is None
        else np.asarray(input_probs, dtype=float)
    )
    if p_x.shape != (n_inputs,) or abs(p_x.sum() - 1.0) > PROB_ATOL or p_x.min() < 0:
        raise ArgumentContractError("input_probs must be a distribution over 2**n strings")
    bits = bit_table(n).astype(float)
    h_x = entropy_of_probs(p_x)

    count = 0
    best_p, best_p_label = -1.0, ""
    best_i, best_i_label = -1.0, ""
    max_sum_sq = 0.0
    min_slack = math.inf
    for strat in enumerate_classical_strategies(n, m, limit=limit):
        count += 1
        f, g = strat.message_map, strat.guess_map
        beta = g[f]  # (2**n, n) guessed bit per (x, k)
        hits = (beta == bits).astype(float)
        per_k_success = p_x @ hits
        success = float(per_k_success.mean())
        biases = 2.0 * per_k_success - 1.0

        p_alpha = np.bincount(f, weights=p_x, minlength=1 << m)
        h_alpha = entropy_of_probs(p_alpha)
        info = 0.0
        sum_cond = 0.0
        for k in range(n):
            joint = np.empty((2, 2))
            for xa in range(2):
                mask = bits[:, k] == xa
                for ba in range(2):
                    joint[xa, ba] = float(p_x @ (mask & (beta[:, k] == ba)))
            h_joint = entropy_of_probs(joint)
            h_xk = entropy_of_probs(joint.sum(axis=1))
            h_bk = entropy_of_probs(joint.sum(axis=0))
            info += h_xk + h_bk - h_joint
            sum_cond += h_joint - h_bk
        slack = sum_cond - (h_x - h_alpha)

        if success > best_p:
            best_p, best_p_label = success, _map_label(f, g)
        if info > best_i:
            best_i, best_i_label = info, _map_label(f, g)
        max_sum_sq = max(max_sum_sq, float(biases @ biases))
        min_slack = min(min_slack, float(slack))

    return OracleSummary(
        n=n, m=m, count=count,
        max_success=best_p, best_success_label=best_p_label,
        max_information=best_i, best_information_label=best_i_label,
        max_sum_sq_bias=max_sum_sq, min_endpoint_slack=min_slack,
    )


# -- strategy spec strings ---------------------------------------------------


def parse_strategy(spec: str, n: int, m: int) -> Strategy:
    """Build a strategy from its spec string.

    Forms: ``send-first:m``, ``send-bit:i``, ``majority``, ``chsh:E``,
    ``pyramid:E:L`` and ``mix:spec1,w1;spec2,w2;...`` (mix does not nest).
    The game's n and m are checked against what the spec implies.
    """
    spec = spec.strip()
    if spec.startswith("mix:"):
        body = spec[len("mix:"):]
        parts, weights = [], []
        for item in body.split(";"):
            if "," not in item:
                raise SpecFormatError(f"mix item {item!r} lacks a weight")
            sub, w_text = item.rsplit(",", 1)
            if sub.strip().startswith("mix:"):
                raise SpecFormatError("mix specs do not nest")
            try:
                weights.append(float(w_text))
            except ValueError as exc:
                raise SpecFormatError(f"bad mix weight {w_text!r}") from exc
            parts.append(parse_strategy(sub, n, m))
        try:
            return MixtureStrategy(parts, weights)
        except ArgumentContractError as exc:
            raise SpecFormatError(str(exc)) from exc

    head, _, tail = spec.partition(":")
    args = tail.split(":") if tail else []
    try:
        if head == "send-first":
            (m_text,) = args
            strat: Strategy = send_first_m_strategy(n, int(m_text))
        elif head == "send-bit":
            (pos_text,) = args
            strat = send_bit_strategy(n, int(pos_text))
        elif head == "majority":
            if args:
                raise SpecFormatError("majority takes no arguments")
            strat = majority_vote_strategy(n)
        elif head == "chsh":
            (e_text,) = args
            strat = chsh_strategy(float(e_text))
        elif head == "pyramid":
            e_text, l_text = args
            strat = pyramid_strategy(float(e_text), int(l_text))
        else:
            raise SpecFormatError(f"unknown strategy {head!r}")
    except (ValueError, ArgumentContractError, DomainError) as exc:
        raise SpecFormatError(f"bad strategy spec {spec!r}: {exc}") from exc

    if strat.n != n:
        raise SpecFormatError(
            f"strategy {spec!r} plays on n={strat.n}, the game has n={n}")
    if strat.m != m:
        raise SpecFormatError(
            f"strategy {spec!r} sends {strat.m} bits, the game allows m={m}")
    return strat
