"""Information accounting on game reports.

The central quantity for the access game is

    I = sum_k I(x_k : beta_k),

the information Bob's guessing variable carries about each input bit, summed
over targets.  For classical resources I is bounded by the message length m;
the bound follows from a chain of basic entropy inequalities that this module
evaluates term by term on the exact joint a strategy produced, so every
inequality step can be checked numerically rather than trusted.

With non-classical resources only the two chain endpoints are observable
classical quantities (the interior lines condition on the shared randomness
B, which has no joint distribution with everything else in that case);
evaluating the endpoints on box strategies is precisely how a bound violation
is exhibited.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .distributions import shannon_entropy
from .errors import ChainNotApplicableError, NotApplicableError
from .games import GameReport
from .gram import SATURATION_ATOL, TWO_LN_2

CHAIN_IDENTITY_ATOL = 1e-9


@dataclass(frozen=True)
class IcVerdict:
    """Outcome of one bound comparison on a report.

    ``kind`` names the bound that was applied; ``satisfied`` is "holds",
    "saturated" (within 1e-6) or "violated".  ``chain_terms`` and
    ``chain_slacks`` carry the named derivation lines and the slack of each
    inequality step, when available.
    """

    kind: str
    i_value: float
    bound: float
    satisfied: str
    chain_terms: tuple[tuple[str, float], ...] = ()
    chain_slacks: tuple[tuple[str, float], ...] = ()

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "I_bits": self.i_value,
            "bound": self.bound,
            "satisfied": self.satisfied,
            "chain_terms": [[name, value] for name, value in self.chain_terms],
            "chain_slacks": [[name, value] for name, value in self.chain_slacks],
        }


def _classify(lhs: float, rhs: float) -> str:
    """Status of lhs <= rhs with the standard saturation window."""
    if abs(lhs - rhs) < SATURATION_ATOL:
        return "saturated"
    return "holds" if lhs < rhs else "violated"


def ic_quantity(report: GameReport) -> float:
    """I = sum_k I(x_k : beta_k), recomputed from the stored pair joints."""
    if report.kind != "rac" or report.pair_joints is None:
        raise NotApplicableError("I is defined for access-game reports")
    total = 0.0
    for k, joint in enumerate(report.pair_joints, start=1):
        total += (
            shannon_entropy(joint, (f"x{k}",))
            + shannon_entropy(joint, ("beta",))
            - shannon_entropy(joint, joint.names)
        )
    return float(total)


def entropic_chain(report: GameReport) -> IcVerdict:
    """Evaluate the derivation chain behind sum_k H(x_k|beta_k) >= H(x) - H(alpha).

    For classical strategies every line is evaluated and each inequality step
    must have nonnegative slack:

      sum_k H(x_k|beta_k)            guess is computed from (alpha, B)
        >= sum_k H(x_k|alpha,B)      conditional subadditivity over bits
        >= H(x|alpha,B)              = H(x,alpha,B) - H(alpha,B)
        >= H(x,alpha,B)-H(B)-H(alpha)  subadditivity of H(alpha,B)
        =  H(alpha|x,B)+H(x)-H(alpha)  uses independence of x from B
        >= H(x) - H(alpha)           conditional entropy positivity

    Box strategies get the two endpoints only; the verdict then states
    whether the endpoint inequality survives.
    """
    if report.kind != "rac":
        raise NotApplicableError("the chain is defined for access-game reports")
    terms = report.terms()
    lhs = terms["sum_H(xk|beta_k)"]
    rhs = terms["H(x)-H(alpha)"]
    # The endpoint inequality reads lhs >= rhs, so classify rhs <= lhs.
    status = _classify(rhs, lhs)

    if not report.classical:
        slacks = (("endpoint", lhs - rhs),)
        return IcVerdict(
            kind="entropic-chain-endpoints",
            i_value=report.information_bits,
            bound=rhs,
            satisfied=status,
            chain_terms=report.entropic_terms,
            chain_slacks=slacks,
        )

    guess_processing = lhs - terms["sum_H(xk|alpha,B)"]
    bit_subadditivity = terms["sum_H(xk|alpha,B)"] - terms["H(x|alpha,B)"]
    identity_gap = abs(terms["H(x|alpha,B)"] - terms["H(x,alpha,B)-H(alpha,B)"])
    randomness_subadd = (
        terms["H(x,alpha,B)-H(alpha,B)"] - terms["H(x,alpha,B)-H(B)-H(alpha)"])
    independence_gap = abs(
        terms["H(x,alpha,B)-H(B)-H(alpha)"] - terms["H(alpha|x,B)+H(x)-H(alpha)"])
    message_positivity = terms["H(alpha|x,B)+H(x)-H(alpha)"] - rhs
    if identity_gap > CHAIN_IDENTITY_ATOL:
        raise ChainNotApplicableError(
            f"conditional entropy identity off by {identity_gap}")
    if independence_gap > CHAIN_IDENTITY_ATOL:
        raise ChainNotApplicableError(
            f"input/randomness independence identity off by {independence_gap}; "
            "the chain assumes Alice's input is independent of B")
    slacks = (
        ("guess_processing", float(guess_processing)),
        ("bit_subadditivity", float(bit_subadditivity)),
        ("randomness_subadditivity", float(randomness_subadd)),
        ("message_positivity", float(message_positivity)),
        ("endpoint", float(lhs - rhs)),
    )
    return IcVerdict(
        kind="entropic-chain",
        i_value=report.information_bits,
        bound=rhs,
        satisfied=status,
        chain_terms=report.entropic_terms,
        chain_slacks=slacks,
    )


def ic_verdict(report: GameReport, m: int | None = None) -> IcVerdict:
    """Compare I against the applicable bound.

    With independent input bits the bound I <= H(alpha) <= m applies (for
    classical strategies it is a theorem; box strategies are exactly the
    interesting violators).  With correlated input bits no I <= m statement
    is available and the verdict falls back to the chain endpoints.
    """
    if report.kind != "rac":
        raise NotApplicableError("the information bound applies to access-game reports")
    if m is None:
        m = report.m
    i_value = ic_quantity(report)
    if not report.independent_input_bits:
        inner = entropic_chain(report)
        return IcVerdict(
            kind="endpoint-fallback",
            i_value=i_value,
            bound=inner.bound,
            satisfied=inner.satisfied,
            chain_terms=inner.chain_terms,
            chain_slacks=inner.chain_slacks,
        )
    status = _classify(i_value, float(m))
    h_alpha = report.terms().get("H(alpha)", float(m))
    slacks = (
        ("message_entropy_gap", float(m) - h_alpha),
        ("bound_slack", float(m) - i_value),
    )
    return IcVerdict(
        kind="information-bound",
        i_value=i_value,
        bound=float(m),
        satisfied=status,
        chain_terms=report.entropic_terms,
        chain_slacks=slacks,
    )


def supplementary_information(report: GameReport) -> float:
    """1 - I/n: the per-bit information Bob still lacks, for uniform
    independent inputs (equals the average of H(x_k|beta_k) over targets)."""
    if report.kind != "rac":
        raise NotApplicableError("defined for access-game reports")
    if not (report.uniform_inputs and report.independent_input_bits):
        raise NotApplicableError(
            "supplementary information assumes uniform independent input bits")
    return 1.0 - ic_quantity(report) / report.n


def quadratic_information_consistency(report: GameReport) -> tuple[float, float]:
    """(sum_k E_k^2 / (2 ln 2), I) for checking the quadratic relaxation
    sum E_k^2 <= 2 I ln 2; valid with uniform inputs, where per-target
    information dominates 1 - h(P_k) >= E_k^2/(2 ln 2)."""
    if report.kind != "rac":
        raise NotApplicableError("defined for access-game reports")
    lhs = sum(v * v for v in report.biases.values) / TWO_LN_2
    return float(lhs), ic_quantity(report)


def pyramid_growth_row(bias: float, levels: int) -> dict:
    """One row of the nested-protocol growth table: on n = 2**levels bits the
    per-target bias is bias**levels, so the squared-bias total is
    (2 bias^2)**levels, which outgrows the message bound 2 ln 2 whenever
    bias > 1/sqrt(2).  Pure arithmetic, no simulation."""
    n = 1 << levels
    per_target = bias ** levels
    total = n * per_target ** 2
    return {
        "levels": levels,
        "n": n,
        "per_target_bias": per_target,
        "sum_sq_bias": total,
        "threshold": TWO_LN_2,
        "exceeds": bool(total > TWO_LN_2),
    }


def pyramid_growth_table(bias: float, max_levels: int) -> list[dict]:
    if max_levels < 1:
        raise NotApplicableError(f"need max_levels >= 1, got {max_levels}")
    if not 0.0 <= bias <= 1.0:
        raise NotApplicableError(f"bias {bias} outside [0, 1]")
    return [pyramid_growth_row(bias, lv) for lv in range(1, max_levels + 1)]


def crossover_levels(bias: float) -> int | None:
    """Smallest depth at which the squared-bias total exceeds 2 ln 2, or None
    when 2 bias^2 <= 1 (no growth)."""
    if not 0.0 <= bias <= 1.0:
        raise NotApplicableError(f"bias {bias} outside [0, 1]")
    growth = 2.0 * bias * bias
    if growth <= 1.0:
        return None
    # (2 E^2)^L > 2 ln 2  <=>  L > log(2 ln 2) / log(2 E^2)
    return max(1, math.floor(math.log(TWO_LN_2) / math.log(growth)) + 1)
