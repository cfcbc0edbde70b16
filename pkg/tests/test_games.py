"""End-to-end game evaluations against frozen reference numbers.

All constants were derived independently before the evaluator existed:
closed binomial sums for the guessing probabilities, the defining entropy
sums for the information values, and per-box output enumeration by hand for
the two-box cases.
"""

import math

import numpy as np
import pytest

from icgames.bitstrings import dot_mod2, unit_string
from icgames.boxes import isotropic_box, pr_box, NoSignallingBox
from icgames.distributions import shannon_entropy
from icgames.errors import (
    ArgumentContractError,
    DistributionError,
    ResourceLimitError,
    WiringError,
)
from icgames.games import (
    InnerProductGame,
    RacGame,
    classical_saturator_box,
    evaluate_inner_product,
    evaluate_rac,
    restrict_to_hamming_weight_one,
    transfer_nonlocal_to_rac,
)
from icgames.gram import gram_construct, gram_to_box
from icgames.strategies import (
    chsh_strategy,
    enumerate_classical_strategies,
    majority_vote_strategy,
    mixture_strategy,
    pyramid_strategy,
    send_bit_strategy,
    send_first_m_strategy,
    transferred_box_strategy,
)

ROOT_HALF = 1.0 / math.sqrt(2.0)
# I of the half/half mix of send-x1 and send-x2 on two uniform bits:
# each pair (x_k, guess) agrees w.p. 3/4, message carries h(3/4) structure,
# I = 2 (1 - h(3/4))
MIXED_STRATEGY_I = 0.3774437510817341


def full_pr_box(n: int) -> NoSignallingBox:
    """x.y parity box on n-bit alphabets, bias 1 at every pair."""
    size = 1 << n
    table = np.zeros((size, size, 2, 2))
    for x in range(size):
        for y in range(size):
            p = dot_mod2(x, y)
            table[x, y, 0, p] = 0.5
            table[x, y, 1, 1 - p] = 0.5
    return NoSignallingBox(table)


# -- game containers -----------------------------------------------------------


def test_rac_game_defaults_and_validation():
    game = RacGame(3, 1)
    assert game.inputs_are_uniform()
    assert game.inputs_are_independent_bits()
    assert np.allclose(game.target_probs, 1 / 3)
    with pytest.raises(ArgumentContractError):
        RacGame(0, 1)
    with pytest.raises(ArgumentContractError):
        RacGame(2, 0)
    with pytest.raises(DistributionError):
        RacGame(2, 1, input_probs=[0.5, 0.5, 0.5, 0.5])
    with pytest.raises(ArgumentContractError):
        RacGame(2, 1, input_probs=[0.5, 0.5])


def test_correlated_inputs_are_flagged():
    game = RacGame(2, 1, input_probs=[0.5, 0.0, 0.0, 0.5])
    assert not game.inputs_are_independent_bits()
    assert not game.inputs_are_uniform()
    biased = np.outer([0.9, 0.1], [0.7, 0.3]).ravel()
    game2 = RacGame(2, 1, input_probs=biased)
    assert game2.inputs_are_independent_bits()
    assert not game2.inputs_are_uniform()


# -- classical evaluations -------------------------------------------------------


def test_send_bit_on_two_bits():
    report = evaluate_rac(RacGame(2, 1), send_bit_strategy(2, 1))
    assert report.success_probability == pytest.approx(0.75, abs=1e-15)
    assert report.information_bits == pytest.approx(1.0, abs=1e-12)
    assert report.per_target_success == pytest.approx((1.0, 0.5))
    assert report.biases.values == pytest.approx((1.0, 0.0))
    assert report.classical
    # the guessed bit is copied perfectly: joint of (x1, beta) is diagonal
    joint = report.pair_joints[0]
    assert np.allclose(joint.table, [[0.5, 0.0], [0.0, 0.5]])


def test_send_first_two_of_four():
    report = evaluate_rac(RacGame(4, 2), send_first_m_strategy(4, 2))
    assert report.success_probability == pytest.approx(0.75, abs=1e-15)
    assert report.information_bits == pytest.approx(2.0, abs=1e-12)


@pytest.mark.parametrize("n", range(2, 9))
def test_majority_matches_closed_form(n):
    from icgames.strategies import classical_success_formula

    report = evaluate_rac(RacGame(n, 1), majority_vote_strategy(n))
    assert report.success_probability == pytest.approx(
        classical_success_formula(n), abs=1e-12
    )


def test_mixed_strategy_information_value():
    mixed = mixture_strategy(
        [send_bit_strategy(2, 1), send_bit_strategy(2, 2)], [0.5, 0.5]
    )
    report = evaluate_rac(RacGame(2, 1), mixed)
    assert report.success_probability == pytest.approx(0.75, abs=1e-12)
    assert report.information_bits == pytest.approx(MIXED_STRATEGY_I, abs=1e-12)
    # mixing lowered I below the deterministic extremes without moving P
    assert report.information_bits < 1.0


def test_classical_full_joint_contains_shared_randomness():
    mixed = mixture_strategy(
        [send_bit_strategy(2, 1), send_bit_strategy(2, 2)], [0.25, 0.75]
    )
    report = evaluate_rac(RacGame(2, 1), mixed)
    joint = report.full_joints[0]
    assert set(joint.names) == {"x1", "x2", "B", "alpha", "beta"}
    assert joint.card_of("B") == 2
    b_marg = joint.marginal(("B",))
    assert np.allclose(b_marg.table, [0.25, 0.75])


def test_success_probability_is_mean_bias_identity():
    # P = (1 + sum_k q_k E_k) / 2 must hold to fp precision for any strategy
    rng = np.random.default_rng(41)
    strategies = list(enumerate_classical_strategies(2, 1))
    game = RacGame(2, 1)
    for idx in rng.choice(len(strategies), size=40, replace=False):
        report = evaluate_rac(game, strategies[idx])
        implied = 0.5 * (1.0 + np.mean(report.biases.values))
        assert report.success_probability == pytest.approx(implied, abs=1e-12)


def test_nonuniform_targets_reweight_success():
    game = RacGame(2, 1, target_probs=[1.0, 0.0])
    report = evaluate_rac(game, send_bit_strategy(2, 1))
    assert report.success_probability == pytest.approx(1.0)


# -- box-backed evaluations ------------------------------------------------------


def test_chsh_at_quantum_bias():
    report = evaluate_rac(RacGame(2, 1), chsh_strategy(ROOT_HALF))
    assert report.success_probability == pytest.approx(
        (2.0 + math.sqrt(2.0)) / 4.0, abs=1e-12
    )
    assert not report.classical
    assert report.full_joints[0].names == ("x1", "x2", "alpha", "beta")


def test_chsh_at_zero_bias_is_blind_guessing():
    report = evaluate_rac(RacGame(2, 1), chsh_strategy(0.0))
    assert report.success_probability == pytest.approx(0.5, abs=1e-15)
    assert report.information_bits == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("bias", [0.0, 0.3, ROOT_HALF, 1.0])
@pytest.mark.parametrize("levels", [1, 2, 3])
def test_pyramid_bias_law(bias, levels):
    report = evaluate_rac(RacGame(1 << levels, 1), pyramid_strategy(bias, levels))
    for value in report.biases.values:
        assert value == pytest.approx(bias ** levels, abs=1e-9)


def test_pyramid_unit_bias_wins_everything():
    report = evaluate_rac(RacGame(4, 1), pyramid_strategy(1.0, 2))
    assert report.success_probability == pytest.approx(1.0, abs=1e-12)
    assert report.information_bits == pytest.approx(4.0, abs=1e-9)


def test_evaluation_cap_is_enforced():
    with pytest.raises(ResourceLimitError):
        evaluate_rac(RacGame(9, 1), majority_vote_strategy(9))
    # raising the cap admits the same game
    report = evaluate_rac(RacGame(9, 1), majority_vote_strategy(9), n_cap=9)
    assert report.n == 9


def test_pyramid_depth_is_limited_by_box_budget():
    with pytest.raises(ResourceLimitError):
        pyramid_strategy(0.5, 4)  # 15 boxes, budget is 12


def test_game_strategy_shape_mismatch():
    with pytest.raises(WiringError):
        evaluate_rac(RacGame(3, 1), send_bit_strategy(2, 1))
    with pytest.raises(WiringError):
        evaluate_rac(RacGame(2, 2), send_bit_strategy(2, 1))


# -- transfer -----------------------------------------------------------------


def test_transfer_full_parity_box_is_perfect():
    report = evaluate_rac(RacGame(2, 1), transfer_nonlocal_to_rac(full_pr_box(2), 2))
    assert report.success_probability == pytest.approx(1.0, abs=1e-12)
    assert report.information_bits == pytest.approx(2.0, abs=1e-9)


def test_transfer_weight_one_gram_box():
    box = gram_to_box(gram_construct([ROOT_HALF, ROOT_HALF], 2))
    report = evaluate_rac(RacGame(2, 1), transferred_box_strategy(box, 2))
    assert report.success_probability == pytest.approx(
        (2.0 + math.sqrt(2.0)) / 4.0, abs=1e-12
    )


def test_transfer_rejects_alphabet_mismatch():
    with pytest.raises(WiringError):
        transfer_nonlocal_to_rac(full_pr_box(2), 3)


# -- inner-product game ----------------------------------------------------------


def test_inner_product_with_parity_box():
    report = evaluate_inner_product(InnerProductGame(2), full_pr_box(2))
    assert report.success_probability == pytest.approx(1.0)
    assert report.biases.values == pytest.approx((1.0,) * 4)
    assert report.kind == "inner-product"
    assert report.m == 0


def test_inner_product_with_classical_saturator():
    # Alice outputs alpha.x, Bob outputs 0: correct exactly when x.y = alpha.x,
    # so E_y = 1 at y = alpha and the mean over uniform x vanishes elsewhere
    alpha = 0b10
    report = evaluate_inner_product(InnerProductGame(2), classical_saturator_box(2, alpha))
    by_label = dict(zip(report.biases.labels, report.biases.values))
    assert by_label[alpha] == pytest.approx(1.0)
    for y, value in by_label.items():
        if y != alpha:
            assert value == pytest.approx(0.0, abs=1e-12)
    assert report.biases.sum_of_squares() == pytest.approx(1.0)


def test_inner_product_gram_box_reproduces_targets():
    targets = [0.5, 0.4, 0.3, 0.2]
    box = gram_to_box(gram_construct(targets, 2))
    report = evaluate_inner_product(InnerProductGame(2), box)
    assert report.biases.values == pytest.approx(tuple(targets), abs=1e-12)


def test_weight_one_restriction():
    game = restrict_to_hamming_weight_one(InnerProductGame(3))
    support = [y for y, q in enumerate(game.y_probs) if q > 0]
    assert support == [unit_string(k, 3) for k in (3, 2, 1)]
    box = gram_to_box(gram_construct([0.6, 0.5, 0.3], 3))
    report = evaluate_inner_product(game, box)
    assert sorted(report.biases.labels) == sorted(support)
    # per-target bias of the weight-1 gram box: label y = unit_string(k, n)
    by_label = dict(zip(report.biases.labels, report.biases.values))
    assert by_label[unit_string(1, 3)] == pytest.approx(0.6)
    assert by_label[unit_string(3, 3)] == pytest.approx(0.3)


def test_weight_one_box_rejects_full_support_game():
    box = gram_to_box(gram_construct([0.6, 0.5], 2))  # y alphabet of size 2
    with pytest.raises(WiringError):
        evaluate_inner_product(InnerProductGame(2), box)


def test_inner_product_respects_x_distribution():
    # all weight on x0 = 11, saturator at alpha: the pair wins at y exactly
    # when x0.(y xor alpha) = 0, so every per-y bias is +/-1 and the squared
    # total reaches the point-mass ceiling 2^n
    game = InnerProductGame(2, x_probs=[0.0, 0.0, 0.0, 1.0])
    report = evaluate_inner_product(game, classical_saturator_box(2, 0b11))
    expected = tuple(1.0 if dot_mod2(0b11, y ^ 0b11) == 0 else -1.0 for y in range(4))
    assert report.biases.values == pytest.approx(expected, abs=1e-12)
    assert report.biases.sum_of_squares() == pytest.approx(4.0)
    assert report.success_probability == pytest.approx(0.5)


# -- report serialization ---------------------------------------------------------


def test_report_json_fields():
    report = evaluate_rac(RacGame(2, 1), majority_vote_strategy(2))
    data = report.to_json_dict()
    assert data["kind"] == "rac"
    assert data["strategy"] == "majority"
    assert data["bias_labels"] == [1, 2]
    assert data["classical"] is True
    assert len(data["entropic_terms"]) == 9


def test_report_csv_rows():
    report = evaluate_rac(RacGame(2, 1), send_bit_strategy(2, 1))
    rows = report.csv_rows()
    assert rows[0] == ["k", "E_k", "I_k_bits"]
    assert rows[1][0] == 1 and rows[1][1] == pytest.approx(1.0)
    ip = evaluate_inner_product(InnerProductGame(1), isotropic_box(0.5))
    ip_rows = ip.csv_rows()
    assert ip_rows[0] == ["y", "E_y"]
    assert len(ip_rows) == 3
