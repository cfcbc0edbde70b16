"""Exact simulators and bound checkers for two guessing games played with
no-signalling resources: the random-access game (Alice compresses n bits into
an m-bit message, Bob must recover an arbitrary one) and the inner-product
game (output parities must match x . y with no message at all).

Everything is computed by exact enumeration over inputs and resource
outcomes; the package exists to check information bounds numerically, so it
never samples.
"""

from .analysis import (
    IcVerdict,
    crossover_levels,
    entropic_chain,
    ic_quantity,
    ic_verdict,
    pyramid_growth_table,
    quadratic_information_consistency,
    supplementary_information,
)
from .bitstrings import bits_to_int, dot_mod2, hamming_weight, int_to_bits, unit_string
from .boxes import (
    BiasVector,
    NoSignallingBox,
    SignallingReport,
    check_no_signalling,
    correlator,
    isotropic_box,
    local_deterministic_box,
    mix,
    pr_box,
)
from .distributions import (
    EntropyReport,
    JointDistribution,
    apply_channel,
    binary_entropy,
    conditional_entropy,
    discard_slack,
    entropy_inequality_suite,
    entropy_of_probs,
    mutual_information,
    mutual_information_chain_gap,
    product_distribution,
    random_channel,
    random_joint,
    shannon_entropy,
    uniform_bit,
)
from .errors import (
    ChainNotApplicableError,
    DistributionError,
    DomainError,
    GameToolError,
    InfeasibleBiasError,
    NotApplicableError,
    ResourceLimitError,
    SpecFormatError,
    StochasticMatrixError,
    UnknownVariableError,
    WiringError,
)
from .games import (
    GameReport,
    InnerProductGame,
    RacGame,
    classical_saturator_box,
    evaluate_inner_product,
    evaluate_rac,
    restrict_to_hamming_weight_one,
    transfer_nonlocal_to_rac,
)
from .gram import (
    BoundReport,
    GramSystem,
    binary_entropy_bias_inequality,
    generalized_quadratic_bound,
    gram_construct,
    gram_to_box,
    information_quadratic_bound,
    quadratic_bound_check,
    vector_quadratic_bound,
)
from .strategies import (
    BoxProtocolStrategy,
    DeterministicStrategy,
    MixtureStrategy,
    OracleSummary,
    Strategy,
    asymptotic_classical_success,
    chsh_strategy,
    classical_oracle,
    classical_success_formula,
    enumerate_classical_strategies,
    explicit_classical_strategy,
    majority_vote_strategy,
    mixture_strategy,
    parse_strategy,
    pyramid_strategy,
    quantum_success_formula,
    send_bit_strategy,
    send_first_m_strategy,
    transferred_box_strategy,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
