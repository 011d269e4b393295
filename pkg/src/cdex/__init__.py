"""Error-tolerant one-shot cooperative data exchange.

Models n clients that each broadcast one linear combination of the packets
they hold, computes exactly how many compromised broadcasts the instance
can survive, constructs and verifies encoding matrices that achieve that
capability, and simulates adversarial exchanges end to end.
"""

from .analysis import (
    CapabilityReport,
    InfeasibleError,
    capability,
    char_poly_degree_bound,
    client_diameters,
    diameter,
    generic_rank,
    local_diameter,
)
from .codec import (
    BudgetExceededError,
    EncodingMatrix,
    LocalCode,
    SearchExhaustedError,
    SupportViolationError,
    VerificationReport,
    deterministic_encoding,
    load_matrix_file,
    local_receiving_matrix,
    min_distance,
    random_encoding,
    rank_distance_check,
    save_matrix_file,
    verify_error_correction,
)
from .decoder import (
    DecodeResult,
    DecodeStatus,
    decode_all,
    encode_broadcast,
    honest_broadcast,
    min_distance_decode,
    reduce_received,
)
from .field import (
    FieldElement,
    FieldMismatchError,
    Matrix,
    NoSolutionError,
    NotPrimeError,
    NotUniqueError,
    PrimeField,
    mul_row_vector,
    rank,
    solve_unique,
)
from .model import (
    CdeProblem,
    LocalSupport,
    PacketIndexError,
    SupportPattern,
    UncoveredPacketError,
    load_problem_file,
    local_support,
    save_problem_file,
    support_pattern,
    validate_problem,
)
from .sim import (
    AdversaryCheckResult,
    AdversaryPlan,
    ExchangeTrace,
    MonteCarloStats,
    exhaustive_adversary_check,
    monte_carlo_success_rate,
    run_exchange,
)

__version__ = "0.1.0"
