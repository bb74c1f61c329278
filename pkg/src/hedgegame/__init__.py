"""Values, strategies and certificates for repeated quantum hedging games."""

from .errors import (ContractViolation, DegenerateInstance, HedgeGameError,
                     OutOfHedgingRange, ParameterError, SolverError)
from .evaluator import OutcomeDistribution, outcome_distribution, prob_win_at_least, \
    verify_perfect_hedging
from .game import (GameSpec, MeasurementPair, QOperators, blocked_perm,
                   build_q_operators, initial_state, measurement,
                   objective_lose_more_than, psi_rho_conjugator, tensor_games,
                   tensor_state)
from .noanswer import (NoAnswerInstance, classical_value, direct_lambda_value,
                       game_operators, k_of_n_value, single_value)
from .sdp import (CertificateResult, SdpSolution, certify_strategy_optimal,
                  check_dual_feasible, solve_min_channel)
from .strategies import (DiagonalStrategy, ThetaRange, losing_amplitude, phi_border,
                         phi_interp, thresholds)

__version__ = "0.1.0"

__all__ = [
    "ContractViolation", "DegenerateInstance", "HedgeGameError", "OutOfHedgingRange",
    "ParameterError", "SolverError",
    "OutcomeDistribution", "outcome_distribution", "prob_win_at_least",
    "verify_perfect_hedging",
    "GameSpec", "MeasurementPair", "QOperators", "blocked_perm", "build_q_operators",
    "initial_state", "measurement", "objective_lose_more_than", "psi_rho_conjugator",
    "tensor_games", "tensor_state",
    "NoAnswerInstance", "classical_value", "direct_lambda_value", "game_operators",
    "k_of_n_value", "single_value",
    "CertificateResult", "SdpSolution", "certify_strategy_optimal", "check_dual_feasible",
    "solve_min_channel",
    "DiagonalStrategy", "ThetaRange", "losing_amplitude", "phi_border", "phi_interp",
    "thresholds",
    "__version__",
]
