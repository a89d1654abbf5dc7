"""Guess algebraic differential equations for generating functions and
algebraic difference equations for sequences from finitely many terms."""

from .errors import (
    DalgError,
    InsufficientData,
    InvalidInput,
    ReconstructionFailure,
    SupportMismatch,
    UnluckyPrime,
    VerificationFailure,
)
from .guess import (
    GuessConfig,
    GuessResult,
    VerifyReport,
    degree_tuples,
    guess_function,
    guess_function_fixed_order,
    guess_sequence,
    max_admissible_order,
    separant_nonzero,
    shift_offset,
    verify_candidate,
)
from .modular import PrimeRunReport, guess_modular, multi_prime_reconstruct, prime_ladder, support_refit
from .polys import ADEPoly, DiffPoly, SeqPoly, poly_from_json, separant, seq_initial_and_rationalizing
from .sources import TermList, builtin_terms, parse_bfile, parse_terms_file

__version__ = "0.1.0"

__all__ = [
    "ADEPoly",
    "DalgError",
    "DiffPoly",
    "GuessConfig",
    "GuessResult",
    "InsufficientData",
    "InvalidInput",
    "PrimeRunReport",
    "ReconstructionFailure",
    "SeqPoly",
    "SupportMismatch",
    "TermList",
    "UnluckyPrime",
    "VerificationFailure",
    "VerifyReport",
    "builtin_terms",
    "degree_tuples",
    "guess_function",
    "guess_function_fixed_order",
    "guess_modular",
    "guess_sequence",
    "max_admissible_order",
    "multi_prime_reconstruct",
    "parse_bfile",
    "parse_terms_file",
    "poly_from_json",
    "prime_ladder",
    "separant",
    "separant_nonzero",
    "seq_initial_and_rationalizing",
    "shift_offset",
    "support_refit",
    "verify_candidate",
]
