"""Verification toolkit for Lucas/Fibonacci arithmetic and the Lehmer
property of Lucas numbers: exact sequences, budgeted factorization, rank
and Wall exponents, primitive divisors, certified inequalities, and a
machine-readable proof certificate."""

__version__ = "0.1.0"

from .apparition import (PrimitiveDivisorReport, RankRecord,
                         exceptional_indices, primitive_congruence_check,
                         primitive_prime_divisors, rank_of_apparition,
                         reciprocal_sum_bound_check, wall_record, wall_scan)
from .arith import (FactorBudget, FactoredInteger,
                    IncompleteFactorizationError, Primality, divisor_count,
                    divisors, factorize, is_prime, legendre, omega,
                    product_of_first_odd_primes, totient)
from .certified import Enclosure, EnclosureContext, PrecisionExhaustedError
from .lehmer import (LehmerVerdict, Obstruction, is_lehmer,
                     lehmer_search_lucas, quick_filter)
from .proof import (InequalityParams, ProofCertificate, ProofConfig,
                    ProofStep, StepStatus, run_full_proof, run_step)
from .sequences import (ModularPair, SequenceKind, SequencePair,
                        check_identity_even, check_identity_odd,
                        check_identity_square, fib_exact, lucas_exact,
                        max_two_adic_valuation_lucas, pair_mod, period_mod)

__all__ = [
    "Enclosure", "EnclosureContext", "FactorBudget", "FactoredInteger",
    "IncompleteFactorizationError", "InequalityParams", "LehmerVerdict",
    "ModularPair", "Obstruction", "PrecisionExhaustedError", "Primality",
    "PrimitiveDivisorReport", "ProofCertificate", "ProofConfig", "ProofStep",
    "RankRecord", "SequenceKind", "SequencePair", "StepStatus",
    "check_identity_even", "check_identity_odd", "check_identity_square",
    "divisor_count", "divisors", "exceptional_indices", "factorize",
    "fib_exact", "is_lehmer", "is_prime", "legendre", "lehmer_search_lucas",
    "lucas_exact", "max_two_adic_valuation_lucas", "omega", "pair_mod",
    "period_mod", "primitive_congruence_check", "primitive_prime_divisors",
    "product_of_first_odd_primes", "quick_filter", "rank_of_apparition",
    "reciprocal_sum_bound_check", "run_full_proof", "run_step", "totient",
    "wall_record", "wall_scan",
]
