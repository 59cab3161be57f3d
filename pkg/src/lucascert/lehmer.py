"""The Lehmer property for Lucas values: filters, verdicts, search.

A composite value v is Lehmer when phi(v) divides v - 1.  For Lucas values
most indices are eliminated without factoring anything: a Lehmer value must
be odd with at least 15 distinct prime factors (imported lower bound), so
2^15 must divide v - 1, while the index arithmetic caps the 2-adic
valuation of L_n - 1 far below 15 except when n = 1 (mod 4).
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum

from .arith import (DEFAULT_BUDGET, FactorBudget, FactoredInteger,
                    Primality, factorize, is_prime, totient)
from .sequences import lucas_exact

# Imported record for the least number of distinct prime factors of any
# Lehmer number (Renze's computation); configurable, never recomputed here.
OMEGA_LOWER_BOUND = 15


class Obstruction(Enum):
    """Why an index cannot yield a Lehmer value (or cannot be decided)."""

    VALUE_EVEN = "value_even"
    TWO_ADIC_EVEN = "two_adic_even"
    TWO_ADIC_THREE_MOD_4 = "two_adic_three_mod_4"
    PHI_DOES_NOT_DIVIDE = "phi_does_not_divide"
    VALUE_IS_PRIME = "value_is_prime"
    INCOMPLETE_FACTORIZATION = "incomplete_factorization"


@dataclass(frozen=True)
class LehmerVerdict:
    """Decision for one Lucas index.

    is_lehmer is None exactly when the factorization budget ran out; every
    other path decides.  phi is present only when a complete factorization
    of a composite value was available.
    """

    index: int
    value: int
    primality: Primality
    phi: int | None
    is_lehmer: bool | None
    obstruction: Obstruction | None


def is_lehmer(f: FactoredInteger) -> bool:
    """Composite value whose totient divides value - 1."""
    f.require_complete()
    if f.value < 2:
        raise ValueError("the Lehmer property is defined for values >= 2")
    if is_prime(f.value) is not Primality.COMPOSITE:
        return False
    return (f.value - 1) % totient(f) == 0


def quick_filter(n: int, omega_bound: int = OMEGA_LOWER_BOUND) -> Obstruction | None:
    """Index-only obstruction to L_n being Lehmer, without factoring.

    Under the omega lower bound a Lehmer value needs 2^omega_bound dividing
    L_n - 1.  Divisibility of the index by 3 makes the value even; an even
    index caps the valuation of L_n - 1 at 2; an index 3 mod 4 caps it at 4.
    Indices 1 mod 4 (and coprime to 3) pass through as None.
    """
    if n < 1:
        raise ValueError("index must be positive")
    if omega_bound <= 4:
        return None  # caps below are only conclusive against 2^5 and up
    if n % 3 == 0:
        return Obstruction.VALUE_EVEN
    if n % 2 == 0:
        return Obstruction.TWO_ADIC_EVEN
    if n % 4 == 3:
        return Obstruction.TWO_ADIC_THREE_MOD_4
    return None


def decide_index(n: int, budget: FactorBudget | None = None) -> LehmerVerdict:
    """Full verdict for one index: filter first, factor survivors.

    The omega bound is a filter-only premise: whenever a value is factored,
    the divisibility phi | value - 1 is tested unconditionally.
    """
    budget = budget or DEFAULT_BUDGET
    value = lucas_exact(n)
    if value < 2:
        # L_1 = 1 is a unit: neither prime nor a Lehmer candidate
        return LehmerVerdict(index=n, value=value, primality=Primality.COMPOSITE,
                             phi=None, is_lehmer=False, obstruction=None)
    primality = is_prime(value)
    obstruction = quick_filter(n)
    if obstruction is not None:
        return LehmerVerdict(index=n, value=value, primality=primality,
                             phi=None, is_lehmer=False, obstruction=obstruction)
    if primality is not Primality.COMPOSITE:
        # probable primes are treated as non-composite but keep their grade,
        # so a pseudoprime surviving the search shows up in the record
        return LehmerVerdict(index=n, value=value, primality=primality,
                             phi=None, is_lehmer=False,
                             obstruction=Obstruction.VALUE_IS_PRIME)
    factored = factorize(value, budget)
    if not factored.complete:
        return LehmerVerdict(index=n, value=value, primality=primality,
                             phi=None, is_lehmer=None,
                             obstruction=Obstruction.INCOMPLETE_FACTORIZATION)
    phi = totient(factored)
    lehmer = (value - 1) % phi == 0
    return LehmerVerdict(index=n, value=value, primality=primality, phi=phi,
                         is_lehmer=lehmer,
                         obstruction=None if lehmer else Obstruction.PHI_DOES_NOT_DIVIDE)


def _decide_chunk(args: tuple[tuple[int, ...], FactorBudget]) -> list[LehmerVerdict]:
    indices, budget = args
    return [decide_index(n, budget) for n in indices]


def lehmer_search_lucas(max_index: int, budget: FactorBudget | None = None,
                        workers: int = 1) -> list[LehmerVerdict]:
    """Verdicts for every index 2..max_index, merged in index order."""
    if max_index < 1:
        raise ValueError("max_index must be positive")
    budget = budget or DEFAULT_BUDGET
    indices = tuple(range(2, max_index + 1))
    if not indices:
        return []
    if workers <= 1:
        return [decide_index(n, budget) for n in indices]
    size = -(-len(indices) // workers)
    chunks = [(indices[i:i + size], budget)
              for i in range(0, len(indices), size)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(_decide_chunk, chunks))
    merged = [v for chunk in results for v in chunk]
    merged.sort(key=lambda v: v.index)
    return merged


def verdict_to_dict(v: LehmerVerdict) -> dict:
    """JSON form; exact integers as decimal strings."""
    return {
        "index": v.index,
        "value": str(v.value),
        "primality": v.primality.value,
        "phi": str(v.phi) if v.phi is not None else None,
        "is_lehmer": v.is_lehmer,
        "obstruction": v.obstruction.value if v.obstruction else None,
    }


def verdicts_to_jsonl(verdicts: list[LehmerVerdict]) -> str:
    """One JSON object per line, in index order."""
    return "\n".join(json.dumps(verdict_to_dict(v), sort_keys=True)
                     for v in verdicts) + ("\n" if verdicts else "")
