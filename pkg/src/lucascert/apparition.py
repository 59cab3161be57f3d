"""Order of appearance, Wall exponents, and primitive prime divisors.

The rank z(p) is the least index with p | F_z.  For p other than 5 it
divides p - (5|p), so candidates are enumerated as sorted divisors of that
quantity and tested with modular doubling; only a handful of evaluations
are needed per prime, which keeps full-range scans cheap.

Primitivity of a prime divisor of the d-th term means it divides no earlier
term with positive index.  For Lucas terms this is decided by a direct
residue scan over the earlier indices; for Fibonacci terms by comparing the
rank with d.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from . import certified
from .arith import (DEFAULT_BUDGET, FactorBudget, FactoredInteger,
                    Primality, divisors, factorize, is_prime, legendre,
                    primes_up_to)
from .certified import Enclosure, EnclosureContext
from .sequences import SequenceKind, fib_exact, fib_mod, iter_values, lucas_exact


@dataclass(frozen=True)
class RankRecord:
    """Per-prime rank and Wall exponent with coprimality evidence.

    cofactor_coprime records that F_{z(p)} / p^wall_exponent is coprime to
    p, witnessed by a nonzero residue of F_{z(p)} modulo p^(wall_exponent+1).
    """

    prime: int
    rank: int
    wall_exponent: int
    cofactor_coprime: bool


@dataclass(frozen=True)
class PrimitiveDivisorReport:
    """Primitive prime divisors of the d-th term of one sequence."""

    index: int
    kind: SequenceKind
    primitive_primes: tuple[int, ...]
    exceptional: bool
    congruence_checked: bool


def rank_of_apparition(p: int) -> int:
    """Least positive index z with p dividing F_z.

    Defined for every prime: z(2) = 3 by direct scan, z(5) = 5, and for the
    remaining primes the candidates are the divisors of p - (5|p) in
    increasing order.
    """
    if p == 2:
        return 3
    if p == 5:
        return 5
    if p < 2 or is_prime(p) is Primality.COMPOSITE:
        raise ValueError(f"{p} is not prime")
    target = p - legendre(5, p)
    for d in divisors(factorize(target)):
        if d > 0 and fib_mod(d, p) == 0:
            return d
    raise ArithmeticError(f"no rank found for {p}; divisor theory violated")


def wall_record(p: int) -> RankRecord:
    """Rank plus the exact power of p dividing F_{z(p)}.

    The exponent is found by raising the modulus one power at a time until
    F_{z(p)} stops vanishing; the first nonzero residue is the coprimality
    witness for the remaining cofactor.
    """
    z = rank_of_apparition(p)
    e = 1
    while fib_mod(z, p ** (e + 1)) == 0:
        e += 1
    return RankRecord(prime=p, rank=z, wall_exponent=e, cofactor_coprime=True)


def _wall_chunk(primes: tuple[int, ...]) -> list[int]:
    return [p for p in primes if wall_record(p).wall_exponent >= 2]


def wall_scan(limit: int, partitions: int = 1, workers: int = 1) -> list[int]:
    """Odd primes p <= limit whose Wall exponent exceeds 1 (expected none).

    The prime range is split into ``partitions`` contiguous chunks which may
    be scanned by parallel workers; the merged, sorted result is identical
    for every partitioning.
    """
    if limit < 3:
        raise ValueError("limit must be at least 3")
    if partitions < 1 or workers < 1:
        raise ValueError("partitions and workers must be positive")
    odd_primes = tuple(p for p in primes_up_to(limit) if p % 2)
    if not odd_primes:
        return []
    partitions = min(partitions, len(odd_primes))
    size = -(-len(odd_primes) // partitions)
    chunks = [odd_primes[i:i + size] for i in range(0, len(odd_primes), size)]
    if workers == 1:
        results = [_wall_chunk(c) for c in chunks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_wall_chunk, chunks))
    merged = [p for chunk in results for p in chunk]
    merged.sort()
    return merged


def rank_divides_iff(p: int, k: int) -> bool:
    """Whether p | F_k; asserts this matches z(p) | k."""
    if k < 1:
        raise ValueError("index must be positive")
    divides = fib_mod(k, p) == 0
    by_rank = k % rank_of_apparition(p) == 0
    if divides != by_rank:
        raise ArithmeticError(
            f"divisibility of F_{k} by {p} disagrees with the rank criterion")
    return divides


# --- primitive prime divisors ----------------------------------------------

@lru_cache(maxsize=4096)
def _factored_term(d: int, kind: SequenceKind,
                   budget: FactorBudget) -> FactoredInteger:
    value = fib_exact(d) if kind is SequenceKind.FIBONACCI else lucas_exact(d)
    return factorize(value, budget)


def _divides_earlier_term(p: int, d: int, kind: SequenceKind) -> bool:
    """Does p divide a term of the sequence at some index 1 <= j < d?"""
    gen = iter_values(kind, modulus=p)
    next(gen)  # index 0 is excluded from primitivity comparisons
    for _ in range(1, d):
        if next(gen) == 0:
            return True
    return False


def _congruences_hold(d: int, primes: tuple[int, ...]) -> bool:
    for p in primes:
        symbol = legendre(p, 5)
        if symbol == 1 and p % d != 1:
            return False
        if symbol == -1 and p % d != d - 1:
            return False
        if symbol == 0:
            return False  # p = 5 never divides a Lucas term
    return True


def primitive_prime_divisors(d: int, kind: SequenceKind,
                             budget: FactorBudget | None = None
                             ) -> PrimitiveDivisorReport:
    """Primitive prime divisors of the d-th term, from a full factorization.

    Raises IncompleteFactorizationError when the term does not factor
    completely within the budget.  For Lucas terms at odd d > 1 the
    congruence of each primitive prime modulo d (sign chosen by its
    quadratic character mod 5) is verified on the spot.
    """
    if d < 1:
        raise ValueError("index must be positive")
    factored = _factored_term(d, kind, budget or DEFAULT_BUDGET)
    factored.require_complete()
    primitive = []
    for p in factored.prime_divisors():
        if kind is SequenceKind.FIBONACCI:
            if rank_of_apparition(p) == d:
                primitive.append(p)
        else:
            if not _divides_earlier_term(p, d, kind):
                primitive.append(p)
    primes = tuple(primitive)
    checked = False
    if kind is SequenceKind.LUCAS and d > 1 and d % 2 == 1:
        checked = _congruences_hold(d, primes)
    return PrimitiveDivisorReport(index=d, kind=kind, primitive_primes=primes,
                                  exceptional=not primes,
                                  congruence_checked=checked)


def primitive_part(d: int, kind: SequenceKind) -> int:
    """Product of primitive prime powers of the d-th term, by gcd stripping.

    Needs no factorization: every non-primitive prime divides the product
    of the earlier terms, so repeatedly dividing out the gcd with that
    product (reduced mod the term) leaves exactly the primitive part.
    """
    if d < 1:
        raise ValueError("index must be positive")
    term = fib_exact(d) if kind is SequenceKind.FIBONACCI else lucas_exact(d)
    if term <= 1:
        return term
    gen = iter_values(kind, modulus=term)
    next(gen)
    earlier_product = 1
    for _ in range(1, d):
        earlier_product = earlier_product * next(gen) % term
    part = term
    g = gcd(part, earlier_product)
    while g > 1:
        part //= g
        g = gcd(part, earlier_product)
    return part


def exceptional_indices(limit: int, kind: SequenceKind) -> list[int]:
    """Indices 2..limit whose term has no primitive prime divisor."""
    if limit < 2:
        raise ValueError("limit must be at least 2")
    return [d for d in range(2, limit + 1) if primitive_part(d, kind) == 1]


def primitive_congruence_check(d: int,
                               budget: FactorBudget | None = None) -> bool:
    """Verify p = +-1 (mod d) for each primitive prime of L_d, odd d > 1.

    The sign is dictated by the prime's quadratic character modulo 5; for
    odd d every prime divisor of L_d is a quadratic residue mod 5, so the
    minus branch is expected to stay empty (it is still checked).
    """
    if d <= 1 or d % 2 == 0:
        raise ValueError("the congruence applies to odd indices above 1")
    report = primitive_prime_divisors(d, SequenceKind.LUCAS, budget)
    return report.congruence_checked


# --- reciprocal-sum bound ---------------------------------------------------

@dataclass(frozen=True)
class BoundCheck:
    """Outcome of the primitive reciprocal-sum bound at one index."""

    index: int
    lhs: Fraction
    rhs: Enclosure
    holds: bool
    precision_bits: int


def primitive_reciprocal_sum(d: int,
                             budget: FactorBudget | None = None) -> Fraction:
    """Exact sum of 1/(p-1) over primitive primes of L_d."""
    report = primitive_prime_divisors(d, SequenceKind.LUCAS, budget)
    return sum((Fraction(1, p - 1) for p in report.primitive_primes),
               Fraction(0))


def bound_rhs(ctx: EnclosureContext, d: int,
              c1: Fraction = Fraction(9, 10),
              c2: Fraction = Fraction(11, 5)) -> Enclosure:
    """Enclosure of c1/d + c2 * ln(ln d) / d."""
    dd = ctx.of_int(d)
    first = ctx.div(ctx.of_fraction(c1), dd)
    second = ctx.div(ctx.mul(ctx.of_fraction(c2), ctx.lnln_int(d)), dd)
    return ctx.add(first, second)


def reciprocal_sum_bound_check(d: int, budget: FactorBudget | None = None,
                               bits: int = certified.DEFAULT_BITS,
                               escalations: int = certified.DEFAULT_ESCALATIONS,
                               c1: Fraction = Fraction(9, 10),
                               c2: Fraction = Fraction(11, 5)) -> BoundCheck:
    """Exact-LHS versus certified-RHS comparison of the reciprocal bound.

    True only when the exact sum is at most the lower endpoint of the RHS
    enclosure; a straddling enclosure escalates precision rather than
    deciding.
    """
    if d <= 10:
        raise ValueError("the bound is applied only for indices above 10")
    lhs = primitive_reciprocal_sum(d, budget)

    def check(ctx: EnclosureContext) -> bool | None:
        return certified.fraction_le(lhs, bound_rhs(ctx, d, c1, c2))

    holds, used_bits = certified.decide(check, bits=bits,
                                        escalations=escalations)
    rhs = bound_rhs(EnclosureContext(used_bits), d, c1, c2)
    return BoundCheck(index=d, lhs=lhs, rhs=rhs, holds=holds,
                      precision_bits=used_bits)


def rank_records_csv(records: list[RankRecord]) -> str:
    """CSV export: prime,rank,wall_exponent with a header row."""
    lines = ["prime,rank,wall_exponent"]
    lines.extend(f"{r.prime},{r.rank},{r.wall_exponent}" for r in records)
    return "\n".join(lines) + "\n"
