"""Exact and modular Fibonacci/Lucas evaluation, identities, and periods.

Exact values come from the doubling identities

    F(2k)   = F(k) * (2*F(k+1) - F(k))
    F(2k+1) = F(k)^2 + F(k+1)^2
    L(k)    = 2*F(k+1) - F(k)

processed most-significant-bit first, so a single pass costs O(log n) big
multiplications.  The modular variants apply the same identities under the
modulus, which is what makes rank and period queries at large indices cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator

from .arith import two_adic_valuation


class SequenceKind(Enum):
    FIBONACCI = "fibonacci"
    LUCAS = "lucas"


@dataclass(frozen=True)
class SequencePair:
    """Exact (F_n, L_n) at one index."""

    index: int
    fib: int
    lucas: int


@dataclass(frozen=True)
class ModularPair:
    """Residues of (F_n, L_n) modulo a fixed modulus."""

    index: int
    modulus: int
    fib_res: int
    lucas_res: int


def _fib_pair(n: int) -> tuple[int, int]:
    """(F_n, F_{n+1}) by iterative doubling."""
    a, b = 0, 1
    if n == 0:
        return a, b
    for bit in bin(n)[2:]:
        c = a * (2 * b - a)
        d = a * a + b * b
        if bit == "1":
            a, b = d, c + d
        else:
            a, b = c, d
    return a, b


def _fib_pair_mod(n: int, m: int) -> tuple[int, int]:
    """(F_n mod m, F_{n+1} mod m)."""
    a, b = 0, 1 % m
    if n == 0:
        return a, b
    for bit in bin(n)[2:]:
        c = a * (2 * b - a) % m
        d = (a * a + b * b) % m
        if bit == "1":
            a, b = d, (c + d) % m
        else:
            a, b = c, d
    return a, b


def fib_exact(n: int) -> int:
    if n < 0:
        raise ValueError("index must be nonnegative")
    return _fib_pair(n)[0]


def lucas_exact(n: int) -> int:
    if n < 0:
        raise ValueError("index must be nonnegative")
    a, b = _fib_pair(n)
    return 2 * b - a


def sequence_pair(n: int) -> SequencePair:
    if n < 0:
        raise ValueError("index must be nonnegative")
    a, b = _fib_pair(n)
    return SequencePair(index=n, fib=a, lucas=2 * b - a)


def pair_mod(n: int, m: int) -> ModularPair:
    if n < 0:
        raise ValueError("index must be nonnegative")
    if m < 2:
        raise ValueError("modulus must be at least 2")
    a, b = _fib_pair_mod(n, m)
    return ModularPair(index=n, modulus=m, fib_res=a,
                       lucas_res=(2 * b - a) % m)


def fib_mod(n: int, m: int) -> int:
    return pair_mod(n, m).fib_res


def lucas_mod(n: int, m: int) -> int:
    return pair_mod(n, m).lucas_res


def value(n: int, kind: SequenceKind) -> int:
    return fib_exact(n) if kind is SequenceKind.FIBONACCI else lucas_exact(n)


def iter_values(kind: SequenceKind, modulus: int | None = None) -> Iterator[int]:
    """Yield the sequence from index 0 on, optionally reduced mod modulus."""
    a, b = (0, 1) if kind is SequenceKind.FIBONACCI else (2, 1)
    if modulus is not None:
        if modulus < 2:
            raise ValueError("modulus must be at least 2")
        a, b = a % modulus, b % modulus
    while True:
        yield a
        a, b = b, a + b
        if modulus is not None:
            b %= modulus


# --- identity checks -------------------------------------------------------

def check_identity_square(n: int) -> bool:
    """L_n^2 - 5 F_n^2 == 4 (-1)^n, exactly."""
    pair = sequence_pair(n)
    sign = -1 if n % 2 else 1
    return pair.lucas**2 - 5 * pair.fib**2 == 4 * sign


def check_identity_even(n: int) -> bool:
    """L_n == L_{n/2}^2 - 2 (-1)^{n/2} for even n."""
    if n % 2:
        raise ValueError("identity applies to even indices only")
    half = n // 2
    sign = -1 if half % 2 else 1
    return lucas_exact(n) == lucas_exact(half) ** 2 - 2 * sign


def check_identity_odd(n: int) -> bool:
    """L_n - 1 factored through the half indices, for odd n.

    n % 4 == 1:  L_n - 1 == 5 * F_{(n+1)/2} * F_{(n-1)/2}
    n % 4 == 3:  L_n - 1 == L_{(n+1)/2} * L_{(n-1)/2}
    """
    if n % 2 == 0:
        raise ValueError("identity applies to odd indices only")
    up, down = (n + 1) // 2, (n - 1) // 2
    lhs = lucas_exact(n) - 1
    if n % 4 == 1:
        return lhs == 5 * fib_exact(up) * fib_exact(down)
    return lhs == lucas_exact(up) * lucas_exact(down)


# --- periods and residue tables -------------------------------------------

class PeriodSearchError(ArithmeticError):
    """The state pair failed to recur within the sanity cap."""


def period_mod(m: int, kind: SequenceKind) -> int:
    """Least period of the sequence modulo m.

    Detected as the first return of the consecutive-residue state pair to
    the seed state.  The search is capped at 6*m*m steps; the true period
    never exceeds 6*m, so hitting the cap indicates a bug, not mathematics.
    """
    if m < 2:
        raise ValueError("modulus must be at least 2")
    seed = (0 % m, 1 % m) if kind is SequenceKind.FIBONACCI else (2 % m, 1 % m)
    state = seed
    cap = 6 * m * m
    for step in range(1, cap + 1):
        state = (state[1], (state[0] + state[1]) % m)
        if state == seed:
            return step
    raise PeriodSearchError(f"no recurrence of the seed state within {cap} steps")


def residues_mod(m: int, kind: SequenceKind, count: int) -> list[int]:
    """First ``count`` residues of the sequence modulo m."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    out: list[int] = []
    gen = iter_values(kind, modulus=m)
    for _ in range(count):
        out.append(next(gen))
    return out


def max_two_adic_valuation_lucas() -> int:
    """Largest power of 2 dividing any Lucas number.

    One full period of L mod 8 determines this: a residue of 0 would leave
    the valuation unresolved, but none occurs, so the maximum is read off
    the residues directly (4 appears, giving 2; nothing higher).
    """
    period = period_mod(8, SequenceKind.LUCAS)
    best = 0
    for r in residues_mod(8, SequenceKind.LUCAS, period):
        if r == 0:
            raise ArithmeticError(
                "a Lucas residue of 0 mod 8 would need a deeper scan")
        if r % 2 == 0:
            best = max(best, two_adic_valuation(r))
    return best
