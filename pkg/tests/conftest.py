"""Shared brute-force oracles, deliberately independent of the library.

Everything here sticks to schoolbook methods: iterate the recurrence, count
gcds, trial-divide.  Slow is fine; these exist so that the fast paths in
the package are checked against something that cannot share their bugs.
"""

from __future__ import annotations

import math

import pytest


def iterative_fib(n: int) -> int:
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def iterative_lucas(n: int) -> int:
    a, b = 2, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def lucas_table(limit: int) -> list[int]:
    values = [2, 1]
    while len(values) <= limit:
        values.append(values[-1] + values[-2])
    return values[:limit + 1]


def fib_table(limit: int) -> list[int]:
    values = [0, 1]
    while len(values) <= limit:
        values.append(values[-1] + values[-2])
    return values[:limit + 1]


def brute_totient(n: int) -> int:
    return sum(1 for a in range(1, n + 1) if math.gcd(a, n) == 1)


def trial_factor(n: int) -> dict[int, int]:
    factors: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def trial_is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


def brute_rank(p: int, cap: int | None = None) -> int:
    """First positive index whose Fibonacci value is divisible by p."""
    cap = cap or 2 * p + 2
    a, b = 0, 1
    for idx in range(1, cap + 1):
        a, b = b, (a + b) % p
        if a == 0:
            return idx
    raise AssertionError(f"no rank below {cap} for {p}")


def brute_period(m: int, seeds: tuple[int, int]) -> int:
    seed = (seeds[0] % m, seeds[1] % m)
    state = seed
    for step in range(1, 12 * m * m):
        state = (state[1], (state[0] + state[1]) % m)
        if state == seed:
            return step
    raise AssertionError(f"no period found mod {m}")


def squares_mod(p: int) -> set[int]:
    return {pow(a, 2, p) for a in range(1, p)}


def v2(n: int) -> int:
    count = 0
    while n % 2 == 0:
        n //= 2
        count += 1
    return count


@pytest.fixture(scope="session")
def lucas_2000() -> list[int]:
    return lucas_table(2000)


@pytest.fixture(scope="session")
def fib_2000() -> list[int]:
    return fib_table(2000)
