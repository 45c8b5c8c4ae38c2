"""Deterministic integer arithmetic: primes, factorization, multiplicative functions.

All operations are pure and exact.  Inputs are desk scale (values up to about
10**12), so factorization is trial division against a shared prime table,
backed by a deterministic Miller-Rabin test for the 64-bit range.  The prime
table is built once and never mutated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

TRIAL_TABLE_LIMIT = 10**6

# Witness set making Miller-Rabin deterministic for n < 3.3 * 10**24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@dataclass(frozen=True)
class FactoredInt:
    """A positive integer with its full prime factorization.

    ``factors`` is an ordered tuple of (prime, exponent) pairs with strictly
    increasing primes and exponents >= 1; the product reproduces ``value``.
    """

    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.value < 1:
            raise ValueError(f"value must be positive, got {self.value}")
        prod = 1
        previous = 1
        for p, e in self.factors:
            if e < 1:
                raise ValueError(f"exponent must be >= 1, got {p}^{e}")
            if p <= previous:
                raise ValueError("primes must be strictly increasing")
            previous = p
            prod *= p**e
        if prod != self.value:
            raise ValueError(f"factors multiply to {prod}, not {self.value}")

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)


@lru_cache(maxsize=None)
def _sieve(limit: int) -> np.ndarray:
    """Boolean primality array for 0..limit (read-only)."""
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    flags.setflags(write=False)
    return flags


def primes_up_to(limit: int) -> list[int]:
    """All primes in [2, limit], ascending."""
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    if limit < 2:
        return []
    flags = _sieve(limit if limit > TRIAL_TABLE_LIMIT else TRIAL_TABLE_LIMIT)
    return np.nonzero(flags[: limit + 1])[0].tolist()


def is_prime(n: int) -> bool:
    """Deterministic primality test for the supported (64-bit) range."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> FactoredInt:
    """Full prime factorization by trial division; factorize(1) is the empty product."""
    if n < 1:
        raise ValueError(f"cannot factorize {n}; need n >= 1")
    remaining = n
    factors = []
    if remaining > 1:
        flags = _sieve(TRIAL_TABLE_LIMIT)
        for p in range(2, TRIAL_TABLE_LIMIT + 1):
            if p * p > remaining:
                break
            if not flags[p]:
                continue
            if remaining % p == 0:
                e = 0
                while remaining % p == 0:
                    remaining //= p
                    e += 1
                factors.append((p, e))
        if remaining > 1:
            # After removing all factors <= 10**6, a desk-scale leftover is prime.
            if not is_prime(remaining):
                raise ValueError(f"{n} is outside the supported factoring range")
            factors.append((remaining, 1))
    return FactoredInt(n, tuple(factors))


def euler_phi(f: FactoredInt) -> int:
    """Euler's totient from the factorization; phi(1) = 1."""
    out = 1
    for p, e in f.factors:
        out *= (p - 1) * p ** (e - 1)
    return out


def mobius(f: FactoredInt) -> int:
    """Moebius function: 0 on non-squarefree, else (-1)^(number of primes)."""
    for _, e in f.factors:
        if e >= 2:
            return 0
    return -1 if len(f.factors) % 2 else 1


def big_omega(f: FactoredInt) -> int:
    """Number of prime factors counted with multiplicity; 0 for n = 1."""
    return sum(e for _, e in f.factors)


def divisors(f: FactoredInt) -> list[int]:
    """All positive divisors, ascending."""
    out = [1]
    for p, e in f.factors:
        out = [d * p**i for d in out for i in range(e + 1)]
    return sorted(out)


def primitive_root(p: int) -> int:
    """Smallest generator of the multiplicative group mod an odd prime p."""
    if p == 2 or not is_prime(p):
        raise ValueError(f"need an odd prime, got {p}")
    phi_factors = factorize(p - 1).primes
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in phi_factors):
            return g
    raise RuntimeError(f"no primitive root found mod {p}")  # unreachable for prime p


def crt(residues: list[int], moduli: list[int]) -> int:
    """Solve x = r_i (mod m_i) for pairwise coprime moduli; result mod prod(m_i)."""
    if len(residues) != len(moduli) or not moduli:
        raise ValueError("residues and moduli must be nonempty and equal length")
    x, m = 0, 1
    for r, q in zip(residues, moduli):
        if math.gcd(m, q) != 1:
            raise ValueError("moduli must be pairwise coprime")
        x = (x + m * ((r - x) * pow(m, -1, q) % q)) % (m * q)
        m *= q
    return x
