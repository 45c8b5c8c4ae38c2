"""Congruence solution counts for the mixed form and their error terms.

For a prime p, a power k and a target residue n the three counts are

    K(p,n)   solutions of x^2 + u1^3 + u2^3 + u3^3 + u4^k = n (mod p),
             all five variables coprime to p,
    L*(p,n)  solutions of x1^2 + x2^2 + u1^3 + u2^3 + u3^3 + u4^k = n (mod p),
             all six variables coprime to p,
    L(p,n)   the same congruence with x1 unrestricted.

Counting is by cyclic convolution of per-variable power histograms, exact in
integers, and L = L* + K holds identically (x1 is either a unit or the single
residue 0).  The error term E_p = p L*(p,n) - (p-1)^6 satisfies the closed
form bound (p-1)(sqrt p + 1)^2 (2 sqrt p + 1)^3 (13 sqrt p + 1), uniform over
powers k <= 14, and is cross-checked against an exponential-sum evaluation in
extended precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .arith import is_prime
from .errors import VerificationError
from .expsums import J_MAX, J_MIN, _power_residues, _unit_mask

K_MIN, K_MAX = 3, 14

# np.convolve on int64 is exact while products of histogram masses stay
# below 2^63; beyond that the pure-Python path takes over.
_INT64_SAFE = 2**62


@dataclass(frozen=True)
class ResidueHistogram:
    """counts[v] = number of x in 1..q with x^j = v (mod q) under the class constraint."""

    modulus: int
    counts: tuple[int, ...]

    def __post_init__(self):
        if len(self.counts) != self.modulus:
            raise ValueError("counts must have length q")
        if any(c < 0 for c in self.counts):
            raise ValueError("counts must be nonnegative")

    @property
    def mass(self) -> int:
        return sum(self.counts)


@dataclass(frozen=True)
class CongruenceSignature:
    """Variable list (exponent, units_only flag) and target residue."""

    terms: tuple[tuple[int, bool], ...]
    target: int

    def __post_init__(self):
        if not self.terms:
            raise ValueError("signature needs at least one variable")
        for j, _ in self.terms:
            if not (J_MIN <= j <= J_MAX):
                raise ValueError(f"exponent {j} outside [{J_MIN}, {J_MAX}]")


@dataclass(frozen=True)
class LocalDensities:
    p: int
    n_mod_p: int
    K: int
    L: int
    Lstar: int
    E_p: float

    def __post_init__(self):
        if self.L != self.Lstar + self.K:
            raise VerificationError(f"L = L* + K violated at p={self.p}, n={self.n_mod_p}")
        if self.p * self.Lstar - (self.p - 1) ** 6 != self.E_p:
            raise VerificationError(f"p L* = (p-1)^6 + E_p violated at p={self.p}")


def power_histogram(q: int, j: int, units_only: bool) -> ResidueHistogram:
    """Exact histogram of x^j mod q over a single pass x = 1..q."""
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    res = _power_residues(j, q)
    if units_only:
        res = res[_unit_mask(q)]
    counts = np.bincount(res, minlength=q)
    return ResidueHistogram(q, tuple(int(c) for c in counts))


def _cyclic_convolve_int64(a: np.ndarray, b: np.ndarray, q: int) -> np.ndarray:
    full = np.convolve(a, b)
    out = full[:q].copy()
    out[: q - 1] += full[q:]
    return out


def _cyclic_convolve_py(a, b, q):
    out = [0] * q
    for i, ai in enumerate(a):
        if ai:
            for jj, bj in enumerate(b):
                out[(i + jj) % q] += ai * bj
    return out


def congruence_counts(q: int, terms: tuple[tuple[int, bool], ...]) -> list[int]:
    """Solution counts for every target residue at once (exact integers)."""
    hists = [power_histogram(q, j, u) for j, u in terms]
    bound = 1
    for h in hists:
        bound *= max(1, h.mass)
    if bound < _INT64_SAFE:
        acc = np.array(hists[0].counts, dtype=np.int64)
        for h in hists[1:]:
            acc = _cyclic_convolve_int64(acc, np.array(h.counts, dtype=np.int64), q)
        return [int(c) for c in acc]
    acc = list(hists[0].counts)
    for h in hists[1:]:
        acc = _cyclic_convolve_py(acc, list(h.counts), q)
    return acc


def count_congruence(q: int, sig: CongruenceSignature) -> int:
    """Number of solution tuples of the signed congruence mod q."""
    return congruence_counts(q, sig.terms)[sig.target % q]


def _density_terms(k: int) -> dict[str, tuple[tuple[int, bool], ...]]:
    if not (K_MIN <= k <= K_MAX):
        raise ValueError(f"k must be in [{K_MIN}, {K_MAX}], got {k}")
    five = ((2, True), (3, True), (3, True), (3, True), (k, True))
    return {
        "K": five,
        "Lstar": ((2, True),) + five,
        "L": ((2, False),) + five,
    }


@lru_cache(maxsize=None)
def local_densities_all(p: int, k: int) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
    """(K, L, L*) for every residue n mod p, exact."""
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    terms = _density_terms(k)
    K = congruence_counts(p, terms["K"])
    Lstar = congruence_counts(p, terms["Lstar"])
    L = congruence_counts(p, terms["L"])
    if any(L[n] != Lstar[n] + K[n] for n in range(p)):
        raise VerificationError(f"L = L* + K fails at p={p}, k={k}")
    return tuple(K), tuple(L), tuple(Lstar)


def local_densities(p: int, n: int, k: int) -> LocalDensities:
    """The triple (K, L, L*) plus E_p for one prime and target residue."""
    K, L, Lstar = local_densities_all(p, k)
    r = n % p
    return LocalDensities(p, r, K[r], L[r], Lstar[r], float(p * Lstar[r] - (p - 1) ** 6))


def ep_bound(p: int, k: int = K_MAX) -> float:
    """Closed-form bound on |E_p|, uniform over powers k <= 14.

    The six unit sums contribute (gcd(j, p-1) - 1) sqrt(p) + 1 each; the
    k-th-power factor is taken at its worst case gcd - 1 <= 13.
    """
    if not (K_MIN <= k <= K_MAX):
        raise ValueError(f"k must be in [{K_MIN}, {K_MAX}], got {k}")
    rp = math.sqrt(p)
    return (p - 1) * (rp + 1) ** 2 * (2 * rp + 1) ** 3 * (13 * rp + 1)


@lru_cache(maxsize=64)
def _unit_sum_product_ld(p: int, k: int) -> np.ndarray:
    """S*2(p,a)^2 S*3(p,a)^3 S*k(p,a) for a = 0..p-1 in extended precision."""
    ar = np.arange(p, dtype=np.int64)
    ang = np.longdouble(2 * math.pi) / p
    phase = ang * ((ar[:, None] * ar[None, :]) % p)
    mat = np.cos(phase) + 1j * np.sin(phase)
    prod = np.ones(p, dtype=np.clongdouble)
    for j, power in ((2, 2), (3, 3), (k, 1)):
        h = np.zeros(p, dtype=np.longdouble)
        for x in range(1, p):
            h[pow(x, j, p)] += 1
        prod *= (mat @ h.astype(np.clongdouble)) ** power
    prod.setflags(write=False)
    return prod


def ep_via_sums(p: int, n: int, k: int) -> float:
    """E_p recomputed as sum_{a=1..p-1} S*2^2 S*3^3 S*k e(-an/p), extended precision.

    Independent floating cross-check of the count-based (exact) value; the
    extended-precision accumulation keeps the absolute error below 1e-3 for
    all p <= 499.
    """
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if p == 2:
        # single term a=1: S*_j(2,1) = e(1/2) = -1 for every j, so the
        # product is (-1)^6 = 1 and E_2 = e(-n/2) = (-1)^n.
        return 1.0 if n % 2 == 0 else -1.0
    t = _unit_sum_product_ld(p, k)
    ar = np.arange(1, p, dtype=np.int64)
    ang = np.longdouble(2 * math.pi) / p
    phase = ang * ((ar * (n % p)) % p)
    total = (t[1:] * (np.cos(phase) - 1j * np.sin(phase))).sum()
    if abs(float(total.imag)) > 1e-3:
        raise VerificationError(f"E_p spectral path not real at p={p}, n={n}: {total.imag}")
    return float(total.real)


def densities_float_all(p: int, k: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(K, L, L*) for every residue as floats via the spectral path.

    O(p log p) per prime; used where thousands of primes are needed (sieve
    products) and only ratios matter.  Exact counting stays authoritative.
    """
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    terms = _density_terms(k)
    out = []
    for name in ("K", "L", "Lstar"):
        spectrum = np.ones(p, dtype=complex)
        for j, units in terms[name]:
            res = _power_residues(j, p)
            if units:
                res = res[_unit_mask(p)]
            h = np.bincount(res, minlength=p).astype(np.float64)
            spectrum *= np.fft.fft(h)
        vals = np.fft.ifft(spectrum).real
        out.append(vals)
    return out[0], out[1], out[2]
