"""Linear-sieve constants, the parameter system, and the main-term margin.

The classical linear-sieve pair is F(s) = 2 e^gamma / s on 1 <= s <= 3 and
f(s) = 2 e^gamma log(s-1) / s on 2 <= s <= 4; outside those windows the
closed forms are not valid and the functions reject the input.  The sieve is
applied at s = log D / log z = 3, where the positivity of the main term
reduces to f(3) - F(3) C(k) = (2 e^gamma / 3)(log 2 - C(k)) > 0.

Sieve weights of level D are validated against the contract |lambda(d)| <= 1
with lambda(d) = 0 for d > D or d not squarefree; they are never constructed
here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .arith import factorize, mobius, primes_up_to
from .localdensity import K_MAX, K_MIN
from .singular import _omega_p

EULER_GAMMA = 0.57721566490153286
EXP_GAMMA = math.exp(EULER_GAMMA)

# Bookkeeping constant from the asymptotic argument; Q0 = (log n)^(50 A) is
# stored as an exponent only and never materialized.
BIG_A = 1e200


@dataclass(frozen=True)
class Parameters:
    """Dyadic box sizes and arc parameters for an even target n and power k."""

    n: int
    k: int
    eps: float
    x2: float
    x3: float
    xk: float
    x2_star: float
    x3_star: float
    xk_star: float
    D: float
    z: float
    q0_log_power: float  # Q0 = (log n) ** q0_log_power, kept symbolic
    Q1: float
    Q2: float

    def x(self, j: int) -> float:
        return {2: self.x2, 3: self.x3, self.k: self.xk}[j]

    def x_star(self, j: int) -> float:
        return {2: self.x2_star, 3: self.x3_star, self.k: self.xk_star}[j]


def params(n: int, k: int, eps: float = 1e-4) -> Parameters:
    """Populate every derived parameter, with range and sanity checks."""
    if n % 2 != 0:
        raise ValueError(f"n must be even, got {n}")
    if n < 10**6:
        raise ValueError(f"n must be >= 10**6 for meaningful box sizes, got {n}")
    if not (K_MIN <= k <= K_MAX):
        raise ValueError(f"k must be in [{K_MIN}, {K_MAX}], got {k}")
    if not (0 < eps <= 1e-3):
        raise ValueError(f"eps must lie in (0, 1e-3], got {eps}")
    d_exponent = 5.0 / (8 * k) - 1.0 / 24 - 51 * eps
    if d_exponent <= 0:
        raise ValueError(f"sieve level collapses: D-exponent {d_exponent} <= 0")
    base = 2.0 * n / 3.0

    def xj(j):
        return 0.5 * base ** (1.0 / j)

    def xj_star(j):
        return 0.5 * base ** (5.0 / (6.0 * j))

    D = float(n) ** d_exponent
    z = D ** (1.0 / 3.0)
    if z <= 2.0:
        raise ValueError(f"empty sieve range: z = {z} <= 2")
    p = Parameters(
        n=n,
        k=k,
        eps=eps,
        x2=xj(2),
        x3=xj(3),
        xk=xj(k),
        x2_star=xj_star(2),
        x3_star=xj_star(3),
        xk_star=xj_star(k),
        D=D,
        z=z,
        q0_log_power=50 * BIG_A,
        Q1=float(n) ** (5.0 / 9 - 5.0 / (6 * k) + 50 * eps),
        Q2=float(n) ** (4.0 / 9 + 5.0 / (6 * k) - 50 * eps),
    )
    # the dyadic boxes must be able to reach the target
    low = 2 * p.x2**2 + 2 * p.x3**3 + p.x3_star**3 + p.xk_star**k
    high = 2 * (2 * p.x2) ** 2 + 2 * (2 * p.x3) ** 3 + (2 * p.x3_star) ** 3 + (2 * p.xk_star) ** k
    if not (low < n <= high):
        raise ValueError(f"dyadic boxes incompatible with target: {low} < {n} <= {high} fails")
    return p


_WINDOW_SLACK = 1e-9  # tolerate roundoff when s is computed as log D / log z


def _clamp_window(s: float, lo: float, hi: float, name: str) -> float:
    if not (lo - _WINDOW_SLACK <= s <= hi + _WINDOW_SLACK):
        raise ValueError(f"{name} closed form is valid on [{lo}, {hi}] only, got s={s}")
    return min(max(s, lo), hi)


def f_lower(s: float) -> float:
    """Lower linear-sieve function 2 e^gamma log(s-1)/s, valid on 2 <= s <= 4."""
    s = _clamp_window(s, 2.0, 4.0, "f(s)")
    return 2.0 * EXP_GAMMA * math.log(s - 1.0) / s


def F_upper(s: float) -> float:
    """Upper linear-sieve function 2 e^gamma / s, valid on 1 <= s <= 3."""
    s = _clamp_window(s, 1.0, 3.0, "F(s)")
    return 2.0 * EXP_GAMMA / s


def sieve_product(n: int, k: int, z: float) -> float:
    """W(z) = prod over odd primes p < z of (1 - omega(p)/p)."""
    if n % 2 != 0:
        raise ValueError(f"n must be even, got {n}")
    if z <= 3.0:
        raise ValueError(f"need z > 3 for a nonempty product, got {z}")
    log_sum = 0.0
    for p in primes_up_to(math.ceil(z) - 1):  # primes strictly below z
        if p == 2 or p >= z:
            continue
        frac = _omega_p(p, n % p, k) / p
        if frac >= 1.0:
            return 0.0
        log_sum += math.log1p(-frac)
    return math.exp(log_sum)


def main_term_margin(k: int, c_k: float) -> float:
    """f(3) - F(3) C(k) = (2 e^gamma / 3)(log 2 - C(k)); positive iff the sieve wins."""
    if not (K_MIN <= k <= K_MAX):
        raise ValueError(f"k must be in [{K_MIN}, {K_MAX}], got {k}")
    return (2.0 * EXP_GAMMA / 3.0) * (math.log(2.0) - c_k)


def validate_sieve_weights(weights: dict[int, float], D: float) -> None:
    """Contract for externally supplied upper/lower sieve weights of level D.

    Requires |lambda(d)| <= 1 for all d, and lambda(d) = 0 whenever d > D or
    d is not squarefree.  Raises ValueError listing every violation.
    """
    bad = []
    for d, lam in weights.items():
        if d < 1:
            bad.append((d, lam, "d must be positive"))
            continue
        if abs(lam) > 1.0:
            bad.append((d, lam, "|lambda| > 1"))
        if lam != 0.0 and d > D:
            bad.append((d, lam, f"nonzero above level D={D}"))
        if lam != 0.0 and mobius(factorize(d)) == 0:
            bad.append((d, lam, "nonzero on non-squarefree d"))
    if bad:
        raise ValueError(f"sieve weight contract violated: {bad}")


def weighted_density_sum(weights: dict[int, float], n: int, k: int, z: float, D: float) -> float:
    """sum over d | P(z) of lambda(d) omega(d) / d for validated weights.

    P(z) is the product of odd primes below z, so admissible d are odd,
    squarefree, with every prime factor in (2, z).
    """
    from .singular import omega

    validate_sieve_weights(weights, D)
    total = 0.0
    for d in sorted(weights):
        lam = weights[d]
        if lam == 0.0:
            continue
        fd = factorize(d)
        if any(p == 2 or p >= z for p in fd.primes):
            raise ValueError(f"d={d} does not divide P(z) for z={z}")
        total += lam * omega(fd, n, k) / d
    return total


def sieve_window_value(n: int, k: int, z: float, D: float, side: str) -> float:
    """The comparison value W(z) f(log D / log z) (lower) or W(z) F(...) (upper)."""
    s = math.log(D) / math.log(z)
    w = sieve_product(n, k, z)
    if side == "lower":
        return w * f_lower(s)
    if side == "upper":
        return w * F_upper(s)
    raise ValueError(f"side must be 'lower' or 'upper', got {side!r}")
