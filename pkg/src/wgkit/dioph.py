"""Exact Diophantine counting with meet-in-the-middle acceleration.

The counts here stand in for mean-value estimates: the number of solutions of

    y1^k + y2^k = y3^k + y4^k                     (fourth-moment count)
    x1^3 + y1^k + y2^k = x2^3 + y3^k + y4^k       (mixed count, Q = P^(5/2k))
    x1^3 + z1^3 + y1^k = x2^3 + z2^3 + y2^k       (triple count)

over dyadic boxes (X, 2X], plus representation counts for the target form
n = x^2 + p1^2 + p2^3 + p3^3 + p4^3 + p5^k with x almost-prime.  Every count
is available both by meet-in-the-middle (hash-join on one side's value
multiset: solutions of A = B number sum over values v of count_A(v) *
count_B(v)) and, at small sizes, by exhaustive comparison, and the two must
agree exactly.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .arith import big_omega, factorize, is_prime, primes_up_to
from .errors import BudgetExceeded, VerificationError
from .sieveconsts import Parameters

PAIR_BUDGET = 10**8
MEMORY_BUDGET_BYTES = 4 * 2**30


@dataclass(frozen=True)
class CountReport:
    description: str
    parameters: dict
    count: int
    wall_time: float
    method: str


@dataclass(frozen=True)
class ScalingFit:
    points: tuple[tuple[float, float], ...]  # (log size, log count)
    slope: float
    intercept: float
    max_residual: float


def dyadic_range(X: float) -> np.ndarray:
    """Integers in the half-open box (X, 2X]."""
    lo = math.floor(X) + 1
    hi = math.floor(2 * X)
    if hi < lo:
        return np.empty(0, dtype=np.int64)
    return np.arange(lo, hi + 1, dtype=np.int64)


def _powers(values: np.ndarray, k: int) -> np.ndarray:
    """values**k, exact: int64 when safe, Python ints (object dtype) otherwise."""
    if values.size and int(values.max()) ** k >= 2**62:
        return np.array([int(v) ** k for v in values.tolist()], dtype=object)
    return values.astype(np.int64) ** k


def _paircount_square_sum(values: np.ndarray) -> int:
    """sum over distinct values v of multiplicity(v)^2 (the hash-join core)."""
    _, counts = np.unique(values, return_counts=True)
    return int((counts.astype(object) ** 2).sum())


def count_hua4(k: int, Q: float, method: str = "meet_in_middle") -> CountReport:
    """Solutions of y1^k + y2^k = y3^k + y4^k with all y in (Q, 2Q]."""
    if Q < 1:
        raise ValueError(f"Q must be >= 1, got {Q}")
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    ys = dyadic_range(Q)
    t0 = time.perf_counter()
    if method == "meet_in_middle":
        if ys.size**2 > PAIR_BUDGET:
            raise BudgetExceeded(f"pair table would hold {ys.size**2} entries")
        pk = _powers(ys, k)
        sums = (pk[:, None] + pk[None, :]).ravel()
        count = _paircount_square_sum(sums)
    elif method == "exhaustive":
        if ys.size**4 > 4 * 10**8:
            raise BudgetExceeded(f"exhaustive scan of {ys.size**4} tuples refused")
        pk = _powers(ys, k)
        left = (pk[:, None] + pk[None, :]).ravel()
        count = 0
        for s in left.tolist():  # literal comparison against every right pair
            count += int((left == s).sum())
    else:
        raise ValueError(f"unknown method {method!r}")
    return CountReport(
        "fourth-moment pair count",
        {"k": k, "Q": Q, "range": (int(math.floor(Q)) + 1, int(math.floor(2 * Q)))},
        count,
        time.perf_counter() - t0,
        method,
    )


@dataclass(frozen=True)
class MixedCount:
    S: CountReport
    S1: CountReport
    S2: CountReport
    Q: float
    max_h: int  # largest |x2 - x1| over found off-diagonal solutions
    h_limit: float  # 2^k sqrt(P)


def count_mixed_S(k: int, P: float) -> MixedCount:
    """Solutions of x1^3 + y1^k + y2^k = x2^3 + y3^k + y4^k on dyadic boxes.

    x in (P, 2P], y in (Q, 2Q] with Q = P^(5/2k).  The diagonal part S1
    (x1 = x2) is computed two ways, from the per-(value, x) multiplicities and
    as P' * hua4, which must agree exactly; S2 = S - S1.  Every off-diagonal
    solution must satisfy |x2 - x1| < 2^k sqrt(P).
    """
    if k < 3:
        raise ValueError(f"k must be >= 3, got {k}")
    if P < 2:
        raise ValueError(f"P must be >= 2, got {P}")
    Q = P ** (5.0 / (2 * k))
    xs = dyadic_range(P)
    ys = dyadic_range(Q)
    n_pairs = xs.size * ys.size**2
    if n_pairs > PAIR_BUDGET:
        raise BudgetExceeded(
            f"{xs.size} x-values times {ys.size}^2 y-pairs = {n_pairs} entries "
            f"exceeds the {PAIR_BUDGET} budget"
        )
    if n_pairs * 16 > MEMORY_BUDGET_BYTES:
        raise BudgetExceeded(f"hash table would need ~{n_pairs * 16} bytes")
    t0 = time.perf_counter()
    hua = count_hua4(k, Q)

    pk = _powers(ys, k)
    x3 = _powers(xs, 3)
    pair_sums = (pk[:, None] + pk[None, :]).ravel()
    vals = (x3[:, None] + pair_sums[None, :]).ravel()
    x_of = np.broadcast_to(xs[:, None], (xs.size, pair_sums.size)).ravel()

    order = np.argsort(vals, kind="stable")
    sv = vals[order]
    sx = x_of[order]
    starts = np.flatnonzero(np.concatenate(([True], sv[1:] != sv[:-1])))
    run_counts = np.diff(np.append(starts, sv.size))
    S_total = int((run_counts.astype(object) ** 2).sum())

    # off-diagonal structure per value run
    xmin = np.minimum.reduceat(sx, starts)
    xmax = np.maximum.reduceat(sx, starts)
    max_h = int((xmax - xmin).max()) if starts.size else 0
    h_limit = 2.0**k * math.sqrt(P)
    if max_h >= h_limit:
        raise VerificationError(f"off-diagonal shift {max_h} >= 2^k sqrt(P) = {h_limit}")

    # S1 directly: per (value, x) multiplicities c, S1 = sum c^2
    stride = int(xs.max()) + 1
    if vals.dtype != object and int(sv[-1]) < 2**62 // stride:
        _, cc = np.unique(sv * stride + sx, return_counts=True)
        S1_direct = int((cc.astype(object) ** 2).sum())
    else:
        from collections import Counter

        cnt = Counter(zip(sv.tolist(), sx.tolist()))
        S1_direct = sum(c * c for c in cnt.values())

    wall = time.perf_counter() - t0
    P_count = int(xs.size)
    S1_val = P_count * hua.count
    if S1_direct != S1_val:
        raise VerificationError(
            f"diagonal identity failed: direct {S1_direct} != P' * hua4 {S1_val}"
        )
    common = {"k": k, "P": P, "Q": Q, "P_count": P_count, "Q_count": int(ys.size)}
    return MixedCount(
        S=CountReport("mixed cube/k-power count S", common, S_total, wall, "meet_in_middle"),
        S1=CountReport("diagonal part S1 = P' * hua4", common, S1_val, wall, "meet_in_middle"),
        S2=CountReport("off-diagonal part S2", common, S_total - S1_val, wall, "meet_in_middle"),
        Q=Q,
        max_h=max_h,
        h_limit=h_limit,
    )


def count_mixed_S_exhaustive(k: int, P: float) -> int:
    """Literal comparison count of the mixed equation (oracle for small P)."""
    Q = P ** (5.0 / (2 * k))
    xs = dyadic_range(P)
    ys = dyadic_range(Q)
    if xs.size * ys.size**2 > 10**4:
        raise BudgetExceeded("exhaustive mixed count refused")
    pk = _powers(ys, k)
    x3 = _powers(xs, 3)
    left = (x3[:, None, None] + pk[None, :, None] + pk[None, None, :]).ravel()
    count = 0
    for s in left.tolist():
        count += int((left == s).sum())
    return count


def count_admissible_triple(k: int, N: float, method: str = "meet_in_middle") -> CountReport:
    """Solutions of x1^3 + z1^3 + y1^k = x2^3 + z2^3 + y2^k on the triple boxes.

    x in (N^(1/3), 2N^(1/3)], z in (N^(5/18), 2N^(5/18)], y in (N^(5/6k), 2N^(5/6k)].
    """
    if k < 3:
        raise ValueError(f"k must be >= 3, got {k}")
    if N < 2:
        raise ValueError(f"N must be >= 2, got {N}")
    xs = dyadic_range(N ** (1.0 / 3))
    zs = dyadic_range(N ** (5.0 / 18))
    ys = dyadic_range(N ** (5.0 / (6 * k)))
    side = xs.size * zs.size * ys.size
    if side > PAIR_BUDGET:
        raise BudgetExceeded(f"side multiset of {side} entries exceeds budget")
    t0 = time.perf_counter()
    x3 = _powers(xs, 3)
    z3 = _powers(zs, 3)
    yk = _powers(ys, k)
    vals = (x3[:, None, None] + z3[None, :, None] + yk[None, None, :]).ravel()
    if method == "meet_in_middle":
        count = _paircount_square_sum(vals)
    elif method == "exhaustive":
        if side**2 > 4 * 10**8:
            raise BudgetExceeded("exhaustive triple scan refused")
        count = 0
        for s in vals.tolist():
            count += int((vals == s).sum())
    else:
        raise ValueError(f"unknown method {method!r}")
    return CountReport(
        "admissible-triple count",
        {
            "k": k,
            "N": N,
            "x_count": int(xs.size),
            "z_count": int(zs.size),
            "y_count": int(ys.size),
        },
        count,
        time.perf_counter() - t0,
        method,
    )


def fit_scaling(counts: list[CountReport], size_key: str) -> ScalingFit:
    """Least-squares slope of log(count) against log(parameters[size_key])."""
    if len(counts) < 4:
        raise ValueError(f"need >= 4 points for a scaling fit, got {len(counts)}")
    pts = []
    for rep in counts:
        size = rep.parameters[size_key]
        if size <= 0 or rep.count <= 0:
            raise ValueError("scaling fit needs positive sizes and counts")
        pts.append((math.log(float(size)), math.log(float(rep.count))))
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    slope, intercept = np.polyfit(xs, ys, 1)
    resid = np.abs(ys - (slope * xs + intercept)).max()
    return ScalingFit(tuple(pts), float(slope), float(intercept), float(resid))


def _omega_table(limit: int) -> np.ndarray:
    """Omega(x) (prime factors with multiplicity) for 0..limit by sieve."""
    om = np.zeros(limit + 1, dtype=np.int64)
    for p in primes_up_to(max(2, limit)):
        step = p
        while step <= limit:
            om[step::step] += 1
            step *= p
    return om


def count_representations(
    n: int,
    k: int,
    r: int,
    mode: str = "free",
    box_params: Parameters | None = None,
) -> CountReport:
    """Representations n = x^2 + p1^2 + p2^3 + p3^3 + p4^3 + p5^k, Omega(x) <= r.

    The p_i are primes; x >= 1 is an almost-prime with at most r prime
    factors counted with multiplicity (x = 1 qualifies, having none).  In
    dyadic mode every variable is confined to its box from ``box_params``.
    """
    if n % 2 != 0:
        raise ValueError(f"the representation target must be even, got n={n}")
    if n < 6:
        raise ValueError(f"n too small, got {n}")
    if r < 0:
        raise ValueError(f"r must be >= 0, got {r}")
    if k < 3:
        raise ValueError(f"k must be >= 3, got {k}")
    if n > 10**8:
        raise BudgetExceeded(f"representation counting capped at n = 10**8, got {n}")
    if mode not in ("free", "dyadic"):
        raise ValueError(f"mode must be 'free' or 'dyadic', got {mode!r}")
    if mode == "dyadic" and box_params is None:
        raise ValueError("dyadic mode needs box_params")
    t0 = time.perf_counter()

    def prime_array(arr: np.ndarray) -> np.ndarray:
        return np.array([v for v in arr.tolist() if is_prime(v)], dtype=np.int64)

    if mode == "free":
        x_hi = math.isqrt(n)
        xs = np.arange(1, x_hi + 1, dtype=np.int64)
        om = _omega_table(x_hi)
        xs = xs[om[1 : x_hi + 1] <= r]
        p1s = np.array(primes_up_to(max(2, math.isqrt(n))), dtype=np.int64)
        cube_a = np.array(primes_up_to(max(2, int(round(n ** (1 / 3))) + 2)), dtype=np.int64)
        cube_a = cube_a[cube_a**3 <= n]
        cube_b = cube_a
        k_ps = np.array(primes_up_to(max(2, int(round(n ** (1.0 / k))) + 2)), dtype=np.int64)
        k_ps = k_ps[k_ps**k <= n]
    else:
        bp = box_params
        xs = dyadic_range(bp.x2)
        if xs.size:
            om = _omega_table(int(xs.max()))
            xs = xs[om[xs] <= r]
        p1s = prime_array(dyadic_range(bp.x2))
        cube_a = prime_array(dyadic_range(bp.x3))
        cube_b = prime_array(dyadic_range(bp.x3_star))
        k_ps = prime_array(dyadic_range(bp.xk_star))

    count = 0
    if min(xs.size, p1s.size, cube_a.size, cube_b.size, k_ps.size) > 0:
        # left multiset x^2 + p1^2, sorted with multiplicities
        a_vals, a_counts = np.unique(
            ((xs * xs)[:, None] + (p1s * p1s)[None, :]).ravel(), return_counts=True
        )
        # cubes p2^3 + p3^3 + p4^3, then stream over p5
        a3 = cube_a**3
        trip = (a3[:, None, None] + a3[None, :, None] + (cube_b**3)[None, None, :]).ravel()
        trip = trip[trip < n]
        for p5 in k_ps.tolist():
            targets = n - p5**k - trip
            targets = targets[targets > 0]
            idx = np.searchsorted(a_vals, targets)
            ok = (idx < a_vals.size) & (a_vals[np.minimum(idx, a_vals.size - 1)] == targets)
            count += int(a_counts[idx[ok]].sum())
    return CountReport(
        "representation count for the mixed form",
        {"n": n, "k": k, "r": r, "mode": mode},
        count,
        time.perf_counter() - t0,
        "meet_in_middle",
    )


def is_in_Br(m: int, r: int, z: float, X2: float) -> bool:
    """Membership in the bad set: X2 < m <= 2X2, exactly r prime factors, all >= z."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if not (X2 < m <= 2 * X2):
        return False
    f = factorize(m)
    if big_omega(f) != r:
        return False
    return all(p >= z for p in f.primes)


def is_in_Nr(ell: int, r: int, z: float, X2: float) -> bool:
    """Membership in the near-set: r-1 factors all >= z, and ell * (largest) <= 2X2."""
    if ell < 1:
        raise ValueError(f"ell must be >= 1, got {ell}")
    f = factorize(ell)
    if big_omega(f) != r - 1:
        return False
    if not all(p >= z for p in f.primes):
        return False
    largest = f.primes[-1] if f.primes else 1
    return ell * largest <= 2 * X2


def nr_weight(ell: int, p: int, X2: float) -> float:
    """The smoothing weight log p / log(X2 / ell) attached to a near-set element."""
    if not (0 < ell < X2):
        raise ValueError(f"need 0 < ell < X2, got ell={ell}, X2={X2}")
    return math.log(p) / math.log(X2 / ell)
