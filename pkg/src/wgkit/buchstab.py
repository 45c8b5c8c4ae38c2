"""Iterated sieve integrals c_r(k) by a flattened level recursion.

The nested integral behind c_r(k) collapses to a one-dimensional recursion:

    g_2(u) = int_2^u log(t-1)/t dt
    g_m(u) = int_m^u g_{m-1}(t-1) / t dt          (m >= 3)
    c_r(k) = g_{r-1}(U_k),   U_k = (37k - 15) / (15 - k).

Each level is sampled on a lattice anchored at U_k with step 1/S (S integer),
so the shift t -> t-1 stays on-lattice and no interpolation enters the
recursion; the cumulative integral per level is composite Simpson.  The
integrand is smooth everywhere (log(t-1) vanishes at t = 2; no singularity),
so refinement converges at fourth order, and doubling S is used as the
convergence check.  Levels whose supremum falls below 1e-15 short-circuit to
the zero function; the recursion depth reaches ~500 for k = 14.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_simpson

from . import reference
from .errors import VerificationError

K_MIN, K_MAX = 3, 14
DEFAULT_TOL = 1e-8
ZERO_LEVEL_SUP = 1e-15
_BASE_STEPS_PER_UNIT = 128


def upper_limit(k: int) -> float:
    """Upper integration limit U_k = (37k - 15)/(15 - k); requires k < 15."""
    _check_k(k)
    return (37.0 * k - 15.0) / (15.0 - k)


def max_r(k: int) -> int:
    """Largest prime-factor count in the tail sum: floor(36k / (15 - k))."""
    _check_k(k)
    return math.floor(36 * k / (15 - k))


def _check_k(k: int) -> None:
    if not (K_MIN <= k <= K_MAX):
        raise ValueError(f"k must be in [{K_MIN}, {K_MAX}], got {k}")


@dataclass(frozen=True)
class LevelFunction:
    """One level g_m sampled on its lattice, with cubic off-lattice evaluation."""

    m: int
    U: float
    xs: np.ndarray
    ys: np.ndarray

    def __call__(self, u: float) -> float:
        if u <= self.xs[0]:
            return 0.0
        if u >= self.xs[-1]:
            return float(self.ys[-1])
        if len(self.xs) < 4:
            return float(np.interp(u, self.xs, self.ys))
        i = int(np.searchsorted(self.xs, u)) - 1
        lo = min(max(i - 1, 0), len(self.xs) - 4)
        x = self.xs[lo : lo + 4]
        y = self.ys[lo : lo + 4]
        # 4-point Lagrange (piecewise cubic)
        total = 0.0
        for a in range(4):
            w = 1.0
            for b in range(4):
                if a != b:
                    w *= (u - x[b]) / (x[a] - x[b])
            total += w * y[a]
        return total

    @property
    def top_value(self) -> float:
        return float(self.ys[-1])


def _cascade(k: int, steps_per_unit: int, r_cap: int | None = None) -> dict[int, float]:
    """c_r for r = 4..max_r(k) at a fixed lattice resolution."""
    U = upper_limit(k)
    h = 1.0 / steps_per_unit
    top = max_r(k) - 1 if r_cap is None else min(max_r(k) - 1, r_cap - 1)
    out: dict[int, float] = {}
    prev_ys = None
    prev_len = 0
    dead = False
    for m in range(2, top + 1):
        if dead or U - m <= 0:
            out[m + 1] = 0.0
            continue
        n_m = int(math.floor((U - m) / h + 1e-12))
        xs = U - h * np.arange(n_m, -1, -1)
        if xs.size < 3:
            # domain shorter than two lattice cells: value is below any tolerance
            out[m + 1] = 0.0
            prev_ys, prev_len = np.zeros(xs.size), xs.size
            continue
        if m == 2:
            integrand = np.log(xs - 1.0) / xs
        else:
            # g_{m-1}(xs - 1): on-lattice lookup, shifted by S indices
            idx = (prev_len - 1) - n_m - steps_per_unit + np.arange(xs.size)
            integrand = prev_ys[idx] / xs
        # partial bottom cell [m, xs[0]]; the integrand vanishes at t = m exactly
        w = xs[0] - m
        if w > 1e-13:
            coeffs = np.polyfit(
                np.array([m, xs[0], xs[1]]),
                np.array([0.0, integrand[0], integrand[1]]),
                2,
            )
            anti = np.polyint(coeffs)
            base = float(np.polyval(anti, xs[0]) - np.polyval(anti, m))
        else:
            base = 0.0
        ys = cumulative_simpson(integrand, dx=h, initial=0.0) + base
        out[m + 1] = float(ys[-1])
        if ys.max() < ZERO_LEVEL_SUP:
            dead = True
        prev_ys, prev_len = ys, xs.size
    for r in range(4, max_r(k) + 1):
        out.setdefault(r, 0.0)
    return out


def _converged_values(k: int, tol: float, r_cap: int | None = None) -> tuple[dict[int, float], float]:
    """Refine the lattice until halving the step moves every c_r by < tol."""
    steps = _BASE_STEPS_PER_UNIT
    coarse = _cascade(k, steps, r_cap)
    while True:
        fine = _cascade(k, 2 * steps, r_cap)
        err = max(abs(fine[r] - coarse[r]) for r in fine)
        if err < tol:
            return fine, err
        steps *= 2
        coarse = fine
        if steps > 4096:
            raise VerificationError(f"level recursion failed to converge for k={k}")


def level_function(m: int, k: int, steps_per_unit: int = 2 * _BASE_STEPS_PER_UNIT) -> LevelFunction:
    """The sampled level g_m on [m, U_k], for inspection and spot checks."""
    _check_k(k)
    if m < 2:
        raise ValueError(f"levels start at m = 2, got {m}")
    U = upper_limit(k)
    h = 1.0 / steps_per_unit
    prev = None
    for mm in range(2, m + 1):
        n_m = int(math.floor((U - mm) / h + 1e-12))
        if U - mm <= 0 or n_m < 2:
            xs = np.array([float(mm), U]) if U > mm else np.array([float(mm)])
            prev = LevelFunction(mm, U, xs, np.zeros_like(xs))
            continue
        xs = U - h * np.arange(n_m, -1, -1)
        if mm == 2:
            integrand = np.log(xs - 1.0) / xs
        else:
            integrand = np.array([prev(t - 1.0) for t in xs]) / xs
        w = xs[0] - mm
        base = 0.0
        if w > 1e-13:
            coeffs = np.polyfit(
                np.array([mm, xs[0], xs[1]]), np.array([0.0, integrand[0], integrand[1]]), 2
            )
            anti = np.polyint(coeffs)
            base = float(np.polyval(anti, xs[0]) - np.polyval(anti, mm))
        ys = cumulative_simpson(integrand, dx=h, initial=0.0) + base
        prev = LevelFunction(mm, U, xs, ys)
    return prev


def iterated_integral(r: int, k: int, tol: float = DEFAULT_TOL) -> float:
    """c_r(k) = g_{r-1}(U_k) to absolute accuracy tol; 0 when r - 1 >= U_k."""
    _check_k(k)
    if r < 4:
        raise ValueError(f"the nested integral needs r >= 4, got {r}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if r - 1 >= upper_limit(k):
        return 0.0
    values, _ = _converged_values(k, tol, r_cap=r)
    return values[r]


@dataclass(frozen=True)
class CrEntry:
    r: int
    value: float
    bound: float | None  # published reference bound, when listed
    within_bound: bool | None  # value <= bound * (1 + compare_tol)


@dataclass(frozen=True)
class CrTable:
    k: int
    entries: tuple[CrEntry, ...]
    C_value: float
    quad_error: float  # refinement residual accumulated over the table
    compare_tol: float

    @property
    def all_within_bounds(self) -> bool:
        return all(e.within_bound for e in self.entries if e.within_bound is not None)

    def entry(self, r: int) -> CrEntry:
        for e in self.entries:
            if e.r == r:
                return e
        raise KeyError(f"r={r} not in table for k={self.k}")


def constants_table(k: int, tol: float = DEFAULT_TOL, compare_tol: float = 1e-3) -> CrTable:
    """All c_r(k) over the tail range, their sum C(k), and reference comparison.

    Monotone decay is asserted across the computed range: the entries must
    strictly decrease until they hit zero, and stay zero afterwards.
    """
    _check_k(k)
    values, err = _converged_values(k, tol)
    lo, hi = reference.sum_range(k)
    bounds = reference.cr_bounds(k)
    entries = []
    c_total = 0.0
    for r in range(lo, hi + 1):
        v = values[r]
        c_total += v
        b = bounds.get(r)
        ok = None if b is None else (v <= b * (1.0 + compare_tol))
        entries.append(CrEntry(r, v, b, ok))
    for prev, nxt in zip(entries, entries[1:]):
        if nxt.value > 0 and not nxt.value < prev.value:
            raise VerificationError(
                f"monotone decay fails at k={k}: c_{nxt.r} = {nxt.value} >= c_{prev.r} = {prev.value}"
            )
        if prev.value == 0.0 and nxt.value != 0.0:
            raise VerificationError(f"zero tail violated at k={k}, r={nxt.r}")
    return CrTable(k, tuple(entries), c_total, err * len(entries), compare_tol)


def tail_sum(k: int, tol: float = DEFAULT_TOL) -> float:
    """C(k) = sum of c_r(k) over r = r(k)+1 .. floor(36k/(15-k))."""
    return constants_table(k, tol).C_value


def tables_to_csv(tables: list[CrTable]) -> str:
    """The golden constants artifact: one row per (k, r)."""
    lines = ["k,r,c_r,reference_bound,pass"]
    for t in tables:
        for e in t.entries:
            b = "" if e.bound is None else f"{e.bound:.12g}"
            ok = "" if e.within_bound is None else str(e.within_bound).lower()
            lines.append(f"{t.k},{e.r},{e.value:.12g},{b},{ok}")
    return "\n".join(lines) + "\n"


def tables_to_json(tables: list[CrTable]) -> dict:
    return {
        "tables": [
            {
                "k": t.k,
                "C_value": t.C_value,
                "C_reference_bound": reference.C_BOUNDS[t.k],
                "C_within_bound": t.C_value <= reference.C_BOUNDS[t.k],
                "quad_error": t.quad_error,
                "entries": [
                    {
                        "r": e.r,
                        "c_r": e.value,
                        "reference_bound": e.bound,
                        "pass": e.within_bound,
                        # soft proximity report: how far the computed integral
                        # sits from the reference value (no assertion)
                        "proximity": (
                            None if e.bound is None else abs(e.value - e.bound) / e.bound
                        ),
                    }
                    for e in t.entries
                ],
            }
            for t in tables
        ]
    }
