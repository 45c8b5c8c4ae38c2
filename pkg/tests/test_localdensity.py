import math

import numpy as np
import pytest

from oracles import brute_density_loops, brute_density_vectorized
from wgkit.arith import primes_up_to
from wgkit.errors import VerificationError
from wgkit.localdensity import (
    CongruenceSignature,
    LocalDensities,
    count_congruence,
    densities_float_all,
    ep_bound,
    ep_via_sums,
    local_densities,
    local_densities_all,
    power_histogram,
)


def test_power_histogram_examples():
    h = power_histogram(7, 3, units_only=True)
    assert h.counts[1] == 3 and h.counts[6] == 3
    assert sum(h.counts) == 6 and h.counts[0] == 0
    h2 = power_histogram(2, 2, units_only=True)
    assert h2.counts == (0, 1)
    h5 = power_histogram(5, 2, units_only=False)
    assert h5.counts == (1, 2, 0, 0, 2)


def test_histogram_mass():
    from wgkit.arith import euler_phi, factorize

    for q in (2, 5, 12, 36):
        for j in (2, 3, 14):
            assert sum(power_histogram(q, j, False).counts) == q
            assert sum(power_histogram(q, j, True).counts) == euler_phi(factorize(q))


def test_count_congruence_mod2_examples():
    k_sig = ((2, True), (3, True), (3, True), (3, True), (3, True))
    for n in range(2):
        assert count_congruence(2, CongruenceSignature(k_sig, n)) == (1 if n % 2 else 0)
    lstar_sig = ((2, True),) + k_sig
    for n in range(2):
        assert count_congruence(2, CongruenceSignature(lstar_sig, n)) == (0 if n % 2 else 1)
    l_sig = ((2, False),) + k_sig
    for n in range(2):
        assert count_congruence(2, CongruenceSignature(l_sig, n)) == 1


def test_local_densities_p2():
    d = local_densities(2, 40, 3)
    assert (d.K, d.L, d.Lstar, d.E_p) == (0, 1, 1, 1.0)
    d_odd = local_densities(2, 41, 3)
    assert d_odd.K == 1 and d_odd.Lstar == 0


def test_local_densities_identity_enforced():
    with pytest.raises(VerificationError):
        LocalDensities(3, 0, K=1, L=5, Lstar=3, E_p=0.0)


def test_p19_error_term_bound():
    for n in range(19):
        d = local_densities(19, n, 3)
        assert abs(d.E_p) < 18**6


def test_convolution_matches_literal_loops():
    for p in (2, 3, 5, 7):
        for k in (3, 5):
            K, L, Ls = brute_density_loops(p, k)
            gK, gL, gLs = local_densities_all(p, k)
            assert list(gK) == K and list(gL) == L and list(gLs) == Ls


def test_convolution_matches_vectorized_bruteforce():
    for p in (11, 13):
        for k in (3, 14):
            K, L, Ls = brute_density_vectorized(p, k)
            gK, gL, gLs = local_densities_all(p, k)
            assert list(gK) == K.tolist()
            assert list(gL) == L.tolist()
            assert list(gLs) == Ls.tolist()


def test_vectorized_bruteforce_matches_loops():
    for p in (3, 5, 7):
        K, L, Ls = brute_density_loops(p, 3)
        vK, vL, vLs = brute_density_vectorized(p, 3)
        assert K == vK.tolist() and L == vL.tolist() and Ls == vLs.tolist()


def test_ep_bound_examples():
    b19 = ep_bound(19, 3)
    assert b19 == pytest.approx(2.736e7, rel=0.01)
    assert b19 < 18**6
    assert ep_bound(17, 3) > 16**6  # the closed form alone cannot settle p = 17
    # asymptotic shape: bound / p^4 -> 8 * 13 = 104
    assert ep_bound(10007) / 10007**4 == pytest.approx(104, rel=0.05)


def test_ep_two_paths_agree():
    for p in (2, 3, 7, 19, 97, 199):
        for n in range(p):
            d = local_densities(p, n, 3)
            assert ep_via_sums(p, n, 3) == pytest.approx(d.E_p, abs=1e-3)
    # spot checks across the top of the range, where roundoff is tightest
    for p, k in ((211, 3), (307, 14), (401, 7), (499, 5)):
        for n in (0, 1, p // 2, p - 1):
            d = local_densities(p, n, k)
            assert ep_via_sums(p, n, k) == pytest.approx(d.E_p, abs=1e-3)


def test_density_normalization():
    # |L/p^5 - 1| and |K/p^4 - 1| within 10/sqrt(p) for 29 <= p <= 499
    for k in (3, 14):
        for p in primes_up_to(499):
            if p < 29:
                continue
            K, L, _ = local_densities_all(p, k)
            tol = 10.0 / math.sqrt(p)
            for n in range(p):
                assert abs(L[n] / p**5 - 1.0) <= tol
                assert abs(K[n] / p**4 - 1.0) <= tol


def test_densities_float_path():
    for p in (7, 97, 499):
        K, L, Ls = local_densities_all(p, 3)
        fK, fL, fLs = densities_float_all(p, 3)
        assert np.allclose(fK, np.array(K, dtype=float), rtol=1e-9)
        assert np.allclose(fL, np.array(L, dtype=float), rtol=1e-9)
        assert np.allclose(fLs, np.array(Ls, dtype=float), rtol=1e-9)


def test_wide_counts_beyond_int64():
    # mass product far beyond 2^63 forces the arbitrary-precision path;
    # total over all residues must equal the exact tuple count 40^12
    from wgkit.localdensity import congruence_counts

    q = 41
    terms = ((2, True),) * 12
    counts = congruence_counts(q, terms)
    assert all(isinstance(c, int) for c in counts)
    assert sum(counts) == 40**12
    # and the wide path agrees with int64 convolution where both apply
    short = ((2, True), (3, True), (3, True))
    a = congruence_counts(q, short)
    import wgkit.localdensity as ld

    saved = ld._INT64_SAFE
    try:
        ld._INT64_SAFE = 1  # force the Python fallback
        b = congruence_counts(q, short)
    finally:
        ld._INT64_SAFE = saved
    assert a == b


def test_bad_inputs():
    with pytest.raises(ValueError):
        local_densities(10, 0, 3)
    with pytest.raises(ValueError):
        local_densities(7, 0, 2)
    with pytest.raises(ValueError):
        power_histogram(0, 2, False)
    with pytest.raises(ValueError):
        CongruenceSignature((), 0)
