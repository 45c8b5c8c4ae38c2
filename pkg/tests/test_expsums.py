import cmath
import math

import pytest

from wgkit.expsums import (
    BoundReport,
    all_characters,
    char_sum,
    character,
    complete_sum,
    complete_sums_all,
    twisted_gap,
    unit_sum,
    unit_sums_all,
    vanishing_exponent,
    verify_bounds,
)


def _direct_sum(j, q, a, units=False):
    # reference implementation straight off the definition
    total = 0j
    for m in range(1, q + 1):
        if units and math.gcd(m, q) != 1:
            continue
        total += cmath.exp(2j * math.pi * a * pow(m, j, q) / q)
    return total


def test_complete_sum_examples():
    for j in range(2, 15):
        assert complete_sum(j, 1, 1).value == pytest.approx(1.0)
    s = complete_sum(2, 5, 1)
    assert s.re == pytest.approx(math.sqrt(5), abs=1e-12)
    assert s.im == pytest.approx(0.0, abs=1e-12)
    s4 = complete_sum(2, 4, 1)
    assert abs(s4.value) ** 2 == pytest.approx(8.0, abs=1e-9)
    assert s4.value == pytest.approx(2 + 2j, abs=1e-12)


def test_unit_sum_examples():
    assert unit_sum(2, 5, 1).value == pytest.approx(math.sqrt(5) - 1, abs=1e-12)
    for j in range(2, 15):
        assert unit_sum(j, 1, 1).value == pytest.approx(1.0)
    assert abs(unit_sum(2, 9, 1).value) < 1e-12


def test_sums_match_reference_definition():
    for q in list(range(1, 40)) + [60, 97]:
        for j in (2, 3, 5, 14):
            for a in range(q):
                assert complete_sum(j, q, a).value == pytest.approx(
                    _direct_sum(j, q, a), abs=1e-9
                )
                assert unit_sum(j, q, a).value == pytest.approx(
                    _direct_sum(j, q, a, units=True), abs=1e-9
                )


def test_spectral_path_agrees_with_direct():
    for q in range(1, 60):
        for j in (2, 3, 7):
            call = complete_sums_all(j, q)
            uall = unit_sums_all(j, q)
            for a in range(q):
                assert call[a] == pytest.approx(complete_sum(j, q, a).value, abs=1e-9)
                assert uall[a] == pytest.approx(unit_sum(j, q, a).value, abs=1e-9)


def test_exponent_range_rejected():
    with pytest.raises(ValueError):
        complete_sum(1, 5, 1)
    with pytest.raises(ValueError):
        complete_sum(15, 5, 1)


def test_character_table_properties():
    for p in (3, 5, 7, 11, 13):
        chars = all_characters(p)
        assert len(chars) == p - 1
        assert chars[0].is_principal
        for chi in chars:
            for m in range(p):
                for n in range(p):
                    lhs = chi(m * n)
                    rhs = chi(m) * chi(n)
                    assert lhs == pytest.approx(rhs, abs=1e-12)
            for m in range(p):
                assert (abs(chi(m)) < 1e-15) == (math.gcd(m, p) > 1)


def test_character_orthogonality():
    # sum over all chi mod p of chi(m) = phi(p) [m = 1 mod p]
    from wgkit.arith import primes_up_to

    for p in primes_up_to(101):
        if p == 2:
            continue
        chars = all_characters(p)
        for m in range(p):
            total = sum(chi(m) for chi in chars)
            expected = p - 1 if m % p == 1 else 0
            assert total == pytest.approx(expected, abs=1e-9)


def test_char_sum_examples():
    chi0 = character(5, 0)
    assert char_sum(chi0, 2, 1).value == pytest.approx(unit_sum(2, 5, 1).value, abs=1e-12)
    # p | a makes the character sum collapse to orthogonality
    for t in range(1, 6):
        chi = character(7, t)
        assert abs(char_sum(chi, 3, 7).value) < 1e-9
    for chi in all_characters(7):
        assert abs(char_sum(chi, 3, 1).value) <= 4 * math.sqrt(7) + 1e-9


def test_vanishing_exponent_table():
    assert vanishing_exponent(2, 2) == 4  # 2^1 || 2
    assert vanishing_exponent(3, 2) == 2
    assert vanishing_exponent(2, 3) == 2  # odd j at p = 2
    assert vanishing_exponent(2, 12) == 5  # 2^2 || 12
    assert vanishing_exponent(3, 9) == 4  # 3^2 || 9


def test_unit_sum_vanishing_examples():
    for a in (1, 3, 5, 7):
        assert abs(unit_sum(2, 16, a).value) < 1e-9
    for a in range(1, 9):
        if math.gcd(a, 9) == 1:
            assert abs(unit_sum(2, 9, a).value) < 1e-9


def test_twisted_multiplicativity_spot():
    for j in (2, 3, 5, 14):
        for q1, q2 in ((3, 4), (5, 7), (8, 9), (16, 27), (49, 60)):
            assert twisted_gap(j, q1, q2) < 1e-6 * q1 * q2
    with pytest.raises(ValueError):
        twisted_gap(2, 6, 9)


def test_prime_modulus_bound_examples():
    # |S_2(7,1)| = sqrt(7): the bound (gcd(2,6) - 1) sqrt(7) is met with equality
    assert abs(complete_sum(2, 7, 1).value) == pytest.approx(math.sqrt(7), abs=1e-9)
    # j = 3, p = 7: bound (gcd(3,6) - 1) sqrt(7) = 2 sqrt(7) for every unit a
    for a in range(1, 7):
        assert abs(complete_sum(3, 7, a).value) <= 2 * math.sqrt(7) + 1e-9
        assert abs(unit_sum(3, 7, a).value) <= 2 * math.sqrt(7) + 1 + 1e-9


def test_verify_bounds_small_grid():
    rep = verify_bounds(j_max=5, q_max=60, pp_max=256, twisted_q_max=12)
    assert isinstance(rep, BoundReport)
    assert rep.passed, rep.violations
    assert rep.prime_slack > -1e-6 * 60
    assert rep.vanishing_max < 1e-6 * 256
    for j, (ratio, q, a) in rep.complete_ratio.items():
        assert ratio >= 1.0 - 1e-12  # q = 1 already achieves ratio 1
    d = rep.as_dict()
    assert d["passed"] is True


def test_verify_bounds_rejects_bad_args():
    with pytest.raises(ValueError):
        verify_bounds(j_max=2, q_max=0)
    with pytest.raises(ValueError):
        verify_bounds(j_max=1, q_max=10)


def test_trivial_bound_guard():
    s = complete_sum(2, 9, 3)
    assert abs(s.value) <= 9 + 1e-6
