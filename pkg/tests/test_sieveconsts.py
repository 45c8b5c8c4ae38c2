import math

import pytest

from wgkit.sieveconsts import (
    EXP_GAMMA,
    F_upper,
    f_lower,
    main_term_margin,
    params,
    sieve_product,
    sieve_window_value,
    validate_sieve_weights,
    weighted_density_sum,
)
from wgkit.singular import omega


def test_params_box_sizes():
    p = params(10**9, 3)
    assert p.x2 == pytest.approx(0.5 * (2e9 / 3) ** 0.5, rel=1e-12)
    assert p.x2 == pytest.approx(1.29e4, rel=0.01)
    assert p.x3 == pytest.approx(0.5 * (2e9 / 3) ** (1 / 3), rel=1e-12)
    assert p.x3_star == pytest.approx(0.5 * (2e9 / 3) ** (5 / 18), rel=1e-12)
    assert p.x(3) == p.x3 and p.x_star(2) == p.x2_star


def test_params_d_exponent_limits():
    # eps -> 0: exponent is 5/(8k) - 1/24, positive for every k <= 14
    tiny = 1e-9
    p3 = params(10**9, 3, eps=tiny)
    assert math.log(p3.D) / math.log(10**9) == pytest.approx(1 / 6, abs=1e-6)
    for k in range(3, 15):
        assert 5 / (8 * k) - 1 / 24 > 0
    # at the default eps the k = 14 level collapses and is rejected
    with pytest.raises(ValueError):
        params(10**12, 14, eps=1e-4)


def test_params_rejections():
    with pytest.raises(ValueError):
        params(10**9 + 1, 3)  # odd
    with pytest.raises(ValueError):
        params(1000, 3)  # too small
    with pytest.raises(ValueError):
        params(10**9, 15)
    with pytest.raises(ValueError):
        params(10**9, 3, eps=0.5)
    # z <= 2: sieve range empty (k = 6 at desk scale)
    with pytest.raises(ValueError):
        params(10**8, 6)


def test_params_monotone_in_n():
    smaller = params(10**8, 3)
    larger = params(10**10, 3)
    assert larger.x2 > smaller.x2
    assert larger.x3 > smaller.x3
    assert larger.D > smaller.D


def test_sieve_functions():
    assert f_lower(2.0) == 0.0
    assert f_lower(3.0) == pytest.approx(2 * EXP_GAMMA * math.log(2) / 3, rel=1e-12)
    assert f_lower(3.0) == pytest.approx(0.8229, abs=2e-4)
    assert F_upper(3.0) == pytest.approx(2 * EXP_GAMMA / 3, rel=1e-12)
    assert F_upper(3.0) == pytest.approx(1.1874, abs=2e-4)
    assert f_lower(3.0) < F_upper(3.0)
    with pytest.raises(ValueError):
        f_lower(1.5)
    with pytest.raises(ValueError):
        F_upper(3.5)


def test_sieve_product_single_factor():
    w = sieve_product(40, 3, 5.0)
    assert w == pytest.approx(1.0 - omega(3, 40, 3) / 3.0, rel=1e-12)
    with pytest.raises(ValueError):
        sieve_product(40, 3, 3.0)
    with pytest.raises(ValueError):
        sieve_product(41, 3, 5.0)


def test_sieve_product_mertens_stability():
    n = 10**6 + 4
    for z in (100.0, 1000.0, 10000.0):
        w = sieve_product(n, 3, z)
        assert 0.2 <= w * math.log(z) <= 5.0


def test_main_term_margin_examples():
    assert main_term_margin(6, 0.657181) == pytest.approx(0.0427, abs=2e-4)
    assert main_term_margin(6, math.log(2.0)) == pytest.approx(0.0, abs=1e-15)
    assert main_term_margin(3, 0.513241) == pytest.approx(0.2136, abs=2e-4)


def test_weight_contract():
    validate_sieve_weights({1: 1.0, 3: -1.0, 15: 0.5, 30: 0.0}, D=20.0)
    with pytest.raises(ValueError):
        validate_sieve_weights({3: 1.5}, D=20.0)  # |lambda| > 1
    with pytest.raises(ValueError):
        validate_sieve_weights({9: 0.5}, D=20.0)  # not squarefree
    with pytest.raises(ValueError):
        validate_sieve_weights({23: 1.0}, D=20.0)  # above level


def test_weighted_density_sum():
    n, k = 40, 3
    weights = {1: 1.0, 3: -1.0, 5: -1.0, 15: 1.0}
    total = weighted_density_sum(weights, n, k, z=7.0, D=20.0)
    expected = (
        1.0
        - omega(3, n, k) / 3
        - omega(5, n, k) / 5
        + omega(15, n, k) / 15
    )
    assert total == pytest.approx(expected, rel=1e-12)
    with pytest.raises(ValueError):
        weighted_density_sum({7: 1.0}, n, k, z=7.0, D=20.0)  # 7 not below z


def test_sieve_window_value():
    lower = sieve_window_value(40, 3, z=5.0, D=125.0, side="lower")
    upper = sieve_window_value(40, 3, z=5.0, D=125.0, side="upper")
    w = sieve_product(40, 3, 5.0)
    assert lower == pytest.approx(w * f_lower(3.0), rel=1e-12)
    assert upper == pytest.approx(w * F_upper(3.0), rel=1e-12)
    assert lower < upper
    with pytest.raises(ValueError):
        sieve_window_value(40, 3, z=5.0, D=125.0, side="sideways")
