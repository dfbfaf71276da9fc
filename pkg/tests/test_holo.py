"""Tests for the damped Blaschke product."""

import math

import mpmath
import numpy as np
import pytest

from swlag.cx_core import zero_location
from swlag.exceptions import ConfigError, DomainError, PhaseUndefined, SingularPointError
from swlag.holo import (
    DampedBlaschke,
    boundary_log_modulus,
    certified_truncation,
    eval_boundary,
    evaluate,
    evaluate_array,
    tail_bound,
    zero_offset,
)

from .conftest import safe_sample


def test_zero_location_examples():
    assert zero_location(1) == pytest.approx(-0.63212056, abs=1e-8)
    assert zero_location(2) == pytest.approx(-0.86466472, abs=1e-8)


def test_zero_schedule_monotone():
    offsets = [zero_offset(k) for k in range(1, 61)]
    assert all(a > b for a, b in zip(offsets, offsets[1:]))
    zeros = [zero_location(k) for k in range(1, 61)]
    assert all(a > b for a, b in zip(zeros[:36], zeros[1:37]))
    assert all(a >= b for a, b in zip(zeros, zeros[1:]))


def _direct_tail(K, r_cert):
    return mpmath.nsum(lambda k: 2 * mpmath.exp(-k) / (1 - mpmath.mpf(r_cert)), [K + 1, mpmath.inf])


@pytest.mark.parametrize("r_cert,epsilon,expected", [(0.5, 1e-12, 29), (0.99, 1e-12, 33)])
def test_certified_truncation_is_minimal(r_cert, epsilon, expected):
    K = certified_truncation(r_cert, epsilon)
    assert K == expected
    assert _direct_tail(K, r_cert) <= epsilon * (1 + 1e-12)
    assert _direct_tail(K - 1, r_cert) > epsilon
    assert tail_bound(K, r_cert) == pytest.approx(float(_direct_tail(K, r_cert)), rel=1e-12)


def test_certified_truncation_large_epsilon():
    assert certified_truncation(0.5, 2.0) == 1


@pytest.mark.parametrize("r_cert,epsilon", [(1.0, 1e-3), (0.5, 0.0), (0.0, 1e-3)])
def test_certified_truncation_rejects(r_cert, epsilon):
    with pytest.raises(DomainError):
        certified_truncation(r_cert, epsilon)


def test_default_certificate_below_1e20():
    phi = DampedBlaschke.from_params()
    assert phi.K == 60 and phi.s == 0.25 and phi.r_cert == 0.995
    assert phi.tail_bound < 1e-20


def test_from_json():
    phi = DampedBlaschke.from_json({"s": 0.3, "r_cert": 0.5, "epsilon": 1e-12})
    assert phi.K == 29 and phi.s == 0.3
    assert DampedBlaschke.from_json({"s": 0.3, "K": 12}).K == 12
    with pytest.raises(ConfigError):
        DampedBlaschke.from_json({"s": 1.5, "K": 12})
    with pytest.raises(ConfigError):
        DampedBlaschke.from_json([0.3])


def test_eval_at_origin(phi):
    result = evaluate(phi, 0j)
    expected = -1 + math.fsum(math.log1p(-math.exp(-k)) for k in range(1, 61))
    assert result.G == pytest.approx(expected, abs=1e-14)
    assert result.g == 1
    assert result.value.log_mod == result.G


def test_eval_near_minus_one(phi):
    z = -1 + 1e-3
    result = evaluate(phi, z)
    assert result.G <= -math.cos(math.pi / 8) * 10**0.75
    assert math.exp(result.G) < 1e-2
    with mpmath.workdps(40):
        t = mpmath.mpf(z) + 1
        G = -(t ** mpmath.mpf(-0.25))
        for k in range(1, 61):
            p = mpmath.expm1(-k)
            G += mpmath.log(abs((mpmath.mpf(z) - p) / (1 - p * mpmath.mpf(z))))
    assert result.G == pytest.approx(float(G), abs=1e-11)
    assert not result.cancellation_warning


def test_eval_flags_cancellation(phi):
    assert evaluate(phi, -1 + 1e-12).cancellation_warning


def test_eval_at_zeros(phi):
    for k in range(1, phi.K + 1):
        p = zero_location(k)
        if abs(p) >= 1.0:
            continue
        result = evaluate(phi, p, with_log_deriv=False)
        assert result.value.log_mod == -math.inf
        assert result.value.is_zero and result.g == 0
        with pytest.raises(SingularPointError):
            evaluate(phi, p)


def test_eval_finite_off_zeros(phi, rng):
    z = 0.99 * np.sqrt(rng.random(1000)) * np.exp(2j * np.pi * rng.random(1000))
    arrays = evaluate_array(phi, z, with_log_deriv=False)
    assert np.all(np.isfinite(arrays.G))


def test_eval_rejects_outside(phi):
    with pytest.raises(DomainError):
        evaluate(phi, 1.0)
    with pytest.raises(DomainError):
        evaluate(phi, complex(math.nan, 0.0))


def test_unit_phase(phi, rng):
    for z in safe_sample(phi, rng, 100):
        assert abs(abs(evaluate(phi, z).g) - 1.0) < 1e-13


@pytest.mark.parametrize("K", [20, 40])
def test_truncation_stability(phi, K):
    r = np.linspace(0.0, 0.9, 64)
    theta = 2 * np.pi * np.arange(64) / 64
    z = (r[:, None] * np.exp(1j * theta[None, :])).ravel()
    short = evaluate_array(phi.with_order(K), z, with_log_deriv=False).G
    long = evaluate_array(phi.with_order(2 * K), z, with_log_deriv=False).G
    assert np.max(np.abs(short - long)) <= tail_bound(K, phi.r_cert)


def test_log_derivative_matches_difference_quotient(phi, rng):
    h = 1e-5
    z = safe_sample(phi, rng, 1000)
    centre = evaluate_array(phi, z)
    plus = evaluate_array(phi, z + h, with_log_deriv=False)
    minus = evaluate_array(phi, z - h, with_log_deriv=False)
    ratio_plus = np.exp(plus.G - centre.G + 1j * (plus.arg - centre.arg))
    ratio_minus = np.exp(minus.G - centre.G + 1j * (minus.arg - centre.arg))
    numeric = (ratio_plus - ratio_minus) / (2 * h)
    assert np.max(np.abs(numeric - centre.log_deriv) / np.abs(centre.log_deriv)) < 1e-6


def test_eval_boundary_examples(phi):
    assert eval_boundary(phi, 0.0) == pytest.approx(1.0, abs=1e-15)
    assert eval_boundary(phi, math.pi, 0.5) == 0
    with pytest.raises(PhaseUndefined):
        eval_boundary(phi, math.pi)
    assert abs(abs(eval_boundary(phi, math.pi / 2)) - 1.0) < 1e-13
    with pytest.raises(DomainError):
        eval_boundary(phi, 2 * math.pi)
    with pytest.raises(DomainError):
        eval_boundary(phi, 1.0, -0.5)


def test_boundary_modulus_closed_form(phi):
    theta = np.linspace(0.1, 6.1, 41)
    expected = -((2 + 2 * np.cos(theta)) ** (-0.125)) * np.cos(0.125 * theta)
    # the closed form uses the argument in (0, 2 pi) continued from theta = 0
    expected = np.where(theta > np.pi, -((2 + 2 * np.cos(theta)) ** (-0.125)) * np.cos(0.125 * (theta - 2 * np.pi)), expected)
    np.testing.assert_allclose(boundary_log_modulus(phi, theta), expected, atol=1e-12)
    value = eval_boundary(phi, 1.0, 1.0)
    assert abs(value) == pytest.approx(math.exp(boundary_log_modulus(phi, 1.0)), rel=1e-12)


def test_boundary_modulus_not_constant(phi):
    theta = 2 * np.pi * (np.arange(4096) + 0.5) / 4096
    rho = np.exp(boundary_log_modulus(phi, theta))
    assert rho.max() - rho.min() > 0.4
    assert rho.max() == pytest.approx(math.exp(-(2 ** -0.25)), rel=1e-6)


def test_eval_array_large_grid_matches_pointwise(phi):
    r = np.linspace(0.0, 0.98, 512)
    theta = 2 * np.pi * (np.arange(512) + 0.5) / 512
    z = r[:, None] * np.exp(1j * theta[None, :])
    arrays = evaluate_array(phi, z)
    assert arrays.G.shape == (512, 512)
    assert arrays.log_deriv.shape == (512, 512)
    for i, k in [(0, 0), (100, 17), (300, 255), (511, 3), (511, 400)]:
        single = evaluate(phi, complex(z[i, k]))
        assert arrays.G[i, k] == pytest.approx(single.G, abs=1e-13)
        assert arrays.log_deriv[i, k] == pytest.approx(single.log_deriv, rel=1e-12)
    with mpmath.workdps(40):
        w = mpmath.mpc(complex(z[300, 255]))
        G = -mpmath.re((w + 1) ** mpmath.mpf(-0.25))
        for k in range(1, 61):
            p = mpmath.expm1(-k)
            G += mpmath.log(abs((w - p) / (1 - p * w)))
    assert arrays.G[300, 255] == pytest.approx(float(G), abs=1e-12)
