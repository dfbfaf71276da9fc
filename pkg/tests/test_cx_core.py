"""Tests for complex and quaternion primitives."""

import cmath
import math

import mpmath
import numpy as np
import pytest

from swlag.cx_core import (
    QUAT_I,
    QUAT_J,
    QUAT_K,
    QUAT_ONE,
    LogPolarValue,
    Quaternion,
    blaschke_factor,
    c2_apply_J,
    complex_left_mul,
    mobius_factor,
    quat_apply_J,
    quat_mul,
    s_power_principal,
    wrap_angle,
    zero_location,
)
from swlag.exceptions import BranchCutError, DomainError


def test_s_power_examples():
    assert s_power_principal(1, 0.25) == 1
    assert s_power_principal(4, 0.5) == 2
    expected = complex(mpmath.exp(0.5 * mpmath.log(mpmath.mpc(0, 1))))
    assert abs(s_power_principal(1j, 0.5) - expected) < 1e-15
    assert abs(s_power_principal(1j, 0.5) - cmath.exp(1j * math.pi / 4)) < 1e-15


def test_s_power_matches_real_power_bitwise():
    for w in (0.1, 0.5, 2.0, 1e-300, 3.7e10):
        assert s_power_principal(w, 0.3).real == w**0.3


@pytest.mark.parametrize("w", [0.0, -1.0, -2.5 + 0j])
def test_s_power_rejects_cut(w):
    with pytest.raises(BranchCutError):
        s_power_principal(w, 0.5)


@pytest.mark.parametrize("s", [0.0, 1.0, -0.2])
def test_s_power_rejects_exponent(s):
    with pytest.raises(DomainError):
        s_power_principal(1.0 + 1j, s)


def test_s_power_rejects_nonfinite():
    with pytest.raises(DomainError):
        s_power_principal(complex(math.nan, 1.0), 0.5)


def test_s_power_conjugate_symmetry(rng):
    w = rng.normal(size=200) + 1j * rng.normal(size=200)
    for value in w:
        assert s_power_principal(value.conjugate(), 0.37) == pytest.approx(
            s_power_principal(value, 0.37).conjugate(), abs=1e-15
        )


def test_blaschke_factor_examples():
    assert blaschke_factor(0, 1) == pytest.approx(1 - math.exp(-1), abs=1e-15)
    assert blaschke_factor(zero_location(1), 1) == 0
    assert abs(blaschke_factor(cmath.exp(1j * math.pi / 3), 2)) == pytest.approx(1.0, abs=1e-14)


def test_blaschke_factor_unimodular_on_circle(rng):
    theta = 2 * np.pi * rng.random(1000)
    z = np.exp(1j * theta)
    for k in range(1, 41):
        assert np.max(np.abs(np.abs(blaschke_factor(z, k)) - 1.0)) < 1e-13


def test_mobius_factor_zero_and_modulus():
    a = 0.3 - 0.4j
    assert mobius_factor(a, a) == 0
    assert abs(mobius_factor(1j, a)) == pytest.approx(1.0, abs=1e-15)


def test_zero_location_rejects_nonpositive():
    with pytest.raises(DomainError):
        zero_location(0)


def test_wrap_angle_range():
    angles = np.array([-np.pi, np.pi, 3 * np.pi, -7.0, 0.0, 12.5])
    wrapped = wrap_angle(angles)
    assert np.all(wrapped > -np.pi) and np.all(wrapped <= np.pi)
    assert wrap_angle(-math.pi) == math.pi
    np.testing.assert_allclose(np.exp(1j * wrapped), np.exp(1j * angles), atol=1e-14)


def test_log_polar_round_trip(rng):
    z = rng.uniform(0.5, 2.0, 500) * np.exp(1j * rng.uniform(-np.pi, np.pi, 500))
    for value in z:
        back = LogPolarValue.from_complex(value).to_complex()
        assert abs(back - value) <= 4 * np.finfo(float).eps * abs(value)


def test_log_polar_zero_and_underflow():
    zero = LogPolarValue.from_complex(0)
    assert zero.is_zero and zero.modulus == 0.0 and zero.to_complex() == 0
    tiny = LogPolarValue.from_parts(-2000.0, 1.0)
    assert tiny.modulus == 0.0
    assert tiny.unit == pytest.approx(cmath.exp(1j))


def test_quaternion_table():
    assert QUAT_I * QUAT_J == QUAT_K
    assert QUAT_J * QUAT_J == -QUAT_ONE
    assert QUAT_K * QUAT_I == QUAT_J
    assert QUAT_J * QUAT_I == -QUAT_K


def test_apply_J_on_c2():
    assert quat_apply_J(Quaternion.from_c2(1, 0)) == QUAT_J
    w1, w2 = 0.3 + 0.7j, -1.1 + 0.2j
    j1, j2 = c2_apply_J(w1, w2)
    assert quat_apply_J(Quaternion.from_c2(w1, w2)).to_c2() == pytest.approx((j1, j2))
    assert (j1, j2) == pytest.approx((-w2.conjugate(), w1.conjugate()))


def test_complex_scalar_acts_as_left_multiplication():
    v = Quaternion.from_c2(0.5 - 0.1j, 2.0 + 1.0j)
    c = 0.3 + 0.8j
    assert complex_left_mul(c, v).to_c2() == pytest.approx((c * (0.5 - 0.1j), c * (2.0 + 1.0j)))


def test_quaternion_associativity(rng):
    values = rng.normal(size=(10000, 3, 4))
    for a, b, c in values:
        qa, qb, qc = Quaternion(*a), Quaternion(*b), Quaternion(*c)
        left = quat_mul(quat_mul(qa, qb), qc).as_tuple()
        right = quat_mul(qa, quat_mul(qb, qc)).as_tuple()
        np.testing.assert_allclose(left, right, atol=1e-12)
