import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from hyperverify.core import (ParameterVector, PochhammerProduct, delta_vector, gamma, gamma_ratio,
                              log_gamma, pochhammer, pvec, rgamma)
from hyperverify.errors import PoleError

reals = st.floats(0.05, 20.0)


def test_log_gamma_basic_values():
    assert abs(log_gamma(1.0)) < 1e-15
    assert abs(log_gamma(0.5) - math.log(math.sqrt(math.pi))) < 1e-15


def test_log_gamma_duplication_complex():
    z = 3.7 + 2.1j
    lhs = log_gamma(z) + log_gamma(z + 0.5)
    rhs = (1 - 2 * z) * math.log(2) + 0.5 * math.log(math.pi) + log_gamma(2 * z)
    assert abs(cmath.exp(lhs - rhs) - 1) < 1e-12


@pytest.mark.parametrize("z", [0.3, 2.5, 17.25, -3.5, 1 + 4j, -7.3 + 0.2j, 60 - 40j])
def test_log_gamma_against_mpmath(z):
    ref = complex(mpmath.loggamma(z))
    got = log_gamma(z)
    assert abs(cmath.exp(got - ref) - 1) < 1e-13


def test_log_gamma_pole_carries_value():
    with pytest.raises(PoleError) as exc:
        log_gamma(-3)
    assert exc.value.value == -3


def test_reflection_1000_points():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(1000):
        z = complex(rng.uniform(-10, 10), rng.uniform(0.05, 10) * rng.choice([-1, 1]))
        v = cmath.exp(log_gamma(z) + log_gamma(1 - z)) * cmath.sin(math.pi * z) / math.pi
        worst = max(worst, abs(v - 1))
    assert worst < 1e-11


def test_gamma_ratio_examples():
    assert gamma_ratio([1], [1]) == 1.0
    assert abs(gamma_ratio([3], [1]) - 2.0) < 1e-15
    direct = math.gamma(10.5) * math.gamma(2.2) / (math.gamma(9.5) * math.gamma(3.2))
    assert abs(gamma_ratio([10.5, 2.2], [9.5, 3.2]) / direct - 1) < 1e-13


def test_gamma_ratio_no_overflow():
    # Gamma(200)/Gamma(199) = 199 overflows if formed directly
    assert abs(gamma_ratio([200.0], [199.0]) / 199.0 - 1) < 1e-12


def test_gamma_ratio_pole_policy():
    with pytest.raises(PoleError):
        gamma_ratio([1.0], [-2.0])
    assert gamma_ratio([1.0], [-2.0], den_poles="zero") == 0.0
    assert rgamma(0.0) == 0.0 and rgamma(-4.0) == 0.0


@given(st.lists(st.floats(-8.5, 8.5).filter(lambda v: abs(v - round(v)) > 1e-3), min_size=1, max_size=4))
def test_gamma_ratio_self_is_one(v):
    assert abs(gamma_ratio(v, v) - 1) < 1e-14


def test_negative_argument_sign():
    assert abs(gamma(-0.5) + 2 * math.sqrt(math.pi)) < 1e-13
    assert abs(gamma(-1.5) - 4 / 3 * math.sqrt(math.pi)) < 1e-13


def test_pochhammer_examples():
    assert pochhammer([2], 3) == 24.0
    assert pochhammer([1, 1], 0) == 1.0
    loop = 1.0
    for v in (0.5, 1.5):
        for k in range(4):
            loop *= v + k
    assert pochhammer([0.5, 1.5], 4) == loop
    assert PochhammerProduct.of([2], 3).value == 24.0
    with pytest.raises(PoleError):
        pochhammer([-1.0], 2)


@given(st.lists(reals, min_size=1, max_size=3), st.integers(0, 30))
def test_pochhammer_recurrence(a, n):
    lhs = pochhammer(a, n + 1)
    rhs = pochhammer(a, n) * math.prod(v + n for v in a)
    assert abs(lhs - rhs) <= 1e-13 * abs(rhs)


@given(st.lists(st.floats(0.1, 5.0), min_size=1, max_size=3), st.integers(0, 12))
def test_pochhammer_matches_gamma_ratio(a, n):
    assert abs(pochhammer(a, n) / gamma_ratio([v + n for v in a], a) - 1) < 1e-12


def test_delta_vector_examples():
    assert delta_vector([3], 1) == (3.0,)
    assert np.allclose(delta_vector([1], 3), (1 / 3, 2 / 3, 1.0))
    assert np.allclose(delta_vector([0.7 + 2], 3), (0.9, 3.7 / 3, 4.7 / 3))
    with pytest.raises(ValueError):
        delta_vector([1.0], 0)


@given(st.lists(st.floats(0.1, 10.0), min_size=1, max_size=3), st.integers(1, 5))
def test_delta_vector_mean(c, k):
    d = delta_vector(c, k)
    assert len(d) == k * len(c)
    assert abs(np.mean(d) - (np.mean(c) + (k - 1) / 2) / k) < 1e-12


@given(st.floats(0.2, 30.0))
def test_gauss_multiplication_k3(x):
    lhs = sum(log_gamma(v).real for v in delta_vector([x], 3))
    rhs = log_gamma(x).real + math.log(2 * math.pi) + (0.5 - x) * math.log(3)
    assert abs(math.exp(lhs - rhs) - 1) < 1e-10


def test_parameter_vector_views_do_not_mutate():
    v = pvec([3.0, 1.0, 2.0])
    assert v.sorted_ascending() == (1.0, 2.0, 3.0)
    assert v.with_removed(0) == (1.0, 2.0)
    assert v.shifted(0.5) == (3.5, 1.5, 2.5)
    assert v == (3.0, 1.0, 2.0)
    assert isinstance(v.shifted(1), ParameterVector) and v.length == 3
    assert pvec(None) == () and pvec(2.0) == (2.0,)
