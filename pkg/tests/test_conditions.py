import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hyperverify.conditions import (MonotonicityVerdict, MuntzSpec, TaylorFunction, am_check,
                                    cm_functions, cm_probe, hankel_determinants, muntz_eval,
                                    muntz_nonneg, pfp_cm_hypotheses, pfp_negative,
                                    stieltjes_moment_check, weak_supermajorization)

GRID = np.geomspace(0.1, 10.0, 12)
pos = st.floats(0.05, 5.0)


def test_muntz_eval_examples():
    assert muntz_eval(MuntzSpec([2], [1]), 0.5) == -0.25
    assert muntz_eval(MuntzSpec([0.5, 1.5], [1, 1]), 0.25) == 0.125
    assert np.all(muntz_eval(MuntzSpec([0.7, 2.0], [0.7, 2.0]), np.linspace(0, 1, 11)) == 0)


@given(st.lists(pos, min_size=1, max_size=4), st.data())
def test_muntz_endpoints(a, data):
    b = data.draw(st.lists(pos, min_size=len(a), max_size=len(a)))
    spec = MuntzSpec(a, b)
    assert muntz_eval(spec, 1.0) == 0.0
    assert abs(muntz_eval(spec, 1e-300)) < 1e-10


def test_muntz_spec_lengths():
    with pytest.raises(ValueError):
        MuntzSpec([1, 2], [1])


def test_muntz_nonneg_examples():
    assert muntz_nonneg(MuntzSpec([0.5, 1.5], [1, 1]))[0]
    ok, cert = muntz_nonneg(MuntzSpec([2], [1]))
    assert not ok and 0 < cert.t_min < 1 and cert.v_min < 0
    assert abs(cert.t_min - 0.5) < 1e-8 and abs(cert.v_min + 0.25) < 1e-12
    assert muntz_nonneg(MuntzSpec([1.3, 0.2], [1.3, 0.2]))[0]


def test_muntz_refinement_finds_narrow_dip():
    # t^0.3 + t^3 - t^0.31 - t^2.9 dips below zero only slightly
    ok, cert = muntz_nonneg(MuntzSpec([0.31, 2.9], [0.3, 3.0]))
    coarse = np.linspace(0, 1, 2049)
    assert cert.v_min <= np.min(muntz_eval(MuntzSpec([0.31, 2.9], [0.3, 3.0]), coarse)) + 1e-15


def test_supermajorization_examples():
    assert weak_supermajorization([0.5, 1.5], [1, 1])
    assert not weak_supermajorization([2], [1])
    with pytest.raises(ValueError):
        weak_supermajorization([1, 2], [1])


def test_supermajorization_implies_nonnegativity_200():
    rng = np.random.default_rng(2024)
    found = 0
    while found < 200:
        p = int(rng.integers(1, 5))
        a = rng.uniform(0.05, 4.0, p)
        b = rng.uniform(0.05, 4.0, p)
        if not weak_supermajorization(a, b):
            continue
        found += 1
        assert muntz_nonneg(MuntzSpec(a, b))[0], (a, b)


def test_verdict_witness_invariant():
    with pytest.raises(ValueError):
        MonotonicityVerdict("CM", False, 8)
    with pytest.raises(ValueError):
        MonotonicityVerdict("CM", True, 8, (1.0, 2, -1.0))


def test_cm_probe_examples():
    assert cm_probe(lambda x: math.exp(-x), GRID).passed
    assert cm_probe(lambda x: 1 / (1 + x), GRID).passed
    v = cm_probe(math.exp, GRID)
    assert not v.passed and v.witness[1] == 1
    a, b = (0.5, 1.0), (1.6, 2.0)
    assert pfp_cm_hypotheses(a, b)
    assert cm_probe(cm_functions(a, b)["x^-ap pFp(-1/x)"], GRID).passed


def test_cm_probe_reports_offending_point():
    def f(x):
        if x > 5:
            raise ZeroDivisionError("boom")
        return math.exp(-x)
    with pytest.raises(ZeroDivisionError, match="at x = "):
        cm_probe(f, [1.0, 6.0])


def test_cm_probe_taylor_path():
    f = TaylorFunction(lambda x: math.exp(-x),
                       lambda x, n: [(-1) ** k * math.exp(-x) / math.factorial(k) for k in range(n + 1)])
    assert cm_probe(f, GRID).passed
    g = TaylorFunction(math.exp, lambda x, n: [math.exp(x) / math.factorial(k) for k in range(n + 1)])
    assert not cm_probe(g, GRID).passed


def test_pfp_negative_taylor_matches_differences():
    f = pfp_negative([0.4, 1.2], [1.5, 2.5])
    h = 1e-4
    c = f.taylor(0.7, 2)
    fd1 = (f(0.7 + h) - f(0.7 - h)) / (2 * h)
    fd2 = (f(0.7 + h) - 2 * f(0.7) + f(0.7 - h)) / h ** 2 / 2
    assert abs(c[1] - fd1) < 1e-8 and abs(c[2] - fd2) < 1e-6


def test_cm_follows_muntz_30_random_p2():
    rng = np.random.default_rng(30)
    found = 0
    while found < 30:
        a = rng.uniform(0.1, 2.0, 2)
        b = rng.uniform(0.1, 3.0, 2)
        if not muntz_nonneg(MuntzSpec(a, b))[0]:
            continue
        found += 1
        assert cm_probe(pfp_negative(a, b), GRID).passed, (a, b)


def test_hypotheses_checker():
    assert not pfp_cm_hypotheses((1.2, 1.5), (2.5, 3.0))      # a1 > 1
    assert not pfp_cm_hypotheses((0.5,), (1.6,))               # p < 2
    assert not pfp_cm_hypotheses((0.5, 1.0), (1.2, 2.0))       # b1 < a1 + 1


def test_am_check_examples():
    assert am_check([1 / math.factorial(n) for n in range(20)]).passed
    a = 0.7
    coeffs = [math.gamma(a + n) / math.gamma(a) / math.factorial(n) for n in range(20)]
    assert am_check(coeffs).passed
    cos = [(-1) ** (n // 2) / math.factorial(n) if n % 2 == 0 else 0.0 for n in range(10)]
    v = am_check(cos)
    assert not v.passed and v.witness[1] == 2


def test_stieltjes_examples():
    assert stieltjes_moment_check([1.0] * 12, 5).passed
    assert stieltjes_moment_check([float(math.factorial(k)) for k in range(12)], 5).passed
    v = stieltjes_moment_check([1.0, 0.0, 1.0, 0.0, 1.0, 0.0], 2)
    assert not v.passed
    with pytest.raises(ValueError):
        stieltjes_moment_check([1.0, 1.0], 3)


def test_hankel_determinants_small():
    s = [1.0, 2.0, 6.0, 24.0]
    assert hankel_determinants(s, 1) == pytest.approx([1.0, 2.0])
    assert hankel_determinants(s, 1, shift=1) == pytest.approx([2.0, 12.0])
