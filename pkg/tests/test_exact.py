from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from aflkit.exact import LaurentPoly, LogLinear, factor_prime_power, laurent_special_values, loglin_reduce_eq

polys = st.dictionaries(st.integers(-5, 5), st.fractions(max_denominator=7), max_size=5).map(LaurentPoly)
qs = st.sampled_from([2, 3, 4, 5, 9, 25, 27, 49])


def test_special_values_examples():
    assert laurent_special_values(LaurentPoly.constant(1), 3) == (1, LogLinear())
    P = LaurentPoly({0: 1, -1: -1})
    assert laurent_special_values(P, 3) == (0, LogLinear(0, {3: -1}))
    P = LaurentPoly({0: 1, -1: -1, -2: 1, -3: -1})
    assert laurent_special_values(P, 5) == (0, LogLinear(0, {5: -2}))


def test_prime_power_derivative_uses_underlying_prime():
    # X = 9^{-s}: d/ds X^{-1} = log 9 = 2 log 3
    _, d = laurent_special_values(LaurentPoly.monomial(-1), 9)
    assert d == LogLinear(0, {3: 2})


def test_factor_prime_power():
    assert factor_prime_power(27) == (3, 3)
    assert factor_prime_power(7) == (7, 1)
    with pytest.raises(ValueError):
        factor_prime_power(12)


def test_no_zero_coefficients_stored():
    P = LaurentPoly({1: 1}) - LaurentPoly({1: 1})
    assert P.is_zero() and P.coeffs == {}


@given(polys, polys, qs)
def test_ring_homomorphism_to_values(P, Q, q):
    vp, _ = laurent_special_values(P, q)
    vq, _ = laurent_special_values(Q, q)
    assert laurent_special_values(P + Q, q)[0] == vp + vq
    assert laurent_special_values(P * Q, q)[0] == vp * vq


@given(polys, polys, qs)
def test_leibniz(P, Q, q):
    vp, dp = laurent_special_values(P, q)
    vq, dq = laurent_special_values(Q, q)
    assert laurent_special_values(P * Q, q)[1] == dq * vp + dp * vq


@given(polys, st.floats(-3, 3))
def test_numeric_evaluation_matches_exact(P, s):
    # compare with direct evaluation at X = 3^-s
    x = 3.0 ** (-s)
    direct = sum(float(c) * x**k for k, c in P.items())
    assert P.at_s(s, 3) == pytest.approx(direct, rel=1e-9, abs=1e-9)


@given(polys)
def test_json_roundtrip(P):
    assert LaurentPoly.from_json(P.to_json()) == P


def test_loglin_examples():
    x = LogLinear(0.5, {3: 2})
    assert loglin_reduce_eq(x, LogLinear(0.5), {3})
    assert not loglin_reduce_eq(LogLinear(0, {3: 1}), LogLinear(0, {5: 1}), set())
    assert loglin_reduce_eq(LogLinear(), LogLinear(), {2, 3})


def test_loglin_rejects_composite_keys():
    with pytest.raises(ValueError):
        LogLinear(0, {6: 1})


def test_loglin_json():
    assert LogLinear(0, {3: -2}).to_json() == {"real": 0, "logs": {"3": "-2"}}
    x = LogLinear(1.25, {5: Fraction(1, 3)})
    assert LogLinear.from_json(x.to_json()) == x


logs = st.dictionaries(st.sampled_from([2, 3, 5, 7]), st.fractions(max_denominator=5), max_size=3)


@given(logs, logs, logs, st.fractions(max_denominator=5))
def test_reduce_eq_is_equivalence_and_absorbs_S(a, b, c, r):
    S = {2, 3}
    x, y, z = LogLinear(0, a), LogLinear(0, b), LogLinear(0, c)
    assert loglin_reduce_eq(x, x, S)
    assert loglin_reduce_eq(x, y, S) == loglin_reduce_eq(y, x, S)
    if loglin_reduce_eq(x, y, S) and loglin_reduce_eq(y, z, S):
        assert loglin_reduce_eq(x, z, S)
    assert loglin_reduce_eq(x + LogLinear(0, {3: r}), x, S)
