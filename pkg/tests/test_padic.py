from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qbern.carlitz import integral_monomial
from qbern.exactcore import q
from qbern.padic import (
    PadicInt,
    PrecisionError,
    QConfig,
    _qint_exact,
    check_integral_monomial,
    check_order_r,
    check_dbeta_integral,
    convergence_ok,
    evaluate_ratfunc,
    riemann_sum,
)

P, K = 3, 15


def pad(v, prec=K):
    return PadicInt(v, P, K, prec)


def test_valuation_basics():
    assert pad(3).valuation() == 1
    assert pad(18).valuation() == 2
    assert pad(Fraction(1, 9)).valuation() == -2
    assert pad(0).is_zero()
    assert pad(7).residue == 7


def test_inverse_of_one_plus_p():
    x = pad(1 + P)
    prod = x.inverse() * x
    assert prod == 1
    assert prod.known_precision == K


def test_division_costs_valuation():
    a = pad(5)
    b = pad(P**3 * 2, prec=K)
    quotient = a / b
    assert quotient.valuation() == -3
    assert quotient.known_precision <= K - 3


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        pad(1) / pad(P**K)


units = st.integers(1, 10**6).filter(lambda u: u % P)


@settings(max_examples=100, deadline=None)
@given(units, units, st.integers(0, 5), st.integers(0, 5))
def test_valuation_additive(u, v, a, b):
    x, y = pad(u * P**a), pad(v * P**b)
    assert (x * y).valuation() == a + b


@settings(max_examples=100, deadline=None)
@given(st.integers(-(10**8), 10**8), st.integers(-(10**8), 10**8))
def test_ultrametric(a, b):
    x, y = pad(a), pad(b)
    s = x + y
    assert s.valuation() >= min(x.valuation(), y.valuation())


@settings(max_examples=50, deadline=None)
@given(st.fractions(max_denominator=50).filter(lambda f: f != 0))
def test_rational_round_trip(value):
    x = pad(value)
    assert (x * pad(value.denominator)) == pad(value.numerator)


def test_qint_valuation():
    cfg = QConfig(P, K)
    for N in range(7):
        assert _qint_exact(cfg, P**N, K).valuation() == N


def test_riemann_sum_of_one():
    cfg = QConfig(P, K)
    for N in range(6):
        r = riemann_sum(lambda y: 1, cfg, N)
        assert r == 1
        assert r.known_precision == K - N


def test_riemann_sum_needs_precision():
    with pytest.raises(PrecisionError):
        riemann_sum(lambda y: 1, QConfig(P, 4), 4)


def test_integral_monomial_converges():
    cfg = QConfig(P, K)
    target = evaluate_ratfunc(2 / (1 + q), cfg)
    assert target == evaluate_ratfunc(integral_monomial(1), cfg)
    res = check_integral_monomial(1, cfg, [2, 4, 6])
    vals = [r.valuation for r in res]
    assert vals[0] < vals[1] < vals[2]


def test_dbeta_integral_n0_exact():
    for lam in (0, 1, 3):
        res = check_dbeta_integral(0, QConfig(P, K, lambda_val=lam), [2, 4, 6])
        assert all(r.exact for r in res)


def test_dbeta_integral_n1_lambda0():
    res = check_dbeta_integral(1, QConfig(P, K), [2, 4, 6])
    vals = [r.valuation for r in res]
    assert vals == sorted(vals)
    assert vals[-1] >= 4


def test_dbeta_integral_n3_lambda1_x1():
    res = check_dbeta_integral(3, QConfig(P, K, lambda_val=1, x_val=1), [2, 4, 6])
    assert convergence_ok(res)
    # observed: valuations 2, 4, 6
    assert [r.valuation for r in res] == [2, 4, 6]


def test_dbeta_integral_lambda_p():
    res = check_dbeta_integral(2, QConfig(P, K, lambda_val=P), [2, 4, 6])
    assert convergence_ok(res)
    assert res[-1].valuation > res[0].valuation


def test_order_r():
    cfg = QConfig(P, K)
    r1 = check_order_r(1, 1, cfg, 3)
    t1 = check_dbeta_integral(1, cfg, [3])[0]
    assert (r1.valuation, r1.precision) == (t1.valuation, t1.precision)
    assert check_order_r(1, 2, cfg, 3).valuation >= 2
    assert check_order_r(0, 2, cfg, 2).exact
    assert check_order_r(0, 3, cfg, 1).exact
    with pytest.raises(PrecisionError):
        check_order_r(1, 2, cfg, 4, max_points=1000)


def test_distribution_consistency():
    cfg = QConfig(P, K)
    f = lambda y: cfg.padic(pow(cfg.q_val, 2 * y, P**K) + y * y)  # noqa: E731
    vals = []
    for N in range(1, 5):
        diff = riemann_sum(f, cfg, N, d=2) - riemann_sum(f, cfg, N)
        vals.append(diff.valuation())
    assert vals == sorted(vals)
    assert vals[-1] > vals[0]


def test_qconfig_validation():
    with pytest.raises(ValueError):
        QConfig(p=4)
    with pytest.raises(ValueError):
        QConfig(p=2)
    with pytest.raises(ValueError):
        QConfig(p=3, q_val=5)
    assert QConfig(p=5).q_val == 6


def test_convergence_ok():
    from qbern.padic import LevelResult

    assert convergence_ok([LevelResult(2, 2, 13), LevelResult(4, 4, 11, True), LevelResult(6, 5, 9)])
    assert not convergence_ok([LevelResult(2, 3, 13), LevelResult(4, 2, 11)])
