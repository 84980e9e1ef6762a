"""Degenerate Carlitz q-Bernoulli polynomials.

Every construction returns a rational function of ``q``, ``L`` (lambda) and
``Q`` (``q**x``).  The main definition is the first-kind Stirling transform
:func:`dbeta`; the remaining functions build the same objects along other
routes so they can be compared exactly.
"""
from __future__ import annotations

from functools import lru_cache
from math import comb

from .carlitz import (
    QExpSeries,
    base_change,
    beta_number,
    beta_order_r,
    beta_poly_closed,
    bracket_series,
    integral_monomial,
    qbracket_x,
)
from .exactcore import L, Q, RatFunc, const, one, q, qint, rf_subst, zero
from .stirling import falling_step, s1, s2

__all__ = [
    "dbeta",
    "dbeta_double_sum",
    "dbeta_falling_expansion",
    "dbeta_integral",
    "recover_beta",
    "dbeta_order_r",
    "dbeta_order_r_integral",
    "recover_beta_order_r",
    "multiplication_rhs",
    "difference_sides",
    "shift_relation_check",
]


def _check_order(r: int) -> None:
    if r < 1:
        raise ValueError("order r must be >= 1")


@lru_cache(maxsize=None)
def dbeta(n: int) -> RatFunc:
    """``sum_l s1(n, l) L**(n - l) beta_l(x)``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    total = zero
    for l in range(n + 1):
        total = total + const(s1(n, l)) * L ** (n - l) * beta_poly_closed(l)
    return total


@lru_cache(maxsize=None)
def dbeta_double_sum(n: int) -> RatFunc:
    """Fully expanded double sum over ``l`` and ``j``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    total = zero
    for l in range(n + 1):
        c = s1(n, l)
        if not c:
            continue
        inner = zero
        for j in range(l + 1):
            sign = -1 if j % 2 else 1
            inner = inner + const(sign * comb(l, j)) * Q ** j * integral_monomial(j)
        total = total + const(c) * L ** (n - l) * inner / (1 - q) ** l
    return total


@lru_cache(maxsize=None)
def dbeta_falling_expansion(n: int) -> RatFunc:
    """Expansion over the numbers beta_l and the step falling factorial of ``[x]_q``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    x = qbracket_x()
    total = zero
    for k in range(n + 1):
        head = const(comb(n, k)) * falling_step(x, n - k, L)
        inner = zero
        for l in range(k + 1):
            c = s1(k, l)
            if c:
                inner = inner + const(c) * L ** (k - l) * Q ** l * beta_number(l)
        total = total + head * inner
    return total


def _falling_series(n: int) -> QExpSeries:
    base = bracket_series()
    prod = QExpSeries.constant(1)
    for k in range(n):
        prod = prod * base.shift_constant(-L * k)
    return prod


@lru_cache(maxsize=None)
def dbeta_integral(n: int) -> RatFunc:
    """Integrate ``[x + y]_{n, lambda}`` term by term in the ``q**y`` basis."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return _falling_series(n).integrate()


def recover_beta(n: int, source=None) -> RatFunc:
    """Second-kind Stirling transform ``sum_m source[m] L**(n-m) s2(n, m)``.

    ``source`` defaults to ``dbeta(0..n)``; the result is lambda-free.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if source is None:
        source = [dbeta(m) for m in range(n + 1)]
    if len(source) < n + 1:
        raise ValueError(f"need {n + 1} source values, got {len(source)}")
    total = zero
    for m in range(n + 1):
        total = total + source[m] * L ** (n - m) * const(s2(n, m))
    return total


@lru_cache(maxsize=None)
def dbeta_order_r(n: int, r: int) -> RatFunc:
    """Degenerate order-r polynomial as the s1 transform of :func:`beta_order_r`."""
    if n < 0:
        raise ValueError("n must be >= 0")
    _check_order(r)
    total = zero
    for m in range(n + 1):
        total = total + L ** (n - m) * beta_order_r(m, r) * const(s1(n, m))
    return total


@lru_cache(maxsize=None)
def dbeta_order_r_integral(n: int, r: int) -> RatFunc:
    """r-fold integral of ``[x_1 + ... + x_r + x]_{n, lambda}``.

    The integrand depends on the sum ``s = x_1 + ... + x_r`` only through
    ``q**s``, and the r-fold integral of ``q**(j s)`` is
    ``integral_monomial(j)**r``.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    _check_order(r)
    return _falling_series(n).integrate(r)


def recover_beta_order_r(n: int, r: int) -> RatFunc:
    """``sum_m L**(n-m) s2(n, m) dbeta_order_r(m, r)``; lambda-free."""
    if n < 0:
        raise ValueError("n must be >= 0")
    _check_order(r)
    total = zero
    for m in range(n + 1):
        total = total + L ** (n - m) * const(s2(n, m)) * dbeta_order_r(m, r)
    return total


@lru_cache(maxsize=None)
def _beta_base_changed(l: int, m: int, i: int) -> RatFunc:
    return base_change(beta_poly_closed(l), m, i)


@lru_cache(maxsize=None)
def multiplication_rhs(n: int, m: int) -> RatFunc:
    """Distribution sum over base ``q**m`` with arguments ``(x + i) / m``.

    ``beta_{l, q**m}((x + i)/m)`` is obtained by substituting ``q -> q**m``
    and then ``Q -> Q q**i``.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if m < 1:
        raise ValueError("m must be >= 1")
    qm = qint(m)
    total = zero
    for l in range(n + 1):
        c = s1(n, l)
        if not c:
            continue
        inner = zero
        for i in range(m):
            inner = inner + q ** i * _beta_base_changed(l, m, i)
        total = total + const(c) * L ** (n - l) * qm ** (l - 1) * inner
    return total


def shift_x(f: RatFunc) -> RatFunc:
    """``x -> x + 1``, i.e. ``Q -> q Q``."""
    return rf_subst(f, "Q", q * Q)


def difference_sides(n: int, upper: str = "n") -> tuple[RatFunc, RatFunc]:
    """Both sides of the difference identity for the degenerate polynomials.

    ``upper`` picks the last index of the derivative sum: ``"n"`` (the
    version that holds) or ``"n-1"`` (the printed variant, which drops the
    ``l = n`` term).
    """
    if n < 1:
        raise ValueError("difference identity needs n >= 1")
    if upper not in ("n", "n-1"):
        raise ValueError("upper must be 'n' or 'n-1'")
    b = dbeta(n)
    lhs = q * shift_x(b) - b
    x = qbracket_x()
    rhs = (q - 1) * falling_step(x, n, L)
    last = n if upper == "n" else n - 1
    for l in range(1, last + 1):
        rhs = rhs + const(s1(n, l) * l) * L ** (n - l) * x ** (l - 1) * Q
    return lhs, rhs


def shift_relation_check(j: int) -> tuple[RatFunc, RatFunc]:
    """Shift relation of the q-integral on ``f(y) = q**(j*y)``.

    Left: ``q * q**j * I(j) - I(j)``.  Right: ``(q - 1) f(0)`` plus the
    derivative term, which for this ``f`` is ``(q - 1) * j``.
    """
    if j < 0:
        raise ValueError("j must be >= 0")
    ij = integral_monomial(j)
    lhs = q * q ** j * ij - ij
    rhs = (q - 1) + (q - 1) * const(j)
    return lhs, rhs
