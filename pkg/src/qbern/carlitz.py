"""Carlitz q-Bernoulli numbers and polynomials.

Three constructions of the polynomials are provided and kept independent
of each other:

* :func:`beta_poly` expands over the numbers solved from the umbral
  recurrence,
* :func:`beta_poly_closed` is the finite closed-form sum,
* :func:`beta_via_integral` multiplies out the integrand in the basis
  ``q**(j*y)`` and integrates term by term with :func:`integral_monomial`.

``Q`` stands for ``q**x`` everywhere, so ``[x]_q = (1 - Q) / (1 - q)``.
"""
from __future__ import annotations

from functools import lru_cache
from math import comb

from .exactcore import Q, RatFunc, const, one, q, qint, rf_subst, zero

__all__ = [
    "qbracket_x",
    "beta_number",
    "beta_poly",
    "beta_poly_closed",
    "integral_monomial",
    "beta_via_integral",
    "beta_order_r",
    "QExpSeries",
    "bracket_series",
    "bernoulli_classical",
]


def qbracket_x() -> RatFunc:
    """``[x]_q = (1 - q**x) / (1 - q)`` as a rational function of ``q, Q``."""
    return (1 - Q) / (1 - q)


@lru_cache(maxsize=None)
def beta_number(n: int) -> RatFunc:
    """Carlitz q-Bernoulli number, solved from ``q(q beta + 1)**n - beta_n = [n == 1]``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return one
    acc = zero
    qk = one
    for k in range(n):
        acc = acc + const(comb(n, k)) * qk * beta_number(k)
        qk = qk * q
    rhs = (const(1) if n == 1 else zero) - q * acc
    return rhs / (q ** (n + 1) - 1)


@lru_cache(maxsize=None)
def beta_poly(n: int) -> RatFunc:
    """Polynomial expansion ``sum_l C(n, l) beta_l q**(l x) [x]_q**(n - l)``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    x = qbracket_x()
    total = zero
    for l in range(n + 1):
        total = total + const(comb(n, l)) * beta_number(l) * Q ** l * x ** (n - l)
    return total


@lru_cache(maxsize=None)
def integral_monomial(j: int) -> RatFunc:
    """Value of the q-integral of ``q**(j*y)``: ``(j + 1) / [j + 1]_q``."""
    if j < 0:
        raise ValueError("j must be >= 0")
    return const(j + 1) / qint(j + 1)


@lru_cache(maxsize=None)
def _closed_form(n: int, r: int) -> RatFunc:
    total = zero
    for j in range(n + 1):
        sign = -1 if j % 2 else 1
        total = total + const(sign * comb(n, j)) * Q ** j * integral_monomial(j) ** r
    return total / (1 - q) ** n


def beta_poly_closed(n: int) -> RatFunc:
    """Closed form ``(1-q)**-n sum_j C(n, j) (-1)**j q**(j x) (j+1)/[j+1]_q``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return _closed_form(n, 1)


def beta_order_r(n: int, r: int) -> RatFunc:
    """Order-r Carlitz q-Bernoulli polynomial.

    The r-fold integral of ``q**(j (x_1 + ... + x_r))`` factors into
    ``integral_monomial(j)**r``, which gives a closed form.  The padic
    module checks it against finite r-fold Riemann sums.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if r < 1:
        raise ValueError("order r must be >= 1")
    return _closed_form(n, r)


class QExpSeries:
    """Finite combination ``sum_j c_j q**(j*y)`` with RatFunc coefficients.

    This is the integrand side of the q-integral: polynomials in ``q**y``
    are multiplied out here and then integrated linearly.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = list(coeffs)

    @classmethod
    def constant(cls, c) -> QExpSeries:
        return cls([c if isinstance(c, RatFunc) else const(c)])

    def __add__(self, other: QExpSeries) -> QExpSeries:
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + [zero] * (n - len(self.coeffs))
        b = other.coeffs + [zero] * (n - len(other.coeffs))
        return QExpSeries([x + y for x, y in zip(a, b)])

    def shift_constant(self, c: RatFunc) -> QExpSeries:
        out = list(self.coeffs)
        out[0] = out[0] + c
        return QExpSeries(out)

    def __mul__(self, other: QExpSeries) -> QExpSeries:
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return QExpSeries(out)

    def integrate(self, r: int = 1) -> RatFunc:
        """Apply the r-fold q-integral (one integral per summation variable)."""
        total = zero
        for j, c in enumerate(self.coeffs):
            if not c.is_zero():
                total = total + c * integral_monomial(j) ** r
        return total


def bracket_series() -> QExpSeries:
    """``[x + y]_q`` in the ``q**y`` basis: ``1/(1-q) - Q/(1-q) q**y``."""
    inv = one / (1 - q)
    return QExpSeries([inv, -Q * inv])


@lru_cache(maxsize=None)
def beta_via_integral(n: int) -> RatFunc:
    """Integrate ``[x + y]_q**n`` after expanding it in the ``q**y`` basis."""
    if n < 0:
        raise ValueError("n must be >= 0")
    base = bracket_series()
    power = QExpSeries.constant(1)
    for _ in range(n):
        power = power * base
    return power.integrate()


@lru_cache(maxsize=None)
def bernoulli_classical(n: int):
    """Ordinary Bernoulli number (``B_1 = -1/2``) from ``sum_{k<=n} C(n+1,k) B_k = 0``."""
    from fractions import Fraction

    values = [Fraction(1)]
    for m in range(1, n + 1):
        s = sum(comb(m + 1, k) * values[k] for k in range(m))
        values.append(-s / (m + 1))
    return values[n]


def base_change(f: RatFunc, m: int, shift: int = 0) -> RatFunc:
    """Rewrite ``f(q, q**x)`` as ``f(q**m, q**x * q**shift)``.

    With ``f = beta_poly_closed(l)`` this is ``beta_{l, q**m}((x + shift)/m)``.
    """
    g = rf_subst(f, "q", q ** m)
    if shift:
        g = rf_subst(g, "Q", Q * q ** shift)
    return g
