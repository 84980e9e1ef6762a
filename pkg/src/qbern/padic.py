"""Finite-precision p-adic numbers and Riemann sums of the q-integral.

The q-integral of ``f`` over ``Z_p`` is the limit of

    (1 / [p**N]_q) * sum_{y < p**N} f(y) q**y

as ``N`` grows.  The functions here evaluate that quotient at finite ``N``
in modular arithmetic and measure how closely it matches the exact
rational functions produced by :mod:`qbern.carlitz` and
:mod:`qbern.degenerate`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .exactcore import RatFunc

__all__ = [
    "PrecisionError",
    "PadicInt",
    "QConfig",
    "LevelResult",
    "is_prime",
    "riemann_sum",
    "evaluate_ratfunc",
    "check_dbeta_integral",
    "check_order_r",
    "check_integral_monomial",
    "convergence_ok",
]


class PrecisionError(ArithmeticError):
    """Not enough p-adic digits left for the requested operation."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % k for k in range(3, math.isqrt(n) + 1, 2))


def _valuation_int(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class PadicInt:
    """Element of Q_p known modulo ``p**known_precision``.

    Stored as ``unit * p**val`` with ``unit`` a p-adic unit known modulo
    ``p**(known_precision - val)``.  Values built from integers have
    ``val >= 0``; division by a non-unit can make ``val`` negative.  Zero at
    the available precision has ``val == known_precision``.

    ``K`` is the working precision the value was created with.
    """

    __slots__ = ("p", "K", "unit", "val", "prec")

    def __init__(self, value, p: int, K: int, prec: int | None = None):
        self.p = p
        self.K = K
        prec = K if prec is None else prec
        value = Fraction(value)
        if value == 0:
            self._set(0, prec, prec)
            return
        vn = _valuation_int(value.numerator, p)
        vd = _valuation_int(value.denominator, p)
        val = vn - vd
        if val >= prec:
            self._set(0, prec, prec)
            return
        unit_num = value.numerator // p ** vn
        unit_den = value.denominator // p ** vd
        mod = p ** (prec - val)
        self._set(unit_num * pow(unit_den, -1, mod) % mod, val, prec)

    def _set(self, unit, val, prec):
        self.unit = unit
        self.val = val
        self.prec = prec

    @classmethod
    def _raw(cls, p, K, A, e, prec) -> PadicInt:
        """Normalize ``A * p**e`` known modulo ``p**prec``."""
        obj = cls.__new__(cls)
        obj.p = p
        obj.K = K
        if e >= prec:
            obj._set(0, prec, prec)
            return obj
        A %= p ** (prec - e)
        if A == 0:
            obj._set(0, prec, prec)
            return obj
        while A % p == 0:
            A //= p
            e += 1
        obj._set(A, e, prec)
        return obj

    # -- inspection ---------------------------------------------------------

    @property
    def known_precision(self) -> int:
        return self.prec

    @property
    def residue(self) -> int:
        """Representative in ``[0, p**K)`` (requires an integral value)."""
        if self.val < 0:
            raise ValueError("value is not a p-adic integer")
        return (self.unit * self.p ** self.val) % self.p ** self.K

    def valuation(self) -> int:
        """p-adic valuation; equals ``known_precision`` for zero."""
        return self.val

    def is_zero(self) -> bool:
        """Indistinguishable from zero at the known precision."""
        return self.unit == 0

    def _check(self, other):
        if not isinstance(other, PadicInt):
            other = PadicInt(other, self.p, self.K, max(self.prec, self.K))
        if other.p != self.p:
            raise ValueError("mismatched primes")
        return other

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other) -> PadicInt:
        other = self._check(other)
        prec = min(self.prec, other.prec)
        e = min(self.val, other.val)
        p = self.p
        A = self.unit * p ** (self.val - e) + other.unit * p ** (other.val - e)
        return PadicInt._raw(p, self.K, A, e, prec)

    __radd__ = __add__

    def __neg__(self) -> PadicInt:
        return PadicInt._raw(self.p, self.K, -self.unit, self.val, self.prec)

    def __sub__(self, other) -> PadicInt:
        return self + (-self._check(other))

    def __rsub__(self, other) -> PadicInt:
        return self._check(other) - self

    def __mul__(self, other) -> PadicInt:
        other = self._check(other)
        prec = min(self.prec + other.val, other.prec + self.val)
        return PadicInt._raw(
            self.p, self.K, self.unit * other.unit, self.val + other.val, prec
        )

    __rmul__ = __mul__

    def inverse(self) -> PadicInt:
        if self.is_zero():
            raise ZeroDivisionError(
                f"division by a value indistinguishable from 0 mod {self.p}^{self.prec}"
            )
        rel = self.prec - self.val
        mod = self.p ** rel
        return PadicInt._raw(
            self.p, self.K, pow(self.unit, -1, mod), -self.val, -self.val + rel
        )

    def __truediv__(self, other) -> PadicInt:
        return self * self._check(other).inverse()

    def __rtruediv__(self, other) -> PadicInt:
        return self._check(other) / self

    def __pow__(self, k: int) -> PadicInt:
        if k < 0:
            return self.inverse() ** (-k)
        result = PadicInt(1, self.p, self.K, max(self.prec, self.K))
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        """Equal at the common known precision."""
        try:
            other = self._check(other)
        except (TypeError, ValueError):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        if self.is_zero():
            return f"O({self.p}^{self.prec})"
        return f"PadicInt({self.unit} * {self.p}^{self.val} + O({self.p}^{self.prec}))"


def _lift(value, p: int, prec: int) -> PadicInt:
    return PadicInt(value, p, prec)


@dataclass(frozen=True)
class QConfig:
    """Evaluation point for numeric checks: ``q``, ``lambda`` and integer ``x``."""

    p: int = 3
    K: int = 15
    q_val: int = 0
    lambda_val: Fraction = Fraction(0)
    x_val: int = 0

    def __post_init__(self):
        if not is_prime(self.p) or self.p == 2:
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.K < 1:
            raise ValueError("precision K must be positive")
        if self.q_val == 0:
            object.__setattr__(self, "q_val", 1 + self.p)
        if (self.q_val - 1) % self.p:
            raise ValueError("q must satisfy q = 1 mod p")
        lam = Fraction(self.lambda_val)
        if lam.denominator % self.p == 0:
            raise ValueError("lambda must be a p-adic integer")
        object.__setattr__(self, "lambda_val", lam)
        if self.x_val < 0:
            raise ValueError("x must be a nonnegative integer")

    def padic(self, value, prec=None) -> PadicInt:
        return PadicInt(value, self.p, self.K, prec)


@dataclass
class LevelResult:
    """Agreement between a level-N Riemann sum and the exact value.

    ``valuation`` is the valuation of the difference, capped at
    ``precision``; ``exact`` is set when the difference is zero at the
    known precision.
    """

    N: int
    valuation: int
    precision: int
    exact: bool = False
    extra: dict = field(default_factory=dict)

    def as_dict(self):
        return {
            "N": self.N,
            "valuation": self.valuation,
            "precision": self.precision,
            "exact": self.exact,
        }


def _q_powers(cfg: QConfig, count: int, prec: int) -> list[int]:
    mod = cfg.p ** prec
    out = [1] * count
    for y in range(1, count):
        out[y] = out[y - 1] * cfg.q_val % mod
    return out


def _qint_exact(cfg: QConfig, count: int, weight_prec: int) -> PadicInt:
    """``[count]_q`` computed modulo ``p**weight_prec``."""
    mod = cfg.p ** weight_prec
    total, power = 0, 1
    for _ in range(count):
        total = (total + power) % mod
        power = power * cfg.q_val % mod
    return PadicInt(total, cfg.p, cfg.K, weight_prec)


def riemann_sum(f, cfg: QConfig, N: int, d: int = 1) -> PadicInt:
    """Level-N quotient ``sum_{y < d p**N} f(y) q**y / [d p**N]_q``.

    ``f`` maps an integer ``y`` to a :class:`PadicInt` or a rational.  The
    denominator is an exact integer; it is evaluated with ``N`` extra digits
    so the quotient keeps ``K - N`` digits.
    """
    if N < 0 or d < 1:
        raise ValueError("level N must be >= 0 and d >= 1")
    if cfg.K <= N:
        raise PrecisionError(f"precision K={cfg.K} must exceed level N={N}")
    count = d * cfg.p ** N
    qpow = _q_powers(cfg, count, cfg.K)
    total = cfg.padic(0)
    for y in range(count):
        total = total + cfg.padic(qpow[y]) * f(y)
    vd = _valuation_int(d, cfg.p) + N
    return total / _qint_exact(cfg, count, cfg.K + vd)


def evaluate_ratfunc(f: RatFunc, cfg: QConfig, prec: int | None = None) -> PadicInt:
    """Evaluate at ``q = q_val``, ``L = lambda_val``, ``Q = q_val**x_val``.

    The point is rational, so numerator and denominator are evaluated
    exactly before moving to Q_p.
    """
    point = (Fraction(cfg.q_val), cfg.lambda_val, Fraction(cfg.q_val) ** cfg.x_val)
    num = Fraction(f.num.evaluate(point))
    den = Fraction(f.den.evaluate(point))
    if den == 0:
        raise ZeroDivisionError("evaluation point is a pole")
    return PadicInt(num / den, cfg.p, cfg.K, prec)


def _compare(N, approx: PadicInt, target: PadicInt) -> LevelResult:
    diff = approx - target
    return LevelResult(N, diff.valuation(), diff.known_precision, diff.is_zero())


def _bracket_values(cfg: QConfig, count: int) -> list[int]:
    """``[x + y]_q`` for ``y < count`` as integers modulo ``p**K``."""
    mod = cfg.p ** cfg.K
    qx = pow(cfg.q_val, cfg.x_val, mod)
    start = 0
    power = 1
    for _ in range(cfg.x_val):
        start = (start + power) % mod
        power = power * cfg.q_val % mod
    out = [0] * count
    cur = start
    step = qx
    for y in range(count):
        out[y] = cur
        cur = (cur + step) % mod
        step = step * cfg.q_val % mod
    return out


def _falling(value: int, n: int, lam: Fraction, cfg: QConfig) -> PadicInt:
    z = cfg.padic(value)
    result = cfg.padic(1)
    for k in range(n):
        result = result * (z - cfg.padic(lam * k))
    return result


def check_dbeta_integral(n: int, cfg: QConfig, levels) -> list[LevelResult]:
    """Riemann sums of ``[x + y]_{n, lambda}`` against ``dbeta(n)`` at the point."""
    from .degenerate import dbeta

    target = evaluate_ratfunc(dbeta(n), cfg)
    results = []
    for N in levels:
        if cfg.K <= N:
            raise PrecisionError(f"precision K={cfg.K} must exceed level N={N}")
        brackets = _bracket_values(cfg, cfg.p ** N)
        approx = riemann_sum(
            lambda y: _falling(brackets[y], n, cfg.lambda_val, cfg), cfg, N
        )
        results.append(_compare(N, approx, target))
    return results


def check_integral_monomial(j: int, cfg: QConfig, levels) -> list[LevelResult]:
    """Riemann sums of ``q**(j*y)`` against ``integral_monomial(j)``."""
    from .carlitz import integral_monomial

    target = evaluate_ratfunc(integral_monomial(j), cfg)
    mod = cfg.p ** cfg.K
    qj = pow(cfg.q_val, j, mod)
    results = []
    for N in levels:
        approx = riemann_sum(lambda y: cfg.padic(pow(qj, y, mod)), cfg, N)
        results.append(_compare(N, approx, target))
    return results


def check_order_r(n: int, r: int, cfg: QConfig, N: int, max_points: int = 10**6) -> LevelResult:
    """r-fold Riemann sum of ``[x_1 + ... + x_r + x]_q**n`` against ``beta_order_r``.

    The integrand depends on the points only through ``s = x_1 + ... + x_r``,
    so the r-fold sum is taken over ``s`` weighted by the number of tuples
    with that sum.
    """
    from .carlitz import beta_order_r

    if r < 1:
        raise ValueError("order r must be >= 1")
    side = cfg.p ** N
    if side ** r > max_points:
        raise PrecisionError(f"{side}^{r} sample points exceed the budget {max_points}")
    if cfg.K <= r * N:
        raise PrecisionError(f"precision K={cfg.K} must exceed r*N={r * N}")
    counts = [1]
    for _ in range(r):
        nxt = [0] * (len(counts) + side - 1)
        for s, c in enumerate(counts):
            for t in range(side):
                nxt[s + t] += c
        counts = nxt
    brackets = _bracket_values(cfg, len(counts))
    qpow = _q_powers(cfg, len(counts), cfg.K)
    total = cfg.padic(0)
    for s, c in enumerate(counts):
        total = total + cfg.padic(c * qpow[s]) * cfg.padic(brackets[s]) ** n
    denom = _qint_exact(cfg, side, cfg.K + N) ** r
    approx = total / denom
    target = evaluate_ratfunc(beta_order_r(n, r), cfg)
    return _compare(N, approx, target)


def convergence_ok(results: list[LevelResult]) -> bool:
    """Valuations nondecreasing in N, treating levels that agree to full
    known precision as having reached the ceiling."""
    last = None
    for res in results:
        if res.exact:
            continue
        if last is not None and res.valuation < last:
            return False
        last = res.valuation
    return True
