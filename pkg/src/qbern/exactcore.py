"""Exact rational functions in the indeterminates ``q``, ``L`` and ``Q``.

``q`` is the deformation parameter, ``L`` stands for the degeneracy
parameter lambda and ``Q`` stands for ``q**x``.  Coefficients are
:class:`fractions.Fraction` throughout.

Polynomials are sparse maps from exponent triples ``(e_q, e_L, e_Q)`` to
nonzero coefficients.  Rational functions are kept as ``num / den`` pairs.
Equality is decided by cross-multiplication; a reduction pass is applied
after every operation and becomes a full gcd reduction whenever the
denominator involves a single variable (which is the case for every value
the library produces).
"""
from __future__ import annotations

import contextvars
import json
import os
import re
from fractions import Fraction
from math import comb, gcd, lcm

__all__ = [
    "VARS",
    "BudgetExceeded",
    "PoleError",
    "ParseError",
    "MultiPoly",
    "RatFunc",
    "term_budget",
    "rf_add",
    "rf_sub",
    "rf_mul",
    "rf_div",
    "rf_pow",
    "rf_eq",
    "rf_subst",
    "rf_limit",
    "rf_evaluate",
    "q",
    "L",
    "Q",
    "one",
    "zero",
    "const",
    "qint",
]

VARS = ("q", "L", "Q")
_VAR_INDEX = {name: i for i, name in enumerate(VARS)}

DEFAULT_TERM_BUDGET = 2_000_000

_budget: contextvars.ContextVar[int | None] = contextvars.ContextVar(
    "qbern_term_budget", default=None
)


class BudgetExceeded(RuntimeError):
    """An intermediate polynomial grew past the configured term budget."""


class PoleError(ArithmeticError):
    """A limit or evaluation hit a genuine pole."""


class ParseError(ValueError):
    pass


def _current_budget() -> int:
    value = _budget.get()
    if value is not None:
        return value
    env = os.environ.get("QBERN_BUDGET_TERMS")
    if env:
        return int(env)
    return DEFAULT_TERM_BUDGET


class term_budget:
    """Context manager setting the per-intermediate monomial budget."""

    def __init__(self, limit: int | None):
        self.limit = limit
        self._token = None

    def __enter__(self):
        self._token = _budget.set(self.limit)
        return self

    def __exit__(self, *exc):
        _budget.reset(self._token)
        return False


def _var_index(var) -> int:
    if isinstance(var, int):
        if 0 <= var < 3:
            return var
    elif var in _VAR_INDEX:
        return _VAR_INDEX[var]
    raise ValueError(f"unknown variable {var!r}; expected one of {VARS}")


def _order_key(exps):
    # graded lex with q > L > Q; sorting ascending by this key puts the
    # leading term first
    return (-(exps[0] + exps[1] + exps[2]), -exps[0], -exps[1], -exps[2])


# ---------------------------------------------------------------------------
# dense univariate helpers (coefficient lists, lowest degree first)


def _utrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _udivmod(a, b):
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    if len(a) - 1 < db:
        return [], a
    quo = [Fraction(0)] * (len(a) - db)
    for i in range(len(a) - 1 - db, -1, -1):
        c = a[i + db]
        if c:
            c = c / lead
            quo[i] = c
            for k in range(db + 1):
                if b[k]:
                    a[i + k] -= c * b[k]
    return _utrim(quo), _utrim(a[:db])


def _uprimitive(a):
    """Scale to coprime integer coefficients with positive leading term."""
    den = 1
    for c in a:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in a]
    g = 0
    for c in ints:
        g = gcd(g, c)
    if ints[-1] < 0:
        g = -g
    return [Fraction(c // g) for c in ints]


def _ugcd(a, b):
    a, b = _uprimitive(a), _uprimitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        if len(b) == 1:
            return [Fraction(1)]
        _, r = _udivmod(a, b)
        a, b = b, (_uprimitive(r) if r else r)
    return a


# ---------------------------------------------------------------------------


class MultiPoly:
    """Sparse polynomial in ``q, L, Q`` with rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None, _trusted=False):
        if _trusted:
            self.terms = terms
            return
        clean = {}
        if terms:
            for exps, c in terms.items():
                if c:
                    exps = tuple(int(e) for e in exps)
                    if len(exps) != 3 or min(exps) < 0:
                        raise ValueError(f"bad exponent triple {exps}")
                    clean[exps] = Fraction(c)
        self.terms = clean

    @classmethod
    def constant(cls, c) -> MultiPoly:
        c = Fraction(c)
        return cls({(0, 0, 0): c} if c else {}, True)

    @classmethod
    def monomial(cls, var, power: int = 1, coeff=1) -> MultiPoly:
        exps = [0, 0, 0]
        exps[_var_index(var)] = power
        return cls({tuple(exps): Fraction(coeff)})

    @classmethod
    def from_univariate(cls, coeffs, var=0) -> MultiPoly:
        i = _var_index(var)
        terms = {}
        for k, c in enumerate(coeffs):
            if c:
                exps = [0, 0, 0]
                exps[i] = k
                terms[tuple(exps)] = Fraction(c)
        return cls(terms, True)

    # -- inspection ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and (0, 0, 0) in self.terms)

    def constant_value(self) -> Fraction:
        return self.terms.get((0, 0, 0), Fraction(0))

    def __len__(self):
        return len(self.terms)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _order_key(t[0]))

    def leading_term(self):
        return min(self.terms.items(), key=lambda t: _order_key(t[0]))

    def degree(self, var) -> int:
        i = _var_index(var)
        return max((e[i] for e in self.terms), default=-1)

    def variables(self) -> tuple[str, ...]:
        used = [False, False, False]
        for e in self.terms:
            for i in range(3):
                if e[i]:
                    used[i] = True
        return tuple(v for v, u in zip(VARS, used) if u)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: MultiPoly) -> MultiPoly:
        if len(self.terms) < len(other.terms):
            self, other = other, self
        res = dict(self.terms)
        for e, c in other.terms.items():
            s = res.get(e)
            if s is None:
                res[e] = c
            else:
                s += c
                if s:
                    res[e] = s
                else:
                    del res[e]
        return MultiPoly(res, True)

    def __neg__(self) -> MultiPoly:
        return MultiPoly({e: -c for e, c in self.terms.items()}, True)

    def __sub__(self, other: MultiPoly) -> MultiPoly:
        return self + (-other)

    def scale(self, c) -> MultiPoly:
        c = Fraction(c)
        if not c:
            return MultiPoly({}, True)
        return MultiPoly({e: v * c for e, v in self.terms.items()}, True)

    def __mul__(self, other: MultiPoly) -> MultiPoly:
        if not self.terms or not other.terms:
            return MultiPoly({}, True)
        if len(self.terms) < len(other.terms):
            self, other = other, self
        res: dict = {}
        get = res.get
        for (a0, a1, a2), ca in other.terms.items():
            for (b0, b1, b2), cb in self.terms.items():
                k = (a0 + b0, a1 + b1, a2 + b2)
                res[k] = get(k, 0) + ca * cb
        res = {e: c for e, c in res.items() if c}
        if len(res) > _current_budget():
            raise BudgetExceeded(
                f"intermediate polynomial has {len(res)} terms "
                f"(budget {_current_budget()})"
            )
        return MultiPoly(res, True)

    def __pow__(self, k: int) -> MultiPoly:
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def mul_monomial(self, exps, coeff=1) -> MultiPoly:
        coeff = Fraction(coeff)
        a0, a1, a2 = exps
        return MultiPoly(
            {(e[0] + a0, e[1] + a1, e[2] + a2): c * coeff for e, c in self.terms.items()},
            True,
        )

    # -- structure helpers used by the reducer ------------------------------

    def split_by(self, var):
        """Group as ``{other_exponents: univariate coefficient list in var}``."""
        i = _var_index(var)
        groups: dict = {}
        for e, c in self.terms.items():
            rest = e[:i] + (0,) + e[i + 1 :]
            lst = groups.setdefault(rest, [])
            k = e[i]
            if len(lst) <= k:
                lst.extend([Fraction(0)] * (k + 1 - len(lst)))
            lst[k] = c
        return groups

    def coefficients_in(self, var) -> dict[int, MultiPoly]:
        """``{k: coefficient of var**k}`` with the coefficients free of var."""
        i = _var_index(var)
        out: dict = {}
        for e, c in self.terms.items():
            rest = e[:i] + (0,) + e[i + 1 :]
            out.setdefault(e[i], {})[rest] = c
        return {k: MultiPoly(t, True) for k, t in out.items()}

    def univariate(self, var):
        """Dense coefficient list if the polynomial only involves var, else None."""
        i = _var_index(var)
        coeffs: list = []
        for e, c in self.terms.items():
            for j in range(3):
                if j != i and e[j]:
                    return None
            k = e[i]
            if len(coeffs) <= k:
                coeffs.extend([Fraction(0)] * (k + 1 - len(coeffs)))
            coeffs[k] = c
        return coeffs

    def evaluate(self, values):
        """Evaluate at a full assignment ``(q, L, Q)`` of ring elements."""
        total = 0
        powers = [{}, {}, {}]
        for e, c in self.terms.items():
            t = c
            for i in range(3):
                if e[i]:
                    cache = powers[i]
                    if e[i] not in cache:
                        cache[e[i]] = values[i] ** e[i]
                    t = t * cache[e[i]]
            total = total + t
        return total

    # -- text ---------------------------------------------------------------

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            factors = []
            for name, k in zip(VARS, e):
                if k == 1:
                    factors.append(name)
                elif k > 1:
                    factors.append(f"{name}^{k}")
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = " * ".join(factors)
            else:
                body = " * ".join([str(mag)] + factors)
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def to_json(self):
        return [[e[0], e[1], e[2], str(c)] for e, c in self.sorted_terms()]

    def __repr__(self):
        return f"MultiPoly({self.to_text()!r})"


def _content_normalize(num: MultiPoly, den: MultiPoly):
    """Clear denominators, divide out the integer content and make the
    leading coefficient of den positive.  A constant den becomes 1."""
    if den.is_constant():
        return num.scale(1 / den.constant_value()), MultiPoly.constant(1)
    den_lcm = 1
    for c in num.terms.values():
        den_lcm = lcm(den_lcm, c.denominator)
    for c in den.terms.values():
        den_lcm = lcm(den_lcm, c.denominator)
    g = 0
    for c in num.terms.values():
        g = gcd(g, (c * den_lcm).numerator)
    for c in den.terms.values():
        g = gcd(g, (c * den_lcm).numerator)
    if den.leading_term()[1] < 0:
        g = -g
    factor = Fraction(den_lcm, g)
    if factor == 1:
        return num, den
    return num.scale(factor), den.scale(factor)


def _strip_monomial(num: MultiPoly, den: MultiPoly):
    lo = [min(e[i] for e in num.terms) for i in range(3)]
    lo = [min(lo[i], min(e[i] for e in den.terms)) for i in range(3)]
    if any(lo):
        neg = (-lo[0], -lo[1], -lo[2])
        return num.mul_monomial(neg), den.mul_monomial(neg)
    return num, den


def _reduce(num: MultiPoly, den: MultiPoly):
    if not den.terms:
        raise ZeroDivisionError("zero denominator")
    if not num.terms:
        return MultiPoly({}, True), MultiPoly.constant(1)
    if den.is_constant():
        return num.scale(1 / den.constant_value()), MultiPoly.constant(1)
    num, den = _strip_monomial(num, den)
    for var in VARS:
        dcoeffs = den.univariate(var)
        if dcoeffs is None:
            continue
        g = dcoeffs
        groups = num.split_by(var)
        for lst in groups.values():
            g = _ugcd(g, _utrim(list(lst)))
            if len(g) == 1:
                break
        if len(g) > 1:
            i = _var_index(var)
            new_terms = {}
            for rest, lst in groups.items():
                quo, rem = _udivmod(_utrim(list(lst)), g)
                assert not rem
                for k, c in enumerate(quo):
                    if c:
                        e = list(rest)
                        e[i] = k
                        new_terms[tuple(e)] = c
            num = MultiPoly(new_terms, True)
            dq, rem = _udivmod(dcoeffs, g)
            assert not rem
            den = MultiPoly.from_univariate(dq, var)
        return _content_normalize(num, den)
    ratio = _proportional(num, den)
    if ratio is not None:
        return MultiPoly.constant(ratio), MultiPoly.constant(1)
    return _content_normalize(num, den)


def _proportional(a: MultiPoly, b: MultiPoly):
    if len(a.terms) != len(b.terms):
        return None
    ratio = None
    for e, c in a.terms.items():
        d = b.terms.get(e)
        if d is None:
            return None
        if ratio is None:
            ratio = c / d
        elif c != ratio * d:
            return None
    return ratio


class RatFunc:
    """Quotient ``num / den`` of two :class:`MultiPoly` values.

    Instances are immutable.  Arithmetic operators are the field operations;
    ``==`` compares by cross-multiplication.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _reduced=False):
        if not isinstance(num, MultiPoly):
            num = MultiPoly.constant(num)
        if den is None:
            den = MultiPoly.constant(1)
        elif not isinstance(den, MultiPoly):
            den = MultiPoly.constant(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            num, den = _reduce(num, den)
        self.num = num
        self.den = den

    # -- constructors -------------------------------------------------------

    @classmethod
    def var(cls, name) -> RatFunc:
        return cls(MultiPoly.monomial(name), None, True)

    @classmethod
    def from_json(cls, data) -> RatFunc:
        if isinstance(data, str):
            data = json.loads(data)

        def poly(rows):
            terms = {}
            for a, b, c, coeff in rows:
                terms[(a, b, c)] = terms.get((a, b, c), 0) + Fraction(coeff)
            return MultiPoly(terms)

        return cls(poly(data["num"]), poly(data.get("den", [[0, 0, 0, "1"]])))

    @classmethod
    def parse(cls, text: str) -> RatFunc:
        return _parse_ratfunc(text)

    # -- inspection ---------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num.constant_value() / self.den.constant_value()

    def variables(self) -> tuple[str, ...]:
        used = set(self.num.variables()) | set(self.den.variables())
        return tuple(v for v in VARS if v in used)

    def size(self) -> int:
        return len(self.num) + len(self.den)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other) -> RatFunc:
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        a = self.den.univariate("q")
        b = other.den.univariate("q") if a is not None else None
        if a is not None and b is not None and len(a) > 1 and len(b) > 1:
            g = _ugcd(a, b)
            if len(g) > 1:
                # only multiply by the parts of the denominators not shared
                ca, _ = _udivmod(a, g)
                cb, _ = _udivmod(b, g)
                fa = MultiPoly.from_univariate(ca)
                fb = MultiPoly.from_univariate(cb)
                return RatFunc(self.num * fb + other.num * fa, self.den * fb)
        return RatFunc(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __neg__(self) -> RatFunc:
        return RatFunc(-self.num, self.den, True)

    def __sub__(self, other) -> RatFunc:
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> RatFunc:
        return _coerce(other) - self

    def __mul__(self, other) -> RatFunc:
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.num.is_zero() or other.num.is_zero():
            return RatFunc(0)
        if self.is_constant():
            return RatFunc(other.num.scale(self.constant_value()), other.den)
        if other.is_constant():
            return RatFunc(self.num.scale(other.constant_value()), self.den)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> RatFunc:
        if self.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other) -> RatFunc:
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> RatFunc:
        return _coerce(other) / self

    def __pow__(self, k: int) -> RatFunc:
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return RatFunc(1)
        result = None
        base = self
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return rf_eq(self, other)

    __hash__ = None

    # -- serialization ------------------------------------------------------

    def to_text(self) -> str:
        num = self.num.to_text()
        if self.den.is_constant() and self.den.constant_value() == 1:
            return num
        den = self.den.to_text()
        if len(self.num) > 1:
            num = f"({num})"
        if len(self.den) > 1:
            den = f"({den})"
        return f"{num} / {den}"

    def to_json(self):
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    def to_latex(self) -> str:
        from .latex import ratfunc_to_latex

        return ratfunc_to_latex(self)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"RatFunc({self.to_text()!r})"


def _coerce(x):
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, MultiPoly):
        return RatFunc(x, None, True)
    if isinstance(x, (int, Fraction)):
        return RatFunc(MultiPoly.constant(x), None, True)
    return NotImplemented


def const(c) -> RatFunc:
    return RatFunc(MultiPoly.constant(c), None, True)


q = RatFunc.var("q")
L = RatFunc.var("L")
Q = RatFunc.var("Q")
one = const(1)
zero = const(0)


def qint(k: int, base: RatFunc | None = None) -> RatFunc:
    """``[k]_q = (1 - q**k) / (1 - q)`` for an integer ``k >= 0``.

    With ``base`` given, the q-number is taken in that base instead of q.
    """
    if k < 0:
        raise ValueError("qint needs k >= 0")
    if base is None:
        return RatFunc(MultiPoly.from_univariate([1] * k), None, True)
    total = zero
    power = one
    for _ in range(k):
        total = total + power
        power = power * base
    return total


# ---------------------------------------------------------------------------
# functional surface


def rf_add(a: RatFunc, b: RatFunc) -> RatFunc:
    return a + b


def rf_sub(a: RatFunc, b: RatFunc) -> RatFunc:
    return a - b


def rf_mul(a: RatFunc, b: RatFunc) -> RatFunc:
    return a * b


def rf_div(a: RatFunc, b: RatFunc) -> RatFunc:
    return a / b


def rf_pow(a: RatFunc, k: int) -> RatFunc:
    if k < 0:
        raise ValueError("rf_pow expects k >= 0")
    return a ** k


def rf_eq(a: RatFunc, b: RatFunc) -> bool:
    """True iff ``a.num * b.den == b.num * a.den``."""
    if a.den == b.den:
        return a.num == b.num
    return a.num * b.den == b.num * a.den


def _subst_poly(p: MultiPoly, var, image: RatFunc):
    """Substitute into a polynomial; returns (numerator, denominator power
    base, degree) so that p = numerator / image.den**degree."""
    parts = p.coefficients_in(var)
    if not parts:
        return MultiPoly({}, True), 0
    deg = max(parts)
    n, d = image.num, image.den
    d_const = d.is_constant() and d.constant_value() == 1
    npow = [MultiPoly.constant(1)]
    for _ in range(deg):
        npow.append(npow[-1] * n)
    dpow = [MultiPoly.constant(1)]
    if not d_const:
        for _ in range(deg):
            dpow.append(dpow[-1] * d)
    total = MultiPoly({}, True)
    for k, coeff in parts.items():
        term = coeff * npow[k]
        if not d_const:
            term = term * dpow[deg - k]
        total = total + term
    return total, deg


def rf_subst(f: RatFunc, var, image) -> RatFunc:
    """Substitute ``var -> image`` in ``f`` (a ring homomorphism)."""
    image = _coerce(image)
    if image is NotImplemented:
        raise TypeError("substitution image must be a RatFunc or rational")
    num, dn = _subst_poly(f.num, var, image)
    den, dd = _subst_poly(f.den, var, image)
    if den.is_zero():
        raise PoleError(
            f"denominator vanishes identically under {var} -> {image.to_text()}"
        )
    # num / d**dn  over  den / d**dd
    shift = dd - dn
    if shift > 0:
        num = num * image.den ** shift
    elif shift < 0:
        den = den * image.den ** (-shift)
    return RatFunc(num, den)


def _taylor_shift(p: MultiPoly, var, point: Fraction) -> dict[int, MultiPoly]:
    """Expand p(var = point + eps) as ``{eps power: coefficient poly}``."""
    i = _var_index(var)
    out: dict[int, dict] = {}
    for e, c in p.terms.items():
        k = e[i]
        rest = e[:i] + (0,) + e[i + 1 :]
        for j in range(k + 1):
            coeff = c * comb(k, j) * point ** (k - j)
            if coeff:
                slot = out.setdefault(j, {})
                v = slot.get(rest, 0) + coeff
                if v:
                    slot[rest] = v
                else:
                    del slot[rest]
    return {j: MultiPoly(t, True) for j, t in out.items() if t}


def rf_limit(f: RatFunc, var, point) -> RatFunc:
    """Limit of ``f`` as ``var -> point``.

    Shifts ``var = point + eps``, cancels the lowest common power of eps and
    sets eps to zero.  Raises :class:`PoleError` when the denominator
    vanishes to higher order than the numerator.
    """
    point = Fraction(point)
    dser = _taylor_shift(f.den, var, point)
    kd = min(dser)
    nser = _taylor_shift(f.num, var, point)
    if not nser:
        return zero
    kn = min(nser)
    if kd > kn:
        raise PoleError(
            f"pole of order {kd - kn} at {var} = {point} in {f.to_text()}"
        )
    if kn > kd:
        return zero
    return RatFunc(nser[kn], dser[kd])


def rf_evaluate(f: RatFunc, assignment: dict) -> RatFunc:
    """Apply limits for each ``var: value`` pair in order (partial allowed)."""
    for var, value in assignment.items():
        f = rf_limit(f, var, value)
    return f


# ---------------------------------------------------------------------------
# text parser for the serialized form

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([qLQ])|(\^)|(\*)|(\+)|(-)|(/)|(\()|(\)))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos} in {text!r}")
        pos = m.end()
        num, name, caret, star, plus, minus, slash, lp, rp = m.groups()
        if num is not None:
            tokens.append(("num", Fraction(num)))
        elif name is not None:
            tokens.append(("var", name))
        elif caret:
            tokens.append(("^", None))
        elif star:
            tokens.append(("*", None))
        elif plus:
            tokens.append(("+", None))
        elif minus:
            tokens.append(("-", None))
        elif slash:
            tokens.append(("/", None))
        elif lp:
            tokens.append(("(", None))
        elif rp:
            tokens.append((")", None))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def take(self, kind=None):
        if self.i >= len(self.tokens):
            raise ParseError("unexpected end of input")
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind!r}, got {tok[0]!r}")
        self.i += 1
        return tok

    def ratfunc(self) -> RatFunc:
        num = self.group()
        if self.peek() == "/":
            self.take("/")
            den = self.group()
            return num / den
        return num

    def group(self) -> RatFunc:
        if self.peek() == "(":
            self.take("(")
            p = self.poly()
            self.take(")")
            return RatFunc(p, None, True)
        return RatFunc(self.poly(), None, True)

    def poly(self) -> MultiPoly:
        sign = 1
        if self.peek() == "-":
            self.take()
            sign = -1
        total = self.term().scale(sign)
        while self.peek() in ("+", "-"):
            sign = 1 if self.take()[0] == "+" else -1
            total = total + self.term().scale(sign)
        return total

    def term(self) -> MultiPoly:
        exps = [0, 0, 0]
        coeff_box = [Fraction(1)]
        self.factor(exps, coeff_box)
        while self.peek() == "*":
            self.take()
            self.factor(exps, coeff_box)
        return MultiPoly({tuple(exps): coeff_box[0]})

    def factor(self, exps, coeff_box):
        kind, value = self.take()
        if kind == "num":
            coeff_box[0] *= value
        elif kind == "var":
            k = 1
            if self.peek() == "^":
                self.take()
                k = self.take("num")[1]
                if k.denominator != 1:
                    raise ParseError("fractional exponent")
                k = int(k)
            exps[_VAR_INDEX[value]] += k
        else:
            raise ParseError(f"unexpected token {kind!r}")


def _parse_ratfunc(text: str) -> RatFunc:
    parser = _Parser(_tokenize(text))
    result = parser.ratfunc()
    if parser.i != len(parser.tokens):
        raise ParseError(f"trailing input in {text!r}")
    return result
