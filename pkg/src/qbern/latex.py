"""LaTeX rendering of rational functions.

Denominators that split completely into q-integers ``[k]_q`` and powers of
``(1 - q)`` are printed in factored form; anything else is printed as a raw
polynomial.  This module only affects display, never the canonical forms.
"""
from __future__ import annotations

from fractions import Fraction

from .exactcore import RatFunc, _udivmod


def _coeff(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return rf"\frac{{{c.numerator}}}{{{c.denominator}}}"


def poly_to_latex(p) -> str:
    if p.is_zero():
        return "0"
    out = []
    for i, (e, c) in enumerate(p.sorted_terms()):
        factors = []
        if e[0]:
            factors.append("q" if e[0] == 1 else f"q^{{{e[0]}}}")
        if e[1]:
            factors.append(r"\lambda" if e[1] == 1 else rf"\lambda^{{{e[1]}}}")
        if e[2]:
            factors.append("q^{x}" if e[2] == 1 else f"q^{{{e[2]}x}}")
        mag = abs(c)
        body = " ".join(factors)
        if not factors:
            body = _coeff(mag)
        elif mag != 1:
            body = _coeff(mag) + " " + body
        sign = "-" if c < 0 else "+"
        if i == 0:
            out.append(("-" if sign == "-" else "") + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def _qint_factors(den):
    """Split a univariate q-polynomial into [k]_q and (1 - q) factors.

    Returns ``(constant, {k: multiplicity})`` with ``k = 1`` standing for
    ``(1 - q)``, or None when something else is left over.
    """
    coeffs = den.univariate("q")
    if coeffs is None or len(coeffs) < 2:
        return None
    rest = list(coeffs)
    found: dict[int, int] = {}
    for k in range(len(rest), 1, -1):
        block = [Fraction(1)] * k
        while len(rest) >= k:
            quo, rem = _udivmod(rest, block)
            if rem:
                break
            rest = quo
            found[k] = found.get(k, 0) + 1
    one_minus_q = [Fraction(1), Fraction(-1)]
    while len(rest) >= 2:
        quo, rem = _udivmod(rest, one_minus_q)
        if rem:
            break
        rest = quo
        found[1] = found.get(1, 0) + 1
    if len(rest) != 1:
        return None
    return rest[0], found


def ratfunc_to_latex(f: RatFunc) -> str:
    num = poly_to_latex(f.num)
    if f.den.is_constant() and f.den.constant_value() == 1:
        return num
    split = _qint_factors(f.den)
    if split is None:
        return rf"\frac{{{num}}}{{{poly_to_latex(f.den)}}}"
    c, found = split
    parts = [] if c == 1 else [_coeff(c)]
    for k in sorted(found, reverse=True):
        base = "(1 - q)" if k == 1 else f"[{k}]_q"
        mult = found[k]
        parts.append(base if mult == 1 else f"{base}^{{{mult}}}")
    return rf"\frac{{{num}}}{{{' '.join(parts)}}}"
