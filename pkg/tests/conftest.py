from fractions import Fraction

from hypothesis import strategies as st

from qbern.exactcore import MultiPoly, RatFunc

small_coeff = st.integers(-4, 4).map(Fraction) | st.fractions(
    min_value=-3, max_value=3, max_denominator=4
)


@st.composite
def polys(draw, max_terms=4, max_deg=2, nonzero=False):
    n = draw(st.integers(1 if nonzero else 0, max_terms))
    terms = {}
    for _ in range(n):
        exps = tuple(draw(st.integers(0, max_deg)) for _ in range(3))
        terms[exps] = draw(small_coeff)
    p = MultiPoly(terms)
    if nonzero and p.is_zero():
        p = MultiPoly.constant(draw(st.integers(1, 5)))
    return p


@st.composite
def ratfuncs(draw):
    return RatFunc(draw(polys()), draw(polys(nonzero=True)))


@st.composite
def q_ratfuncs(draw):
    """Rational functions whose denominator only involves q (the shape all
    library values have)."""
    den = MultiPoly.from_univariate(
        draw(st.lists(st.integers(-3, 3), min_size=1, max_size=4))
    )
    if den.is_zero():
        den = MultiPoly.constant(1)
    return RatFunc(draw(polys()), den)
