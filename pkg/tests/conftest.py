from fractions import Fraction

import pytest
import sympy
from hypothesis import strategies as st

from redux import QQ, Field, Polynomial, VariableLayout


def sym(name: str) -> sympy.Symbol:
    return sympy.Symbol(name.replace(".", "_"))


def to_sympy(p: Polynomial):
    """Independent re-expression of ``p`` as a sympy expression."""
    syms = [sym(n) for n in p.layout]
    expr = sympy.Integer(0)
    for m, c in p.terms.items():
        term = sympy.Rational(Fraction(c).numerator, Fraction(c).denominator)
        for i, e in m:
            term *= syms[i] ** e
        expr += term
    return expr


def sympy_equal(p: Polynomial, expr, modulus=None) -> bool:
    gens = [sym(n) for n in p.layout]
    ours = sympy.Poly(to_sympy(p), *gens, modulus=modulus) if modulus else sympy.Poly(to_sympy(p), *gens)
    theirs = sympy.Poly(sympy.expand(expr), *gens, modulus=modulus) if modulus else sympy.Poly(sympy.expand(expr), *gens)
    return ours == theirs


def variables(fld, names):
    layout = VariableLayout(names)
    return layout, [Polynomial.var(fld, layout, n) for n in names]


small_rationals = st.fractions(min_value=-20, max_value=20, max_denominator=6)


@st.composite
def polynomials(draw, fld=QQ, names=("x", "y", "z"), max_deg=4, max_terms=6):
    layout = VariableLayout(list(names))
    n = len(names)
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        exps = draw(st.lists(st.integers(0, max_deg), min_size=n, max_size=n))
        while sum(exps) > max_deg:
            k = exps.index(max(exps))
            exps[k] -= 1
        mono = tuple((i, e) for i, e in enumerate(exps) if e)
        if fld.is_prime_field:
            c = draw(st.integers(0, fld.p - 1))
        else:
            c = draw(small_rationals)
        terms[mono] = c
    return Polynomial(fld, layout, terms)


@pytest.fixture
def gf67():
    return Field.prime(67)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
