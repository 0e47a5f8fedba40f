import random
from fractions import Fraction
from math import comb

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from redux import QQ, Field, Polynomial, VariableLayout, evaluate
from redux import hyperbolic as hy
from redux.acceptance import random_biquadratic
from redux.serialize import parse_poly
from redux.verifiers import SampleConfig, sample_nonneg

from conftest import sym, to_sympy, variables


def x1x2_squared():
    layout, (x1, x2) = variables(QQ, ["x1", "x2"])
    return x1 ** 2 * x2 ** 2


def test_build_example():
    art = hy.build_hyperbolicity(x1x2_squared())
    assert art.C == 1 and art.beta == 8
    x0, x1, x2 = (Polynomial.var(QQ, art.p.layout, v) for v in ("x.0", "x.1", "x.2"))
    assert art.p == x0 ** 4 - 8 * x0 ** 2 * (x1 ** 2 + x2 ** 2) + x1 ** 2 * x2 ** 2
    assert evaluate(art.p, art.e) == 1


@pytest.mark.parametrize("bad", ["zero", "cubic", "mixed", "gf"])
def test_build_rejects(bad):
    layout, (x,) = variables(QQ, ["x"])
    Q = {"zero": x * 0, "cubic": x ** 3, "mixed": x ** 4 + x ** 2}.get(bad)
    if bad == "gf":
        gl, (y,) = variables(Field.prime(5), ["y"])
        Q = y ** 4
    with pytest.raises(ValueError):
        hy.build_hyperbolicity(Q)


def test_symmetric_matrix_rejects_asymmetry():
    layout, (x, y) = variables(QQ, ["x", "y"])
    with pytest.raises(ValueError):
        hy.SymmetricPolyMatrix([[x, y], [x, y]])


@pytest.mark.parametrize("rows, expected", [
    ([[1, 0], [0, 1]], True),
    ([[1, 0], [0, -1]], False),
    ([[1, 2], [2, 1]], False),
    ([[0, 0], [0, 0]], True),
    ([[0, 1], [1, 0]], False),
    ([[2, 1, 0], [1, 2, 1], [0, 1, 2]], True),
])
def test_is_psd(rows, expected):
    assert hy.is_psd(rows) is expected
    assert hy.is_psd(rows) == all(ev >= 0 for ev in sympy.Matrix(rows).eigenvals())


def test_principal_minor_count():
    assert len(hy.principal_minors([[1] * 4] * 4)) == 15


@settings(max_examples=40, deadline=None)
@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=4), min_size=9, max_size=9))
def test_det_matches_sympy(vals):
    rows = [vals[0:3], vals[3:6], vals[6:9]]
    assert hy.det(rows) == sympy.Matrix(rows).det()


def sympy_bezoutian(p, e):
    """Independent Bézoutian: divide the numerator by (t - s) in sympy."""
    t, s = sympy.symbols("t s")
    xs = [sym(n) for n in p.layout]
    expr = to_sympy(p)
    u = sympy.Symbol("u")
    D = sympy.diff(expr.subs({x: x + u * ei for x, ei in zip(xs, e)}, simultaneous=True), u).subs(u, 0)
    def line(f, par):
        return f.subs({x: x + par * ei for x, ei in zip(xs, e)}, simultaneous=True)
    num = sympy.expand(line(expr, t) * line(D, s) - line(expr, s) * line(D, t))
    q, r = sympy.div(num, t - s, t, s)
    assert r == 0
    poly = sympy.Poly(q, t, s)
    return [[poly.coeff_monomial(t ** i * s ** j) for j in range(4)] for i in range(4)]


def quartic_strategy():
    names = ["x.0", "x.1", "x.2"]
    layout = VariableLayout(names)
    monos = [(a, b, 4 - a - b) for a in range(5) for b in range(5 - a)]
    return st.dictionaries(st.sampled_from(monos), st.integers(-3, 3), min_size=1, max_size=5).map(
        lambda d: Polynomial(QQ, layout, {tuple((i, e) for i, e in enumerate(k) if e): c for k, c in d.items()}))


@settings(max_examples=15, deadline=None)
@given(quartic_strategy())
def test_bezoutian_matches_sympy(p):
    if p.is_zero():
        return
    e = (1, 0, 0)
    B = hy.bezoutian(p, e)
    ref = sympy_bezoutian(p, e)
    for i in range(4):
        for j in range(4):
            assert sympy.expand(to_sympy(B[i, j]) - ref[i][j]) == 0
            assert B[i, j] == B[j, i]


def test_bezoutian_of_x0_fourth():
    layout, (x0,) = variables(QQ, ["x.0"])
    B = hy.bezoutian(x0 ** 4, (1,))
    # numerator is 4 (x0+t)^3 (x0+s)^3 (t - s)
    for i in range(4):
        for j in range(4):
            assert B[i, j] == (x0 ** (6 - i - j)).scale(4 * comb(3, i) * comb(3, j))
    at0 = hy.restrict_x0(B)
    assert [[evaluate(at0[i, j], [0]) for j in range(4)] for i in range(4)] == \
        [[0] * 4, [0] * 4, [0] * 4, [0, 0, 0, 4]]


@pytest.mark.parametrize("seed", range(20))
def test_bezoutian_closed_form(seed):
    rng = random.Random(seed)
    Q = random_biquadratic(rng, 1, 1) if seed % 2 else random_biquadratic(rng, 2, 1)
    if Q.is_zero():
        pytest.skip("zero form")
    art = hy.build_hyperbolicity(Q)
    assert hy.restrict_x0(hy.bezoutian(art.p, art.e)) == hy.closed_form_bezoutian(art)


def test_psd_at_point_examples():
    art = hy.build_hyperbolicity(x1x2_squared())
    B = hy.restrict_x0(hy.bezoutian(art.p, art.e))
    assert hy.psd_at_point(B, [0, 1, 0])
    assert hy.psd_at_point(B, [0, 0, 0])
    condA, condB = hy.schur_condition(art)
    x1, x2 = (Polynomial.var(QQ, art.p.layout, v) for v in ("x.1", "x.2"))
    assert condB == 16 * (x1 ** 2 + x2 ** 2) ** 2 - x1 ** 2 * x2 ** 2
    assert sample_nonneg(condB, SampleConfig(count=200, seed=1)).ok


def test_negative_q_not_psd():
    layout, (x1, x2) = variables(QQ, ["x1", "x2"])
    art = hy.build_hyperbolicity(-(x1 ** 2) * x2 ** 2)
    condA, _ = hy.schur_condition(art)
    assert evaluate(condA, [0, 1, 1]) == -1
    B = hy.restrict_x0(hy.bezoutian(art.p, art.e))
    assert not hy.psd_at_point(B, [0, 1, 1])


@pytest.mark.parametrize("seed", range(5))
def test_schur_equivalence_sampled(seed):
    rng = random.Random(100 + seed)
    Q = random_biquadratic(rng, 1, 1)
    if Q.is_zero():
        pytest.skip("zero form")
    art = hy.build_hyperbolicity(Q)
    B = hy.restrict_x0(hy.bezoutian(art.p, art.e))
    condA, condB = hy.schur_condition(art)
    for _ in range(40):
        x = [0] + [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(2)]
        if not any(x):
            continue
        assert hy.psd_at_point(B, x) == (evaluate(condA, x) >= 0 and evaluate(condB, x) >= 0)


def test_stability_example():
    art = hy.build_hyperbolicity(x1x2_squared())
    st_art = hy.build_stability(art)
    assert st_art.eps == Fraction(1, 5)
    assert len(st_art.M) == 3 and len(st_art.M[0]) == 4
    q = hy.eps_positivity_poly(art, st_art.eps)
    assert evaluate(q, [0, 0]) == 0
    assert evaluate(q, [1, 1]) == Fraction(68, 25) + Fraction(1, 625)
    x1, x2 = (Polynomial.var(QQ, q.layout, v) for v in ("x.1", "x.2"))
    r = x1 ** 2 + x2 ** 2
    assert q == (r * r).scale(1 - 8 * Fraction(1, 25)) + (x1 ** 2 * x2 ** 2).scale(Fraction(1, 625))


@pytest.mark.parametrize("n, beta, K", [(1, 2, 3), (2, 8, 5), (1, 50, 11), (3, 18, 7), (2, Fraction(25, 2), 6)])
def test_choose_eps(n, beta, K):
    eps = hy.choose_eps(n, beta)
    assert eps == Fraction(1, K)
    assert 2 * n * eps < 1 and 2 * beta * eps ** 2 < 1
    bigger = Fraction(1, K - 1)
    assert not (2 * n * bigger < 1 and 2 * beta * bigger ** 2 < 1)


def test_stability_matrix_n1():
    eps = Fraction(1, 3)
    assert hy.stability_matrix(1, eps) == ((1, 1), (eps, -eps))


@pytest.mark.parametrize("seed", range(3))
def test_ptilde_shift_identity(seed):
    rng = random.Random(seed)
    Q = random_biquadratic(rng, 1, 1)
    if Q.is_zero():
        pytest.skip("zero form")
    art = hy.build_hyperbolicity(Q)
    sa = hy.build_stability(art)
    n = art.n
    for _ in range(10):
        t = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
        x = [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(2 * n)]
        lhs = evaluate(sa.ptilde, [t / (2 * n) + xi for xi in x])
        Mx = [sum(c * xi for c, xi in zip(row, x)) for row in sa.M]
        rhs = evaluate(art.p, [t + Mx[0]] + Mx[1:])
        assert lhs == rhs


def test_eps_positivity_sampled():
    art = hy.build_hyperbolicity(x1x2_squared())
    q = hy.eps_positivity_poly(art, hy.choose_eps(2, 8))
    v = sample_nonneg(q, SampleConfig(count=300, seed=2))
    assert v.ok


@pytest.mark.parametrize("f, expected", [("x^2", ["2"]), ("x^4", ["12*x^2"])])
def test_hessian_univariate(f, expected):
    layout = VariableLayout(["x"])
    H = hy.hessian(parse_poly(f, QQ, layout))
    assert str(H[0, 0]) == expected[0]


def test_convexity_example():
    layout, (X, Y) = variables(QQ, ["X1", "Y1"])
    b = X ** 2 * Y ** 2
    assert hy.convexity_gamma(b, ["X1"], ["Y1"]) == 4
    f = hy.build_convexity(b)
    assert f == X ** 2 * Y ** 2 + 2 * (X ** 4 + Y ** 4)
    assert f.degree() == 4 and f.is_homogeneous(4)
    H = hy.hessian(f)
    assert H[0, 0] == 2 * Y ** 2 + 24 * X ** 2
    assert H[0, 1] == H[1, 0] == 4 * X * Y
    assert H[1, 1] == 2 * X ** 2 + 24 * Y ** 2


def test_convexity_padding_nonnegative():
    rng = random.Random(5)
    b = random_biquadratic(rng, 2, 2)
    f = hy.build_convexity(b)
    pad = f - b
    assert all(c > 0 and all(e % 2 == 0 for _, e in m) for m, c in pad.terms.items())


def test_convexity_errors():
    layout, (a, b, c) = variables(QQ, ["a", "b", "c"])
    with pytest.raises(ValueError):
        hy.build_convexity(a ** 2 * b ** 2, ["a"], ["b", "c"])
    with pytest.raises(ValueError):
        hy.build_convexity(a ** 2 * b ** 2)
    with pytest.raises(ValueError):
        hy.build_convexity(a ** 3 * b, ["a"], ["b"])
