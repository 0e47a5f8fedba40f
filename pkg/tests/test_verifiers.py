import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from redux import QQ, Field, Polynomial, PolySystem, VariableLayout
from redux import verifiers as vf

from conftest import sym, to_sympy, variables

GF3, GF5 = Field.prime(3), Field.prime(5)
T = sympy.Symbol("t")


# exhaustive oracles -----------------------------------------------------------


def test_hn_examples():
    layout, (x1, x2) = variables(GF3, ["x1", "x2"])
    assert vf.brute_force_hn(PolySystem(GF3, layout, [x1 * x2 - 1, x1 + x2])) is None
    l1, (x,) = variables(GF5, ["x1"])
    assert vf.brute_force_hn(PolySystem(GF5, l1, [x])) == [0]
    assert vf.brute_force_hn(PolySystem(GF5, VariableLayout([]), [])) == []


def test_hn_rejects_rationals():
    layout, (x,) = variables(QQ, ["x"])
    with pytest.raises(ValueError):
        vf.brute_force_hn(PolySystem(QQ, layout, [x]))


@st.composite
def gf5_systems(draw):
    layout = VariableLayout(["a", "b"])
    polys = []
    for _ in range(draw(st.integers(1, 3))):
        terms = {}
        for _ in range(draw(st.integers(1, 3))):
            e1, e2 = draw(st.integers(0, 2)), draw(st.integers(0, 2))
            terms[tuple((i, e) for i, e in ((0, e1), (1, e2)) if e)] = draw(st.integers(1, 4))
        polys.append(Polynomial(GF5, layout, terms))
    return PolySystem(GF5, layout, polys)


@settings(max_examples=40, deadline=None)
@given(gf5_systems())
def test_hn_returns_lexicographically_first(S):
    sols = [[a, b] for a in range(5) for b in range(5) if S.is_solution([a, b])]
    assert vf.brute_force_hn(S) == (sols[0] if sols else None)


def test_sparseshift_examples():
    layout, (x,) = variables(GF5, ["x"])
    # (x+a)^2 - 2(x+a) keeps x^2; clearing both other terms needs a = 1 and a in {0, 2}
    assert vf.brute_force_sparseshift(x ** 2 - 2 * x) is None
    assert vf.brute_force_sparseshift(x) is None
    assert vf.brute_force_sparseshift(Polynomial.constant(GF5, layout, 5)) is None
    assert vf.brute_force_sparseshift(x ** 2 + 2 * x + 1) == [4]


def test_thread_count_does_not_change_results():
    layout, (x, y) = variables(GF5, ["x", "y"])
    S = PolySystem(GF5, layout, [x * y - 3, x + y - 4])
    assert vf.brute_force_hn(S, threads=2) == vf.brute_force_hn(S) == [1, 3]
    f = (x + 2) ** 2 * (y + 3)
    assert vf.brute_force_sparseshift(f, threads=2) == vf.brute_force_sparseshift(f)


def test_enumeration_guard(monkeypatch):
    layout, (x, y) = variables(GF5, ["x", "y"])
    monkeypatch.setenv("REDUX_MAX_ENUM", "24")
    with pytest.raises(vf.EnumerationTooLarge) as err:
        vf.brute_force_hn(PolySystem(GF5, layout, [x]))
    assert err.value.size == 25 and err.value.limit == 24
    monkeypatch.setenv("REDUX_MAX_ENUM", "25")
    assert vf.brute_force_hn(PolySystem(GF5, layout, [x])) == [0, 0]


# Sturm ----------------------------------------------------------------------


def sturm_catalogue():
    t = T
    exprs = [
        t, t - 1, t ** 2 - 1, t ** 2 + 1, t ** 2, (t - 1) ** 2 * (t + 2), t ** 3 - t, t ** 3 + t,
        t ** 3 - 2, (t ** 2 - 2) * (t - 3), (t ** 2 + t + 1) * (t - 1), t ** 4 - 5 * t ** 2 + 4,
        t ** 4 + 1, t ** 4 - 1, (t - 1) ** 3, (t - sympy.Rational(1, 2)) * (t + sympy.Rational(1, 3)),
        t ** 5 - t, (t ** 2 - 3) ** 2, t ** 6 - 1, (t + 1) ** 2 * (t ** 2 + 4),
        t ** 2 - 2 * t + 1, t ** 2 - 2 * t + 2, 3 * t ** 2 - 6, t ** 4 - 10 * t ** 2 + 1,
        (t - 1) * (t - 2) * (t - 3) * (t - 4), (t ** 2 - t - 1) * (t ** 2 + 1), t ** 3 - 3 * t + 1,
        t ** 3 - 3 * t + 3, sympy.Integer(7), (2 * t - 1) ** 2 * (3 * t + 1) ** 2,
    ]
    return exprs


def coeffs(expr):
    return [Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1]))
            for c in reversed(sympy.Poly(expr, T).all_coeffs())]


@pytest.mark.parametrize("expr", sturm_catalogue(), ids=str)
def test_sturm_against_sympy(expr):
    c = coeffs(expr)
    distinct = len(sympy.real_roots(sympy.Poly(expr, T), multiple=False))
    with_mult = len(sympy.real_roots(sympy.Poly(expr, T)))
    assert vf.count_real_roots(c) == distinct
    assert vf.sturm_real_rooted(c) == (with_mult == sympy.degree(expr, T))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-6, 6), min_size=1, max_size=7).filter(any))
def test_sturm_random_against_sympy(cs):
    expr = sum(c * T ** k for k, c in enumerate(cs))
    poly = sympy.Poly(expr, T)
    assert vf.count_real_roots(cs) == len(sympy.real_roots(poly, multiple=False))
    assert vf.sturm_real_rooted(cs) == (len(sympy.real_roots(poly)) == poly.degree())


def test_sturm_rejects_zero():
    with pytest.raises(ValueError):
        vf.sturm_real_rooted([0, 0])


def test_univariate_helpers():
    q, r = vf.poly_divmod([-1, 0, 1], [-1, 1])
    assert q == [1, 1] and r == []
    assert vf.square_free_part([1, -2, 1]) == [-1, 1]
    assert vf.derivative([1, 2, 3]) == [2, 6]


def test_line_restriction_matches_sympy():
    rng = random.Random(0)
    layout, (x, y) = variables(QQ, ["x", "y"])
    p = x ** 3 * y - 2 * x * y + Fraction(1, 3) * y ** 2 + 5
    for _ in range(10):
        d = [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(2)]
        b = [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(2)]
        expr = to_sympy(p).subs({sym("x"): d[0] * T + b[0], sym("y"): d[1] * T + b[1]}, simultaneous=True)
        assert vf.line_restriction(p, d, b) == vf._trim(coeffs(sympy.expand(expr)))


# sampling -------------------------------------------------------------------


def test_sample_config_validation():
    with pytest.raises(ValueError):
        vf.SampleConfig(count=0)
    with pytest.raises(ValueError):
        vf.SampleConfig(bound=0)


def test_sample_nonneg():
    layout, (x, y) = variables(QQ, ["x", "y"])
    cfg = vf.SampleConfig(count=200, seed=4)
    assert vf.sample_nonneg(x ** 2 + y ** 2, cfg).ok
    v = vf.sample_nonneg(x * y, cfg)
    assert not v.ok and v.value < 0
    assert vf.sample_nonneg(x * y, cfg, region="positiveOrthant").ok
    d = vf.sample_nonneg(x * y, cfg, region="positiveOrthant", directed=[[1, -1]])
    assert not d.ok and d.index == 0 and d.note == "directed"
    with pytest.raises(ValueError):
        vf.sample_nonneg(x, cfg, region="ball")


def test_sampling_is_seed_deterministic_across_threads():
    layout, (x, y) = variables(QQ, ["x", "y"])
    p = x ** 2 * y - Fraction(1, 2) * y ** 3 + 3
    cfg = vf.SampleConfig(count=300, seed=9)
    one = vf.sample_nonneg(p, cfg)
    two = vf.sample_nonneg(p, cfg, threads=3)
    assert one.to_json() == two.to_json() == vf.sample_nonneg(p, cfg).to_json()
    assert not one.ok


def test_sample_hyperbolicity():
    layout, (x0, x1) = variables(QQ, ["x0", "x1"])
    cfg = vf.SampleConfig(count=100, seed=1)
    assert vf.sample_hyperbolicity(x0 ** 2 - x1 ** 2, (1, 0), cfg).ok
    assert not vf.sample_hyperbolicity(x0 ** 2 + x1 ** 2, (1, 0), cfg).ok
    neg = vf.sample_hyperbolicity(-(x0 ** 2), (1, 0), cfg)
    assert not neg.ok and neg.index == -1


def test_sample_real_stability():
    layout, (a, b) = variables(QQ, ["a", "b"])
    cfg = vf.SampleConfig(count=100, seed=1)
    assert vf.sample_real_stability(a * b, cfg).ok
    assert vf.sample_real_stability(a ** 2 + 3 * a * b + b ** 2, cfg).ok
    assert not vf.sample_real_stability(a ** 2 + b ** 2, cfg).ok


def test_sample_convexity():
    layout, (x, y) = variables(QQ, ["x", "y"])
    cfg = vf.SampleConfig(count=100, seed=1)
    assert vf.sample_convexity(x ** 4 + y ** 4 + x ** 2 * y ** 2, cfg).ok
    assert not vf.sample_convexity(x ** 2 - y ** 2, cfg).ok


@pytest.mark.parametrize("m", [1, 2, 4])
def test_sample_chain(m):
    v = vf.sample_chain(m, vf.SampleConfig(count=300, seed=m))
    assert v.ok


def test_verdict_json():
    v = vf.Verdict(False, 3, {"x": [Fraction(1, 2)]}, Fraction(-1, 4), 2, "random")
    js = v.to_json()
    assert js["verdict"] == "counterexample" and js["counterexample"] == {"x": ["1/2"]} and js["value"] == "-1/4"
    assert vf.Verdict(True, 10).to_json() == {"ok": True, "checked": 10, "verdict": "noViolation"}
