from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from redux import QQ, Field, Polynomial, PolySystem, VariableLayout
from redux.normalizer import (
    add_subfield_constraints, check_solution, fold_constants, normalize, normalize_degree2, restrict_solution,
)

from conftest import variables


def solutions(system: PolySystem):
    """All solutions by direct enumeration, as name -> value maps."""
    f = system.field
    names = list(system.layout)
    out = []
    for pt in product(range(f.p), repeat=len(names)):
        if system.is_solution(list(pt)):
            out.append(dict(zip(names, pt)))
    return out


def projected(system: PolySystem, original: VariableLayout):
    return sorted({tuple(s[n] for n in original) for s in solutions(system)})


def test_cube_example_gf7():
    f = Field.prime(7)
    layout, (x,) = variables(f, ["x"])
    S = PolySystem(f, layout, [x ** 3 - 1])
    T, trace = normalize_degree2(S)
    assert T.degree() <= 2
    assert len(trace.new_var_defs) == 1
    u, (a, b) = trace.new_var_defs[0]
    assert (a, b) == ("x", "x")
    X, U = (Polynomial.var(f, T.layout, v) for v in ("x", u))
    assert set(T.polys) == {U - X * X, U * X - 1}
    assert projected(T, layout) == projected(S, layout) == [(1,), (2,), (4,)]


def test_quartic_example_gf5():
    f = Field.prime(5)
    layout, (x,) = variables(f, ["x"])
    S = PolySystem(f, layout, [x ** 4])
    T, trace = normalize_degree2(S)
    assert T.degree() <= 2
    # x^4 = (x*x)*(x*x) needs a single product variable
    assert len(trace.new_var_defs) == 1
    assert projected(T, layout) == projected(S, layout) == [(0,)]


def test_already_degree2_unchanged():
    f = Field.prime(5)
    layout, (x, y) = variables(f, ["x", "y"])
    S = PolySystem(f, layout, [x * y - 1, x + y])
    T, trace = normalize_degree2(S)
    assert T.polys == S.polys and trace.new_var_defs == ()


def test_fold_examples():
    f = Field.prime(5)
    layout, (x, y) = variables(f, ["x", "y"])
    T = fold_constants(PolySystem(f, layout, [x + 1, y + 2]))
    assert list(T.polys) == [x + 1, y - 2 * x]
    assert projected(T, layout) == projected(PolySystem(f, layout, [x + 1, y + 2]), layout)
    plain = PolySystem(f, layout, [x + y, x - y])
    assert fold_constants(plain) is plain
    two = PolySystem(QQ, VariableLayout(["x"]), [Polynomial.constant(QQ, VariableLayout(["x"]), 2)])
    assert fold_constants(two).polys == two.polys


@pytest.mark.parametrize("p, nvars, expected", [(3, 1, 1), (3, 0, 0), (2, 2, 2)])
def test_add_subfield_examples(p, nvars, expected):
    f = Field.prime(p)
    names = [f"x.{i}" for i in range(1, nvars + 1)]
    layout = VariableLayout(names)
    S = PolySystem(f, layout, [])
    out = add_subfield_constraints(S, p)
    assert len(out.polys) == expected
    for name, q in zip(names, out.polys):
        x = Polynomial.var(f, layout, name)
        assert q == x ** p - x


def test_add_subfield_rejects_other_q():
    f = Field.prime(5)
    with pytest.raises(ValueError):
        add_subfield_constraints(PolySystem(f, VariableLayout(["x"]), []), 25)


@st.composite
def gf5_systems(draw):
    f = Field.prime(5)
    layout = VariableLayout(["x", "y"])
    polys = []
    for _ in range(draw(st.integers(1, 3))):
        terms = {}
        for _ in range(draw(st.integers(1, 3))):
            a, b = draw(st.integers(0, 3)), draw(st.integers(0, 3))
            mono = tuple((i, e) for i, e in ((0, a), (1, b)) if e)
            terms[mono] = draw(st.integers(1, 4))
        polys.append(Polynomial(f, layout, terms))
    return PolySystem(f, layout, polys)


@settings(max_examples=40, deadline=None)
@given(gf5_systems())
def test_normalize_preserves_solutions(S):
    T, trace = normalize(S)
    assert T.degree() <= 2
    assert sum(1 for p in T.polys if p.constant_term() != 0) <= 1
    # every solution of S extends, every solution of T restricts
    assert projected(T, S.layout) == projected(S, S.layout)
    for sol in solutions(S):
        ext = trace.extend_solution(T.layout, sol, S.field)
        assert check_solution(T, ext)
        assert restrict_solution(ext, S.layout) == sol


@settings(max_examples=40, deadline=None)
@given(gf5_systems())
def test_trace_definitions_are_products(S):
    T, trace = normalize_degree2(S)
    names = set(S.layout)
    for name, (a, b) in trace.new_var_defs:
        assert a in names and b in names
        names.add(name)
    assert names == set(T.layout)


def test_trace_json():
    f = Field.prime(7)
    layout, (x,) = variables(f, ["x"])
    _, trace = normalize(PolySystem(f, layout, [x ** 3 - 1]))
    js = trace.to_json(f)
    assert js["new_var_defs"][0][1] == ["x", "x"]
    assert js["fold_pivot"] is not None
