import random

import pytest
from hypothesis import given, settings, strategies as st

from redux import Field, Polynomial, PolySystem
from redux import polyproj as pp

from conftest import variables

GF67 = Field.prime(67)


@pytest.fixture(scope="module")
def unit_art():
    layout, (x,) = variables(GF67, ["x.1"])
    return pp.build(PolySystem(GF67, layout, [x ** 2 - 1]))


def identity(size):
    return [[int(i == j) for j in range(size)] for i in range(size)], [0] * size


def test_n1_example(unit_art):
    art = unit_art
    assert art.small_degrees == (2,) and art.ladder_degrees == (5,)
    x0, x1, w1, z1 = (Polynomial.var(GF67, art.layout, v) for v in ("x.0", "x.1", "w.1", "z.1"))
    assert art.f == w1 ** 2 * (x1 ** 2 - 1 + z1 ** 2) + x0 + x1 ** 5
    assert art.g == w1 ** 2 * z1 ** 2 + x0


@pytest.mark.parametrize("t", [1, 2, 3])
def test_degree_invariants(t):
    layout, (x, y) = variables(GF67, ["x", "y"])
    polys = [x * y - 1, x - y, x ** 2 - 1][:t]
    art = pp.build(PolySystem(GF67, layout, polys))
    assert art.g.degree() == 2 * t + 2
    assert 2 * art.small_degrees[-1] < art.ladder_degrees[0]
    assert art.f.degree() == art.ladder_degrees[-1]


def test_build_errors():
    layout, (x,) = variables(GF67, ["x"])
    with pytest.raises(ValueError):
        pp.build(PolySystem(GF67, layout, [x ** 3]))
    with pytest.raises(ValueError):
        pp.build(PolySystem(GF67, layout, []))


def test_forward_witness_shape(unit_art):
    A, b = pp.forward_witness(unit_art, [1])
    assert b[0] == GF67(-1) and b[1] == 1
    assert all(v == 0 for v in A[1])  # x.1 row is constant
    assert pp.verify_projection(unit_art, A, b)
    assert pp.extract_solution(unit_art, A, b) == [1]
    with pytest.raises(ValueError):
        pp.forward_witness(unit_art, [2])


def test_identity_is_not_a_projection(unit_art):
    A, b = identity(len(unit_art.layout))
    assert not pp.verify_projection(unit_art, A, b)
    with pytest.raises(pp.PreconditionError):
        pp.extract_solution(unit_art, A, b)


def test_dimension_mismatch(unit_art):
    with pytest.raises(ValueError):
        pp.verify_projection(unit_art, [[1]], [0])


def test_structured_candidates_rejected():
    # x^2 - 2 has no root mod 67; permutations and scalings of variables never work
    layout, (x,) = variables(GF67, ["x.1"])
    art = pp.build(PolySystem(GF67, layout, [x ** 2 - 2]))
    size = len(art.layout)
    rng = random.Random(0)
    for _ in range(100):
        perm = list(range(size))
        rng.shuffle(perm)
        A = [[0] * size for _ in range(size)]
        for i, j in enumerate(perm):
            A[i][j] = rng.randrange(1, 67)
        b = [rng.randrange(67) for _ in range(size)]
        assert not pp.verify_projection(art, A, b)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 66), st.integers(0, 66))
def test_round_trip_on_constructed_roots(a, b):
    # build a system whose root is (a, b) by construction
    layout, (x, y) = variables(GF67, ["x", "y"])
    S = PolySystem(GF67, layout, [x * y - a * b, x + y - (a + b)])
    art = pp.build(S)
    A, bb = pp.forward_witness(art, [a, b])
    assert pp.verify_projection(art, A, bb)
    assert pp.extract_solution(art, A, bb) == [a, b]


def test_residuals(unit_art):
    assert pp.residuals(unit_art, {"x.1": 1}) == [0]
