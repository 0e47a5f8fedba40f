"""Quadratic feasibility in the unit ball -> biquadratic negativity.

``build_g`` bilinearizes the quadratics into a sum of squares ``g(x, w)``,
``build_h`` adds the sphere coupling and the doubly exponential chain
``y_k ~ y_{k-1} z_{k-1}``, and ``build`` bi-homogenizes ``h`` with ``alpha``
(on the ``x, y`` side) and ``beta`` (on the ``w, z`` side).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Sequence

from .field import QQ
from .poly import (
    Polynomial, PolySystem, VariableLayout, evaluate, homogenize_bipartite,
    is_biquadratic, is_semi_biquadratic,
)
from .sparseshift import InvariantViolation

CHAIN_WEIGHT = Fraction(400)
CHAIN_SEED = Fraction(1, 16)
CHAIN_Y0 = Fraction(1, 4)


@dataclass(frozen=True)
class ChainParams:
    m: int = 6
    weight: Fraction = CHAIN_WEIGHT
    seed0: Fraction = CHAIN_SEED
    y0: Fraction = CHAIN_Y0

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("chain length m must be >= 1")
        if (self.weight, self.seed0, self.y0) != (CHAIN_WEIGHT, CHAIN_SEED, CHAIN_Y0):
            raise ValueError("chain constants are fixed at 400, 1/16 and 1/4")


@dataclass(frozen=True)
class ChainCheck:
    hypothesis_holds: bool
    side_conditions: bool
    bound_holds: bool
    lhs: Fraction
    exponent: Fraction

    @property
    def consistent(self) -> bool:
        """The lemma's implication: hypothesis and side conditions force the bound."""
        return not (self.hypothesis_holds and self.side_conditions) or self.bound_holds

    def to_json(self) -> dict:
        return {"hypothesisHolds": self.hypothesis_holds, "sideConditions": self.side_conditions,
                "boundHolds": self.bound_holds, "lhs": str(self.lhs), "exponent": str(self.exponent)}


def chain_exponent(m: int) -> Fraction:
    """``(2^(m+2) + 2) / 3``; an integer only for even ``m``."""
    return Fraction(2 ** (m + 2) + 2, 3)


def check_chain(ys: Sequence, zs: Sequence) -> ChainCheck:
    """Evaluate the chain lemma on ``y_0..y_m``, ``z_0..z_m`` in exact arithmetic."""
    if len(ys) != len(zs) or len(ys) < 1:
        raise ValueError("ys and zs must be nonempty and of equal length")
    ys = [Fraction(y) for y in ys]
    zs = [Fraction(z) for z in zs]
    m = len(ys) - 1
    lhs = sum(((ys[k] - ys[k - 1] * zs[k - 1]) ** 2 for k in range(1, m + 1)), Fraction(0))
    lhs += sum(((ys[k] - zs[k]) ** 2 for k in range(m + 1)), Fraction(0))
    lhs *= CHAIN_WEIGHT
    hyp = lhs < ys[m] ** 2
    side = 0 < ys[0] < Fraction(1, 2) and abs(zs[m]) < 1
    e = chain_exponent(m)
    # cube both sides so the exponent is integral; x -> x^3 is monotone
    bound = ys[m] ** 6 <= ys[0] ** (2 ** (m + 2) + 2)
    return ChainCheck(hyp, side, bound, lhs, e)


def canonical_chain(m: int) -> tuple[list[Fraction], list[Fraction]]:
    """``y_k = z_k = 4^(-2^k)`` for ``k = 0..m``."""
    ys = [Fraction(1, 4 ** (2 ** k)) for k in range(m + 1)]
    return ys, list(ys)


def gap_bound_log2(L: int) -> int:
    """log2 of the separation bound ``2^(-2^(L+5))``."""
    if L < 0:
        raise ValueError("bit length must be nonnegative")
    return -(2 ** (L + 5))


# ---------------------------------------------------------------------------
# constructions


def _xw_layout(n: int, extra: bool = False) -> VariableLayout:
    top = n + 2 if extra else n + 1
    return VariableLayout([f"x.{i}" for i in range(top)] + [f"w.{i}" for i in range(top)])


def bilinearize(p: Polynomial, layout: VariableLayout) -> Polynomial:
    """``x_j x_k -> x_j w_k`` (j <= k), ``x_j -> x_j w_0``, ``c -> c x_0 w_0``."""
    out = Polynomial.zero(QQ, layout)

    def v(name):
        return Polynomial.var(QQ, layout, name)

    for m, c in p.terms.items():
        idx = sorted(i + 1 for i, e in m for _ in range(e))
        if len(idx) == 0:
            term = v("x.0") * v("w.0")
        elif len(idx) == 1:
            term = v(f"x.{idx[0]}") * v("w.0")
        else:
            term = v(f"x.{idx[0]}") * v(f"w.{idx[1]}")
        out = out + term.scale(c)
    return out


def build_g(system: PolySystem) -> Polynomial:
    """Sum-of-squares ``g(x, w)`` whose roots encode common roots of the quadratics."""
    if system.field != QQ:
        raise ValueError("biquadratic reduction works over the rationals")
    if system.degree() > 2:
        raise ValueError("degree > 2 polynomial present")
    n = len(system.layout)
    layout = _xw_layout(n)

    def v(name):
        return Polynomial.var(QQ, layout, name)

    g = Polynomial.zero(QQ, layout)
    for p in system.polys:
        g = g + bilinearize(p, layout) ** 2
    for i in range(1, n + 1):
        g = g + (v(f"x.{i}") - v(f"w.{i}")) ** 2
    g = g + (v("x.0") - 1) ** 2 + (v("w.0") - 1) ** 2
    return g


def full_layout(n: int, m: int) -> VariableLayout:
    return VariableLayout([f"x.{i}" for i in range(n + 2)] + [f"w.{i}" for i in range(n + 2)]
                          + [f"y.{k}" for k in range(1, m + 1)] + [f"z.{k}" for k in range(1, m + 1)])


def build_h(g: Polynomial, n: int, chain: ChainParams) -> Polynomial:
    from .poly import embed

    m = chain.m
    layout = full_layout(n, m)
    h = embed(g, layout)

    def v(name):
        return Polynomial.var(QQ, layout, name)

    sphere = sum((v(f"x.{i}") * v(f"w.{i}") for i in range(1, n + 2)), Polynomial.zero(QQ, layout)) - 1
    h = h + sphere ** 2 + (v(f"x.{n + 1}") - v(f"w.{n + 1}")) ** 2
    ch = (v("y.1") - chain.seed0) ** 2
    for k in range(2, m + 1):
        ch = ch + (v(f"y.{k}") - v(f"y.{k - 1}") * v(f"z.{k - 1}")) ** 2
    for k in range(1, m + 1):
        ch = ch + (v(f"y.{k}") - v(f"z.{k}")) ** 2
    h = h + ch.scale(chain.weight)
    ym, zm = v(f"y.{m}"), v(f"z.{m}")
    h = h - (2 * ym * zm - zm ** 2 - ym ** 2 * zm ** 2)
    part_a, part_b = partition_sides(n, m)
    if not is_semi_biquadratic(h, part_a, part_b):
        raise InvariantViolation("h is not semi-biquadratic")
    return h


def partition_sides(n: int, m: int) -> tuple[list[str], list[str]]:
    """(x, y) and (w, z) sides, without the homogenizing variables."""
    a = [f"x.{i}" for i in range(n + 2)] + [f"y.{k}" for k in range(1, m + 1)]
    b = [f"w.{i}" for i in range(n + 2)] + [f"z.{k}" for k in range(1, m + 1)]
    return a, b


@dataclass(frozen=True)
class BiquadraticArtifact:
    source: PolySystem
    chain: ChainParams
    g: Polynomial
    h: Polynomial
    Q: Polynomial
    n: int

    @property
    def partition(self) -> tuple[list[str], list[str]]:
        a, b = partition_sides(self.n, self.chain.m)
        return a + ["alpha"], b + ["beta"]

    @property
    def layout(self) -> VariableLayout:
        return self.Q.layout

    @property
    def params(self) -> dict:
        return {"n": self.n, "t": len(self.source.polys), "m": self.chain.m,
                "vars": len(self.Q.layout), "monomials": len(self.Q)}


def build(system: PolySystem, m: int = 6) -> BiquadraticArtifact:
    chain = ChainParams(m)
    n = len(system.layout)
    g = build_g(system)
    h = build_h(g, n, chain)
    a, b = partition_sides(n, m)
    Q = homogenize_bipartite(h, a, b, "alpha", "beta")
    art = BiquadraticArtifact(system, chain, g, h, Q, n)
    if not is_biquadratic(Q, *art.partition):
        raise InvariantViolation("Q is not biquadratic")
    return art


def rational_sqrt(q: Fraction) -> Fraction | None:
    q = Fraction(q)
    if q < 0:
        return None
    a, b = isqrt(q.numerator), isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def forward_witness(art: BiquadraticArtifact, root: Sequence) -> dict:
    """Point with ``Q < 0`` built from a common root in the closed unit ball."""
    u = [Fraction(x) for x in root]
    if len(u) != art.n:
        raise ValueError(f"root has {len(u)} coordinates, system has {art.n} variables")
    if not art.source.is_solution(u):
        raise ValueError("the given point is not a common root")
    rest = 1 - sum(x * x for x in u)
    s = rational_sqrt(rest)
    if s is None:
        raise ValueError(f"1 - |root|^2 = {rest} is not the square of a rational")
    n, m = art.n, art.chain.m
    point = {"x.0": Fraction(1), "w.0": Fraction(1), f"x.{n + 1}": s, f"w.{n + 1}": s,
             "alpha": Fraction(1), "beta": Fraction(1)}
    for i, x in enumerate(u, start=1):
        point[f"x.{i}"] = x
        point[f"w.{i}"] = x
    ys, _ = canonical_chain(m)
    for k in range(1, m + 1):
        point[f"y.{k}"] = ys[k]
        point[f"z.{k}"] = ys[k]
    value = evaluate(art.Q, point)
    if not value < 0:
        raise InvariantViolation(f"forward witness gives Q = {value} >= 0")
    return point


def point_vector(art: BiquadraticArtifact, point: dict) -> list:
    return [point.get(name, 0) for name in art.layout]
