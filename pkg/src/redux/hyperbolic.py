"""Quartic hyperbolicity gadget, Bézoutians, real stability and convexity.

From a quartic form ``Q(x_1..x_n)``::

    p = x_0^4 - beta x_0^2 |x|^2 + Q,   beta = 2 n^2 C,   C = max |coeff Q|

is hyperbolic in direction ``e_0`` exactly when ``Q`` is nonnegative (given
``beta^2/4 |x|^4 >= Q``).  ``p~(u) = p(M u)`` with columns ``e_0 +- eps e_i``
transfers this to real stability, and ``f = b + (n^2 gamma/2)(...)`` turns
nonnegativity of a biquadratic ``b`` into convexity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .field import QQ
from .poly import (
    Polynomial, VariableLayout, affine_substitute, embed, evaluate, is_biquadratic,
    partial_derivative, substitute_values,
)


class SymmetricPolyMatrix:
    """Square grid of polynomials over one layout, symmetric as canonical polynomials."""

    def __init__(self, entries: Sequence[Sequence[Polynomial]]):
        rows = [list(r) for r in entries]
        dim = len(rows)
        if any(len(r) != dim for r in rows):
            raise ValueError("matrix must be square")
        for i in range(dim):
            for j in range(i + 1, dim):
                if rows[i][j] != rows[j][i]:
                    raise ValueError(f"entries ({i},{j}) and ({j},{i}) differ")
        self.dim = dim
        self.entries = rows

    @property
    def layout(self) -> VariableLayout:
        return self.entries[0][0].layout

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        return isinstance(other, SymmetricPolyMatrix) and self.entries == other.entries

    def __repr__(self):
        return f"SymmetricPolyMatrix(dim={self.dim})"

    def at(self, point) -> list[list]:
        return [[evaluate(e, point) for e in row] for row in self.entries]

    def map(self, fn) -> "SymmetricPolyMatrix":
        return SymmetricPolyMatrix([[fn(e) for e in row] for row in self.entries])


# ---------------------------------------------------------------------------
# exact linear algebra


def det(rows: Sequence[Sequence]) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    a = [[Fraction(x) for x in r] for r in rows]
    n = len(a)
    sign = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                for k in range(c, n):
                    a[r][k] -= f * a[c][k]
    out = Fraction(sign)
    for i in range(n):
        out *= a[i][i]
    return out


def principal_minors(rows: Sequence[Sequence]) -> list[tuple[tuple[int, ...], Fraction]]:
    n = len(rows)
    out = []
    for k in range(1, n + 1):
        for idx in combinations(range(n), k):
            out.append((idx, det([[rows[i][j] for j in idx] for i in idx])))
    return out


def is_psd(rows: Sequence[Sequence]) -> bool:
    """A symmetric rational matrix is PSD iff all its principal minors are >= 0."""
    return all(m >= 0 for _, m in principal_minors(rows))


def psd_at_point(A, point) -> bool:
    rows = A.at(point) if isinstance(A, SymmetricPolyMatrix) else A
    return is_psd(rows)


# ---------------------------------------------------------------------------
# hyperbolicity gadget


@dataclass(frozen=True)
class HyperbolicityArtifact:
    p: Polynomial
    e: tuple
    beta: Fraction
    C: Fraction
    sourceQ: Polynomial
    Q: Polynomial  # sourceQ over the layout of p

    @property
    def n(self) -> int:
        return len(self.sourceQ.layout)

    @property
    def norm2(self) -> Polynomial:
        layout = self.p.layout
        return sum((Polynomial.var(QQ, layout, f"x.{i}") ** 2 for i in range(1, self.n + 1)),
                   Polynomial.zero(QQ, layout))

    @property
    def params(self) -> dict:
        return {"n": self.n, "beta": str(self.beta), "C": str(self.C), "monomials": len(self.p)}


def _check_quartic(Q: Polynomial):
    if Q.field != QQ:
        raise ValueError("quartic must have rational coefficients")
    if Q.is_zero():
        raise ValueError("Q = 0 is rejected: beta would degenerate to 0")
    if not Q.is_homogeneous(4):
        raise ValueError("Q must be a homogeneous quartic")


def build_hyperbolicity(Q: Polynomial) -> HyperbolicityArtifact:
    _check_quartic(Q)
    n = len(Q.layout)
    layout = VariableLayout([f"x.{i}" for i in range(n + 1)])
    Qx = embed(Q, layout, {name: f"x.{i}" for i, name in enumerate(Q.layout, start=1)})
    C = Fraction(Q.max_abs_coefficient())
    beta = 2 * n * n * C
    x0 = Polynomial.var(QQ, layout, "x.0")
    norm2 = sum((Polynomial.var(QQ, layout, f"x.{i}") ** 2 for i in range(1, n + 1)),
                Polynomial.zero(QQ, layout))
    p = x0 ** 4 - (x0 ** 2 * norm2).scale(beta) + Qx
    e = (1,) + (0,) * n
    assert evaluate(p, e) == 1
    return HyperbolicityArtifact(p, e, beta, C, Q, Qx)


def directional_derivative(p: Polynomial, e: Sequence) -> Polynomial:
    out = Polynomial.zero(p.field, p.layout)
    for name, ei in zip(p.layout, e):
        if ei:
            out = out + partial_derivative(p, name).scale(ei)
    return out


def _line_in(p: Polynomial, e: Sequence, layout: VariableLayout, param: str) -> Polynomial:
    """``p(x + param * e)`` over ``layout`` (which extends p's layout by the parameters)."""
    par = Polynomial.var(p.field, layout, param)
    forms = [Polynomial.var(p.field, layout, name) + par.scale(ei) if ei
             else Polynomial.var(p.field, layout, name)
             for name, ei in zip(p.layout, e)]
    return affine_substitute(p, forms)


def bezoutian(p: Polynomial, e: Sequence) -> SymmetricPolyMatrix:
    """Parametrized Bézoutian ``B_{p,e}(x)`` as a ``d x d`` matrix over p's layout."""
    d = p.degree()
    if d < 1 or not p.is_homogeneous(d):
        raise ValueError("p must be a nonconstant form")
    if len(e) != len(p.layout):
        raise ValueError("direction has the wrong length")
    for name in ("t", "s"):
        if name in p.layout:
            raise ValueError(f"layout already uses {name!r}")
    ext = p.layout.extend(["t", "s"])
    it, is_ = len(p.layout), len(p.layout) + 1
    dp = directional_derivative(p, e)
    num = (_line_in(p, e, ext, "t") * _line_in(dp, e, ext, "s")
           - _line_in(p, e, ext, "s") * _line_in(dp, e, ext, "t"))
    # group by power of t; coefficients are term dicts in (x, s)
    by_t: dict[int, dict] = {}
    for m, c in num.terms.items():
        k = dict(m).get(it, 0)
        rest = tuple((i, ex) for i, ex in m if i != it)
        by_t.setdefault(k, {})[rest] = c
    top = max(by_t, default=0)

    def times_s(terms: dict) -> dict:
        out = {}
        for m, c in terms.items():
            dm = dict(m)
            dm[is_] = dm.get(is_, 0) + 1
            out[tuple(sorted(dm.items()))] = c
        return out

    def plus(a: dict, b: dict) -> dict:
        out = dict(a)
        for m, c in b.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return out

    # synthetic division by (t - s): q_{k-1} = c_k + s q_k
    quot: dict[int, dict] = {}
    carry: dict = {}
    for k in range(top, 0, -1):
        carry = plus(by_t.get(k, {}), times_s(carry))
        quot[k - 1] = carry
    rem = plus(by_t.get(0, {}), times_s(carry))
    if rem:
        raise AssertionError("numerator not divisible by t - s")
    zero = Polynomial.zero(p.field, p.layout)
    grid = [[zero] * d for _ in range(d)]
    for i in range(d):
        terms = quot.get(i, {})
        cols: dict[int, dict] = {}
        for m, c in terms.items():
            j = dict(m).get(is_, 0)
            cols.setdefault(j, {})[tuple((a, ex) for a, ex in m if a != is_)] = c
        for j, tm in cols.items():
            if j >= d:
                raise AssertionError("s-degree exceeds d - 1")
            grid[i][j] = Polynomial(p.field, p.layout, tm)
    return SymmetricPolyMatrix(grid)


def restrict_x0(A: SymmetricPolyMatrix, var: str = "x.0") -> SymmetricPolyMatrix:
    return A.map(lambda e: substitute_values(e, {var: 0}))


def closed_form_bezoutian(art: HyperbolicityArtifact) -> SymmetricPolyMatrix:
    """The 4x4 Bézoutian of ``p`` on ``x_0 = 0`` written out in ``|x|^2``, ``beta`` and ``Q``."""
    layout = art.p.layout
    r = art.norm2
    b, Q = art.beta, art.Q
    z = Polynomial.zero(QQ, layout)
    four = Polynomial.constant(QQ, layout, 4)
    grid = [[z] * 4 for _ in range(4)]
    grid[0][0] = (r * Q).scale(2 * b)
    grid[0][2] = grid[2][0] = Q.scale(-4)
    grid[1][1] = (r * r).scale(2 * b * b) - Q.scale(4)
    grid[1][3] = grid[3][1] = r.scale(-2 * b)
    grid[2][2] = r.scale(2 * b)
    grid[3][3] = four
    return SymmetricPolyMatrix(grid)


def schur_condition(art: HyperbolicityArtifact) -> tuple[Polynomial, Polynomial]:
    r = art.norm2
    return art.Q, (r * r).scale(art.beta * art.beta / 4) - art.Q


# ---------------------------------------------------------------------------
# real stability


@dataclass(frozen=True)
class StabilityArtifact:
    ptilde: Polynomial
    M: tuple[tuple[Fraction, ...], ...]
    eps: Fraction
    source: HyperbolicityArtifact

    @property
    def params(self) -> dict:
        return {"n": self.source.n, "eps": str(self.eps), "beta": str(self.source.beta),
                "monomials": len(self.ptilde)}


def choose_eps(n: int, beta) -> Fraction:
    """Largest unit fraction ``1/K`` with ``2n/K < 1`` and ``2 beta / K^2 < 1``."""
    K = 2 * n + 1
    while K * K <= 2 * beta:
        K += 1
    return Fraction(1, K)


def stability_matrix(n: int, eps: Fraction) -> tuple[tuple[Fraction, ...], ...]:
    """(n+1) x 2n with columns ``e_0 + eps e_i``, ``e_0 - eps e_i`` for i = 1..n."""
    rows = [[Fraction(0)] * (2 * n) for _ in range(n + 1)]
    for i in range(1, n + 1):
        rows[0][2 * i - 2] = rows[0][2 * i - 1] = Fraction(1)
        rows[i][2 * i - 2] = eps
        rows[i][2 * i - 1] = -eps
    return tuple(tuple(r) for r in rows)


def build_stability(art: HyperbolicityArtifact) -> StabilityArtifact:
    n = art.n
    eps = choose_eps(n, art.beta)
    assert 2 * n * eps < 1 and eps * eps * 2 * art.beta < 1
    M = stability_matrix(n, eps)
    layout = VariableLayout([f"u.{j}" for j in range(1, 2 * n + 1)])
    forms = []
    for row in M:
        terms = {((j, 1),): c for j, c in enumerate(row) if c}
        forms.append(Polynomial(QQ, layout, terms))
    return StabilityArtifact(affine_substitute(art.p, forms), M, eps, art)


def eps_positivity_poly(art: HyperbolicityArtifact, eps) -> Polynomial:
    """``p(|x|, eps x)`` as a polynomial: ``x_0^{2k} -> |x|^{2k}``, ``x_i -> eps x_i``."""
    eps = Fraction(eps)
    layout = VariableLayout([f"x.{i}" for i in range(1, art.n + 1)])
    r = sum((Polynomial.var(QQ, layout, name) ** 2 for name in layout), Polynomial.zero(QQ, layout))
    out = Polynomial.zero(QQ, layout)
    for m, c in art.p.terms.items():
        e0 = dict(m).get(0, 0)
        if e0 % 2:
            raise ValueError("odd power of x_0 in p")
        rest = tuple((i - 1, e) for i, e in m if i != 0)
        mono = Polynomial(QQ, layout, {rest: c * eps ** (4 - e0)})
        out = out + mono * r ** (e0 // 2)
    return out


# ---------------------------------------------------------------------------
# convexity


def hessian(f: Polynomial, variables: Sequence[str] | None = None) -> SymmetricPolyMatrix:
    names = list(f.layout.names if variables is None else variables)
    first = [partial_derivative(f, v) for v in names]
    return SymmetricPolyMatrix([[partial_derivative(fi, v) for v in names] for fi in first])


def _default_parts(b: Polynomial):
    names = list(b.layout.names)
    if len(names) % 2:
        raise ValueError("cannot split an odd number of variables into two equal parts")
    h = len(names) // 2
    return names[:h], names[h:]


def convexity_gamma(b: Polynomial, part_x: Sequence[str], part_y: Sequence[str]) -> Fraction:
    """Largest absolute coefficient over the mixed partials ``d^2 b / dX_i dY_j``."""
    best = Fraction(0)
    for xi in part_x:
        dx = partial_derivative(b, xi)
        for yj in part_y:
            c = partial_derivative(dx, yj)
            if not c.is_zero():
                best = max(best, Fraction(c.max_abs_coefficient()))
    return best


def build_convexity(b: Polynomial, part_x: Sequence[str] | None = None,
                    part_y: Sequence[str] | None = None) -> Polynomial:
    if part_x is None or part_y is None:
        part_x, part_y = _default_parts(b)
    part_x, part_y = list(part_x), list(part_y)
    if len(part_x) != len(part_y):
        raise ValueError(f"unbalanced partition: |X| = {len(part_x)}, |Y| = {len(part_y)}")
    if b.field != QQ:
        raise ValueError("b must have rational coefficients")
    if not is_biquadratic(b, part_x, part_y):
        raise ValueError("b is not biquadratic on the given partition")
    n = len(part_x)
    gamma = convexity_gamma(b, part_x, part_y)
    layout = b.layout

    def v(name):
        return Polynomial.var(QQ, layout, name)

    pad = Polynomial.zero(QQ, layout)
    for part in (part_x, part_y):
        for a in part:
            pad = pad + v(a) ** 4
        for i, j in combinations(range(n), 2):
            pad = pad + v(part[i]) ** 2 * v(part[j]) ** 2
    return b + pad.scale(Fraction(n * n) * gamma / 2)
