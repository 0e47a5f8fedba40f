"""HN -> PolyProj: polynomials ``f, g`` with ``f(AY + b) = g(Y)`` solvable iff ``S`` is.

Over ``Y = (x_0..x_n, w_1..w_t, z_1..z_t)`` with degree ladders
``d_i = i + 1`` and ``D_i = i + 2(t + 1)``::

    f = sum_i w_i^{d_i} (f_i(X) + z_i^{d_i}) + x_0 + sum_i x_i^{D_i}
    g = sum_i w_i^{d_i} z_i^{d_i} + x_0
"""

from __future__ import annotations

from dataclasses import dataclass

from .poly import LayoutError, Polynomial, PolySystem, VariableLayout, affine_substitute, embed, evaluate
from .sparseshift import InvariantViolation


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class PolyProjArtifact:
    source: PolySystem
    layout: VariableLayout
    f: Polynomial
    g: Polynomial
    lifted: tuple[Polynomial, ...]  # the f_i over Y
    n: int
    t: int

    @property
    def small_degrees(self) -> tuple[int, ...]:
        return tuple(i + 1 for i in range(1, self.t + 1))

    @property
    def ladder_degrees(self) -> tuple[int, ...]:
        return tuple(i + 2 * (self.t + 1) for i in range(1, self.n + 1))

    @property
    def params(self) -> dict:
        return {"n": self.n, "t": self.t, "d": list(self.small_degrees), "D": list(self.ladder_degrees)}


def build(system: PolySystem) -> PolyProjArtifact:
    n, t = len(system.layout), len(system.polys)
    if n == 0 or t == 0:
        raise ValueError("need n >= 1 variables and t >= 1 equations")
    if system.degree() > 2:
        raise ValueError("degree > 2 polynomial present; normalize first")
    fld = system.field
    layout = VariableLayout([f"x.{i}" for i in range(n + 1)]
                            + [f"w.{i}" for i in range(1, t + 1)]
                            + [f"z.{i}" for i in range(1, t + 1)])
    rename = {name: f"x.{k}" for k, name in enumerate(system.layout, start=1)}
    lifted = tuple(embed(p, layout, rename) for p in system.polys)

    def v(name):
        return Polynomial.var(fld, layout, name)

    f = v("x.0")
    g = v("x.0")
    for i in range(1, t + 1):
        d = i + 1
        wd, zd = v(f"w.{i}") ** d, v(f"z.{i}") ** d
        f = f + wd * (lifted[i - 1] + zd)
        g = g + wd * zd
    for i in range(1, n + 1):
        f = f + v(f"x.{i}") ** (i + 2 * (t + 1))
    art = PolyProjArtifact(system, layout, f, g, lifted, n, t)
    assert 2 * art.small_degrees[-1] < art.ladder_degrees[0]
    assert g.degree() == 2 * t + 2 and f.degree() == art.ladder_degrees[-1]
    return art


def _forms(art: PolyProjArtifact, A, b) -> list[Polynomial]:
    size = len(art.layout)
    if len(A) != size or any(len(row) != size for row in A) or len(b) != size:
        raise LayoutError(f"A must be {size}x{size} and b of length {size}")
    fld = art.f.field
    red = fld.reduce
    forms = []
    for row, bk in zip(A, b):
        terms = {((j, 1),): red(a) for j, a in enumerate(row) if red(a) != 0}
        if red(bk) != 0:
            terms[()] = red(bk)
        forms.append(Polynomial._make(fld, art.layout, terms))
    return forms


def forward_witness(art: PolyProjArtifact, solution) -> tuple[list[list], list]:
    """``(A, b)`` mapping ``x_0 -> x_0 - sum a_i^{D_i}``, ``x_i -> a_i`` and fixing w, z."""
    fld = art.f.field
    a = [fld.reduce(x) for x in solution]
    if len(a) != art.n:
        raise LayoutError(f"solution has {len(a)} values for {art.n} variables")
    if not art.source.is_solution(a):
        raise ValueError("the given point does not satisfy the system")
    size = len(art.layout)
    A = [[0] * size for _ in range(size)]
    b = [0] * size
    A[0][0] = 1
    b[0] = fld.reduce(-sum(ai ** D for ai, D in zip(a, art.ladder_degrees)))
    for i in range(1, art.n + 1):
        b[i] = a[i - 1]
    for k in range(art.n + 1, size):
        A[k][k] = 1
    return A, b


def verify_projection(art: PolyProjArtifact, A, b) -> bool:
    """Exact test of ``f(AY + b) == g(Y)`` by canonical polynomial equality."""
    return affine_substitute(art.f, _forms(art, A, b)) == art.g


def extract_solution(art: PolyProjArtifact, A, b) -> list:
    """Read the constant rows for ``x_1..x_n`` off an accepted projection."""
    if not verify_projection(art, A, b):
        raise PreconditionError("(A, b) is not a projection of f onto g")
    fld = art.f.field
    forms = _forms(art, A, b)
    sol = []
    for i in range(1, art.n + 1):
        if forms[i].degree() > 0:
            raise InvariantViolation(f"affine form for x.{i} is not constant")
        sol.append(fld.reduce(forms[i].constant_term()))
    if not art.source.is_solution(sol):
        raise InvariantViolation("constants read from (A, b) do not solve the system")
    return sol


def residuals(art: PolyProjArtifact, point) -> list:
    return [evaluate(p, point) for p in art.source.polys]
