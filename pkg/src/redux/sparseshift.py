"""HN -> SparseShift: a polynomial ``Q_S`` that has a sparsifying shift iff ``S`` is solvable.

Given a normalized system (degree <= 2, exactly one polynomial with a nonzero
constant ``c``), the gadget is built over the variable families

* ``alpha.0``, ``alpha.i`` (for ``x_i``), ``alpha.i.j`` (for ``x_i x_j``, ``i <= j``)
* ``beta.k.i.j`` for ``k = 1..N``
* ``w.i`` (one per quadratic ``g_i``), ``y1.i``, ``y2.i``
* ``z.i.j`` (block ``Z_i`` of size ``M`` per linear constraint ``L_i``)

with ``N = M = n^2 + 2n + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .poly import LayoutError, Polynomial, PolySystem, VariableLayout, evaluate, shift_substitute


class Refusal(Exception):
    """A shift that does not sparsify ``Q_S``; nothing can be extracted."""

    def __init__(self, message, before=None, after=None, violated=()):
        super().__init__(message)
        self.before = before
        self.after = after
        self.violated = list(violated)


class InvariantViolation(AssertionError):
    """A state the reduction proves impossible; always a bug if raised."""


@dataclass(frozen=True)
class SparseShiftArtifact:
    source: PolySystem
    layout: VariableLayout
    QS: Polynomial
    PS: Polynomial
    part1: Polynomial
    part2: Polynomial
    part3: Polynomial
    zpart: Polynomial
    g0: Polynomial
    quadratics: tuple[Polynomial, ...]
    g_index: tuple[tuple, ...]
    gammas: tuple
    constraints: tuple[Polynomial, ...]
    pivot: int
    n: int
    t: int
    N: int
    M: int

    @property
    def r(self) -> int:
        return len(self.quadratics)

    @property
    def s(self) -> int:
        return len(self.constraints)

    @property
    def params(self) -> dict:
        return {"n": self.n, "t": self.t, "N": self.N, "M": self.M, "r": self.r, "s": self.s}

    def y1_names(self):
        return [f"y1.{i}" for i in range(1, self.n * self.n + self.n + 2)]

    def y2_names(self):
        return [f"y2.{i}" for i in range(1, self.n + 1)]

    def z_block(self, i: int) -> list[str]:
        return [f"z.{i}.{j}" for j in range(1, self.M + 1)]


def _alpha_name(m, src_n: int) -> str:
    """alpha variable for a source monomial (1-based variable indices)."""
    idx = sorted(i + 1 for i, e in m for _ in range(e))
    return "alpha." + ".".join(str(i) for i in idx)


def check_normalized(system: PolySystem) -> int:
    """Validate the gadget precondition; return the index of the constant-bearing polynomial."""
    if system.degree() > 2:
        raise ValueError("system not normalized: a polynomial has degree > 2")
    with_const = [k for k, p in enumerate(system.polys) if p.constant_term() != 0]
    if len(with_const) > 1:
        raise ValueError("system not normalized: more than one nonzero constant term")
    if not with_const:
        raise ValueError("zero constant term: the all-zero point already solves the system")
    return with_const[0]


def build(system: PolySystem) -> SparseShiftArtifact:
    fld = system.field
    n = len(system.layout)
    if n < 1:
        raise ValueError("need at least one variable")
    if fld.is_prime_field and fld.p <= 4 * n ** 4:
        raise ValueError(f"field too small: need |F| > 4n^4 = {4 * n ** 4}, got {fld.p}")
    pivot = check_normalized(system)
    t = len(system.polys)
    N = M = n * n + 2 * n + 1

    pairs = [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]
    alpha = ["alpha.0"] + [f"alpha.{i}" for i in range(1, n + 1)] + [f"alpha.{i}.{j}" for i, j in pairs]
    beta = [f"beta.{k}.{i}.{j}" for k in range(1, N + 1) for i, j in pairs]
    r = len(pairs) * (N + 1)
    eq1_count = t - 1
    s = eq1_count + N * len(pairs) + 1
    names = (alpha + beta + [f"w.{i}" for i in range(1, r + 1)]
             + [f"y1.{i}" for i in range(1, n * n + n + 2)]
             + [f"y2.{i}" for i in range(1, n + 1)]
             + [f"z.{i}.{j}" for i in range(1, s + 1) for j in range(1, M + 1)])
    layout = VariableLayout(names)

    def v(name):
        return Polynomial.var(fld, layout, name)

    def lin(vs):
        return sum((v(x) for x in vs), Polynomial.zero(fld, layout))

    def translate(p: Polynomial) -> Polynomial:
        # c + sum c_m m  ->  c + sum c_m alpha_m
        out = Polynomial.constant(fld, layout, p.constant_term())
        for m, c in p.terms.items():
            if m:
                out = out + v(_alpha_name(m, n)).scale(c)
        return out

    g0 = translate(system.polys[pivot])
    eq1 = [translate(p) for k, p in enumerate(system.polys) if k != pivot]

    quadratics, g_index = [], []
    for i, j in pairs:
        quadratics.append(v(f"alpha.{i}.{j}") - v(f"alpha.{i}") * v(f"alpha.{j}"))
        g_index.append(("alpha", i, j))
    for k in range(1, N + 1):
        for i, j in pairs:
            quadratics.append(v(f"beta.{k}.{i}.{j}") - v(f"alpha.{i}") * v(f"alpha.{j}"))
            g_index.append(("beta", k, i, j))
    assert len(quadratics) == r <= (N + 1) * n * n

    gen = fld.nonzero_elements()
    gammas = tuple(next(gen) for _ in range(r))
    s3 = v("alpha.0") + lin(f"alpha.{j}" for j in range(1, n + 1))

    part1 = lin(f"y1.{i}" for i in range(1, n * n + n + 2)) * g0
    part2 = Polynomial.zero(fld, layout)
    for i, (g, gamma) in enumerate(zip(quadratics, gammas), start=1):
        part2 = part2 + v(f"w.{i}") * (g + s3.scale(gamma))
    squares = sum((v(f"alpha.{i}") ** 2 for i in range(1, n + 1)), Polynomial.zero(fld, layout))
    part3 = lin(f"y2.{i}" for i in range(1, n + 1)) * squares

    constraints = list(eq1)
    constraints += [v(f"alpha.{i}.{j}") - v(f"beta.{k}.{i}.{j}") for k in range(1, N + 1) for i, j in pairs]
    constraints.append(s3)
    assert len(constraints) == s
    for L in constraints:
        if L.constant_term() != 0 or L.degree() > 1:
            raise InvariantViolation("linear constraint with a constant term")

    zpart = Polynomial.zero(fld, layout)
    for i, L in enumerate(constraints, start=1):
        zpart = zpart + lin(f"z.{i}.{j}" for j in range(1, M + 1)) * L

    PS = part1 + part2 + part3
    QS = PS + zpart
    return SparseShiftArtifact(
        source=system, layout=layout, QS=QS, PS=PS, part1=part1, part2=part2, part3=part3,
        zpart=zpart, g0=g0, quadratics=tuple(quadratics), g_index=tuple(g_index),
        gammas=gammas, constraints=tuple(constraints), pivot=pivot, n=n, t=t, N=N, M=M)


def verify_identity(art: SparseShiftArtifact) -> bool:
    """Re-expand ``P_S + sum LIN(Z_i) L_i`` and compare with the stored ``Q_S``."""
    fld, layout = art.QS.field, art.layout
    total = art.part1 + art.part2 + art.part3
    for i, L in enumerate(art.constraints, start=1):
        block = sum((Polynomial.var(fld, layout, z) for z in art.z_block(i)), Polynomial.zero(fld, layout))
        total = total + block * L
    return total == art.QS and art.PS == art.part1 + art.part2 + art.part3


# ---------------------------------------------------------------------------
# shifts


def shift_vector(art: SparseShiftArtifact, assignment: Mapping[str, object]) -> list:
    vec = [0] * len(art.layout)
    for name, val in assignment.items():
        vec[art.layout.index(name)] = art.QS.field.reduce(val)
    return vec


def _as_values(art, solution) -> list:
    src = art.source.layout
    if isinstance(solution, Mapping):
        return [art.source.field.reduce(solution.get(name, 0)) for name in src]
    solution = list(solution)
    if len(solution) != len(src):
        raise LayoutError(f"solution has {len(solution)} values for {len(src)} variables")
    return [art.source.field.reduce(x) for x in solution]


def forward_witness(art: SparseShiftArtifact, solution) -> list:
    """Shift over the full layout that sparsifies ``Q_S``, built from a solution of ``S``."""
    fld = art.QS.field
    u = _as_values(art, solution)
    if not art.source.is_solution(u):
        raise ValueError("the given point does not satisfy the system")
    n = art.n
    assign = {"alpha.0": fld.reduce(-sum(u))}
    for i in range(1, n + 1):
        assign[f"alpha.{i}"] = u[i - 1]
        for j in range(i, n + 1):
            prod = fld.reduce(u[i - 1] * u[j - 1])
            assign[f"alpha.{i}.{j}"] = prod
            for k in range(1, art.N + 1):
                assign[f"beta.{k}.{i}.{j}"] = prod
    shift = shift_vector(art, assign)
    after = len(shift_substitute(art.QS, shift))
    if after >= len(art.QS):
        raise InvariantViolation(f"forward witness does not sparsify ({len(art.QS)} -> {after})")
    return shift


def restrict_ab(art: SparseShiftArtifact, shift: Sequence) -> list:
    """Zero out the Y and Z components of a shift."""
    names = art.layout.names
    return [a if names[k].startswith(("alpha.", "beta.")) else 0 for k, a in enumerate(shift)]


def violated_constraints(art: SparseShiftArtifact, shift: Sequence) -> list[int]:
    """1-based indices ``i`` with ``L_i(a, b) != 0``."""
    return [i for i, L in enumerate(art.constraints, start=1) if evaluate(L, shift) != 0]


def count_change(art: SparseShiftArtifact, shift: Sequence) -> tuple[int, int]:
    before = len(art.QS)
    return before, len(shift_substitute(art.QS, shift))


def satisfies_translated(art: SparseShiftArtifact, shift: Sequence) -> bool:
    """Does the alpha-part of ``shift`` solve the translated system (S1, S2, S3)?"""
    names = art.layout.names
    val = {names[k]: a for k, a in enumerate(shift)}
    fld = art.QS.field
    if evaluate(art.g0, shift) != 0:
        return False
    if any(evaluate(L, shift) != 0 for L in art.constraints[:art.t - 1]):
        return False
    for i in range(1, art.n + 1):
        for j in range(i, art.n + 1):
            if fld.reduce(val[f"alpha.{i}.{j}"] - val[f"alpha.{i}"] * val[f"alpha.{j}"]) != 0:
                return False
    return evaluate(art.constraints[-1], shift) == 0


def extract_solution(art: SparseShiftArtifact, shift: Sequence) -> dict:
    """Recover a solution of ``S`` from a sparsifying shift of ``Q_S``.

    Raises :class:`Refusal` when the shift does not reduce the monomial count.
    """
    if len(shift) != len(art.layout):
        raise LayoutError(f"shift has length {len(shift)}, layout has {len(art.layout)}")
    shift = [art.QS.field.reduce(a) for a in shift]
    before, after = count_change(art, shift)
    if after >= before:
        bad = violated_constraints(art, shift)
        msg = f"shift does not sparsify Q_S ({before} -> {after} monomials)"
        if bad:
            msg += f"; violates linear constraint(s) {bad[:10]}"
        raise Refusal(msg, before, after, bad)
    if not satisfies_translated(art, shift):
        raise InvariantViolation("sparsifying shift whose alpha-part fails S1/S2/S3")
    names = art.layout.names
    val = {names[k]: a for k, a in enumerate(shift)}
    sol = {name: val[f"alpha.{i}"] for i, name in enumerate(art.source.layout, start=1)}
    if not art.source.is_solution(sol):
        raise InvariantViolation("extracted point does not solve the source system")
    return sol


@dataclass(frozen=True)
class PartDeltas:
    d1: int  # exact change of Part 1
    d2: int  # exact change of Part 2
    d3: int  # exact change of Part 3
    dz: int  # exact change of the LIN(Z_i) L_i block
    v1: int  # #{i : g_i(a, b) != 0}
    v2: int  # #{j : a_{x_j} equals some gamma_i}

    def to_json(self) -> dict:
        return {"d1": self.d1, "d2": self.d2, "d3": self.d3, "dz": self.dz, "v1": self.v1, "v2": self.v2}


def monomial_delta_parts(art: SparseShiftArtifact, shift: Sequence) -> PartDeltas:
    """Exact per-part monomial-count changes under the (a, b)-part of ``shift``."""
    ab = restrict_ab(art, [art.QS.field.reduce(a) for a in shift])

    def delta(part):
        return len(shift_substitute(part, ab)) - len(part)

    v1 = sum(1 for g in art.quadratics if evaluate(g, ab) != 0)
    gam = set(art.gammas)
    idx = art.layout.index
    v2 = sum(1 for j in range(1, art.n + 1) if ab[idx(f"alpha.{j}")] in gam)
    return PartDeltas(delta(art.part1), delta(art.part2), delta(art.part3), delta(art.zpart), v1, v2)


def s3_value(art: SparseShiftArtifact, shift: Sequence):
    return evaluate(art.constraints[-1], shift)
