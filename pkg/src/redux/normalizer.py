"""Satisfiability-preserving normalization of polynomial systems.

``normalize_degree2`` lowers every polynomial to degree <= 2 by naming
quadratic sub-products with fresh variables; ``fold_constants`` leaves at
most one polynomial with a nonzero constant term.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .poly import Polynomial, PolySystem, VariableLayout, _grlex_key, evaluate, mono_degree


@dataclass(frozen=True)
class NormalizationTrace:
    """Fresh variables in order of introduction, each the product of two earlier ones."""

    new_var_defs: tuple[tuple[str, tuple[str, str]], ...] = ()
    fold_pivot: tuple[int, object] | None = None  # (index of pivot, its constant)

    def to_json(self, field) -> dict:
        return {
            "new_var_defs": [[name, list(prod)] for name, prod in self.new_var_defs],
            "fold_pivot": None if self.fold_pivot is None
            else [self.fold_pivot[0], field.format(self.fold_pivot[1])],
        }

    def extend_solution(self, layout: VariableLayout, solution: Mapping[str, object], fld) -> dict:
        """Extend an assignment of the original variables to the new ones."""
        out = {k: fld.reduce(v) for k, v in solution.items()}
        for name, (a, b) in self.new_var_defs:
            out[name] = fld.reduce(out.get(a, 0) * out.get(b, 0))
        return out


def _fresh_name(taken: set, prefix: str = "u") -> str:
    k = 1
    while f"{prefix}.{k}" in taken:
        k += 1
    return f"{prefix}.{k}"


def _quadratic_factor(m) -> tuple[int, int]:
    """First two variable factors of a monomial in layout order."""
    i, e = m[0]
    if e >= 2:
        return i, i
    return i, m[1][0]


def _divide_once(m, i: int, j: int):
    d = dict(m)
    d[i] -= 1
    d[j] -= 1
    return tuple((k, e) for k, e in sorted(d.items()) if e)


def normalize_degree2(system: PolySystem) -> tuple[PolySystem, NormalizationTrace]:
    """Rewrite ``system`` so every polynomial has degree <= 2.

    Repeatedly takes the graded-lex largest monomial of degree >= 3, names its
    leading quadratic sub-product ``x_i x_j`` by a fresh ``u`` (constraint
    ``u - x_i x_j = 0``), and divides that product out of every monomial of
    degree >= 3 once.  Already-named products are reused.
    """
    fld = system.field
    names = list(system.layout.names)
    taken = set(names)
    # polynomials as plain term dicts over a growing index space
    polys = [dict(p.terms) for p in system.polys]
    defs: list[tuple[str, tuple[str, str]]] = []
    product_var: dict[tuple[int, int], int] = {}
    constraints: list[dict] = []

    while True:
        high = [m for terms in polys for m in terms if mono_degree(m) >= 3]
        if not high:
            break
        lead = max(high, key=_grlex_key)
        i, j = _quadratic_factor(lead)
        if (i, j) not in product_var:
            name = _fresh_name(taken)
            taken.add(name)
            names.append(name)
            u = len(names) - 1
            product_var[(i, j)] = u
            defs.append((name, (names[i], names[j])))
            prod = ((i, 2),) if i == j else ((i, 1), (j, 1))
            constraints.append({((u, 1),): 1, prod: fld.reduce(-1)})
        u = product_var[(i, j)]
        for terms in polys:
            for m in [m for m in terms if mono_degree(m) >= 3]:
                d = dict(m)
                if d.get(i, 0) >= (2 if i == j else 1) and d.get(j, 0) >= 1:
                    c = terms.pop(m)
                    nd = dict(_divide_once(m, i, j))
                    nd[u] = nd.get(u, 0) + 1
                    nm = tuple(sorted(nd.items()))
                    v = fld.reduce(terms.get(nm, 0) + c)
                    if v == 0:
                        terms.pop(nm, None)
                    else:
                        terms[nm] = v

    if not defs:
        return system, NormalizationTrace()
    layout = VariableLayout(names)
    out = [Polynomial(fld, layout, t) for t in constraints]
    out += [Polynomial(fld, layout, t) for t in polys]
    return PolySystem(fld, layout, out), NormalizationTrace(tuple(defs))


def fold_pivot(system: PolySystem) -> tuple[int, object] | None:
    """Index and constant of the first polynomial with a nonzero constant term."""
    for k, p in enumerate(system.polys):
        c = p.constant_term()
        if c != 0:
            return k, c
    return None


def fold_constants(system: PolySystem) -> PolySystem:
    """Cancel all but one constant term: ``g_j <- c_1 g_j - c_j g_1``.

    Only polynomials with ``c_j != 0`` are rewritten; the others keep their
    roots under the formula anyway.  Polynomials that fold to zero are dropped.
    """
    piv = fold_pivot(system)
    if piv is None:
        return system
    k, c1 = piv
    g1 = system.polys[k]
    out = []
    changed = False
    for j, g in enumerate(system.polys):
        cj = g.constant_term()
        if j == k or cj == 0:
            out.append(g)
            continue
        changed = True
        new = g.scale(c1) - g1.scale(cj)
        if not new.is_zero():
            out.append(new)
    if not changed:
        return system
    return PolySystem(system.field, system.layout, out)


def normalize(system: PolySystem) -> tuple[PolySystem, NormalizationTrace]:
    """``normalize_degree2`` followed by ``fold_constants``, with the pivot recorded."""
    t, trace = normalize_degree2(system)
    piv = fold_pivot(t)
    folded = fold_constants(t)
    return folded, NormalizationTrace(trace.new_var_defs, piv)


def add_subfield_constraints(system: PolySystem, q: int) -> PolySystem:
    """Append ``x^q - x = 0`` for every variable (prime-field case ``q = p``)."""
    if not system.field.is_prime_field or q != system.field.p:
        raise ValueError(f"only q = p is supported (field {system.field!r}, q = {q})")
    extra = []
    for name in system.layout:
        x = Polynomial.var(system.field, system.layout, name)
        extra.append(x ** q - x)
    return PolySystem(system.field, system.layout, list(system.polys) + extra)


def restrict_solution(solution: Mapping[str, object], original: VariableLayout) -> dict:
    return {name: solution.get(name, 0) for name in original}


def check_solution(system: PolySystem, solution: Mapping[str, object] | Sequence) -> bool:
    return all(evaluate(p, solution) == 0 for p in system.polys)
