"""Acceptance suite: one function per criterion, shared by ``redux selftest``
and ``tests/test_acceptance.py``.

Every criterion returns a :class:`CriterionResult`; none of them raise on a
failed check, so a single run reports all fourteen lines.
"""

from __future__ import annotations

import random
import time
import traceback
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import biquadratic, hyperbolic, polyproj, sparseshift
from .field import QQ, Field
from .normalizer import fold_constants, normalize
from .poly import (
    Polynomial, PolySystem, VariableLayout, complex_split, embed, evaluate, is_biquadratic,
    shift_substitute, substitute_values,
)
from .verifiers import (
    SampleConfig, brute_force_hn, random_rational, random_vector, sample_chain, sample_convexity,
    sample_hyperbolicity, sample_nonneg, sample_real_stability, sample_rng,
)

GF67 = Field.prime(67)


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] criterion {self.number:2d}: {self.title} ({self.seconds:.1f}s) {self.detail}"

    def to_json(self) -> dict:
        return {"criterion": self.number, "title": self.title, "passed": self.passed,
                "detail": self.detail, "seconds": round(self.seconds, 3)}


# ---------------------------------------------------------------------------
# instance corpora


def _vars(fld, names):
    layout = VariableLayout(names)
    return layout, [Polynomial.var(fld, layout, v) for v in names]


def random_system(rng: random.Random, fld: Field, n: int, t: int, max_deg: int, max_terms: int = 4) -> PolySystem:
    layout = VariableLayout([f"x{i}" for i in range(1, n + 1)])
    polys = []
    for _ in range(t):
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            d = rng.randint(0, max_deg)
            exps = [0] * n
            for _ in range(d):
                exps[rng.randrange(n)] += 1
            m = tuple((i, e) for i, e in enumerate(exps) if e)
            terms[m] = rng.randrange(1, fld.p)
        p = Polynomial(fld, layout, terms)
        if not p.is_zero():
            polys.append(p)
    return PolySystem(fld, layout, polys)


def normalizer_corpus(count: int = 100, seed: int = 0) -> list[PolySystem]:
    out = []
    for k in range(count):
        rng = sample_rng(seed, k)
        p = rng.choice((3, 5, 7))
        n = rng.randint(1, 3)
        out.append(random_system(rng, Field.prime(p), n, rng.randint(1, 3), 3, 3))
    return out


def satisfiable_gf67(count: int = 20, seed: int = 0) -> list[tuple[PolySystem, list]]:
    """Normalized systems over GF(67), ``n <= 2``, each with a known nonzero root."""
    out = []
    k = 0
    while len(out) < count:
        rng = sample_rng(seed, k)
        k += 1
        n = 1 + len(out) % 2
        u = [rng.randrange(1, 67) for _ in range(n)]
        raw = random_system(rng, GF67, n, rng.randint(1, 2), 2, 3)
        shifted = [p - evaluate(p, u) for p in raw.polys]
        polys = [p for p in shifted if not p.is_zero()]
        if not polys:
            continue
        system = fold_constants(PolySystem(GF67, raw.layout, polys))
        consts = [p for p in system.polys if p.constant_term() != 0]
        if len(consts) != 1 or system.degree() < 1:
            continue
        assert system.is_solution(u)
        out.append((system, u))
    return out


def unsatisfiable_gf67() -> list[PolySystem]:
    """Small normalized systems with no root over GF(67) (2, 66, 5, 3 are non-residues)."""
    layout, (x,) = _vars(GF67, ["x1"])
    systems = [PolySystem(GF67, layout, [x ** 2 - c]) for c in (2, -1, 5, 3)]
    systems.append(fold_constants(PolySystem(GF67, layout, [x - 1, x - 2])))
    return systems


def origin_root_systems() -> list[PolySystem]:
    l1, (a,) = _vars(QQ, ["x1"])
    l2, (x, y) = _vars(QQ, ["x1", "x2"])
    return [
        PolySystem(QQ, l1, [a]),
        PolySystem(QQ, l1, [a * a + a]),
        PolySystem(QQ, l2, [x * y, x + y]),
        PolySystem(QQ, l2, [x * x - y, x - 2 * y]),
        PolySystem(QQ, l2, [x * y + y, x * x + 3 * x]),
    ]


def ball_infeasible_systems() -> list[PolySystem]:
    l1, (a,) = _vars(QQ, ["x1"])
    return [
        PolySystem(QQ, l1, [a - 2]),
        PolySystem(QQ, l1, [a * a + 1]),
        PolySystem(QQ, l1, [a - Fraction(3, 2)]),
    ]


def random_biquadratic(rng: random.Random, nx: int, ny: int, bound: int = 5) -> Polynomial:
    xs = [f"x{i}" for i in range(1, nx + 1)]
    ys = [f"x{i}" for i in range(nx + 1, nx + ny + 1)]
    layout = VariableLayout(xs + ys)
    terms = {}
    for i in range(nx):
        for j in range(i, nx):
            for k in range(nx, nx + ny):
                for l in range(k, nx + ny):
                    if rng.random() < 0.6:
                        exps = {}
                        for v in (i, j, k, l):
                            exps[v] = exps.get(v, 0) + 1
                        terms[tuple(sorted(exps.items()))] = rng.randint(-bound, bound)
    q = Polynomial(QQ, layout, terms)
    if q.is_zero():
        q = Polynomial(QQ, layout, {((0, 2), (nx, 2)): 1})
    return q


def bilinear_square(rng: random.Random, nx: int, ny: int, count: int = 1, bound: int = 3) -> Polynomial:
    """Sum of ``count`` squares of random bilinear forms in ``X = x1..``, ``Y = ..``."""
    layout = VariableLayout([f"x{i}" for i in range(1, nx + ny + 1)])
    v = [Polynomial.var(QQ, layout, name) for name in layout]
    total = Polynomial.zero(QQ, layout)
    for _ in range(count):
        form = Polynomial.zero(QQ, layout)
        for i in range(nx):
            for j in range(nx, nx + ny):
                form = form + (v[i] * v[j]).scale(rng.randint(-bound, bound))
        if form.is_zero():
            form = v[0] * v[nx]
        total = total + form * form
    return total


# ---------------------------------------------------------------------------
# criteria


def _run(number: int, title: str, body: Callable[[], tuple[bool, str]]) -> CriterionResult:
    t0 = time.perf_counter()
    try:
        ok, detail = body()
    except Exception as exc:  # a crash is a failed criterion, reported with its cause
        ok, detail = False, f"error: {exc!r} :: {traceback.format_exc(limit=3).splitlines()[-1]}"
    return CriterionResult(number, title, ok, detail, time.perf_counter() - t0)


def criterion_1(count: int = 100, seed: int = 0) -> CriterionResult:
    def body():
        mismatches = []
        sat = 0
        for k, s in enumerate(normalizer_corpus(count, seed)):
            before = brute_force_hn(s) is not None
            after = brute_force_hn(normalize(s)[0]) is not None
            sat += before
            if before != after:
                mismatches.append(k)
        return not mismatches, f"{count} systems, {sat} satisfiable, mismatches {mismatches[:5]}"
    return _run(1, "normalizer preserves satisfiability", body)


def _structure_ok(s: PolySystem) -> bool:
    return s.degree() <= 2 and sum(1 for p in s.polys if p.constant_term() != 0) <= 1


def criterion_2(count: int = 100, seed: int = 0) -> CriterionResult:
    def body():
        corpus = normalizer_corpus(count, seed) + [s for s, _ in satisfiable_gf67()] + unsatisfiable_gf67()
        bad = [k for k, s in enumerate(corpus) if not _structure_ok(normalize(s)[0])]
        return not bad, f"{len(corpus)} normalized outputs checked, violations {bad[:5]}"
    return _run(2, "normalized outputs have degree <= 2 and <= 1 constant", body)


def criterion_3(count: int = 20, seed: int = 0) -> CriterionResult:
    def body():
        problems = []
        for k, (s, u) in enumerate(satisfiable_gf67(count, seed)):
            art = sparseshift.build(s)
            shift = sparseshift.forward_witness(art, u)
            before, after = sparseshift.count_change(art, shift)
            parts = sparseshift.monomial_delta_parts(art, shift)
            sol = sparseshift.extract_solution(art, shift)
            n = art.n
            if not after < before:
                problems.append(f"#{k} no decrease")
            if parts.d1 != -(n * n + n + 1):
                problems.append(f"#{k} d1={parts.d1}")
            if [sol[name] for name in s.layout] != u:
                problems.append(f"#{k} extract mismatch")
        return not problems, f"{count} systems, problems {problems[:5]}"
    return _run(3, "SparseShift completeness", body)


def _random_shift(rng: random.Random, art: sparseshift.SparseShiftArtifact, respect: bool) -> list:
    """Uniform shift; with ``respect`` the beta copies, alpha_0 and alpha pairs obey eq2/eq3."""
    p = art.QS.field.p
    names = art.layout.names
    vec = [rng.randrange(p) for _ in names]
    if respect:
        val = dict(zip(names, vec))
        for k, name in enumerate(names):
            if name.startswith("beta."):
                _, _, i, j = name.split(".")
                vec[k] = val[f"alpha.{i}.{j}"]
        vec[art.layout.index("alpha.0")] = -sum(val[f"alpha.{j}"] for j in range(1, art.n + 1)) % p
    return vec


def criterion_4(samples: int = 1000, seed: int = 0) -> CriterionResult:
    def body():
        hits = []
        for k, s in enumerate(unsatisfiable_gf67()):
            assert brute_force_hn(s) is None
            art = sparseshift.build(s)
            before = len(art.QS)
            for j in range(samples):
                rng = sample_rng(seed, 10 ** 6 * k + j)
                shift = _random_shift(rng, art, respect=j % 2 == 1)
                if len(shift_substitute(art.QS, shift)) < before:
                    hits.append((k, j))
        return not hits, f"5 systems x {samples} shifts, sparsifying shifts {hits[:5]}"
    return _run(4, "SparseShift soundness (sampled)", body)


def corrected_v2(art: sparseshift.SparseShiftArtifact, shift) -> int:
    """``#{j : a_j in gamma} + #{j : 2 a_j in gamma}``.

    A diagonal quadratic ``alpha_jj - alpha_j^2`` shifts the ``alpha_j``
    coefficient by ``-2 a_j``, so one ``j`` can cancel two gamma terms.
    """
    fld = art.QS.field
    gam = set(art.gammas)
    idx = art.layout.index
    a = [shift[idx(f"alpha.{j}")] for j in range(1, art.n + 1)]
    return sum(x in gam for x in a) + sum(fld.reduce(2 * x) in gam for x in a)


def delta_lemma_samples(samples: int = 500, seed: int = 0):
    arts = [sparseshift.build(s) for s, _ in satisfiable_gf67(4, seed)] + \
        [sparseshift.build(s) for s in unsatisfiable_gf67()[:2]]
    for j in range(samples):
        art = arts[j % len(arts)]
        rng = sample_rng(seed, 5 * 10 ** 6 + j)
        shift = _random_shift(rng, art, respect=True)
        yield art, shift, sparseshift.monomial_delta_parts(art, shift)


def criterion_5(samples: int = 500, seed: int = 0) -> CriterionResult:
    def body():
        fail2, fail3, fail_corr = [], [], []
        for j, (art, shift, d) in enumerate(delta_lemma_samples(samples, seed)):
            n = art.n
            if d.d2 < d.v1 - d.v2:
                fail2.append(j)
            if d.d2 < d.v1 - corrected_v2(art, shift):
                fail_corr.append(j)
            if not (d.d3 == 0 or 2 * n <= d.d3 <= (n + 1) * n):
                fail3.append(j)
        detail = (f"{samples} shifts; Part-2 >= v1-v2 fails on {len(fail2)} {fail2[:3]}; "
                  f"Part-3 range fails on {len(fail3)}; with 2a_j in gamma counted as well: {len(fail_corr)} fail")
        return not fail2 and not fail3, detail
    return _run(5, "SparseShift delta lemma", body)


def criterion_6(count: int = 20, seed: int = 0) -> CriterionResult:
    def body():
        problems = []
        for k, (s, u) in enumerate(satisfiable_gf67(count, seed)):
            art = polyproj.build(s)
            A, b = polyproj.forward_witness(art, u)
            if not polyproj.verify_projection(art, A, b):
                problems.append(f"#{k} verify false")
            elif polyproj.extract_solution(art, A, b) != u:
                problems.append(f"#{k} extract mismatch")
        return not problems, f"{count} systems, problems {problems[:5]}"
    return _run(6, "PolyProj completeness and exactness", body)


def _random_affine(rng: random.Random, art: polyproj.PolyProjArtifact, shaped: bool):
    size = len(art.layout)
    if not shaped:
        A = [[rng.randrange(67) for _ in range(size)] for _ in range(size)]
        b = [rng.randrange(67) for _ in range(size)]
        return A, b
    # the witness shape with arbitrary constants for x_1..x_n
    a = [rng.randrange(67) for _ in range(art.n)]
    A = [[0] * size for _ in range(size)]
    b = [0] * size
    A[0][0] = 1
    b[0] = -sum(ai ** D for ai, D in zip(a, art.ladder_degrees)) % 67
    for i in range(1, art.n + 1):
        b[i] = a[i - 1]
    for k in range(art.n + 1, size):
        A[k][k] = 1
    return A, b


def criterion_7(samples: int = 1000, seed: int = 0) -> CriterionResult:
    def body():
        hits = []
        for k, s in enumerate(unsatisfiable_gf67()):
            art = polyproj.build(s)
            for j in range(samples):
                rng = sample_rng(seed, 7 * 10 ** 6 + 10 ** 4 * k + j)
                A, b = _random_affine(rng, art, shaped=j % 2 == 1)
                if polyproj.verify_projection(art, A, b):
                    hits.append((k, j))
        return not hits, f"5 systems x {samples} (A, b), accepted {hits[:5]}"
    return _run(7, "PolyProj soundness (sampled)", body)


def criterion_8(samples: int = 10000, seed: int = 0) -> CriterionResult:
    def body():
        problems = []
        for m in range(1, 9):
            ys, zs = biquadratic.canonical_chain(m)
            r = biquadratic.check_chain(ys, zs)
            if not (r.lhs == 0 and r.hypothesis_holds and r.side_conditions and r.bound_holds):
                problems.append(f"canonical m={m}")
        per = samples // 8
        for m in range(1, 9):
            v = sample_chain(m, SampleConfig(per, seed + m, 10))
            if not v.ok:
                problems.append(f"random m={m} index {v.index}")
        return not problems, f"canonical m=1..8 and {per * 8} random chains, problems {problems[:5]}"
    return _run(8, "chain lemma", body)


def criterion_9(samples: int = 2000, seed: int = 0, m: int = 4) -> CriterionResult:
    def body():
        problems = []
        for k, s in enumerate(origin_root_systems()):
            art = biquadratic.build(s, m)
            if not is_biquadratic(art.Q, *art.partition):
                problems.append(f"#{k} not biquadratic")
            point = biquadratic.forward_witness(art, [0] * len(s.layout))
            if not evaluate(art.Q, point) < 0:
                problems.append(f"#{k} witness value >= 0")
        for k, s in enumerate(ball_infeasible_systems()):
            art = biquadratic.build(s, m)
            if not is_biquadratic(art.Q, *art.partition):
                problems.append(f"infeasible #{k} not biquadratic")
            v = sample_nonneg(art.Q, SampleConfig(samples, seed + k, 10))
            if not v.ok:
                problems.append(f"infeasible #{k} Q<0 at sample {v.index}")
        return not problems, f"5 witnesses and 3 x {samples} samples, problems {problems[:5]}"
    return _run(9, "biquadratic structure and witness", body)


def biquadratic_instances(count: int = 20, seed: int = 0) -> list[Polynomial]:
    out = []
    for k in range(count):
        rng = sample_rng(seed, 10 ** 7 + k)
        out.append(random_biquadratic(rng, rng.randint(1, 2), rng.randint(1, 2)))
    return out


def criterion_10(count: int = 20, seed: int = 0) -> CriterionResult:
    def body():
        bad = []
        for k, Q in enumerate(biquadratic_instances(count, seed)):
            art = hyperbolic.build_hyperbolicity(Q)
            B = hyperbolic.restrict_x0(hyperbolic.bezoutian(art.p, art.e))
            if B != hyperbolic.closed_form_bezoutian(art):
                bad.append(k)
        return not bad, f"{count} random biquadratic Q, mismatches {bad[:5]}"
    return _run(10, "Bezoutian closed form", body)


def criterion_11(samples: int = 200, seed: int = 0) -> CriterionResult:
    def body():
        bad, badB = [], []
        both = [0, 0]
        for k, Q in enumerate(biquadratic_instances(20, seed)):
            art = hyperbolic.build_hyperbolicity(Q)
            B = hyperbolic.bezoutian(art.p, art.e)
            condA, condB = hyperbolic.schur_condition(art)
            for j in range(samples):
                rng = sample_rng(seed, 11 * 10 ** 6 + 10 ** 4 * k + j)
                x = [Fraction(0)] + random_vector(rng, art.n, 10)
                if not any(x):
                    x[1] = Fraction(1)
                psd = hyperbolic.psd_at_point(B, x)
                cond = evaluate(condA, x) >= 0 and evaluate(condB, x) >= 0
                both[psd] += 1
                if psd != cond:
                    bad.append((k, j))
                if evaluate(condB, x) < 0:
                    badB.append((k, j))
        detail = (f"20 instances x {samples} points (psd {both[1]}, not psd {both[0]}), "
                  f"mismatches {bad[:3]}, condB<0 at {badB[:3]}")
        return not bad and not badB, detail
    return _run(11, "Schur complement equivalence", body)


def hyperbolic_instances(seed: int = 0):
    """Nonnegative ``(bilinear)^2`` quartics and quartics with a known negative point."""
    pos = [bilinear_square(sample_rng(seed, 12 * 10 ** 6 + k), 1 + k % 2, 1 + (k + 1) % 2) for k in range(3)]
    layout, (x1, x2) = _vars(QQ, ["x1", "x2"])
    l3, (a, b, c) = _vars(QQ, ["x1", "x2", "x3"])
    neg = [
        (-(x1 ** 2 * x2 ** 2), [1, 1]),
        (x1 ** 2 * x2 ** 2 - 2 * x1 * x2 ** 3, [1, 1]),
        ((a * b - b * c) ** 2 - 3 * a ** 2 * c ** 2, [1, 1, 1]),
    ]
    return pos, neg


def _stability_directed(art: hyperbolic.StabilityArtifact, w) -> list:
    """``(a, b)`` with ``a = 1/(2n)`` and ``M b = (0, s w)``, so ``p~(a t + b) = p(t e_0 + (0, s w))``."""
    n = art.source.n
    out = []
    for s in (1, 2, Fraction(1, 2), 10):
        a = [Fraction(1, 2 * n)] * (2 * n)
        b = []
        for wi in w:
            h = Fraction(wi) * s / (2 * art.eps)
            b += [h, -h]
        out.append((a, b))
    return out


def criterion_12(seed: int = 0) -> CriterionResult:
    def body():
        problems = []
        pos, neg = hyperbolic_instances(seed)
        for k, Q in enumerate(pos):
            art = hyperbolic.build_hyperbolicity(Q)
            st = hyperbolic.build_stability(art)
            if not sample_hyperbolicity(art.p, art.e, SampleConfig(500, seed + k, 10)).ok:
                problems.append(f"pos #{k} hyperbolicity violation")
            if not sample_real_stability(st.ptilde, SampleConfig(200, seed + k, 10)).ok:
                problems.append(f"pos #{k} stability violation")
        for k, (Q, w) in enumerate(neg):
            art = hyperbolic.build_hyperbolicity(Q)
            st = hyperbolic.build_stability(art)
            dirs = [[0] + [Fraction(x) * s for x in w] for s in (1, 2, Fraction(1, 2), 10)]
            v = sample_hyperbolicity(art.p, art.e, SampleConfig(50, seed + k, 10), directed=dirs)
            if v.ok:
                problems.append(f"neg #{k} no hyperbolicity counterexample")
            v = sample_real_stability(st.ptilde, SampleConfig(50, seed + k, 10),
                                      directed=_stability_directed(st, w))
            if v.ok:
                problems.append(f"neg #{k} no stability counterexample")
        for k, Q in enumerate(pos + [q for q, _ in neg]):
            art = hyperbolic.build_hyperbolicity(Q)
            eps = hyperbolic.build_stability(art).eps
            q = hyperbolic.eps_positivity_poly(art, eps)
            for j in range(1000 // (len(pos) + len(neg)) + 1):
                x = random_vector(sample_rng(seed, 12 * 10 ** 7 + 10 ** 4 * k + j), art.n, 10)
                if any(x) and not evaluate(q, x) > 0:
                    problems.append(f"eps-positivity #{k} at sample {j}")
                    break
        return not problems, f"{len(pos)} nonnegative and {len(neg)} negative quartics, problems {problems[:5]}"
    return _run(12, "hyperbolicity and stability transfer", body)


def criterion_13(samples: int = 500, seed: int = 0) -> CriterionResult:
    def body():
        problems = []
        for k in range(5):
            rng = sample_rng(seed, 13 * 10 ** 6 + k)
            n = 1 + k % 2
            b = bilinear_square(rng, n, n, count=1 + k % 3)
            f = hyperbolic.build_convexity(b)
            v = sample_convexity(f, SampleConfig(samples, seed + k, 10))
            if not v.ok:
                problems.append(f"#{k} z^T H z < 0 at sample {v.index}")
        layout, (X, Y) = _vars(QQ, ["X1", "Y1"])
        H = hyperbolic.hessian(hyperbolic.build_convexity(X ** 2 * Y ** 2))
        expect = [[2 * Y ** 2 + 24 * X ** 2, 4 * X * Y], [4 * X * Y, 2 * X ** 2 + 24 * Y ** 2]]
        if H.entries != expect:
            problems.append("n=1 Hessian differs from the hand-derived matrix")
        return not problems, f"5 nonnegative b x {samples} samples, problems {problems[:5]}"
    return _run(13, "convexity gadget", body)


def _gauss_eval(p: Polynomial, xs, ys):
    """``p(x + i y)`` with exact Gaussian-rational arithmetic, returned as (re, im)."""
    def cmul(a, b):
        return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])

    total = (Fraction(0), Fraction(0))
    for m, c in p.terms.items():
        acc = (Fraction(c), Fraction(0))
        for i, e in m:
            for _ in range(e):
                acc = cmul(acc, (xs[i], ys[i]))
        total = (total[0] + acc[0], total[1] + acc[1])
    return total


def criterion_14(count: int = 50, seed: int = 0) -> CriterionResult:
    def body():
        bad = []
        for k in range(count):
            rng = sample_rng(seed, 14 * 10 ** 6 + k)
            n = rng.randint(1, 3)
            layout = VariableLayout([f"x{i}" for i in range(1, n + 1)])
            terms = {}
            for _ in range(rng.randint(1, 8)):
                exps = [0] * n
                for _ in range(rng.randint(0, 4)):
                    exps[rng.randrange(n)] += 1
                terms[tuple((i, e) for i, e in enumerate(exps) if e)] = random_rational(rng, 9)
            p = Polynomial(QQ, layout, terms)
            if p.degree() < 4:
                p = p + Polynomial.var(QQ, layout, "x1") ** 4
            re, im = complex_split(p)
            zero_im = {f"im.{v}": 0 for v in layout}
            if substitute_values(re, zero_im) != embed(p, re.layout):
                bad.append(f"#{k} Re(x,0)")
            if not substitute_values(im, zero_im).is_zero():
                bad.append(f"#{k} Im(x,0)")
            for _ in range(5):
                xs = random_vector(rng, n, 9)
                ys = random_vector(rng, n, 9)
                if _gauss_eval(p, xs, ys) != (evaluate(re, xs + ys), evaluate(im, xs + ys)):
                    bad.append(f"#{k} expansion")
                    break
        return not bad, f"{count} random quartics, problems {bad[:5]}"
    return _run(14, "complex_split identities", body)


CRITERIA: dict[int, Callable[[], CriterionResult]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10,
    11: criterion_11, 12: criterion_12, 13: criterion_13, 14: criterion_14,
}


def run_all(numbers=None, echo=None) -> list[CriterionResult]:
    results = []
    for k in numbers or sorted(CRITERIA):
        r = CRITERIA[k]()
        if echo:
            echo(r.line())
        results.append(r)
    return results
