"""Independent oracles: exhaustive search over small prime fields, Sturm
real-rootedness, and seeded sampling for nonnegativity, hyperbolicity, real
stability and convexity.

Sampling is reproducible: sample ``k`` draws from ``random.Random(f"{seed}:{k}")``,
so verdicts do not depend on how samples are split across worker processes.
"""

from __future__ import annotations

import itertools
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .poly import Polynomial, PolySystem, evaluate, monomial_count, shift_substitute

DEFAULT_MAX_ENUM = 10 ** 8


class EnumerationTooLarge(RuntimeError):
    def __init__(self, size: int, limit: int):
        super().__init__(f"search space has {size} points, limit is {limit} (set REDUX_MAX_ENUM to raise it)")
        self.size = size
        self.limit = limit


def max_enum() -> int:
    raw = os.environ.get("REDUX_MAX_ENUM")
    return int(raw) if raw else DEFAULT_MAX_ENUM


def _guard(p: int, n: int) -> int:
    size = p ** n
    limit = max_enum()
    if size > limit:
        raise EnumerationTooLarge(size, limit)
    return size


# ---------------------------------------------------------------------------
# exhaustive oracles


def _hn_slice(system: PolySystem, first: Optional[int]):
    p, n = system.field.p, len(system.layout)
    heads = [()] if first is None else [(first,)]
    rest = n if first is None else n - 1
    for head in heads:
        for tail in itertools.product(range(p), repeat=rest):
            pt = head + tail
            if all(evaluate(q, pt) == 0 for q in system.polys):
                return list(pt)
    return None


def _ss_slice(f: Polynomial, first: Optional[int]):
    p, n = f.field.p, len(f.layout)
    before = monomial_count(f)
    heads = [()] if first is None else [(first,)]
    rest = n if first is None else n - 1
    for head in heads:
        for tail in itertools.product(range(p), repeat=rest):
            a = head + tail
            if monomial_count(shift_substitute(f, a)) < before:
                return list(a)
    return None


def _first_by_leading(fn, obj, p: int, n: int, threads: int):
    """Lexicographically first hit; with threads, one task per leading coordinate."""
    if threads <= 1 or n == 0:
        return fn(obj, None)
    with ProcessPoolExecutor(max_workers=threads) as ex:
        for hit in ex.map(fn, itertools.repeat(obj, p), range(p)):
            if hit is not None:
                return hit
    return None


def brute_force_hn(system: PolySystem, threads: int = 1) -> list | None:
    """First common root in lexicographic order, or ``None``."""
    if not system.field.is_prime_field:
        raise ValueError("exhaustive search needs a prime field")
    n = len(system.layout)
    _guard(system.field.p, n)
    return _first_by_leading(_hn_slice, system, system.field.p, n, threads)


def brute_force_sparseshift(f: Polynomial, threads: int = 1) -> list | None:
    """First shift (lexicographic) that strictly lowers the monomial count, or ``None``."""
    if not f.field.is_prime_field:
        raise ValueError("exhaustive search needs a prime field")
    n = len(f.layout)
    _guard(f.field.p, n)
    if monomial_count(f) <= 1:
        return None
    return _first_by_leading(_ss_slice, f, f.field.p, n, threads)


# ---------------------------------------------------------------------------
# univariate arithmetic (coefficient lists, lowest degree first)


def _trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def as_univariate(u) -> list[Fraction]:
    """Coefficient list of a univariate polynomial (or pass a list through)."""
    if isinstance(u, Polynomial):
        if len(u.variables()) > 1:
            raise ValueError("polynomial is not univariate")
        coeffs = [Fraction(0)] * (max(u.degree(), 0) + 1)
        for m, c in u.terms.items():
            coeffs[m[0][1] if m else 0] += Fraction(c)
        return _trim(coeffs)
    return _trim([Fraction(c) for c in u])


def poly_divmod(a: list, b: list) -> tuple[list, list]:
    a, b = list(a), _trim(list(b))
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(_trim(a)) >= len(b):
        k = len(a) - len(b)
        c = a[-1] / lead
        q[k] = c
        for i, bi in enumerate(b):
            a[k + i] -= c * bi
        a.pop()
    return q, a


def derivative(a: list) -> list:
    return _trim([i * c for i, c in enumerate(a)][1:])


def _monic(a: list) -> list:
    return [c / a[-1] for c in a] if a else a


def poly_gcd(a: list, b: list) -> list:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _trim(poly_divmod(a, b)[1])
    return _monic(a)


def square_free_part(a: list) -> list:
    a = _trim(list(a))
    g = poly_gcd(a, derivative(a))
    return _monic(poly_divmod(a, g)[0]) if len(g) > 1 else _monic(a)


def _normalize_content(a: list) -> list:
    """Divide by a positive scalar; signs (what Sturm counts) are unchanged."""
    if not a:
        return a
    scale = abs(a[-1])
    return [c / scale for c in a]


def sturm_chain(a: list) -> list[list]:
    chain = [_normalize_content(_trim(list(a))), _normalize_content(derivative(a))]
    while chain[-1]:
        rem = _trim(poly_divmod(chain[-2], chain[-1])[1])
        if not rem:
            break
        chain.append(_normalize_content([-c for c in rem]))
    return [c for c in chain if c]


def _variations(signs) -> int:
    s = [x for x in signs if x != 0]
    return sum(1 for u, v in zip(s, s[1:]) if (u > 0) != (v > 0))


def count_real_roots(u) -> int:
    """Number of distinct real roots."""
    a = as_univariate(u)
    if not a:
        raise ValueError("zero polynomial")
    chain = sturm_chain(square_free_part(a))
    at_pos = [c[-1] for c in chain]
    at_neg = [c[-1] * (-1) ** (len(c) - 1) for c in chain]
    return _variations(at_neg) - _variations(at_pos)


def sturm_real_rooted(u) -> bool:
    """True iff every complex root of ``u`` is real (multiplicities allowed)."""
    a = as_univariate(u)
    if not a:
        raise ValueError("zero polynomial")
    sf = square_free_part(a)
    return count_real_roots(sf) == len(sf) - 1


def line_restriction(p: Polynomial, direction: Sequence, base: Sequence) -> list[Fraction]:
    """Coefficients of ``t -> p(direction * t + base)``."""
    n = len(p.layout)
    if len(direction) != n or len(base) != n:
        raise ValueError("direction and base must match the layout")
    d = max(p.degree(), 0)
    powers: dict = {}

    def power(i, e):
        key = (i, e)
        if key not in powers:
            if e == 0:
                powers[key] = [Fraction(1)]
            else:
                prev = power(i, e - 1)
                a, b = Fraction(direction[i]), Fraction(base[i])
                out = [Fraction(0)] * (len(prev) + 1)
                for k, c in enumerate(prev):
                    out[k] += c * b
                    out[k + 1] += c * a
                powers[key] = out
        return powers[key]

    total = [Fraction(0)] * (d + 1)
    for m, c in p.terms.items():
        acc = [Fraction(c)]
        for i, e in m:
            pw = power(i, e)
            nxt = [Fraction(0)] * (len(acc) + len(pw) - 1)
            for x, ax in enumerate(acc):
                if ax:
                    for y, by in enumerate(pw):
                        nxt[x + y] += ax * by
            acc = nxt
        for k, c2 in enumerate(acc):
            total[k] += c2
    return _trim(total)


# ---------------------------------------------------------------------------
# sampling


@dataclass(frozen=True)
class SampleConfig:
    count: int = 1000
    seed: int = 0
    bound: int = 10
    positivity: bool = False

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("count must be >= 1")
        if self.bound < 1:
            raise ValueError("bound must be >= 1")


@dataclass
class Verdict:
    ok: bool
    checked: int
    counterexample: Optional[dict] = None
    value: object = None
    index: Optional[int] = None
    note: str = ""

    def to_json(self) -> dict:
        def enc(x):
            if isinstance(x, (list, tuple)):
                return [enc(y) for y in x]
            if isinstance(x, dict):
                return {k: enc(v) for k, v in x.items()}
            if isinstance(x, (Fraction, int)) and not isinstance(x, bool):
                return str(x)
            return x

        out = {"ok": self.ok, "checked": self.checked,
               "verdict": "noViolation" if self.ok else "counterexample"}
        if not self.ok:
            out["counterexample"] = enc(self.counterexample)
            out["value"] = enc(self.value)
            out["index"] = self.index
        if self.note:
            out["note"] = self.note
        return out


def sample_rng(seed: int, index: int) -> random.Random:
    return random.Random(f"{seed}:{index}")


def random_rational(rng: random.Random, bound: int, positive: bool = False) -> Fraction:
    lo = 1 if positive else -bound
    return Fraction(rng.randint(lo, bound), rng.randint(1, bound))


def random_vector(rng: random.Random, n: int, bound: int, positive: bool = False) -> list[Fraction]:
    return [random_rational(rng, bound, positive) for _ in range(n)]


class Checker:
    """Picklable per-sample check: ``check(candidate)`` returns ``None`` or ``(witness, value)``."""

    def draw(self, rng: random.Random, cfg: SampleConfig):
        raise NotImplementedError

    def check(self, candidate):
        raise NotImplementedError

    def run(self, cfg: SampleConfig, index: int):
        return self.check(self.draw(sample_rng(cfg.seed, index), cfg))


def _run_range(args):
    checker, cfg, lo, hi = args
    for k in range(lo, hi):
        hit = checker.run(cfg, k)
        if hit is not None:
            return k, hit
    return None


def run_sampler(checker: Checker, cfg: SampleConfig, directed: Sequence = (), threads: int = 1) -> Verdict:
    """Directed candidates first, then ``cfg.count`` seeded samples; first violation wins."""
    for k, cand in enumerate(directed):
        hit = checker.check(cand)
        if hit is not None:
            return Verdict(False, k + 1, hit[0], hit[1], k, "directed")
    base = len(directed)
    if threads <= 1:
        found = _run_range((checker, cfg, 0, cfg.count))
    else:
        chunk = max(1, -(-cfg.count // (threads * 4)))
        jobs = [(checker, cfg, lo, min(lo + chunk, cfg.count)) for lo in range(0, cfg.count, chunk)]
        found = None
        with ProcessPoolExecutor(max_workers=threads) as ex:
            for res in ex.map(_run_range, jobs):
                if res is not None:
                    found = res
                    break
    if found is None:
        return Verdict(True, base + cfg.count)
    k, (wit, val) = found
    return Verdict(False, base + k + 1, wit, val, base + k, "random")


class NonnegChecker(Checker):
    def __init__(self, p: Polynomial, positive: bool = False):
        self.p = p
        self.positive = positive

    def draw(self, rng, cfg):
        return random_vector(rng, len(self.p.layout), cfg.bound, self.positive or cfg.positivity)

    def check(self, x):
        v = evaluate(self.p, x)
        return ({"x": list(x)}, v) if v < 0 else None


class HyperbolicityChecker(Checker):
    def __init__(self, p: Polynomial, e: Sequence):
        self.p = p
        self.e = [Fraction(c) for c in e]

    def draw(self, rng, cfg):
        return random_vector(rng, len(self.p.layout), cfg.bound, cfg.positivity)

    def check(self, x):
        q = line_restriction(self.p, self.e, x)
        if not q or not sturm_real_rooted(q):
            return {"x": list(x)}, q
        return None


class StabilityChecker(Checker):
    def __init__(self, p: Polynomial):
        self.p = p

    def draw(self, rng, cfg):
        n = len(self.p.layout)
        return random_vector(rng, n, cfg.bound, True), random_vector(rng, n, cfg.bound)

    def check(self, cand):
        a, b = cand
        if any(x <= 0 for x in a):
            raise ValueError("stability directions must be strictly positive")
        q = line_restriction(self.p, a, b)
        if not q or not sturm_real_rooted(q):
            return {"a": list(a), "b": list(b)}, q
        return None


class ConvexityChecker(Checker):
    def __init__(self, f: Polynomial):
        from .hyperbolic import hessian

        self.f = f
        self.H = hessian(f)

    def draw(self, rng, cfg):
        n = len(self.f.layout)
        return random_vector(rng, n, cfg.bound, cfg.positivity), random_vector(rng, n, cfg.bound)

    def check(self, cand):
        x, z = cand
        H = self.H.at(x)
        v = sum(z[i] * H[i][j] * z[j] for i in range(len(z)) for j in range(len(z)))
        return ({"x": list(x), "z": list(z)}, v) if v < 0 else None


class ChainChecker(Checker):
    """Random chains ``y_0..y_m``, ``z_0..z_m``; a violation falsifies the chain lemma."""

    def __init__(self, m: int):
        self.m = m

    def draw(self, rng, cfg):
        m = self.m
        if rng.random() < 0.5:
            ys = [random_rational(rng, cfg.bound) for _ in range(m + 1)]
            zs = [random_rational(rng, cfg.bound) for _ in range(m + 1)]
            return ys, zs
        # exact chain y_{k+1} = y_k z_k, z_k = y_k, perturbed at the scale of y_m
        y0 = Fraction(rng.randint(1, 99), 200)
        exact = [y0]
        for _ in range(m):
            exact.append(exact[-1] ** 2)
        scale = exact[-1] / rng.choice((10, 30, 60, 100, 300))

        def jitter():
            return scale * Fraction(rng.randint(-100, 100), 100)

        ys = [exact[0]] + [y + jitter() for y in exact[1:]]
        zs = [y + jitter() for y in exact]
        return ys, zs

    def check(self, cand):
        from .biquadratic import check_chain

        ys, zs = cand
        res = check_chain(ys, zs)
        return None if res.consistent else ({"ys": list(ys), "zs": list(zs)}, res.lhs)


def sample_nonneg(p: Polynomial, cfg: SampleConfig, region: str = "all", directed: Sequence = (),
                  threads: int = 1) -> Verdict:
    if region not in ("all", "positiveOrthant"):
        raise ValueError(f"unknown region {region!r}")
    return run_sampler(NonnegChecker(p, region == "positiveOrthant"), cfg, directed, threads)


def sample_hyperbolicity(p: Polynomial, e: Sequence, cfg: SampleConfig, directed: Sequence = (),
                         threads: int = 1) -> Verdict:
    pe = evaluate(p, e)
    if not pe > 0:
        return Verdict(False, 0, {"e": list(e)}, pe, -1, "p(e) <= 0")
    return run_sampler(HyperbolicityChecker(p, e), cfg, directed, threads)


def sample_real_stability(p: Polynomial, cfg: SampleConfig, directed: Sequence = (),
                          threads: int = 1) -> Verdict:
    return run_sampler(StabilityChecker(p), cfg, directed, threads)


def sample_convexity(f: Polynomial, cfg: SampleConfig, directed: Sequence = (), threads: int = 1) -> Verdict:
    return run_sampler(ConvexityChecker(f), cfg, directed, threads)


def sample_chain(m: int, cfg: SampleConfig, threads: int = 1) -> Verdict:
    return run_sampler(ChainChecker(m), cfg, (), threads)
