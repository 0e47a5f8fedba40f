"""Sparse multivariate polynomials with exact coefficients.

A monomial is stored as a tuple of ``(variable index, exponent)`` pairs with
strictly increasing indices and positive exponents; the empty tuple is the
constant monomial.  A polynomial maps monomials to nonzero coefficients.
Dense exponent vectors are only used at the import/export boundary.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence

from .field import QQ, Field, Number

Monomial = tuple  # tuple[tuple[int, int], ...]


class LayoutError(ValueError):
    """Raised when operands disagree on field or variable layout."""


# ---------------------------------------------------------------------------
# monomials


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for i, e in b:
        d[i] = d.get(i, 0) + e
    return tuple(sorted(d.items()))


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def mono_from_exps(exps: Sequence[int]) -> Monomial:
    return tuple((i, e) for i, e in enumerate(exps) if e)


def mono_to_exps(m: Monomial, n: int) -> list[int]:
    out = [0] * n
    for i, e in m:
        out[i] = e
    return out


def _grlex_key(m: Monomial):
    # larger key = earlier in graded-lex order (x_0 > x_1 > ...)
    return (mono_degree(m), tuple((-i, e) for i, e in m))


# ---------------------------------------------------------------------------
# layouts


class VariableLayout:
    """Ordered, duplicate-free variable names with a reverse index."""

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str]):
        names = tuple(str(n) for n in names)
        index = {n: i for i, n in enumerate(names)}
        if len(index) != len(names):
            seen = set()
            dup = next(n for n in names if n in seen or seen.add(n))
            raise ValueError(f"duplicate variable name {dup!r}")
        self.names = names
        self._index = index

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise LayoutError(f"unknown variable {name!r}") from None

    def __contains__(self, name) -> bool:
        return name in self._index

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __getitem__(self, i):
        return self.names[i]

    def __eq__(self, other):
        return isinstance(other, VariableLayout) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"VariableLayout({list(self.names)!r})"

    def __getstate__(self):
        return self.names

    def __setstate__(self, names):
        self.__init__(names)

    def extend(self, more: Iterable[str]) -> "VariableLayout":
        return VariableLayout(self.names + tuple(more))


# ---------------------------------------------------------------------------
# polynomials


def _fmt_coeff(c) -> str:
    return str(c)


class Polynomial:
    """Immutable sparse polynomial over ``field`` in the variables of ``layout``."""

    __slots__ = ("field", "layout", "terms")

    def __init__(self, field: Field, layout: VariableLayout,
                 terms: Mapping[Monomial, Number] | None = None):
        red = field.reduce
        clean = {}
        n = len(layout)
        for m, c in (terms or {}).items():
            c = red(c)
            if c == 0:
                continue
            m = tuple(m)
            for i, e in m:
                if not (0 <= i < n) or e <= 0:
                    raise LayoutError(f"bad monomial {m!r} for layout of size {n}")
            clean[m] = red(clean.get(m, 0) + c)
            if clean[m] == 0:
                del clean[m]
        self.field = field
        self.layout = layout
        self.terms = clean

    @classmethod
    def _make(cls, field, layout, terms):
        # trusted constructor: terms already canonical and owned by us
        p = cls.__new__(cls)
        p.field = field
        p.layout = layout
        p.terms = terms
        return p

    @classmethod
    def zero(cls, field: Field, layout: VariableLayout) -> "Polynomial":
        return cls._make(field, layout, {})

    @classmethod
    def constant(cls, field: Field, layout: VariableLayout, c) -> "Polynomial":
        c = field.reduce(c)
        return cls._make(field, layout, {(): c} if c != 0 else {})

    @classmethod
    def var(cls, field: Field, layout: VariableLayout, name: str) -> "Polynomial":
        return cls._make(field, layout, {((layout.index(name), 1),): 1})

    @classmethod
    def from_exps(cls, field, layout, pairs: Iterable[tuple[Sequence[int], Number]]):
        terms = {}
        n = len(layout)
        for exps, c in pairs:
            if len(exps) != n:
                raise LayoutError(f"exponent vector of length {len(exps)}, layout has {n}")
            m = mono_from_exps(exps)
            terms[m] = terms.get(m, 0) + c
        return cls(field, layout, terms)

    # -- basic queries -----------------------------------------------------

    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((mono_degree(m) for m in self.terms), default=-1)

    def degree_in(self, indices) -> int:
        idx = set(indices)
        return max((sum(e for i, e in m if i in idx) for m in self.terms), default=-1)

    def constant_term(self) -> Number:
        return self.terms.get((), 0)

    def coefficient(self, exps_or_mono) -> Number:
        m = exps_or_mono
        if m and not isinstance(m[0], tuple):
            m = mono_from_exps(m)
        return self.terms.get(tuple(m), 0)

    def is_homogeneous(self, degree: int | None = None) -> bool:
        degs = {mono_degree(m) for m in self.terms}
        if degree is not None:
            return degs <= {degree}
        return len(degs) <= 1

    def variables(self) -> list[str]:
        used = sorted({i for m in self.terms for i, _ in m})
        return [self.layout.names[i] for i in used]

    def sorted_terms(self) -> list[tuple[Monomial, Number]]:
        """Terms in graded-lex order, leading term first."""
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def homogeneous_component(self, d: int) -> "Polynomial":
        return Polynomial._make(self.field, self.layout,
                                {m: c for m, c in self.terms.items() if mono_degree(m) == d})

    def max_abs_coefficient(self):
        if self.field.is_prime_field:
            raise ValueError("absolute values need rational coefficients")
        return max((abs(c) for c in self.terms.values()), default=0)

    def __call__(self, point):
        return evaluate(self, point)

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "Polynomial"):
        if self.field != other.field:
            raise LayoutError(f"field mismatch: {self.field!r} vs {other.field!r}")
        if self.layout is not other.layout and self.layout != other.layout:
            raise LayoutError("layout mismatch")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.field, self.layout, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        red = self.field.reduce
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = red(out.get(m, 0) + c)
            if v == 0:
                out.pop(m, None)
            else:
                out[m] = v
        return Polynomial._make(self.field, self.layout, out)

    __radd__ = __add__

    def __neg__(self):
        red = self.field.reduce
        return Polynomial._make(self.field, self.layout,
                                {m: red(-c) for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, k) -> "Polynomial":
        red = self.field.reduce
        k = red(k)
        if k == 0:
            return Polynomial.zero(self.field, self.layout)
        return Polynomial._make(self.field, self.layout,
                                {m: red(c * k) for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial._make(self.field, self.layout,
                                _mul_terms(self.terms, other.terms, self.field.reduce))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a nonnegative int")
        result = Polynomial.constant(self.field, self.layout, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.field, self.layout, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return (self.field == other.field and self.layout == other.layout
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.field, self.layout, frozenset(self.terms.items())))

    def __repr__(self):
        return f"Polynomial({self.field!r}, {self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        names = self.layout.names
        for m, c in self.sorted_terms():
            factors = [names[i] if e == 1 else f"{names[i]}^{e}" for i, e in m]
            if not factors:
                parts.append(_fmt_coeff(c))
            elif c == 1:
                parts.append("*".join(factors))
            elif c == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(f"{_fmt_coeff(c)}*" + "*".join(factors))
        return " + ".join(parts).replace("+ -", "- ")

    def __getstate__(self):
        return (self.field, self.layout, self.terms)

    def __setstate__(self, state):
        self.field, self.layout, self.terms = state


def _mul_terms(a: dict, b: dict, red) -> dict:
    if len(a) < len(b):
        a, b = b, a
    out: dict = {}
    get = out.get
    for mb, cb in b.items():
        if not mb:
            for ma, ca in a.items():
                out[ma] = get(ma, 0) + ca * cb
            continue
        db = dict(mb)
        for ma, ca in a.items():
            if ma:
                d = dict(ma)
                for i, e in db.items():
                    d[i] = d.get(i, 0) + e
                m = tuple(sorted(d.items()))
            else:
                m = mb
            out[m] = get(m, 0) + ca * cb
    res = {}
    for m, c in out.items():
        c = red(c)
        if c != 0:
            res[m] = c
    return res


class PolySystem:
    """Ordered polynomials sharing one field and layout (conjunction of ``= 0``)."""

    __slots__ = ("field", "layout", "polys")

    def __init__(self, field: Field, layout: VariableLayout, polys: Iterable[Polynomial] = ()):
        polys = tuple(polys)
        for p in polys:
            if p.field != field:
                raise LayoutError("system member has a different field")
            if p.layout != layout:
                raise LayoutError("system member has a different layout")
        self.field = field
        self.layout = layout
        self.polys = polys

    def __len__(self):
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def __getitem__(self, i):
        return self.polys[i]

    def __eq__(self, other):
        return (isinstance(other, PolySystem) and self.field == other.field
                and self.layout == other.layout and self.polys == other.polys)

    def __repr__(self):
        body = ", ".join(str(p) for p in self.polys)
        return f"PolySystem({self.field!r}, [{body}])"

    def degree(self) -> int:
        return max((p.degree() for p in self.polys), default=-1)

    def is_solution(self, point) -> bool:
        return all(evaluate(p, point) == 0 for p in self.polys)

    def __getstate__(self):
        return (self.field, self.layout, self.polys)

    def __setstate__(self, state):
        self.field, self.layout, self.polys = state


# ---------------------------------------------------------------------------
# operations


def add(a: Polynomial, b: Polynomial) -> Polynomial:
    a._check(b)
    return a + b


def mul(a: Polynomial, b: Polynomial) -> Polynomial:
    a._check(b)
    return a * b


def monomial_count(p: Polynomial) -> int:
    return len(p.terms)


def _point_values(p: Polynomial, point) -> list:
    n = len(p.layout)
    if isinstance(point, Mapping):
        vals = [0] * n
        for name, v in point.items():
            vals[p.layout.index(name)] = v
        return [p.field.reduce(v) for v in vals]
    point = list(point)
    if len(point) != n:
        raise LayoutError(f"point has {len(point)} coordinates, layout has {n}")
    return [p.field.reduce(v) for v in point]


def evaluate(p: Polynomial, point) -> Number:
    """Exact value at ``point`` (a sequence aligned with the layout or a name map).

    Variables missing from a name map are taken to be zero.
    """
    vals = _point_values(p, point)
    total = 0
    for m, c in p.terms.items():
        v = c
        for i, e in m:
            v = v * vals[i] ** e
        total += v
    return p.field.reduce(total)


def embed(p: Polynomial, layout: VariableLayout, rename: Mapping[str, str] | None = None) -> Polynomial:
    """Re-express ``p`` over ``layout``, mapping variables by (optionally renamed) name."""
    rename = rename or {}
    src = p.layout.names
    target = [layout.index(rename.get(n, n)) for n in src]
    terms = {}
    for m, c in p.terms.items():
        terms[tuple(sorted((target[i], e) for i, e in m))] = c
    return Polynomial._make(p.field, layout, terms)


def substitute_values(p: Polynomial, values: Mapping[str, Number]) -> Polynomial:
    """Partially evaluate: set the named variables to constants, keep the layout."""
    red = p.field.reduce
    fixed = {p.layout.index(k): red(v) for k, v in values.items()}
    out: dict = {}
    for m, c in p.terms.items():
        keep = []
        for i, e in m:
            if i in fixed:
                c = c * fixed[i] ** e
            else:
                keep.append((i, e))
        k = tuple(keep)
        out[k] = out.get(k, 0) + c
    return Polynomial(p.field, p.layout, out)


def shift_substitute(p: Polynomial, offset: Sequence) -> Polynomial:
    """Return ``p(x + offset)``."""
    n = len(p.layout)
    if len(offset) != n:
        raise LayoutError(f"offset has length {len(offset)}, layout has {n}")
    red = p.field.reduce
    off = [red(a) for a in offset]
    out: dict = {}
    for m, c in p.terms.items():
        partial = [((), c)]
        for i, e in m:
            a = off[i]
            if a == 0:
                partial = [(pm + ((i, e),), pc) for pm, pc in partial]
                continue
            # (x_i + a)^e = sum_k C(e,k) a^(e-k) x_i^k
            factors = [(k, comb(e, k) * a ** (e - k)) for k in range(e + 1)]
            partial = [(pm + ((i, k),) if k else pm, pc * fk)
                       for pm, pc in partial for k, fk in factors]
        for pm, pc in partial:
            out[pm] = out.get(pm, 0) + pc
    res = {}
    for m, c in out.items():
        c = red(c)
        if c != 0:
            res[m] = c
    return Polynomial._make(p.field, p.layout, res)


def affine_substitute(p: Polynomial, forms: Sequence[Polynomial],
                      layout: VariableLayout | None = None) -> Polynomial:
    """Compose ``p`` with affine forms: variable ``i`` of ``p`` becomes ``forms[i]``.

    All forms must share a field and layout (``layout`` is only needed when
    ``forms`` is empty).
    """
    if len(forms) != len(p.layout):
        raise LayoutError(f"{len(forms)} forms given for {len(p.layout)} variables")
    if forms:
        layout = forms[0].layout
    elif layout is None:
        layout = VariableLayout(())
    for f in forms:
        if f.field != p.field:
            raise LayoutError("form over a different field")
        if f.layout != layout:
            raise LayoutError("forms must share one layout")
        if f.degree() > 1:
            raise ValueError(f"form {f} has degree > 1")
    red = p.field.reduce
    # Monomials of the target are packed into ints with `width` bits per
    # exponent; no exponent can exceed deg(p), so products never carry.
    width = max(p.degree(), 1).bit_length() + 1
    packed_forms = [{sum(e << (width * i) for i, e in m): c for m, c in f.terms.items()}
                    for f in forms]
    cache: dict = {}

    def power(i, e):
        key = (i, e)
        if key not in cache:
            if e == 1:
                cache[key] = packed_forms[i]
            else:
                half = power(i, e // 2)
                sq = _mul_packed(half, half, red)
                cache[key] = _mul_packed(sq, packed_forms[i], red) if e & 1 else sq
        return cache[key]

    out: dict = {}
    for m, c in p.terms.items():
        acc = {0: c}
        for i, e in m:
            acc = _mul_packed(acc, power(i, e), red)
            if not acc:
                break
        for mm, cc in acc.items():
            out[mm] = out.get(mm, 0) + cc
    mask = (1 << width) - 1
    nvars = len(layout)
    res = {}
    for key, c in out.items():
        c = red(c)
        if c != 0:
            mono = []
            i = 0
            while key:
                e = key & mask
                if e:
                    mono.append((i, e))
                key >>= width
                i += 1
            assert i <= nvars
            res[tuple(mono)] = c
    return Polynomial._make(p.field, layout, res)


def _mul_packed(a: dict, b: dict, red) -> dict:
    out: dict = {}
    get = out.get
    for mb, cb in b.items():
        for ma, ca in a.items():
            k = ma + mb
            out[k] = get(k, 0) + ca * cb
    res = {}
    for k, c in out.items():
        c = red(c)
        if c != 0:
            res[k] = c
    return res


def partial_derivative(p: Polynomial, var: str) -> Polynomial:
    k = p.layout.index(var)
    red = p.field.reduce
    out = {}
    for m, c in p.terms.items():
        for pos, (i, e) in enumerate(m):
            if i == k:
                c2 = red(c * e)
                if c2 != 0:
                    nm = m[:pos] + (((i, e - 1),) if e > 1 else ()) + m[pos + 1:]
                    out[nm] = c2
                break
    return Polynomial._make(p.field, p.layout, out)


def _check_partition(layout: VariableLayout, part_a, part_b, cover=True):
    a, b = set(part_a), set(part_b)
    if a & b:
        raise ValueError(f"parts overlap on {sorted(a & b)}")
    for name in a | b:
        layout.index(name)
    if cover and a | b != set(layout.names):
        missing = sorted(set(layout.names) - a - b)
        raise ValueError(f"partition does not cover the layout; missing {missing}")
    return {layout.index(x) for x in a}, {layout.index(x) for x in b}


def homogenize_bipartite(h: Polynomial, part_a, part_b, hvar_a: str, hvar_b: str) -> Polynomial:
    """Bi-homogenize a semi-biquadratic ``h`` to a biquadratic form.

    Each monomial ``m`` is multiplied by ``hvar_a^(2-deg_A m) * hvar_b^(2-deg_B m)``.
    The new variables are appended to the layout.
    """
    for v in (hvar_a, hvar_b):
        if v in h.layout:
            raise ValueError(f"homogenizing variable {v!r} already in layout")
    used = set(h.variables())
    ia, ib = _check_partition(h.layout, part_a, part_b, cover=False)
    stray = used - set(part_a) - set(part_b)
    if stray:
        raise ValueError(f"variables {sorted(stray)} are in neither part")
    layout = h.layout.extend([hvar_a, hvar_b])
    ka, kb = len(h.layout), len(h.layout) + 1
    out = {}
    for m, c in h.terms.items():
        da = sum(e for i, e in m if i in ia)
        db = sum(e for i, e in m if i in ib)
        if da > 2 or db > 2:
            raise ValueError(f"monomial of degree ({da},{db}) exceeds 2 on a side")
        extra = tuple((k, 2 - d) for k, d in ((ka, da), (kb, db)) if d < 2)
        out[m + extra] = c
    return Polynomial._make(h.field, layout, out)


def is_biquadratic(q: Polynomial, part_a, part_b) -> bool:
    ia, ib = _check_partition(q.layout, part_a, part_b)
    for m in q.terms:
        da = sum(e for i, e in m if i in ia)
        db = sum(e for i, e in m if i in ib)
        if da != 2 or db != 2:
            return False
    return True


def is_semi_biquadratic(h: Polynomial, part_a, part_b) -> bool:
    ia, ib = _check_partition(h.layout, part_a, part_b, cover=False)
    return all(sum(e for i, e in m if i in ia) <= 2 and sum(e for i, e in m if i in ib) <= 2
               for m in h.terms)


def complex_split(p: Polynomial, real_vars: Sequence[str] | None = None,
                  imag_vars: Sequence[str] | None = None) -> tuple[Polynomial, Polynomial]:
    """Real and imaginary parts of ``p(x + i y)`` as polynomials in ``(x, y)``.

    ``real_vars`` default to the layout names of ``p``; ``imag_vars`` default to
    those names with an ``im.`` prefix.
    """
    if p.field != QQ:
        raise ValueError("complex_split needs rational coefficients")
    n = len(p.layout)
    real_vars = list(p.layout.names if real_vars is None else real_vars)
    imag_vars = list(["im." + v for v in p.layout.names] if imag_vars is None else imag_vars)
    if len(real_vars) != n or len(imag_vars) != n:
        raise LayoutError("need one real and one imaginary variable per variable of p")
    layout = VariableLayout(real_vars + imag_vars)
    # i^j cycles through 1, i, -1, -i
    unit = [(1, 0), (0, 1), (-1, 0), (0, -1)]
    re: dict = {}
    im: dict = {}
    for m, c in p.terms.items():
        partial = [((), c, 0)]  # monomial, real coefficient, power of i
        for i, e in m:
            partial = [(pm + tuple(t for t in ((i, e - j), (n + i, j)) if t[1]), pc * comb(e, j), pk + j)
                       for pm, pc, pk in partial for j in range(e + 1)]
        for pm, pc, pk in partial:
            pm = tuple(sorted(pm))
            ur, ui = unit[pk % 4]
            if ur:
                re[pm] = re.get(pm, 0) + ur * pc
            if ui:
                im[pm] = im.get(pm, 0) + ui * pc
    return Polynomial(QQ, layout, re), Polynomial(QQ, layout, im)


# ---------------------------------------------------------------------------
# dense conversion


def dense_monomials(n: int, d: int) -> list[tuple[int, ...]]:
    """All exponent vectors of total degree <= d in n variables, graded-lex order."""
    def of_degree(k, nvars):
        if nvars == 0:
            if k == 0:
                yield ()
            return
        for first in range(k, -1, -1):
            for rest in of_degree(k - first, nvars - 1):
                yield (first,) + rest

    out = []
    for k in range(d, -1, -1):
        out.extend(of_degree(k, n))
    return out


def to_dense(p: Polynomial, d: int | None = None) -> list:
    d = max(p.degree(), 0) if d is None else d
    if p.degree() > d:
        raise ValueError(f"polynomial of degree {p.degree()} does not fit degree {d}")
    n = len(p.layout)
    return [p.terms.get(mono_from_exps(e), 0) for e in dense_monomials(n, d)]


def from_dense(field: Field, layout: VariableLayout, d: int, coeffs: Sequence) -> Polynomial:
    exps = dense_monomials(len(layout), d)
    if len(coeffs) != len(exps):
        raise ValueError(f"expected {len(exps)} dense coefficients, got {len(coeffs)}")
    return Polynomial.from_exps(field, layout, zip(exps, coeffs))
