"""JSON encoding of polynomials, systems, vectors and matrices.

Polynomial documents look like::

    {"field": {"kind": "prime", "p": 67}, "vars": ["x.1", "x.2"],
     "terms": [{"coeff": "-3", "exps": [2, 0]}, ...]}

Systems carry ``"polys"`` (a list of term lists) instead of ``"terms"``.
Coefficients are decimal strings, rationals as ``"num/den"``.  Wherever a
term list is expected, an expression string such as ``"x.1^2 - 3/2*x.2"``
is accepted too.
"""

from __future__ import annotations

import hashlib
import json
import re
from fractions import Fraction

from .field import Field
from .poly import Polynomial, PolySystem, VariableLayout, mono_to_exps


def terms_to_json(p: Polynomial) -> list[dict]:
    n = len(p.layout)
    return [{"coeff": p.field.format(c), "exps": mono_to_exps(m, n)} for m, c in p.sorted_terms()]


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z0-9_.]*)|(\*\*|[-+*^()]))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    out, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse {text[pos:pos + 10]!r} in polynomial expression")
        num, name, op = m.groups()
        out.append(("num", num) if num else ("name", name) if name else ("op", "^" if op == "**" else op))
        pos = m.end()
    return out


def parse_poly(text: str, field: Field, layout: VariableLayout) -> Polynomial:
    """Parse ``+ - * ^`` expressions with integer/rational literals and layout names."""
    toks = _tokenize(text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else ("end", "")

    def take(kind=None, val=None):
        nonlocal pos
        tok = peek()
        if (kind and tok[0] != kind) or (val and tok[1] != val):
            raise ValueError(f"unexpected {tok[1] or 'end of input'!r} in {text!r}")
        pos += 1
        return tok

    def expr():
        sign = -1 if peek() == ("op", "-") else 1
        if peek() in (("op", "-"), ("op", "+")):
            take()
        acc = term().scale(sign)
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            rhs = term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term():
        acc = power()
        while peek() == ("op", "*"):
            take()
            acc = acc * power()
        return acc

    def power():
        base = atom()
        if peek() == ("op", "^"):
            take()
            base = base ** int(take("num")[1])
        return base

    def atom():
        kind, val = peek()
        if kind == "num":
            take()
            return Polynomial.constant(field, layout, field.parse(val))
        if kind == "name":
            take()
            return Polynomial.var(field, layout, val)
        if (kind, val) == ("op", "("):
            take()
            inner = expr()
            take("op", ")")
            return inner
        if (kind, val) == ("op", "-"):
            take()
            return -atom()
        raise ValueError(f"unexpected {val or 'end of input'!r} in {text!r}")

    result = expr()
    if pos != len(toks):
        raise ValueError(f"trailing input {toks[pos][1]!r} in {text!r}")
    return result


def terms_from_json(field: Field, layout: VariableLayout, terms) -> Polynomial:
    if isinstance(terms, str):
        return parse_poly(terms, field, layout)
    pairs = []
    for t in terms:
        pairs.append((t["exps"], field.parse(str(t["coeff"]))))
    return Polynomial.from_exps(field, layout, pairs)


def poly_to_json(p: Polynomial) -> dict:
    return {"field": p.field.to_json(), "vars": list(p.layout.names), "terms": terms_to_json(p)}


def poly_from_json(obj: dict) -> Polynomial:
    field = Field.from_json(obj["field"])
    layout = VariableLayout(obj["vars"])
    return terms_from_json(field, layout, obj.get("terms", obj.get("poly")))


def system_to_json(s: PolySystem) -> dict:
    return {"field": s.field.to_json(), "vars": list(s.layout.names),
            "polys": [terms_to_json(p) for p in s.polys]}


def system_from_json(obj: dict) -> PolySystem:
    field = Field.from_json(obj["field"])
    layout = VariableLayout(obj["vars"])
    return PolySystem(field, layout, [terms_from_json(field, layout, t) for t in obj["polys"]])


def vector_to_json(field: Field, vec) -> list[str]:
    return [field.format(v) for v in vec]


def vector_from_json(field: Field, obj) -> list:
    return [field.parse(str(v)) for v in obj]


def matrix_to_json(field: Field, rows) -> list[list[str]]:
    return [vector_to_json(field, r) for r in rows]


def matrix_from_json(field: Field, obj) -> list[list]:
    return [vector_from_json(field, r) for r in obj]


def rationals_to_json(vec) -> list[str]:
    return [str(Fraction(v)) for v in vec]


def rationals_from_json(obj) -> list:
    return [Fraction(str(v)) for v in obj]


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()
