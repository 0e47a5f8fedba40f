"""Coefficient fields: prime fields GF(p) and the rationals.

Elements are plain Python numbers.  GF(p) residues are ints in ``[0, p)``;
rationals are ints when integral and :class:`fractions.Fraction` otherwise,
so that equal values always hash and compare identically.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator, Union

Number = Union[int, Fraction]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def _reduce_rational(x):
    if type(x) is int:
        return x
    x = Fraction(x)
    if x.denominator == 1:
        return x.numerator
    return x


class Field:
    """GF(p) when ``p`` is given, otherwise the field of rationals."""

    __slots__ = ("p", "reduce")

    def __init__(self, p: int | None = None):
        if p is not None:
            if not isinstance(p, int) or not is_prime(p):
                raise ValueError(f"GF(p) needs a prime modulus, got {p!r}")
            self.p = p
            self.reduce = self._reduce_mod
        else:
            self.p = None
            self.reduce = _reduce_rational

    def __reduce__(self):
        # the bound reducer is rebuilt rather than pickled
        return (Field, (self.p,))

    @classmethod
    def prime(cls, p: int) -> "Field":
        return cls(p)

    @classmethod
    def rationals(cls) -> "Field":
        return cls(None)

    @property
    def is_prime_field(self) -> bool:
        return self.p is not None

    def _reduce_mod(self, x):
        if type(x) is int:
            return x % self.p
        x = Fraction(x)
        return x.numerator * pow(x.denominator, -1, self.p) % self.p

    def __call__(self, x) -> Number:
        if isinstance(x, str):
            return self.parse(x)
        return self.reduce(x)

    def inv(self, x: Number) -> Number:
        x = self.reduce(x)
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p is not None:
            return pow(x, -1, self.p)
        return _reduce_rational(Fraction(1) / x)

    def div(self, a: Number, b: Number) -> Number:
        return self.reduce(a * self.inv(b))

    def parse(self, s: str) -> Number:
        return self.reduce(Fraction(s.strip()))

    def format(self, x: Number) -> str:
        x = self.reduce(x)
        return str(x)

    def elements(self) -> Iterator[int]:
        """Canonical enumeration ``0, 1, ..., p-1`` (prime fields only)."""
        if self.p is None:
            raise ValueError("the rationals cannot be enumerated")
        return iter(range(self.p))

    def nonzero_elements(self) -> Iterator[Number]:
        """Nonzero elements in canonical order: 1, 2, 3, ..."""
        k = 1
        while self.p is None or k < self.p:
            yield k
            k += 1

    def size(self) -> int | None:
        return self.p

    def to_json(self) -> dict:
        if self.p is None:
            return {"kind": "rationals"}
        return {"kind": "prime", "p": self.p}

    @classmethod
    def from_json(cls, obj: dict) -> "Field":
        kind = obj.get("kind")
        if kind in ("rationals", "rational", "QQ"):
            return cls(None)
        if kind == "prime":
            return cls(int(obj["p"]))
        raise ValueError(f"unknown field kind {kind!r}")

    def __eq__(self, other):
        return isinstance(other, Field) and self.p == other.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "QQ" if self.p is None else f"GF({self.p})"

    def __getstate__(self):
        return self.p

    def __setstate__(self, p):
        self.__init__(p)


QQ = Field.rationals()
