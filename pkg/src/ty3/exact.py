"""Exact scalars: rationals and the central polynomial ring Q[x].

Rationals are ``fractions.Fraction``; Python ints are accepted everywhere a
Rational is and are the fast path used by the straightening kernel.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import comb
from typing import Dict, Iterable, Mapping, Union

Rational = Fraction
Scalar = Union[int, Fraction]

__all__ = [
    "Rational",
    "Scalar",
    "ScalarPoly",
    "normalize",
    "rational_arith",
    "poly_arith",
    "format_rational",
    "parse_rational",
    "binomial",
    "signed_binomial_weight",
]


def normalize(c: Scalar) -> Scalar:
    """Collapse an integral Fraction to int; leave everything else alone."""
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def rational_arith(a: Scalar, b: Scalar, op: str) -> Fraction:
    a, b = Fraction(a), Fraction(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b == 0:
            raise ZeroDivisionError("rational division by zero")
        return a / b
    raise ValueError(f"unknown op {op!r}")


def format_rational(c: Scalar) -> str:
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


_RAT_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Scalar:
    m = _RAT_RE.match(text)
    if not m:
        raise ValueError(f"not a rational: {text!r}")
    num = int(m.group(1))
    if m.group(2) is None:
        return num
    den = int(m.group(2))
    if den == 0:
        raise ZeroDivisionError("zero denominator")
    return normalize(Fraction(num, den))


def binomial(n: int, k: int) -> int:
    if k < 0 or n < 0 or k > n:
        return 0
    return comb(n, k)


def signed_binomial_weight(r: int, s: int) -> int:
    """(-2)^s (-1)^(r-s) binom(r, s), the recurring coefficient of the
    Drinfeld relations."""
    return (-2) ** s * (-1) ** (r - s) * binomial(r, s)


class ScalarPoly:
    """Univariate polynomial over Q in the central variable ``x``.

    Immutable; zero coefficients are never stored.
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Union[Mapping[int, Scalar], Iterable[Scalar], Scalar, None] = None):
        c: Dict[int, Scalar] = {}
        if coeffs is None:
            pass
        elif isinstance(coeffs, (int, Fraction)):
            if coeffs:
                c[0] = normalize(coeffs)
        elif isinstance(coeffs, Mapping):
            for e, v in coeffs.items():
                if e < 0:
                    raise ValueError("negative exponent")
                if v:
                    c[int(e)] = normalize(v)
        else:
            for e, v in enumerate(coeffs):
                if v:
                    c[e] = normalize(v)
        self._c = c
        self._hash = None

    @classmethod
    def x(cls) -> "ScalarPoly":
        return cls({1: 1})

    @property
    def coeffs(self) -> Dict[int, Scalar]:
        return dict(self._c)

    def degree(self) -> int:
        return max(self._c) if self._c else -1

    def __getitem__(self, e: int) -> Scalar:
        return self._c.get(e, 0)

    def __bool__(self) -> bool:
        return bool(self._c)

    def _coerce(self, other) -> "ScalarPoly":
        if isinstance(other, ScalarPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return ScalarPoly(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c = dict(self._c)
        for e, v in other._c.items():
            c[e] = c.get(e, 0) + v
        return ScalarPoly(c)

    __radd__ = __add__

    def __neg__(self):
        return ScalarPoly({e: -v for e, v in self._c.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c: Dict[int, Scalar] = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                c[e1 + e2] = c.get(e1 + e2, 0) + v1 * v2
        return ScalarPoly(c)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ScalarPoly(other)
        if not isinstance(other, ScalarPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(sorted(self._c.items())))
        return self._hash

    def __repr__(self):
        return f"ScalarPoly({self})"

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for e in sorted(self._c):
            v = format_rational(self._c[e])
            if e == 0:
                parts.append(v)
            elif e == 1:
                parts.append(f"{v}*x")
            else:
                parts.append(f"{v}*x^{e}")
        return " + ".join(parts)

    @classmethod
    def parse(cls, text: str) -> "ScalarPoly":
        """Inverse of ``str``: ``"c0 + c1*x + c2*x^2"``."""
        text = text.strip()
        if text == "0":
            return cls()
        c: Dict[int, Scalar] = {}
        for part in text.split(" + "):
            part = part.strip()
            if "*x" in part:
                coef, _, power = part.partition("*x")
                e = int(power[1:]) if power.startswith("^") else 1
            else:
                coef, e = part, 0
            c[e] = c.get(e, 0) + parse_rational(coef)
        return cls(c)


def poly_arith(a: ScalarPoly, b: ScalarPoly, op: str) -> ScalarPoly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")
