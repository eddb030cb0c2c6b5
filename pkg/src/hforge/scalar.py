"""Exact arithmetic in imaginary quadratic fields Q(i*sqrt(d)).

A :class:`QuadExtScalar` is ``x + y*i*sqrt(d)`` with rational ``x, y`` and a
squarefree radicand ``d``.  Every entry value produced by the constructions
(``a``, ``b``, ``c``, ``omega``) lives in one such field.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from sympy import factorint

Rational = Fraction
Number = Union[int, Fraction, "QuadExtScalar"]


class MixedRadicand(ValueError):
    """Binary operation on scalars from two different quadratic fields."""


@lru_cache(maxsize=4096)
def _split_square(n: int) -> tuple[int, int]:
    """Return ``(s, r)`` with ``n = s**2 * r`` and ``r`` squarefree."""
    if n == 1:
        return 1, 1
    s, r = 1, 1
    for prime, e in factorint(n).items():
        s *= prime ** (e // 2)
        if e % 2:
            r *= prime
    return s, r


def normalize_radicand(x, y, d: int) -> "QuadExtScalar":
    """Canonical scalar for ``x + y*i*sqrt(d)``; pulls square factors of ``d`` into ``y``."""
    if d < 1:
        raise ValueError(f"radicand must be positive, got {d}")
    x, y = Fraction(x), Fraction(y)
    s, r = _split_square(int(d))
    y *= s
    if y == 0:
        r = 1
    return QuadExtScalar._raw(x, y, r)


@dataclass(frozen=True, eq=True)
class QuadExtScalar:
    x: Fraction
    y: Fraction = Fraction(0)
    d: int = 1

    def __post_init__(self):
        # route every public construction through canonicalization
        if not (type(self.x) is Fraction and type(self.y) is Fraction):
            c = normalize_radicand(self.x, self.y, self.d)
        elif self.y == 0 and self.d != 1:
            c = QuadExtScalar._raw(self.x, self.y, 1)
        elif self.d != 1 and _split_square(self.d)[0] != 1:
            c = normalize_radicand(self.x, self.y, self.d)
        else:
            return
        object.__setattr__(self, "x", c.x)
        object.__setattr__(self, "y", c.y)
        object.__setattr__(self, "d", c.d)

    @classmethod
    def _raw(cls, x: Fraction, y: Fraction, d: int) -> "QuadExtScalar":
        obj = object.__new__(cls)
        object.__setattr__(obj, "x", x)
        object.__setattr__(obj, "y", y)
        object.__setattr__(obj, "d", d)
        return obj

    # -- coercion ---------------------------------------------------------
    @staticmethod
    def coerce(v) -> "QuadExtScalar":
        if isinstance(v, QuadExtScalar):
            return v
        if isinstance(v, (int, Fraction)):
            return QuadExtScalar._raw(Fraction(v), Fraction(0), 1)
        raise TypeError(f"cannot coerce {type(v).__name__} to QuadExtScalar")

    def _common(self, other: "QuadExtScalar") -> int:
        if self.y == 0:
            return other.d
        if other.y == 0 or other.d == self.d:
            return self.d
        raise MixedRadicand(f"Q(i*sqrt({self.d})) vs Q(i*sqrt({other.d}))")

    # -- field operations -------------------------------------------------
    def __add__(self, other):
        try:
            o = QuadExtScalar.coerce(other)
        except TypeError:
            return NotImplemented
        d = self._common(o)
        y = self.y + o.y
        return QuadExtScalar._raw(self.x + o.x, y, d if y else 1)

    __radd__ = __add__

    def __neg__(self):
        return QuadExtScalar._raw(-self.x, -self.y, self.d)

    def __sub__(self, other):
        try:
            o = QuadExtScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = QuadExtScalar.coerce(other)
        except TypeError:
            return NotImplemented
        d = self._common(o)
        x = self.x * o.x - d * self.y * o.y
        y = self.x * o.y + self.y * o.x
        return QuadExtScalar._raw(x, y, d if y else 1)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadExtScalar":
        return QuadExtScalar._raw(self.x, -self.y, self.d)

    conj = conjugate

    def norm(self) -> Fraction:
        """``|z|**2``, always rational."""
        return self.x * self.x + self.d * self.y * self.y

    def __truediv__(self, other):
        try:
            o = QuadExtScalar.coerce(other)
        except TypeError:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero scalar")
        num = self * o.conjugate()
        return QuadExtScalar._raw(num.x / n, num.y / n, num.d)

    def __rtruediv__(self, other):
        return QuadExtScalar.coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return (QuadExtScalar.coerce(1) / self) ** (-k)
        result, base = QuadExtScalar.coerce(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.y == 0 and self.x == other
        if isinstance(other, QuadExtScalar):
            return self.x == other.x and self.y == other.y and self.d == other.d
        return NotImplemented

    def __hash__(self):
        return hash((self.x, self.y, self.d))

    def __bool__(self):
        return bool(self.x) or bool(self.y)

    @property
    def real(self) -> Fraction:
        return self.x

    def is_real(self) -> bool:
        return self.y == 0

    def __complex__(self):
        return complex(float(self.x), float(self.y) * math.sqrt(self.d))

    def sort_key(self) -> tuple:
        return (self.d, self.x, self.y)

    # -- text forms -------------------------------------------------------
    def __str__(self) -> str:
        return format_scalar(self)

    def __repr__(self) -> str:
        return f"QuadExtScalar({format_scalar(self)!r})"

    def to_json(self) -> dict:
        return {"x": format_rational(self.x), "y": format_rational(self.y), "d": self.d}

    @classmethod
    def from_json(cls, obj: dict, d: int | None = None) -> "QuadExtScalar":
        dd = obj.get("d", d if d is not None else 1)
        return normalize_radicand(parse_rational(obj["x"]), parse_rational(obj.get("y", "0")), int(dd))


def qext(x, y=0, d: int = 1) -> QuadExtScalar:
    return normalize_radicand(x, y, d)


def qext_arith(a, b, op: str) -> QuadExtScalar:
    """Dispatch one of ``add, sub, mul, div, conj, neg``; ``b`` is ignored for unary ops."""
    a = QuadExtScalar.coerce(a)
    if op == "conj":
        return a.conjugate()
    if op == "neg":
        return -a
    b = QuadExtScalar.coerce(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def abs_squared(z) -> Fraction:
    if isinstance(z, QuadExtScalar):
        return z.norm()
    return Fraction(z) ** 2


def to_float(z) -> complex:
    if isinstance(z, QuadExtScalar):
        return complex(float(z.x), float(z.y) * math.sqrt(z.d)) if z.y else complex(float(z.x), 0.0)
    return complex(z)


def format_rational(r: Fraction) -> str:
    return f"{r.numerator}/{r.denominator}"


def parse_rational(s) -> Fraction:
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    return Fraction(str(s).strip())


def _rational_text(r: Fraction) -> str:
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


def format_scalar(z: QuadExtScalar) -> str:
    """Render as ``"x + y*i*sqrt(d)"`` (``"x"`` when real)."""
    if z.y == 0:
        return _rational_text(z.x)
    sign = "+" if z.y > 0 else "-"
    return f"{_rational_text(z.x)} {sign} {_rational_text(abs(z.y))}*i*sqrt({z.d})"


_SCALAR_RE = re.compile(
    r"^\s*(?P<x>[-+]?\d+(?:/\d+)?)\s*(?:(?P<s>[-+])\s*(?P<y>\d+(?:/\d+)?)\s*\*\s*i\s*\*\s*sqrt\(\s*(?P<d>\d+)\s*\))?\s*$"
)


def parse_scalar(s: str) -> QuadExtScalar:
    m = _SCALAR_RE.match(s)
    if not m:
        raise ValueError(f"not a scalar: {s!r}")
    x = Fraction(m["x"])
    if m["y"] is None:
        return qext(x)
    y = Fraction(m["y"])
    return qext(x, y if m["s"] == "+" else -y, int(m["d"]))


def surd(r: Fraction) -> str:
    """Surd text for ``sqrt(r)``: ``"2"``, ``"√3"``, ``"2√3"``, ``"√7/2"``."""
    r = Fraction(r)
    if r < 0:
        raise ValueError("negative radicand")
    if r == 0:
        return "0"
    s, t = _split_square(r.numerator * r.denominator)
    coeff = Fraction(s, r.denominator)
    if t == 1:
        return _rational_text(coeff)
    head = "" if coeff.numerator == 1 else str(coeff.numerator)
    tail = "" if coeff.denominator == 1 else f"/{coeff.denominator}"
    return f"{head}√{t}{tail}"


# Unimodular numbers that are roots of unity in some Q(i*sqrt(d)): orders 1, 2, 3, 4, 6.
_HALF = Fraction(1, 2)
ROOTS_OF_UNITY = {
    QuadExtScalar._raw(Fraction(1), Fraction(0), 1): 1,
    QuadExtScalar._raw(Fraction(-1), Fraction(0), 1): 2,
    QuadExtScalar._raw(-_HALF, _HALF, 3): 3,
    QuadExtScalar._raw(-_HALF, -_HALF, 3): 3,
    QuadExtScalar._raw(Fraction(0), Fraction(1), 1): 4,
    QuadExtScalar._raw(Fraction(0), Fraction(-1), 1): 4,
    QuadExtScalar._raw(_HALF, _HALF, 3): 6,
    QuadExtScalar._raw(_HALF, -_HALF, 3): 6,
}


def root_of_unity_order(z: QuadExtScalar) -> int | None:
    return ROOTS_OF_UNITY.get(z)
