"""Small fields GF(p) and GF(p^2) with the quadratic character."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

from sympy import isprime


class NotPrime(ValueError):
    pass


@dataclass(frozen=True, order=True)
class FieldElem:
    coeffs: tuple[int, ...]  # constant term first

    def __repr__(self):
        return f"FieldElem{self.coeffs}"


@dataclass(frozen=True)
class PrimePowerField:
    p: int
    k: int
    modulus: tuple[int, ...] = field(default=(0,))  # monic, low-to-high, leading 1 omitted

    @property
    def q(self) -> int:
        return self.p**self.k

    def __len__(self) -> int:
        return self.q

    @cached_property
    def elements(self) -> tuple[FieldElem, ...]:
        # lexicographic on coeffs, constant term varying slowest
        return tuple(FieldElem(c) for c in product(range(self.p), repeat=self.k))

    @cached_property
    def index(self) -> dict[FieldElem, int]:
        return {e: i for i, e in enumerate(self.elements)}

    def elem(self, *coeffs: int) -> FieldElem:
        c = [x % self.p for x in coeffs] + [0] * (self.k - len(coeffs))
        return FieldElem(tuple(c[: self.k]))

    @property
    def zero(self) -> FieldElem:
        return FieldElem((0,) * self.k)

    @property
    def one(self) -> FieldElem:
        return self.elem(1)

    def add(self, a: FieldElem, b: FieldElem) -> FieldElem:
        return FieldElem(tuple((x + y) % self.p for x, y in zip(a.coeffs, b.coeffs)))

    def neg(self, a: FieldElem) -> FieldElem:
        return FieldElem(tuple(-x % self.p for x in a.coeffs))

    def sub(self, a: FieldElem, b: FieldElem) -> FieldElem:
        return self.add(a, self.neg(b))

    def mul(self, a: FieldElem, b: FieldElem) -> FieldElem:
        p = self.p
        if self.k == 1:
            return FieldElem(((a.coeffs[0] * b.coeffs[0]) % p,))
        a0, a1 = a.coeffs
        b0, b1 = b.coeffs
        c, bb = self.modulus  # x^2 = -bb*x - c
        hi = a1 * b1
        return FieldElem(((a0 * b0 - hi * c) % p, (a0 * b1 + a1 * b0 - hi * bb) % p))

    def pow(self, a: FieldElem, e: int) -> FieldElem:
        result, base = self.one, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    @cached_property
    def squares(self) -> frozenset[FieldElem]:
        return frozenset(self.mul(e, e) for e in self.elements if e != self.zero)

    def chi(self, e: FieldElem) -> int:
        return quadratic_character(self, e)


def make_field(p: int, k: int = 1) -> PrimePowerField:
    if not isprime(p):
        raise NotPrime(p)
    if k == 1:
        return PrimePowerField(p, 1)
    if k != 2:
        raise ValueError("only k in {1, 2} is supported")
    for b, c in product(range(p), repeat=2):
        # x^2 + b x + c has no root in GF(p)
        if all((x * x + b * x + c) % p for x in range(p)):
            return PrimePowerField(p, 2, (c, b))
    raise AssertionError("unreachable: an irreducible quadratic always exists")


def field_of_order(q: int) -> PrimePowerField:
    if q > 1 and isprime(q):
        return make_field(q, 1)
    r = round(q**0.5)
    if r * r == q and isprime(r):
        return make_field(r, 2)
    raise NotPrime(q)


def quadratic_character(f: PrimePowerField, e: FieldElem) -> int:
    if e == f.zero:
        return 0
    return 1 if e in f.squares else -1
