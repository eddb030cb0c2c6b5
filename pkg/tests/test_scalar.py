import cmath
import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from hforge.scalar import (
    MixedRadicand,
    QuadExtScalar,
    format_scalar,
    normalize_radicand,
    parse_rational,
    parse_scalar,
    qext,
    qext_arith,
    root_of_unity_order,
    surd,
)

fracs = st.fractions(min_value=-50, max_value=50, max_denominator=40)
radicands = st.sampled_from([1, 3, 7, 15, 11])


@st.composite
def same_field_pair(draw):
    d = draw(radicands)
    return qext(draw(fracs), draw(fracs), d), qext(draw(fracs), draw(fracs), d)


def as_sympy(z: QuadExtScalar):
    return sympy.Rational(z.x.numerator, z.x.denominator) + sympy.Rational(z.y.numerator, z.y.denominator) * sympy.I * sympy.sqrt(z.d)


@given(same_field_pair())
def test_field_ops_match_sympy(pair):
    a, b = pair
    for op, ref in (("add", lambda u, v: u + v), ("sub", lambda u, v: u - v), ("mul", lambda u, v: u * v)):
        got = qext_arith(a, b, op)
        assert sympy.simplify(as_sympy(got) - ref(as_sympy(a), as_sympy(b))) == 0
    if b:
        got = qext_arith(a, b, "div")
        assert sympy.simplify(as_sympy(got) - as_sympy(a) / as_sympy(b)) == 0


@given(same_field_pair())
def test_norm_is_multiplicative_and_conjugation_is_involutive(pair):
    a, b = pair
    assert (a * b).norm() == a.norm() * b.norm()
    assert a.conjugate().conjugate() == a
    assert (a * a.conjugate()) == a.norm()


@given(same_field_pair())
def test_float_projection_is_a_homomorphism(pair):
    a, b = pair
    assert cmath.isclose(complex(a * b), complex(a) * complex(b), rel_tol=1e-12, abs_tol=1e-9)
    assert cmath.isclose(complex(a + b), complex(a) + complex(b), rel_tol=1e-12, abs_tol=1e-9)


@given(fracs, fracs, st.integers(1, 200))
def test_normalization_extracts_squares(x, y, d):
    z = qext(x, y, d)
    assert sympy.simplify(as_sympy(z) - (sympy.Rational(x.numerator, x.denominator) + sympy.Rational(y.numerator, y.denominator) * sympy.I * sympy.sqrt(d))) == 0
    assert sympy.factorint(z.d) == {p: 1 for p in sympy.factorint(z.d)}  # square-free
    if z.y == 0:
        assert z.d == 1


def test_canonical_examples():
    z = normalize_radicand(Fraction(0), Fraction(1, 2), 12)
    assert (z.y, z.d) == (1, 3)
    assert qext(1, 0, 7).d == 1
    # i*sqrt(4) = 2i: radicand collapses to 1
    assert qext(0, 1, 4) == qext(0, 2, 1)


def test_mixed_radicands_raise():
    with pytest.raises(MixedRadicand):
        qext(0, 1, 3) + qext(0, 1, 7)
    # rational values mix with anything
    assert qext(1, 1, 3) + 2 == qext(3, 1, 3)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        qext(1, 1, 3) / 0


@given(fracs, fracs, radicands)
def test_text_roundtrip(x, y, d):
    z = qext(x, y, d)
    assert parse_scalar(format_scalar(z)) == z
    assert QuadExtScalar.from_json(z.to_json()) == z


def test_surd_rendering():
    assert surd(Fraction(0)) == "0"
    assert surd(Fraction(3)) == "√3"
    assert surd(Fraction(12)) == "2√3"
    assert surd(Fraction(4)) == "2"
    assert surd(Fraction(7, 4)) == "√7/2"
    assert parse_rational("-7/8") == Fraction(-7, 8)


def test_roots_of_unity():
    omega = qext(Fraction(-1, 2), Fraction(1, 2), 3)
    assert root_of_unity_order(omega) == 3
    assert root_of_unity_order(-omega) == 6
    assert root_of_unity_order(qext(0, 1, 1)) == 4
    assert root_of_unity_order(qext(-1)) == 2
    assert root_of_unity_order(qext(Fraction(-7, 8), Fraction(1, 8), 15)) is None
    assert omega**3 == 1


def test_unimodular_entry_from_induction():
    a = qext(Fraction(-7, 8), Fraction(1, 8), 15)
    assert a.norm() == 1
    assert math.isclose(abs(complex(a)), 1.0)
