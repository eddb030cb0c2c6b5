from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hforge.chm import (
    FIXTURE_NAMES,
    ComplexHadamardMatrix,
    EquivalenceMove,
    UnknownFixture,
    apply_equivalence,
    dephase,
    detect_butson,
    fixture,
    fourier,
    is_regular,
    random_move,
    verify_chm,
)
from hforge.designs import sylvester_hadamard
from hforge.scalar import qext

OMEGA = qext(Fraction(-1, 2), Fraction(1, 2), 3)


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_fixtures_verify_exactly(name):
    h = fixture(name)
    assert h.exact
    assert verify_chm(h)
    # independent float check of H H* = nI
    a = h.array
    assert np.allclose(a @ a.conj().T, h.n * np.eye(h.n), atol=1e-9)


def test_fixture_fields():
    assert fixture("P7").d == 3
    assert fixture("U15").d == 15
    assert fixture("V15").d == 11
    assert fixture("W9A").d == 15
    with pytest.raises(UnknownFixture):
        fixture("N9")


@pytest.mark.parametrize("n", range(1, 10))
def test_fourier(n):
    f = fourier(n)
    assert verify_chm(f)
    assert detect_butson(f) == n


def test_verification_failure_names_pair():
    rows = [[1, 1, 1], [1, OMEGA, OMEGA * OMEGA], [1, OMEGA * OMEGA, OMEGA * OMEGA]]
    v = verify_chm(ComplexHadamardMatrix(rows))
    assert not v and v.pair is not None and "orthogonal" in v.reason
    v = verify_chm(ComplexHadamardMatrix([[1, 1], [1, qext(0, 2)]]))
    assert not v and "unimodular" in v.reason


def test_float_verification_uses_tolerance():
    a = fourier(5).entries.copy()
    assert verify_chm(ComplexHadamardMatrix(a * np.exp(1e-12j), "float"))
    a[2, 3] *= np.exp(1e-3j)
    assert not verify_chm(ComplexHadamardMatrix(a, "float"))


def test_butson_and_regularity():
    p7 = fixture("P7")
    assert detect_butson(p7) == 6  # entries 1, -1, omega, -omega
    assert detect_butson(fixture("U15")) is None
    # every row of P7 sums to 2 + 3*omega, of squared modulus 7
    reg = is_regular(p7)
    assert reg and set(reg.row_sum_abs2) == {7}
    assert not is_regular(fourier(4))
    h8 = ComplexHadamardMatrix.from_real(sylvester_hadamard(3))
    assert detect_butson(h8) == 2


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_json_roundtrip(name, tmp_path):
    h = fixture(name)
    h.save(tmp_path / "m.json")
    g = ComplexHadamardMatrix.load(tmp_path / "m.json")
    assert g.same_entries(h)


def test_float_json_roundtrip(tmp_path):
    f = fourier(6)
    f.save(tmp_path / "f.json")
    g = ComplexHadamardMatrix.load(tmp_path / "f.json")
    assert np.array_equal(g.entries, f.entries)


def test_exact_and_float_projection_agree():
    h = fixture("V15")
    assert np.allclose(h.to_float().entries, h.array)
    assert verify_chm(h.to_float())


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_dephase(name):
    d = dephase(fixture(name))
    assert verify_chm(d)
    one = qext(1)
    assert all(z == one for z in d.entries[0]) and all(row[0] == one for row in d.entries)


@settings(max_examples=25)
@given(st.sampled_from(FIXTURE_NAMES), st.integers(0, 2**32 - 1))
def test_random_moves_preserve_hadamard_property(name, seed):
    h = fixture(name)
    g = apply_equivalence(h, random_move(h, np.random.default_rng(seed)))
    assert g.exact and verify_chm(g)


def test_identity_move_and_bad_permutation():
    h = fixture("P7")
    assert apply_equivalence(h, EquivalenceMove.identity(7)).same_entries(h)
    with pytest.raises(ValueError):
        apply_equivalence(h, EquivalenceMove((0,) * 7, tuple(range(7))))


def test_float_moves():
    f = fourier(5)
    g = apply_equivalence(f, random_move(f, np.random.default_rng(3)))
    assert not g.exact and verify_chm(g)
