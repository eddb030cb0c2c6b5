from fractions import Fraction

import numpy as np
import pytest

from hforge.chm import ComplexHadamardMatrix, apply_equivalence, dephase, fixture, fourier, random_move
from hforge.construct import conference_to_chm, induce_from_design
from hforge.designs import paley_conference, paley_design, sylvester_hadamard
from hforge.equivalence import (
    InequivalenceCertificate,
    Undecided,
    certify_inequivalent,
    compare_fingerprint,
    revalidate,
)
from hforge.invariants import haagerup_set


def test_u15_v15_haagerup_certificate():
    u, v = fixture("U15"), fixture("V15")
    cert = certify_inequivalent(u, v)
    assert isinstance(cert, InequivalenceCertificate)
    assert cert.kind == "haagerup" and not cert.numeric
    w = cert.witness
    assert w.d == 15 and w.y != 0
    assert w in haagerup_set(u) and w not in haagerup_set(v)
    assert revalidate(cert, u, v)
    assert cert.to_json()["result"] == "certificate"


@pytest.mark.parametrize("q", [7, 11])
@pytest.mark.parametrize("sign", ["+", "-"])
def test_paley_induced_differ_from_fourier(q, sign):
    cert = certify_inequivalent(induce_from_design(paley_design(q), sign), fourier(q))
    assert isinstance(cert, InequivalenceCertificate) and cert.numeric


def test_w9a_w9b_differ():
    a = conference_to_chm(paley_conference(9), "+")
    b = conference_to_chm(paley_conference(9), "-")
    cert = certify_inequivalent(a, b)
    assert isinstance(cert, InequivalenceCertificate) and cert.kind == "haagerup"
    assert revalidate(cert, a, b)


def test_equivalent_pairs_stay_undecided():
    p = fixture("P7")
    assert isinstance(certify_inequivalent(p, dephase(p)), Undecided)
    moved = apply_equivalence(p, random_move(p, np.random.default_rng(11)))
    res = certify_inequivalent(p, moved)
    assert isinstance(res, Undecided) and not res.numeric
    assert "undecided" in res.text()


def test_row_swap_keeps_fingerprint():
    h8 = ComplexHadamardMatrix.from_real(sylvester_hadamard(3))
    swapped = sylvester_hadamard(3).copy()
    swapped[[1, 2]] = swapped[[2, 1]]
    assert not compare_fingerprint(h8, ComplexHadamardMatrix.from_real(swapped), dmax=3)


def test_fingerprint_certificate_and_revalidation():
    # F2 x F2 has 12 vanishing 2x2 minors, F4 only 4
    h4 = ComplexHadamardMatrix.from_real(sylvester_hadamard(2))
    cert = compare_fingerprint(h4, fourier(4), dmax=2)
    assert isinstance(cert, InequivalenceCertificate) and cert.numeric
    assert cert.witness == (2, 0.0) and cert.holder == 1
    assert revalidate(cert, h4, fourier(4))
    p7 = fixture("P7")
    other = induce_from_design(paley_design(7))
    res = compare_fingerprint(p7, other, dmax=2)
    assert isinstance(res, InequivalenceCertificate) and res.kind == "fingerprint"
    assert revalidate(res, p7, other)
    d, v = res.witness
    assert d == 2 and isinstance(v, Fraction)


def test_order_mismatch():
    with pytest.raises(ValueError):
        certify_inequivalent(fourier(3), fourier(4))


def test_u15_v15_differ_already_at_d2():
    res = compare_fingerprint(fixture("U15"), fixture("V15"), dmax=2)
    assert isinstance(res, InequivalenceCertificate) and not res.numeric
    assert res.witness == (2, Fraction(0))


@pytest.mark.parametrize("name", ["P7", "W9A"])
def test_no_certificate_for_equivalent_copies(name):
    h = fixture(name)
    rng = np.random.default_rng(7)
    for _ in range(20):
        g = apply_equivalence(h, random_move(h, rng))
        assert isinstance(certify_inequivalent(h, g, dmax=3), Undecided)
