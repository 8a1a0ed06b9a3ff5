from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from g2flow.exterior import (
    EPS4,
    FULL,
    Form,
    canonical_phi,
    canonical_psi,
    g2_bilinear,
    hodge_star,
    interior,
    wedge,
)
from strategies import forms

e = Form.basis


def test_wedge_antisymmetry():
    assert wedge(e(1), e(2)) == e(1, 2)
    assert wedge(e(2), e(1)) == -e(1, 2)
    assert wedge(e(1, 2), e(1, 2)).is_zero()


def test_wedge_degree_overflow():
    with pytest.raises(ValueError):
        wedge(e(1, 2, 3, 4), e(5, 6, 7, 1))


def test_phi_wedge_psi_is_seven_volumes():
    assert wedge(canonical_phi(), canonical_psi()) == 7 * e(*FULL)


def test_star_of_phi_terms():
    assert hodge_star(e(1, 2, 7)) == e(3, 4, 5, 6)
    assert hodge_star(e(1, 3, 5)) == -e(2, 4, 6, 7)
    assert hodge_star(canonical_phi()) == canonical_psi()
    assert EPS4[(2, 4, 6, 7)] == -1


def test_interior_examples():
    assert interior(1, e(1, 2, 7)) == e(2, 7)
    assert interior(3, e(1, 2, 7)).is_zero()
    assert interior(7, canonical_phi()) == e(1, 2) + e(3, 4) + e(5, 6)
    with pytest.raises(ValueError):
        interior(1, Form.scalar(2))


def test_g2_bilinear_of_canonical_phi_is_identity():
    B = g2_bilinear(canonical_phi())
    assert all(B[i][j] == (1 if i == j else 0) for i in range(7) for j in range(7))


def test_render_and_equality():
    f = e(1, 2, coeff=Fraction(1, 2)) - e(3, 4)
    assert f.render() == "(1/2)*e^12 + (-1)*e^34"
    assert f != e(1, 2)


@given(forms())
def test_star_is_an_involution(a):
    assert hodge_star(hodge_star(a)) == a


@given(st.integers(0, 3).flatmap(lambda k: st.tuples(forms(k), forms(3 - k if k <= 3 else 0))))
def test_graded_commutativity(pair):
    a, b = pair
    sign = (-1) ** (a.degree * b.degree)
    assert wedge(a, b) == sign * wedge(b, a)


@given(st.integers(1, 7), forms(2), forms(3))
def test_interior_is_an_antiderivation(i, a, b):
    lhs = interior(i, wedge(a, b))
    rhs = wedge(interior(i, a), b) + wedge(a, interior(i, b)) * (-1) ** a.degree
    assert lhs == rhs
