import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from g2flow.exterior import FULL, Form, canonical_phi, wedge
from g2flow.liealg import (
    CATALOG_ENV,
    CP_NAMES,
    CatalogError,
    FrameScaling,
    NumericOnly,
    ScaledAlgebra,
    get_algebra,
    jacobi_defect,
    load_catalog,
    parse_catalog,
)
from g2flow.scalar import RingContext, Scalar
from oracles import TABLE2, TABLE3
from strategies import forms

e = Form.basis


def unit(name):
    spec = get_algebra(name)
    return ScaledAlgebra(spec, FrameScaling.unit(RingContext(0, spec.m_graded)))


@pytest.mark.parametrize("name", CP_NAMES)
def test_catalog_matches_reference(name):
    spec = get_algebra(name)
    eta, c6 = TABLE2[name]
    assert spec.eta == tuple(Fraction(x) for x in eta)
    assert spec.c6 == tuple(Fraction(x) for x in c6)


def test_catalog_contents():
    names = [s.name for s in load_catalog()]
    assert names == sorted(names)
    assert set(names) == set(CP_NAMES) | {"abelian", "n2", "h7"}


@pytest.mark.parametrize("spec", load_catalog(), ids=lambda s: s.name)
def test_d_squared_vanishes(spec):
    assert jacobi_defect(spec) <= 1e-12


def test_h7_is_numeric_only():
    alg = unit("h7")
    with pytest.raises(NumericOnly):
        alg.table
    table = alg.numeric(1, 0)
    assert max(table.d(table.d(e(k))).max_abs() for k in FULL) < 1e-12


def test_abelian_differential_vanishes():
    alg = unit("abelian")
    assert all(alg.d(e(k)).is_zero() for k in FULL)
    assert alg.brackets() == {}


def test_cp1_differential_under_flow_scaling():
    alpha, beta = TABLE3["cp1"]
    ctx = RingContext(-alpha)
    alg = ScaledAlgebra(get_algebra("cp1"), FrameScaling(beta, ctx))
    m_over_f7 = Scalar.monomial(ctx, 1, 1, -beta[6])
    for k in range(1, 7):
        assert alg.d(e(k)) == -m_over_f7 * e(k, 7)
    assert alg.d(e(7)).is_zero()


def test_cp1_bracket():
    a = unit("cp1").brackets()
    assert a[(1, 1, 7)] == RingContext(0).m()
    assert all(a[(k, j, i)] == -v for (k, i, j), v in a.items())


def test_cp2_dphi_is_lcp_at_unit_scaling():
    alg = unit("cp2")
    m = alg.context.m()
    expected = -3 * m * (e(1, 3, 5, 7) - e(1, 4, 6, 7) - e(2, 3, 6, 7) - e(2, 4, 5, 7))
    assert alg.d(canonical_phi()) == expected
    assert alg.d(canonical_phi()) == 3 * wedge(m * e(7), canonical_phi())


def test_x_and_e_bases_round_trip():
    alpha, beta = TABLE3["cp4"]
    alg = ScaledAlgebra(get_algebra("cp4"), FrameScaling(beta, RingContext(-alpha)))
    phi = canonical_phi()
    assert alg.to_x_basis(alg.to_e_basis(phi)) == phi


def test_catalog_override_and_ordering(tmp_path, monkeypatch):
    records = [s.to_json() for s in load_catalog()][::-1]
    path = tmp_path / "cat.json"
    path.write_text(json.dumps(records))
    monkeypatch.setenv(CATALOG_ENV, str(path))
    assert [s.name for s in load_catalog()] == sorted(r["name"] for r in records)


def test_bad_catalogs_are_rejected():
    with pytest.raises(CatalogError):
        parse_catalog("{not json")
    # de^3 = e^12 and de^1 = e^37 give d(de^1) = e^127
    broken = [{"name": "x", "extra": [[3, 1, 2, "1"], [1, 3, 7, "1"]]}]
    with pytest.raises(CatalogError):
        parse_catalog(json.dumps(broken))  # d^2 != 0
    with pytest.raises(CatalogError):
        parse_catalog(json.dumps([{"name": "y", "eta": ["0"] * 5}]))


_exact = [s for s in load_catalog() if not s.numeric_only]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(_exact), st.integers(0, 6).flatmap(lambda k: st.tuples(forms(k), forms(min(6 - k, 3)))))
def test_d_is_a_square_zero_antiderivation(spec, pair):
    alg = ScaledAlgebra(spec, FrameScaling.unit(RingContext(0, spec.m_graded)))
    a, b = pair
    assert alg.d(alg.d(a)).is_zero()
    lhs = alg.d(wedge(a, b))
    rhs = wedge(alg.d(a), b) + (-1) ** a.degree * wedge(a, alg.d(b))
    assert lhs == rhs
