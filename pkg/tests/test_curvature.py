from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from g2flow import curvature as cv
from g2flow.flow import flow_to_coflow, solve_flow_parameters
from g2flow.liealg import CP_NAMES, FrameScaling, ScaledAlgebra, get_algebra, load_catalog
from g2flow.scalar import RingContext, Scalar
from oracles import RICCI

IDX = range(1, 8)


def flow_alg(name):
    return solve_flow_parameters(get_algebra(name)).scaled


def unit(name):
    spec = get_algebra(name)
    alg = ScaledAlgebra(spec, FrameScaling.unit(RingContext(0, spec.m_graded)))
    return alg.numeric(1, 0) if spec.numeric_only else alg


def C(n, ctx):
    return cv.curvature_constant(n, ctx)


class TestConnection:
    def test_abelian(self):
        assert cv.levi_civita(unit("abelian")) == {}

    def test_cp1(self):
        alg = flow_alg("cp1")
        G = cv.levi_civita(alg)
        m_f7 = Scalar.monomial(alg.context, 1, 1, Fraction(-1, 2))
        assert G[(7, 1, 1)] == -m_f7  # nabla_{x_1} x_1 = -(m/f_7) x_7
        assert G[(1, 1, 7)] == m_f7
        assert alg.brackets()[(1, 1, 7)] == m_f7

    @pytest.mark.parametrize("name", CP_NAMES)
    def test_metric_compatibility(self, name):
        G = cv.levi_civita(flow_alg(name))
        for (k, i, j), v in G.items():
            assert G.get((j, i, k)) == -v


def test_canonical_index():
    assert cv.canonical_index((2, 1, 4, 3)) == ((1, 2, 3, 4), 1)
    assert cv.canonical_index((3, 4, 2, 1)) == ((1, 2, 3, 4), -1)
    assert cv.canonical_index((1, 7, 7, 1)) == ((1, 7, 1, 7), -1)


class TestHyperbolicCase:
    def test_sectional_curvatures(self):
        alg = flow_alg("cp1")
        ct = cv.riemann(alg)
        target = Scalar.monomial(alg.context, -1, 2, -1)
        assert all(ct[(i, j, j, i)] == target for i in IDX for j in IDX if i < j)

    def test_einstein(self):
        alg = flow_alg("cp1")
        ric = cv.ricci(alg)
        assert ric.einstein_constant == Scalar.monomial(alg.context, -6, 2, -1)
        assert ric.scalar_curvature() == Scalar.monomial(alg.context, -42, 2, -1)

    def test_flat_limits(self):
        f = solve_flow_parameters(get_algebra("cp1"))
        assert cv.flat_limit_check(cv.riemann(f.scaled), "-inf")
        assert not cv.flat_limit_check(cv.riemann(f.scaled), "+inf")
        co = flow_to_coflow(f)
        assert cv.flat_limit_check(cv.riemann(co.scaled), "+inf")
        assert cv.flat_limit_check(cv.riemann(unit("abelian")), "-inf")


def test_quoted_table_entries():
    s2 = flow_alg("cp2")
    assert cv.riemann(s2)[(1, 7, 1, 7)] == Fraction(-16, 3) * C(2, s2.context)
    s4 = flow_alg("cp4")
    assert cv.riemann(s4)[(1, 2, 3, 4)] == Fraction(1, 5) * C(4, s4.context)


@pytest.mark.parametrize("name", sorted(RICCI))
def test_ricci_diagonals(name):
    alg = flow_alg(name)
    n, diag = RICCI[name]
    ric = cv.ricci(alg)
    assert ric.is_diagonal()
    assert ric.diagonal() == [d * C(n, alg.context) for d in diag]
    assert ric.einstein_constant is None


@pytest.mark.parametrize("spec", load_catalog(), ids=lambda s: s.name)
def test_symmetries_and_bianchi(spec):
    alg = flow_alg(spec.name) if spec.is_cp else unit(spec.name)
    ct = cv.riemann(alg)
    assert ct.symmetry_defects() == []
    ric = cv.ricci_from_tensor(ct)
    assert not cv._nonzero(ric.scalar_curvature() - cv.sectional_sum(ct))
    assert all(not cv._nonzero(ric.ric[i][j] - ric.ric[j][i]) for i in range(7) for j in range(7))


@pytest.mark.parametrize("name", CP_NAMES)
def test_coflow_ricci_ratio(name):
    spec = get_algebra(name)
    assert cv.coflow_ricci_ratio_check(spec)
    co = flow_to_coflow(solve_flow_parameters(spec))
    einstein = cv.ricci(co.scaled).einstein_constant is not None
    assert einstein == (name == "cp1")


def test_ratio_at_time_zero_is_one():
    f = solve_flow_parameters(get_algebra("cp2"))
    co = flow_to_coflow(f)
    assert cv.ricci_ratio_check(f.scaled, co.scaled, [(1, 0)])
    ric_f, ric_c = cv.ricci(f.scaled).ric, cv.ricci(co.scaled).ric
    assert all(ric_f[i][i].eval(1, 0) == pytest.approx(ric_c[i][i].eval(1, 0)) for i in range(7))


def test_ratio_rejects_points_outside_the_intervals():
    f = solve_flow_parameters(get_algebra("cp1"))
    with pytest.raises(ValueError):
        cv.ricci_ratio_check(f.scaled, flow_to_coflow(f).scaled, [(1, 1)])


# -- independent numeric oracle --------------------------------------------------


def _bracket_array(alg, m_val, t_val):
    table = alg.numeric(m_val, t_val)
    c = np.zeros((7, 7, 7))  # c[k, i, j]: [x_i, x_j] = sum_k c[k,i,j] x_k
    for (k, i, j), v in table.brackets().items():
        c[k - 1, i - 1, j - 1] = v
    return c


def _sectional_milnor(c, X, Y):
    """``<R(X,Y)Y,X>`` from brackets alone, via the U-tensor formula."""
    br = lambda a, b: np.einsum("kij,i,j->k", c, a, b)
    ad_t = lambda a, b: np.einsum("kij,i,k->j", c, a, b)  # ad_a^T b
    U = lambda a, b: 0.5 * (ad_t(a, b) + ad_t(b, a))
    XY = br(X, Y)
    return (-0.75 * XY @ XY - 0.5 * br(X, XY) @ Y - 0.5 * br(Y, br(Y, X)) @ X
            + U(X, Y) @ U(X, Y) - U(X, X) @ U(Y, Y))


@pytest.mark.parametrize("name", CP_NAMES + ("n2",))
def test_sectional_curvature_against_bracket_formula(name):
    rng = np.random.default_rng(7)
    alg = flow_alg(name) if name.startswith("cp") else unit(name)
    ct = cv.riemann(alg)
    for m_val, t_val in ((1, 0), (Fraction(3, 2), Fraction(-1, 10)), (Fraction(1, 2), Fraction(1, 20))):
        c = _bracket_array(alg, m_val, t_val)
        R = np.zeros((7, 7, 7, 7))
        for (i, j, k, l), v in ct.R.items():
            R[i - 1, j - 1, k - 1, l - 1] = v.eval(m_val, t_val) if isinstance(v, Scalar) else float(v)
        for _ in range(25):
            X, Y = rng.normal(size=7), rng.normal(size=7)
            ours = np.einsum("ijkl,i,j,k,l->", R, X, Y, Y, X)
            assert ours == pytest.approx(_sectional_milnor(c, X, Y), rel=1e-10, abs=1e-10)


# -- reference curvature tables --------------------------------------------------


def test_s6_table_is_reproduced():
    alg = flow_alg("cp6")
    rec = cv.load_curvature_tables()["S6"]
    assert cv.compare_with_table(cv.riemann(alg), rec, alg.context).ok


@pytest.mark.parametrize("key", ["S3", "S4", "S5", "S7"])
def test_inconsistent_tables_contradict_the_ricci_diagonals(key):
    """Extending these tables by symmetry does not give the reference Ricci diagonal."""
    rec = cv.load_curvature_tables()[key]
    name = rec["algebra"]
    alg = flow_alg(name)
    n, diag = RICCI[name]
    from_table = cv.ricci_from_tensor(cv.tensor_from_table(rec, alg.context))
    assert from_table.diagonal() != [d * C(n, alg.context) for d in diag]


def test_s2_table_violates_first_bianchi():
    alg = flow_alg("cp2")
    t = cv.tensor_from_table(cv.load_curvature_tables()["S2"], alg.context)
    assert any(kind == "bianchi" for _, kind in t.symmetry_defects())
    assert cv.ricci_from_tensor(t).diagonal() == [d * C(2, alg.context) for d in RICCI["cp2"][1]]
