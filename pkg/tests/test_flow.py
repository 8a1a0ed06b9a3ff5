from fractions import Fraction

import pytest

from g2flow.exterior import EPS3, FULL, canonical_phi
from g2flow.flow import (
    CoflowSolution,
    FlowSolution,
    NotASoliton,
    OutOfScope,
    cartan_lie_derivative,
    coflow_residual,
    coflow_to_flow,
    complementary_identity_defects,
    nilpotent_example_check,
    heisenberg_example_check,
    flow_residual,
    flow_to_coflow,
    flow_identity_checks,
    lie_derivative,
    lie_derivative_along_X7,
    soliton_check,
    soliton_field,
    solve_flow_parameters,
)
from g2flow.exterior import Form
from g2flow.liealg import CP_NAMES, FrameScaling, ScaledAlgebra, get_algebra
from g2flow.scalar import RingContext, Scalar
from oracles import COFLOW, FLOW_E_EXPONENTS, FLOW_INTERVAL_END, SOLITON, TABLE3, expand

e = Form.basis


def flow(name):
    return solve_flow_parameters(get_algebra(name))


@pytest.mark.parametrize("name", CP_NAMES)
def test_solved_parameters(name):
    sol = flow(name)
    alpha, beta = TABLE3[name]
    assert sol.alpha == alpha
    assert sol.beta == tuple(Fraction(b) for b in beta)
    assert sol.interval == (None, FLOW_INTERVAL_END[name])
    assert not sol.violations()


@pytest.mark.parametrize("name", CP_NAMES)
def test_flow_solution_shape_in_e_basis(name):
    sol = flow(name)
    e_phi = sol.scaled.to_e_basis(canonical_phi())
    for idx, q in expand(FLOW_E_EXPONENTS[name]).items():
        assert e_phi[idx] == EPS3[idx] * sol.context.u(q)


@pytest.mark.parametrize("name", CP_NAMES)
def test_flow_residual_vanishes(name):
    assert flow_residual(get_algebra(name), flow(name)).is_zero()


def test_perturbed_cp1_is_not_a_solution():
    bad = FlowSolution(get_algebra("cp1"), 4, (1,) + (Fraction(3, 4),) * 5 + (Fraction(1, 2),))
    residual = flow_residual(get_algebra("cp1"), bad)
    assert not residual.is_zero()
    assert bad.violations() == []  # cp1 imposes no LCP relation


@pytest.mark.parametrize("name", CP_NAMES)
def test_coflow_parameters(name):
    co = flow_to_coflow(flow(name))
    rate, groups = COFLOW[name]
    assert co.gamma == -rate
    assert co.interval == (-1 / Fraction(rate), None)
    e_phi = co.scaled.to_e_basis(canonical_phi())
    for idx, q in expand(groups).items():
        assert e_phi[idx] == EPS3[idx] * co.context.u(q)


def test_cp1_coflow_exponents():
    co = flow_to_coflow(flow("cp1"))
    assert co.delta == (Fraction(1, 3),) * 6 + (Fraction(1, 2),)


@pytest.mark.parametrize("name", CP_NAMES)
def test_coflow_residual_and_identities(name):
    f = flow(name)
    co = flow_to_coflow(f)
    assert coflow_residual(get_algebra(name), co).is_zero()
    assert all(v == 0 for v in complementary_identity_defects(f, co).values())
    assert coflow_to_flow(co) == f
    # the (1,2,7) instance spelled out
    assert co.gamma * sum(co.delta[i - 1] for i in (3, 4, 5, 6)) == -f.alpha * sum(f.beta[i - 1] for i in (1, 2, 7))


def test_correspondence_undefined_at_beta_sum_two():
    sol = FlowSolution(get_algebra("cp1"), 1, (0, 0, 0, 0, 0, Fraction(3, 2), Fraction(1, 2)))
    with pytest.raises(OutOfScope):
        flow_to_coflow(sol)
    with pytest.raises(OutOfScope):
        coflow_to_flow(CoflowSolution(get_algebra("cp1"), 1, (0, 0, 0, 0, 0, 1, Fraction(1, 2))))


class TestSolitons:
    def test_cp1_lie_derivative(self):
        alg = flow("cp1").scaled
        coeff = Scalar.monomial(alg.context, -1, 2, -1)
        expected = coeff * (2 * (e(1, 2, 7) + e(3, 4, 7) + e(5, 6, 7))
                            + 3 * (e(1, 3, 5) - e(1, 4, 6) - e(2, 3, 6) - e(2, 4, 5)))
        assert lie_derivative_along_X7(alg, canonical_phi()) == expected

    def test_abelian(self):
        alg = ScaledAlgebra(get_algebra("abelian"), FrameScaling.unit())
        assert lie_derivative_along_X7(alg, canonical_phi()).is_zero()

    @pytest.mark.parametrize("name", CP_NAMES)
    def test_lie_derivative_matches_cartan(self, name):
        alg = flow(name).scaled
        X = soliton_field(alg)
        assert lie_derivative_along_X7(alg, canonical_phi()) == cartan_lie_derivative(alg, X, canonical_phi())
        for a in (e(1), e(2, 7), e(1, 3, 6, 7)):
            assert lie_derivative(alg, X, a) == cartan_lie_derivative(alg, X, a)

    @pytest.mark.parametrize("name", CP_NAMES)
    def test_127_coefficient(self, name):
        spec = get_algebra(name)
        alg = flow(name).scaled
        L = lie_derivative_along_X7(alg, canonical_phi())
        eta = spec.eta[0] + spec.eta[1]
        assert L[(1, 2, 7)] == Scalar.monomial(alg.context, eta, 2, -1)

    @pytest.mark.parametrize("name", CP_NAMES)
    def test_certificate(self, name):
        cert = soliton_check(get_algebra(name))
        assert cert.lambda_over_u == SOLITON[name]
        assert cert.type == "shrinking"

    def test_non_solution_is_rejected(self):
        bad = FlowSolution(get_algebra("cp2"), 1, (0,) * 6 + (Fraction(1, 2),))
        with pytest.raises(NotASoliton):
            soliton_check(get_algebra("cp2"), bad)


class TestLemma:
    @pytest.mark.parametrize("name", CP_NAMES)
    def test_all_pairs(self, name):
        assert flow_identity_checks(flow(name))["ok"]

    def test_cp1_examples(self):
        sol = flow("cp1")
        f = sol.scaling.f
        assert f((1, 2, 7)) == f((3, 4, 7)) == sol.context.u(2)
        assert f((1, 2, 7)) ** 9 == f((1, 3, 5)) ** 8 == sol.context.u(18)
        part_i = {tuple(map(tuple, r["pair"])): r for r in flow_identity_checks(sol)["part_i"]}
        r = part_i[((1, 2, 7), (1, 3, 5))]
        assert (r["alpha"], r["beta"]) == (9, 8) and r["ok"]

    def test_cp2_equal_pair(self):
        sol = flow("cp2")
        f = sol.scaling.f
        assert f((1, 3, 5)) == f((1, 4, 6)) == sol.context.u(Fraction(12, 5))


def test_nilpotent_closed_flow():
    out = nilpotent_example_check()
    assert out["e_basis_matches"] and out["orthonormal"]
    assert out["closed"] and out["residual_zero"]
    assert out["initial_class"] == "closed" and out["initial_dpsi_nonzero"]


def test_heisenberg_coflow():
    out = heisenberg_example_check((-1.0, 0.0, 0.5))
    assert out["max_residual"] < 1e-9
    assert out["coclosed_defect"] < 1e-9
    assert out["e_basis_matches"]
