"""Power-law solutions of the Laplacian flow and coflow.

A flow solution is ``f_i(t) = (1 - alpha m^2 t)**beta_i``; a coflow solution
is ``(1 - gamma m^2 t)**delta_i``.  Residuals are computed exactly: the time
derivative is taken on the fixed ``e``-coframe coefficients and the Laplacian
through ``dδ + δd`` in the moving orthonormal coframe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from . import _linalg
from .exterior import EPS3, EPS4, FULL, Form, canonical_phi, hodge_star, interior, sort_sign, wedge
from .g2ops import (
    G2Structure,
    UnsupportedAlgebra,
    beta_relations,
    classify_torsion,
    closed_form_rationals,
    laplacian,
    metric_from_phi,
)
from .liealg import AlgebraSpec, FrameScaling, ScaledAlgebra, get_algebra
from .scalar import RingContext, Scalar, as_fraction

HALF = Fraction(1, 2)


class SingularSystem(ArithmeticError):
    pass


class OutOfScope(ValueError):
    """Parameters for which the flow/coflow correspondence is undefined."""


class NotASoliton(AssertionError):
    pass


def _interval_bound(rate: Fraction) -> Fraction | None:
    """``u = 1 - rate*m^2*t`` vanishes at ``t = 1/(rate m^2)``."""
    return None if rate == 0 else 1 / rate


@dataclass(frozen=True)
class FlowSolution:
    algebra: AlgebraSpec
    alpha: Fraction
    beta: tuple

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_fraction(self.alpha))
        object.__setattr__(self, "beta", tuple(as_fraction(b) for b in self.beta))

    @property
    def context(self) -> RingContext:
        return RingContext(-self.alpha)

    @property
    def scaling(self) -> FrameScaling:
        return FrameScaling(self.beta, self.context)

    @property
    def scaled(self) -> ScaledAlgebra:
        return ScaledAlgebra(self.algebra, self.scaling)

    @property
    def interval(self) -> tuple[Fraction | None, Fraction | None]:
        """``(lo, hi)`` as multiples of ``1/m^2``; None is infinite."""
        b = _interval_bound(self.alpha)
        if b is None:
            return (None, None)
        return (None, b) if self.alpha > 0 else (b, None)

    def violations(self) -> list[str]:
        out = []
        if self.beta[6] != HALF:
            out.append(f"beta_7 = {self.beta[6]} != 1/2")
        if self.algebra.is_cp:
            for v in beta_relations(self.algebra):
                if sum(a * b for a, b in zip(v, self.beta)):
                    out.append(f"LCP relation {v} violated")
        return out


@dataclass(frozen=True)
class CoflowSolution:
    algebra: AlgebraSpec
    gamma: Fraction
    delta: tuple

    def __post_init__(self):
        object.__setattr__(self, "gamma", as_fraction(self.gamma))
        object.__setattr__(self, "delta", tuple(as_fraction(d) for d in self.delta))

    @property
    def context(self) -> RingContext:
        # f~_i = (1 - gamma m^2 t)^delta_i, so u = 1 + kappa m^2 t with kappa = -gamma
        return RingContext(-self.gamma)

    @property
    def scaling(self) -> FrameScaling:
        return FrameScaling(self.delta, self.context)

    @property
    def scaled(self) -> ScaledAlgebra:
        return ScaledAlgebra(self.algebra, self.scaling)

    @property
    def interval(self) -> tuple[Fraction | None, Fraction | None]:
        b = _interval_bound(self.gamma)
        if b is None:
            return (None, None)
        return (None, b) if self.gamma > 0 else (b, None)

    def violations(self) -> list[str]:
        out = []
        if self.delta[6] != HALF:
            out.append(f"delta_7 = {self.delta[6]} != 1/2")
        if self.algebra.is_cp:
            for v in beta_relations(self.algebra):
                if sum(a * b for a, b in zip(v, self.delta)):
                    out.append(f"LCP relation {v} violated")
        return out


# -- residuals -----------------------------------------------------------------


def time_derivative(alg: ScaledAlgebra, a: Form) -> Form:
    """``d/dt`` of a form whose ``x``-coefficients are given; result in ``x``-coefficients."""
    e_form = alg.to_e_basis(a)
    return alg.to_x_basis(e_form.map(lambda c: c.ddt()))


def flow_residual(alg: AlgebraSpec, sol: FlowSolution) -> Form:
    """``dφ/dt - Δφ`` for the canonical family; zero iff ``sol`` solves the flow."""
    scaled = ScaledAlgebra(alg, sol.scaling)
    phi = canonical_phi()
    return time_derivative(scaled, phi) - laplacian(scaled, phi)


def coflow_residual(alg: AlgebraSpec, sol: CoflowSolution) -> Form:
    """``dψ/dt + Δψ`` with ``ψ = *φ``; zero iff ``sol`` solves the coflow."""
    scaled = ScaledAlgebra(alg, sol.scaling)
    psi = hodge_star(canonical_phi())
    return time_derivative(scaled, psi) + laplacian(scaled, psi)


# -- solving for the power-law parameters ---------------------------------------


def solve_flow_parameters(spec: AlgebraSpec) -> FlowSolution:
    """Exact ``(alpha; beta)`` for ``cp_s``.

    With ``beta_7 = 1/2`` each pattern index gives
    ``-alpha (beta_i + beta_j + beta_k) = f_7^2 Δ_ijk / m^2``, which is linear
    in ``(alpha, gamma_1..gamma_6)`` where ``gamma_i = alpha*beta_i``.  The LCP
    relations are linear and homogeneous in the same unknowns.
    """
    if not spec.is_cp:
        raise UnsupportedAlgebra(f"{spec.name} is not one of cp1..cp7")
    coeffs = closed_form_rationals(spec)
    rows, rhs = [], []
    # unknowns: [alpha, g1..g6]; gamma_7 = alpha/2
    for idx, c in sorted(coeffs.items()):
        row = [Fraction(0)] * 7
        for i in idx:
            if i == 7:
                row[0] += HALF
            else:
                row[i] += 1
        rows.append(row)
        rhs.append(-c)
    for v in beta_relations(spec):
        row = [Fraction(0)] * 7
        for i, x in zip(FULL, v):
            if i == 7:
                row[0] += HALF * x
            else:
                row[i] += x
        rows.append(row)
        rhs.append(Fraction(0))
    sol = _linalg.solve(rows, rhs)
    if sol.values is None:
        raise SingularSystem(f"{spec.name}: flow system is inconsistent")
    if sol.nullity:
        raise SingularSystem(f"{spec.name}: flow system has a {sol.nullity}-dimensional solution space")
    alpha, *gammas = sol.values
    if alpha == 0:
        raise SingularSystem(f"{spec.name}: alpha = 0")
    beta = tuple(g / alpha for g in gammas) + (HALF,)
    return FlowSolution(spec, alpha, beta)


def flow_to_coflow(sol: FlowSolution) -> CoflowSolution:
    total = sum(sol.beta)
    if total == 2:
        raise OutOfScope("sum of beta equals 2; the correspondence is undefined")
    gamma = sol.alpha * (2 - total) / 2
    delta = tuple(HALF + (1 - 2 * b) / (total - 2) for b in sol.beta)
    return CoflowSolution(sol.algebra, gamma, delta)


def coflow_to_flow(sol: CoflowSolution) -> FlowSolution:
    """Inverse of :func:`flow_to_coflow`."""
    d_total = sum(sol.delta)
    if d_total == Fraction(3, 2):
        raise OutOfScope("sum of delta equals 3/2; no preimage")
    total = 2 * d_total / (d_total - Fraction(3, 2))
    if total == 2:
        raise OutOfScope("preimage has sum of beta equal to 2")
    alpha = 2 * sol.gamma / (2 - total)
    beta = tuple(HALF - (d - HALF) * (total - 2) / 2 for d in sol.delta)
    return FlowSolution(sol.algebra, alpha, beta)


def complementary_identity_defects(flow: FlowSolution, coflow: CoflowSolution) -> dict:
    """``γ Σ_{complement} δ + α Σ_{ijk} β`` for every pattern index (all zero when related)."""
    out = {}
    for idx in EPS3:
        comp = tuple(i for i in FULL if i not in idx)
        lhs = coflow.gamma * sum(coflow.delta[i - 1] for i in comp)
        rhs = -flow.alpha * sum(flow.beta[i - 1] for i in idx)
        out[idx] = lhs - rhs
    return out


# -- solitons ------------------------------------------------------------------


def lie_derivative(alg, vector: dict[int, object], a: Form) -> Form:
    """``L_X a`` for a left-invariant ``X = sum_i vector[i] x_i``.

    On invariant 1-forms ``(L_X α)(Y) = -α([X, Y])``; extended as a derivation.
    """
    br = alg.brackets()
    images: dict[int, dict] = {}
    for k in FULL:
        row = {}
        for j in FULL:
            acc = 0
            for i, xi in vector.items():
                c = br.get((k, i, j))
                if c:
                    acc = acc + xi * c
            if acc:
                row[j] = -acc
        images[k] = row
    out: dict = {}
    for idx, c in a.items():
        for r, k in enumerate(idx):
            for j, v in images[k].items():
                sign, new = sort_sign(idx[:r] + (j,) + idx[r + 1:])
                if not sign:
                    continue
                term = c * v if sign > 0 else -(c * v)
                out[new] = out[new] + term if new in out else term
    return Form(a.degree, out)


def soliton_field(alg: ScaledAlgebra) -> dict[int, Scalar]:
    """``X = -(m / f_7) x_7``."""
    ctx = alg.context
    return {7: Scalar.monomial(ctx, -1, 1, -alg.scaling.exponents[6])}


def lie_derivative_along_X7(alg: ScaledAlgebra, phi: Form) -> Form:
    if phi.degree != 3:
        raise ValueError("expected a 3-form")
    return lie_derivative(alg, soliton_field(alg), phi)


def cartan_lie_derivative(alg, vector: dict[int, object], a: Form) -> Form:
    """``d i_X a + i_X d a``; independent route to :func:`lie_derivative`."""

    def contract(form):
        if form.degree == 0:
            return None
        out = Form(form.degree - 1)
        for i, c in vector.items():
            out = out + c * interior(i, form)
        return out

    total = Form(a.degree)
    inner = contract(a)
    if inner is not None:
        total = total + alg.d(inner)
    if a.degree < 7:
        total = total + contract(alg.d(a))
    return total


@dataclass(frozen=True)
class SolitonCertificate:
    algebra: str
    lambda_over_u: Fraction  # λ = lambda_over_u * m^2 / f_7^2
    vector_field: Fraction = Fraction(-1)  # X = vector_field * (m/f_7) x_7
    type: str = "shrinking"

    @staticmethod
    def classify(lam: Fraction) -> str:
        return "shrinking" if lam < 0 else "expanding" if lam > 0 else "steady"


def soliton_check(spec: AlgebraSpec, sol: FlowSolution | None = None) -> SolitonCertificate:
    """Certify ``Δφ - L_Xφ = λφ`` along the power-law flow solution."""
    sol = sol or solve_flow_parameters(spec)
    alg = sol.scaled
    phi = canonical_phi()
    rest = laplacian(alg, phi) - lie_derivative_along_X7(alg, phi)
    lam = rest[(1, 2, 7)]
    if not isinstance(lam, Scalar) or not lam.is_monomial():
        raise NotASoliton(f"{spec.name}: x^127 coefficient {lam} is not a monomial")
    if rest != lam * phi:
        raise NotASoliton(f"{spec.name}: Δφ - L_Xφ = {rest.render('x')} is not proportional to φ")
    c, m_pow, u_pow = lam.leading()
    if m_pow != 2 or u_pow != -2 * sol.beta[6]:
        raise NotASoliton(f"{spec.name}: λ = {lam} is not a multiple of m^2/f_7^2")
    return SolitonCertificate(spec.name, c, Fraction(-1), SolitonCertificate.classify(c))


# -- Lemma-style identities between pattern coefficients ----------------------------


def _small_ratio(a: Fraction, b: Fraction) -> tuple[int, int]:
    """Coprime integers ``(p, q)`` with ``p*a = q*b``."""
    # p/q = b/a
    r = Fraction(b) / Fraction(a)
    p, q = r.numerator, r.denominator
    return p, q


def flow_identity_checks(sol: FlowSolution, sample_times=None, m_val=1) -> dict:
    """Consequences of ``Δ_ijk = f_ijk'/f_ijk`` between pairs of pattern indices.

    Part i: ``p Δ_P = q Δ_Q``  implies ``f_P^p = f_Q^q`` (checked exactly).
    Part ii: ``p f_P Δ_P = q f_Q Δ_Q`` implies ``p (f_P - 1) = q (f_Q - 1)``
    (checked at sampled times).
    """
    alg = sol.scaled
    ctx = alg.context
    lap = laplacian(alg, canonical_phi())
    delta = {idx: EPS3[idx] * lap[idx] for idx in EPS3}
    f = {idx: alg.scaling.f(idx) for idx in EPS3}
    lo, hi = sol.interval
    if sample_times is None:
        edge = hi if hi is not None else (-lo if lo is not None else Fraction(1))
        sample_times = [Fraction(-3), Fraction(-1), Fraction(0), edge / 4, edge / 2]
    part_i, part_ii = [], []
    for P, Q in combinations(sorted(EPS3), 2):
        dp, dq = delta[P], delta[Q]
        if not (isinstance(dp, Scalar) and dp.is_monomial() and isinstance(dq, Scalar) and dq.is_monomial()):
            part_i.append({"pair": [P, Q], "applicable": False, "ok": True})
            continue
        cp, mp, up = dp.leading()
        cq, mq, uq = dq.leading()
        if (mp, up) == (mq, uq):
            p, q = _small_ratio(cp, cq)  # p*Δ_P = q*Δ_Q
            ok = f[P] ** p == f[Q] ** q
            part_i.append({"pair": [P, Q], "alpha": p, "beta": q, "applicable": True, "ok": ok})
        fp, fq = f[P] * dp, f[Q] * dq
        cp2, mp2, up2 = fp.leading()
        cq2, mq2, uq2 = fq.leading()
        if (mp2, up2) == (mq2, uq2):
            p, q = _small_ratio(cp2, cq2)
            errs = [
                abs(p * (f[P].eval(m_val, t) - 1) - q * (f[Q].eval(m_val, t) - 1))
                for t in sample_times
            ]
            part_ii.append({"pair": [P, Q], "alpha": p, "beta": q, "max_error": max(errs), "ok": max(errs) < 1e-9})
    ok = all(r["ok"] for r in part_i) and all(r["ok"] for r in part_ii)
    return {"algebra": sol.algebra.name, "part_i": part_i, "part_ii": part_ii, "ok": ok}


# -- warm-up fixtures ------------------------------------------------------------


def nilpotent_example_phi() -> Form:
    """Closed 3-form on the two-step nilpotent algebra, in its orthonormal coframe."""
    return Form(3, {
        (1, 4, 7): 1, (2, 6, 7): 1, (3, 5, 7): 1, (1, 2, 3): 1,
        (1, 5, 6): 1, (2, 4, 5): 1, (3, 4, 6): -1,
    })


def nilpotent_example_algebra() -> ScaledAlgebra:
    """``f = (1 + 10t/3)^{1/5}`` on ``e^1..e^3`` and ``f^{-1/2}`` on ``e^4..e^7``."""
    ctx = RingContext(Fraction(10, 3), m_graded=False)
    fifth, tenth = Fraction(1, 5), Fraction(-1, 10)
    return ScaledAlgebra(get_algebra("n2"), FrameScaling((fifth,) * 3 + (tenth,) * 4, ctx))


def nilpotent_example_check() -> dict:
    alg = nilpotent_example_algebra()
    phi = nilpotent_example_phi()
    ctx = alg.context
    e_phi = alg.to_e_basis(phi)
    expected_e = dict(phi.items())
    expected_e[(1, 2, 3)] = ctx.u(Fraction(3, 5))  # f(t)^3
    residual = time_derivative(alg, phi) - laplacian(alg, phi)
    closed = alg.d(phi)
    unit = ScaledAlgebra(alg.spec, FrameScaling.unit(RingContext(0, False)))
    start = G2Structure(unit, phi)
    metric = metric_from_phi(phi)
    return {
        "e_basis_matches": e_phi == Form(3, expected_e),
        "orthonormal": all(metric[i][j] == (1 if i == j else 0) for i in range(7) for j in range(7)),
        "closed": closed.is_zero(),
        "residual": residual,
        "residual_zero": residual.is_zero(),
        "initial_class": classify_torsion(start).label,
        "initial_dpsi_nonzero": bool(unit.d(start.psi)),
    }


def heisenberg_example_algebra() -> ScaledAlgebra:
    """``f = (1 - 5t/3)^{1/10}`` on ``e^1..e^6`` and ``f^{-3}`` on ``e^7``."""
    ctx = RingContext(Fraction(-5, 3), m_graded=False)
    return ScaledAlgebra(get_algebra("h7"), FrameScaling((Fraction(1, 10),) * 6 + (Fraction(-3, 10),), ctx))


def heisenberg_example_residual(t_val: float) -> float:
    """Max coefficient of ``dψ/dt + Δψ`` at time ``t`` (float mode)."""
    alg = heisenberg_example_algebra()
    ctx, sc = alg.context, alg.scaling
    u = ctx.u_value(1.0, t_val)
    if u <= 0:
        raise ValueError(f"t = {t_val} is outside the solution interval")
    table = alg.numeric(1, t_val)
    psi = hodge_star(canonical_phi(1.0))
    lap = laplacian(table, psi)
    # e-coefficient u^q gives x-coefficient derivative q*kappa/u
    ddt = Form(4, {idx: c * float(sc.exponent(idx) * ctx.kappa) / u for idx, c in psi.items()})
    return (ddt + lap).max_abs()


def heisenberg_example_check(times=(-1.0, -0.5, 0.0, 0.3, 0.5)) -> dict:
    alg = heisenberg_example_algebra()
    residuals = {float(t): heisenberg_example_residual(float(t)) for t in times}
    coclosed = max(alg.numeric(1, float(t)).d(hodge_star(canonical_phi(1.0))).max_abs() for t in times)
    e_phi = alg.to_e_basis(canonical_phi())
    ctx = alg.context
    shape_ok = all(
        e_phi[idx] == EPS3[idx] * (ctx.u(Fraction(-1, 10)) if 7 in idx else ctx.u(Fraction(3, 10)))
        for idx in EPS3
    )
    return {"residuals": residuals, "max_residual": max(residuals.values()), "coclosed_defect": coclosed, "e_basis_matches": shape_ok}
