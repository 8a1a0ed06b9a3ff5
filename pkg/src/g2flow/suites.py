"""Verification suites shared by the command line and the tests.

Each suite yields :class:`Check` records; a failing check carries the
offending object rendered as text in ``witness``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

from . import curvature as cv
from .exterior import Form
from .flow import (
    NotASoliton,
    coflow_residual,
    coflow_to_flow,
    complementary_identity_defects,
    nilpotent_example_check,
    heisenberg_example_check,
    flow_residual,
    flow_to_coflow,
    flow_identity_checks,
    soliton_check,
    solve_flow_parameters,
)
from .g2ops import G2Structure, classify_torsion, laplacian_pattern_defect, lcp_conditions
from .liealg import AlgebraSpec, FrameScaling, ScaledAlgebra, jacobi_defect
from .scalar import RingContext, Scalar

SUITES = ("catalog", "flow", "coflow", "lcp", "soliton", "curvature", "lemma", "examples")


@dataclass(frozen=True)
class Check:
    algebra: str
    check: str
    status: str  # pass | fail | skip
    witness: str = ""

    def to_json(self) -> dict:
        return {"algebra": self.algebra, "check": self.check, "status": self.status, "witness": self.witness}


def _check(algebra: str, name: str, ok: bool, witness: Callable[[], str] | str = "") -> Check:
    if ok:
        return Check(algebra, name, "pass")
    return Check(algebra, name, "fail", witness() if callable(witness) else witness)


def _skip(algebra: str, name: str, why: str) -> Check:
    return Check(algebra, name, "skip", why)


def fmt(x) -> str:
    if isinstance(x, Form):
        return x.render("x") if x else "0"
    return str(x)


def _expected_lee(alg: ScaledAlgebra) -> Form:
    """``m e^7`` written in the orthonormal coframe."""
    return alg.to_x_basis(Form(1, {(7,): alg.context.m()}))


def run_catalog(spec: AlgebraSpec, **_) -> Iterator[Check]:
    defect = jacobi_defect(spec)
    yield _check(spec.name, "catalog.d_squared", defect <= 1e-12, f"defect {defect}")


def run_flow(spec: AlgebraSpec, **_) -> Iterator[Check]:
    if not spec.is_cp:
        yield _skip(spec.name, "flow", "no LCP flow ansatz for this algebra")
        return
    sol = solve_flow_parameters(spec)
    yield _check(spec.name, "flow.ansatz", not sol.violations(), lambda: "; ".join(sol.violations()))
    res = flow_residual(spec, sol)
    yield _check(spec.name, "flow.residual", res.is_zero(), lambda: fmt(res))
    defect = laplacian_pattern_defect(sol.scaled)
    yield _check(spec.name, "flow.closed_form_laplacian", defect.is_zero(), lambda: fmt(defect))


def run_coflow(spec: AlgebraSpec, **_) -> Iterator[Check]:
    if not spec.is_cp:
        yield _skip(spec.name, "coflow", "no LCP coflow ansatz for this algebra")
        return
    flow = solve_flow_parameters(spec)
    co = flow_to_coflow(flow)
    yield _check(spec.name, "coflow.ansatz", not co.violations(), lambda: "; ".join(co.violations()))
    res = coflow_residual(spec, co)
    yield _check(spec.name, "coflow.residual", res.is_zero(), lambda: fmt(res))
    bad = {k: v for k, v in complementary_identity_defects(flow, co).items() if v}
    yield _check(spec.name, "coflow.complementary_identity", not bad, lambda: str(bad))
    back = coflow_to_flow(co)
    yield _check(spec.name, "coflow.inverse_map", back == flow, lambda: f"{back} != {flow}")


def run_lcp(spec: AlgebraSpec, **_) -> Iterator[Check]:
    if not spec.is_cp:
        unit = ScaledAlgebra(spec, FrameScaling.unit(RingContext(0, spec.m_graded)))
        if spec.numeric_only:
            yield _skip(spec.name, "lcp", "exact torsion classification needs rational constants")
            return
        label = classify_torsion(G2Structure.canonical(unit)).label
        yield Check(spec.name, "lcp.class", "pass", label)
        return
    unit = ScaledAlgebra(spec, FrameScaling.unit(RingContext(0)))
    flow = solve_flow_parameters(spec)
    co = flow_to_coflow(flow)
    for tag, alg in (("unit", unit), ("flow", flow.scaled), ("coflow", co.scaled)):
        tc = classify_torsion(G2Structure.canonical(alg))
        ok = tc.label == "lcp" and tc.lee_form == _expected_lee(alg)
        yield _check(spec.name, f"lcp.{tag}", ok, lambda tc=tc: f"{tc.label} {fmt(tc.lee_form)}")
    cond = lcp_conditions(spec)
    yield Check(spec.name, "lcp.conditions", "pass", " ; ".join("=".join(c) for c in cond.classes))


def run_soliton(spec: AlgebraSpec, **_) -> Iterator[Check]:
    if not spec.is_cp:
        yield _skip(spec.name, "soliton", "no flow solution")
        return
    try:
        cert = soliton_check(spec)
    except NotASoliton as exc:
        yield Check(spec.name, "soliton", "fail", str(exc))
        return
    detail = f"lambda = {cert.lambda_over_u} m^2/f_7^2 ({cert.type})"
    yield Check(spec.name, "soliton", "pass" if cert.type == "shrinking" else "fail", detail)


def curvature_target(spec: AlgebraSpec, m_val=1, t_val=0):
    """The algebra whose metric is examined: flow solution for cp, unit scaling otherwise."""
    if spec.is_cp:
        return solve_flow_parameters(spec).scaled
    unit = ScaledAlgebra(spec, FrameScaling.unit(RingContext(0, spec.m_graded)))
    return unit.numeric(m_val, t_val) if spec.numeric_only else unit


def run_curvature(spec: AlgebraSpec, m_val=1, t_val=0, **_) -> Iterator[Check]:
    alg = curvature_target(spec, m_val, t_val)
    ct = cv.riemann(alg)
    bad = ct.symmetry_defects()
    yield _check(spec.name, "curvature.symmetries", not bad, lambda: str(bad[:5]))
    ric = cv.ricci_from_tensor(ct)
    diff = ric.scalar_curvature() - cv.sectional_sum(ct)
    yield _check(spec.name, "curvature.scalar_trace", not cv._nonzero(diff), lambda: fmt(diff))
    if not spec.is_cp:
        return
    ctx = alg.context
    name = spec.name
    if name == "cp1":
        target = Scalar.monomial(ctx, -1, 2, -1)
        off = [(i, j) for i in range(1, 8) for j in range(i + 1, 8) if ct[(i, j, j, i)] != target]
        yield _check(name, "curvature.sectional", not off, lambda: str(off))
        yield _check(name, "curvature.einstein", ric.einstein_constant == 6 * target, lambda: fmt(ric.einstein_constant))
    else:
        yield _check(name, "curvature.not_einstein", ric.einstein_constant is None, lambda: fmt(ric.einstein_constant))
        record = cv.load_curvature_tables().get("S" + name[2:])
        if record is not None:
            cmp = cv.compare_with_table(ct, record, ctx)
            yield _check(name, "curvature.table", cmp.ok, lambda: describe_comparison(cmp, record["C"]))
    yield _check(name, "curvature.flat_limit", cv.flat_limit_check(ct, "-inf"), "entries do not decay")
    yield _check(name, "curvature.coflow_ratio", cv.coflow_ricci_ratio_check(spec), "ratio identity fails")


def describe_comparison(cmp: "cv.TableComparison", n: int) -> str:
    parts = []
    for rep, (tab, got) in sorted(cmp.missing.items()):
        parts.append(f"R_{''.join(map(str, rep))}: table {_over_c(tab, n)} C_{n}, computed {_over_c(got, n)} C_{n}")
    for rep, got in sorted(cmp.extra.items()):
        parts.append(f"R_{''.join(map(str, rep))}: not tabulated, computed {_over_c(got, n)} C_{n}")
    parts.extend(f"conflicting chain entry {c}" for c in cmp.inconsistent)
    return "; ".join(parts)


def _over_c(v, n: int) -> str:
    if not v:
        return "0"
    q = v / cv.curvature_constant(n, v.ctx)
    return str(q.constant_value()) if q.is_constant() else str(q)


def run_lemma(spec: AlgebraSpec, **_) -> Iterator[Check]:
    if not spec.is_cp:
        yield _skip(spec.name, "lemma", "no flow solution")
        return
    res = flow_identity_checks(solve_flow_parameters(spec))
    for part in ("part_i", "part_ii"):
        bad = [r for r in res[part] if not r["ok"]]
        yield _check(spec.name, f"lemma.{part}", not bad, lambda bad=bad: str(bad))


def run_examples(m_val=1, t_val=0) -> Iterator[Check]:
    ex1 = nilpotent_example_check()
    ok1 = all(ex1[k] for k in ("e_basis_matches", "orthonormal", "closed", "residual_zero"))
    yield _check("n2", "examples.nilpotent_closed_flow", ok1, lambda: fmt(ex1["residual"]))
    ex2 = heisenberg_example_check()
    ok2 = ex2["max_residual"] < 1e-9 and ex2["coclosed_defect"] < 1e-9 and ex2["e_basis_matches"]
    yield _check("h7", "examples.heisenberg_coflow", ok2, lambda: str(ex2))


RUNNERS = {
    "catalog": run_catalog,
    "flow": run_flow,
    "coflow": run_coflow,
    "lcp": run_lcp,
    "soliton": run_soliton,
    "curvature": run_curvature,
    "lemma": run_lemma,
}


def run(specs: list[AlgebraSpec], suites: list[str], m_val=1, t_val=0) -> list[Check]:
    out: list[Check] = []
    for spec in specs:
        for suite in suites:
            if suite in RUNNERS:
                out.extend(RUNNERS[suite](spec, m_val=m_val, t_val=t_val))
    if "examples" in suites:
        out.extend(run_examples(m_val, t_val))
    return out


# -- golden tables ---------------------------------------------------------------


def table2(specs: list[AlgebraSpec]) -> list[dict]:
    return [s.to_json() for s in specs]


def table3(specs: list[AlgebraSpec]) -> list[dict]:
    rows = []
    for s in specs:
        if s.is_cp:
            sol = solve_flow_parameters(s)
            rows.append({"algebra": s.name, "alpha": str(sol.alpha), "beta": [str(b) for b in sol.beta],
                         "interval": _interval(sol.interval)})
    return rows


def coflow_solutions(specs: list[AlgebraSpec]) -> list[dict]:
    rows = []
    for s in specs:
        if s.is_cp:
            co = flow_to_coflow(solve_flow_parameters(s))
            rows.append({"algebra": s.name, "gamma": str(co.gamma), "delta": [str(d) for d in co.delta],
                         "interval": _interval(co.interval)})
    return rows


def soliton_constants(specs: list[AlgebraSpec]) -> list[dict]:
    rows = []
    for s in specs:
        if s.is_cp:
            cert = soliton_check(s)
            rows.append({"algebra": s.name, "lambda_times_f7sq_over_m2": str(cert.lambda_over_u),
                         "vector_field": "-(m/f_7) x_7", "type": cert.type})
    return rows


def ricci_diagonals(specs: list[AlgebraSpec]) -> list[dict]:
    rows = []
    for s in specs:
        if s.is_cp:
            alg = solve_flow_parameters(s).scaled
            n = cv.C_FOR_ALGEBRA[s.name]
            C = cv.curvature_constant(n, alg.context)
            ric = cv.ricci(alg)
            diag = [str((d / C).constant_value()) for d in ric.diagonal()]
            rows.append({"algebra": s.name, "C": n, "diagonal_over_C": diag,
                         "off_diagonal_zero": ric.is_diagonal(), "einstein": ric.einstein_constant is not None})
    return rows


def curvature_rows(specs: list[AlgebraSpec]) -> list[dict]:
    rows = []
    for s in specs:
        if s.is_cp:
            alg = solve_flow_parameters(s).scaled
            n = cv.C_FOR_ALGEBRA[s.name]
            for (i, j, k, l), q in sorted(cv.as_multiples(cv.riemann(alg), n).items()):
                rows.append({"algebra": s.name, "i": i, "j": j, "k": k, "l": l,
                             "coeff_over_C": str(q), "which_C": f"C{n}"})
    return rows


def _interval(bounds) -> list:
    """Bounds in units of ``1/m^2``; None means infinite."""
    lo, hi = bounds
    return [None if lo is None else str(lo), None if hi is None else str(hi)]

