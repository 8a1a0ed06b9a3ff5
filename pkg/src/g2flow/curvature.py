"""Levi-Civita connection and curvature of a left-invariant metric.

The metric is the one making the coframe ``x^1..x^7`` orthonormal, so the
Koszul formula only involves the bracket constants ``a^k_ij``.
Conventions: ``R(X,Y) = [∇_X, ∇_Y] - ∇_[X,Y]``,
``R_ijkl = g(R(x_i, x_j) x_k, x_l)`` and ``Ric_ij = sum_k R_kijk``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from itertools import product

from .exterior import DIM
from .scalar import RingContext, Scalar

IDX = range(1, DIM + 1)

# C_n = -m^2 / D_n * u^{-1}
C_DENOMINATORS = {1: Fraction(1, 6), 2: Fraction(3), 3: Fraction(4), 4: Fraction(5)}

# which C_n normalises the curvature of each cp algebra
C_FOR_ALGEBRA = {"cp1": 1, "cp2": 2, "cp3": 3, "cp4": 4, "cp5": 3, "cp6": 2, "cp7": 4}


def curvature_constant(n: int, ctx: RingContext) -> Scalar:
    """``C_n`` of the curvature tables: ``-6m^2/u``, ``-m^2/(3u)``, ``-m^2/(4u)``, ``-m^2/(5u)``."""
    return Scalar.monomial(ctx, -1 / C_DENOMINATORS[n], 2, -1)


def levi_civita(alg) -> dict[tuple[int, int, int], object]:
    """Nonzero ``Γ^k_ij`` with ``∇_{x_i} x_j = sum_k Γ^k_ij x_k``, keyed ``(k, i, j)``."""
    a = alg.brackets()
    gamma = {}
    for i, j, k in product(IDX, repeat=3):
        terms = [a.get((k, i, j)), a.get((i, j, k)), a.get((j, k, i))]
        if not any(terms):
            continue
        val = 0
        if terms[0]:
            val = val + terms[0]
        if terms[1]:
            val = val - terms[1]
        if terms[2]:
            val = val + terms[2]
        val = val * Fraction(1, 2)
        if val:
            gamma[(k, i, j)] = val
    return gamma


_SYM = (
    # (permutation of positions, sign)
    ((0, 1, 2, 3), 1), ((1, 0, 2, 3), -1), ((0, 1, 3, 2), -1), ((1, 0, 3, 2), 1),
    ((2, 3, 0, 1), 1), ((3, 2, 0, 1), -1), ((2, 3, 1, 0), -1), ((3, 2, 1, 0), 1),
)


def canonical_index(idx: tuple[int, int, int, int]) -> tuple[tuple[int, int, int, int], int]:
    """Least representative of ``idx`` under the Riemann pair symmetries, with its sign."""
    best = None
    for perm, sign in _SYM:
        cand = tuple(idx[p] for p in perm)
        if best is None or cand < best[0]:
            best = (cand, sign)
    return best


@dataclass
class CurvatureTensor:
    R: dict  # (i, j, k, l) -> coefficient, nonzero entries only
    context: RingContext | None = None

    def __getitem__(self, idx):
        return self.R.get(tuple(idx), 0)

    def canonical(self) -> dict:
        """Nonzero entries at their least representatives."""
        out = {}
        for idx, v in self.R.items():
            rep, sign = canonical_index(idx)
            if rep == idx:
                out[idx] = v
        return out

    def is_zero(self) -> bool:
        return not self.R

    def symmetry_defects(self) -> list[tuple]:
        bad = []
        for idx in product(IDX, repeat=4):
            i, j, k, l = idx
            v = self[idx]
            for other, sign in (((j, i, k, l), -1), ((i, j, l, k), -1), ((k, l, i, j), 1)):
                if _nonzero(v - sign * self[other]):
                    bad.append((idx, other))
            if _nonzero(v + self[(j, k, i, l)] + self[(k, i, j, l)]):
                bad.append((idx, "bianchi"))
        return bad


def riemann(alg) -> CurvatureTensor:
    a = alg.brackets()
    G = levi_civita(alg)
    # index Γ by (i, k) -> {l: Γ^l_{ik}} etc. for the contractions below
    conn: dict[tuple[int, int], dict[int, object]] = {}
    for (k, i, j), v in G.items():
        conn.setdefault((i, j), {})[k] = v
    brk: dict[tuple[int, int], dict[int, object]] = {}
    for (p, i, j), v in a.items():
        brk.setdefault((i, j), {})[p] = v
    R = {}
    for i, j, k in product(IDX, repeat=3):
        if i == j:
            continue
        acc: dict[int, object] = {}

        def add(l, val):
            acc[l] = acc[l] + val if l in acc else val

        # ∇_i ∇_j x_k
        for p, g1 in conn.get((j, k), {}).items():
            for l, g2 in conn.get((i, p), {}).items():
                add(l, g1 * g2)
        # - ∇_j ∇_i x_k
        for p, g1 in conn.get((i, k), {}).items():
            for l, g2 in conn.get((j, p), {}).items():
                add(l, -(g1 * g2))
        # - ∇_[x_i, x_j] x_k
        for p, c in brk.get((i, j), {}).items():
            for l, g2 in conn.get((p, k), {}).items():
                add(l, -(c * g2))
        for l, v in acc.items():
            if _nonzero(v):
                R[(i, j, k, l)] = v
    ctx = next((v.ctx for v in R.values() if isinstance(v, Scalar)), None)
    return CurvatureTensor(R, ctx)


@dataclass
class RicciData:
    ric: list[list[object]]
    einstein_constant: object | None

    def diagonal(self) -> list:
        return [self.ric[i][i] for i in range(DIM)]

    def is_diagonal(self) -> bool:
        return all(not self.ric[i][j] for i in range(DIM) for j in range(DIM) if i != j)

    def scalar_curvature(self):
        total = 0
        for x in self.diagonal():
            total = total + x
        return total


def ricci_from_tensor(ct: CurvatureTensor) -> RicciData:
    ric = [[0] * DIM for _ in range(DIM)]
    for (k, i, j, l), v in ct.R.items():
        if k == l:
            ric[i - 1][j - 1] = ric[i - 1][j - 1] + v
    diag = [ric[i][i] for i in range(DIM)]
    einstein = None
    off = any(_nonzero(ric[i][j]) for i in range(DIM) for j in range(DIM) if i != j)
    if not off and not any(_nonzero(d - diag[0]) for d in diag):
        einstein = diag[0]
    return RicciData(ric, einstein)


def ricci(alg) -> RicciData:
    return ricci_from_tensor(riemann(alg))


def sectional_sum(ct: CurvatureTensor):
    """``sum_{i<j} 2 R_ijji`` (equals the scalar curvature)."""
    total = 0
    for i in IDX:
        for j in IDX:
            if i < j and ct[(i, j, j, i)]:
                total = total + 2 * ct[(i, j, j, i)]
    return total


def flat_limit_check(ct: CurvatureTensor, direction: str) -> bool:
    """Whether every entry decays as ``u -> oo`` when ``t -> direction`` (``'-inf'``/``'+inf'``)."""
    if ct.is_zero():
        return True
    ctx = ct.context
    if ctx is None or ctx.kappa == 0:
        return False
    grows = (ctx.kappa < 0 and direction == "-inf") or (ctx.kappa > 0 and direction == "+inf")
    if not grows:
        return False
    for v in ct.R.values():
        if not isinstance(v, Scalar):
            return False
        if any(q >= 0 for _c, _p, q in v.terms()):
            return False
    return True


# -- tabulated curvature -----------------------------------------------------


def load_curvature_tables() -> dict:
    text = resources.files("g2flow").joinpath("data/curvature_tables.json").read_text()
    return json.loads(text)


@dataclass
class TableComparison:
    missing: dict  # tabulated but computed differently / zero: rep -> (tabulated, computed)
    extra: dict  # computed nonzero but not tabulated: rep -> computed
    inconsistent: list  # tabulated chains that contradict each other

    @property
    def ok(self) -> bool:
        return not (self.missing or self.extra or self.inconsistent)


def tabulated_entries(record: dict, ctx: RingContext) -> tuple[dict, list]:
    """Expand a table record into ``{canonical index: Scalar}`` plus contradictions."""
    C = curvature_constant(record["C"], ctx)
    out: dict = {}
    conflicts = []
    for chain in record["chains"]:
        value = Fraction(chain["value"]) * C
        for member in chain["members"]:
            sign = -1 if member.startswith("-") else 1
            idx = tuple(int(ch) for ch in member.lstrip("-"))
            rep, s2 = canonical_index(idx)
            v = value * (sign * s2)
            if rep in out and out[rep] != v:
                conflicts.append((member, str(out[rep]), str(v)))
            out.setdefault(rep, v)
    return out, conflicts


def tensor_from_table(record: dict, ctx: RingContext) -> CurvatureTensor:
    """The full tensor obtained by extending a table record through the pair symmetries."""
    table, _ = tabulated_entries(record, ctx)
    R = {}
    for rep, v in table.items():
        for perm, sign in _SYM:
            R[tuple(rep[p] for p in perm)] = v * sign
    return CurvatureTensor(R, ctx)


def compare_with_table(ct: CurvatureTensor, record: dict, ctx: RingContext) -> TableComparison:
    table, conflicts = tabulated_entries(record, ctx)
    computed = ct.canonical()
    missing = {}
    for rep, v in table.items():
        got = computed.get(rep, 0)
        if got != v:
            missing[rep] = (v, got)
    extra = {rep: v for rep, v in computed.items() if rep not in table}
    return TableComparison(missing, extra, conflicts)


def as_multiples(ct: CurvatureTensor, n: int) -> dict:
    """Canonical entries divided by ``C_n`` (rationals when exact)."""
    C = curvature_constant(n, ct.context)
    out = {}
    for rep, v in ct.canonical().items():
        q = v / C
        out[rep] = q.constant_value() if q.is_constant() else q
    return out


def ricci_ratio_check(flow_alg, coflow_alg, points) -> bool:
    """``Ric(g~) = (u_flow/u_coflow) Ric(g)`` entrywise at sample points ``(m, t)``."""
    ric_f = ricci(flow_alg).ric
    ric_c = ricci(coflow_alg).ric
    for m_val, t_val in points:
        uf = flow_alg.context.u_value(float(m_val), float(t_val))
        uc = coflow_alg.context.u_value(float(m_val), float(t_val))
        if uf <= 0 or uc <= 0:
            raise ValueError(f"sample point ({m_val}, {t_val}) outside both intervals")
        for i in range(DIM):
            for j in range(DIM):
                a = _ev(ric_c[i][j], m_val, t_val)
                b = uf / uc * _ev(ric_f[i][j], m_val, t_val)
                if abs(a - b) > 1e-12 * max(1.0, abs(a), abs(b)):
                    return False
    return True


def coflow_ricci_ratio_check(spec, points=None) -> bool:
    """Compare the Ricci tensors of the flow and coflow metrics of ``spec``."""
    from .flow import flow_to_coflow, solve_flow_parameters

    flow = solve_flow_parameters(spec)
    coflow = flow_to_coflow(flow)
    if points is None:
        points = _ratio_points(flow, coflow)
    return ricci_ratio_check(flow.scaled, coflow.scaled, points)


def _ratio_points(flow, coflow):
    # small |t| keeps both u = 1 - alpha m^2 t and 1 - gamma m^2 t positive
    pts = []
    for m_val in (Fraction(1), Fraction(1, 2), Fraction(2)):
        for t_val in (Fraction(0), Fraction(-1, 100), Fraction(1, 200)):
            if flow.context.u_value(m_val, t_val) > 0 and coflow.context.u_value(m_val, t_val) > 0:
                pts.append((m_val, t_val))
    return pts


def _nonzero(x, tol: float = 1e-12) -> bool:
    if isinstance(x, float):
        return abs(x) > tol
    return bool(x)


def _ev(x, m_val, t_val) -> float:
    return x.eval(m_val, t_val) if isinstance(x, Scalar) else float(x)
