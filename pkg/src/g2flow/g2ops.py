"""G2-structures on the orthonormal coframe of a (scaled) Lie algebra.

Covers the metric of a 3-form, torsion-class detection (parallel, closed,
coclosed, locally conformal parallel), the LCP relations between the scaling
functions, and the Hodge Laplacian ``dδ + δd``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _linalg
from .exterior import (
    DIM,
    EPS3,
    FULL,
    Form,
    canonical_phi,
    g2_bilinear,
    hodge_star,
    wedge,
)
from .liealg import AlgebraSpec, ScaledAlgebra, StructureTable
from .scalar import RingContext, Scalar, rational_power


class RequiresNumericMode(ValueError):
    pass


class UnsupportedAlgebra(ValueError):
    pass


# -- structures ----------------------------------------------------------------


@dataclass
class G2Structure:
    algebra: object  # ScaledAlgebra or StructureTable
    phi: Form
    psi: Form = None

    def __post_init__(self):
        if self.phi.degree != 3:
            raise ValueError("phi must be a 3-form")
        if self.psi is None:
            self.psi = hodge_star(self.phi)

    @classmethod
    def canonical(cls, algebra) -> "G2Structure":
        return cls(algebra, canonical_phi())


@dataclass
class TorsionClass:
    label: str  # parallel | closed | coclosed | lcp | other
    lee_form: Form | None = None

    def to_json(self) -> dict:
        lee = None
        if self.lee_form is not None:
            lee = [
                [list(idx), c.to_json() if isinstance(c, Scalar) else str(c)]
                for idx, c in self.lee_form.items()
            ]
        return {"class": self.label, "lee_form": lee}


# -- metric ------------------------------------------------------------------


def metric_from_phi(phi: Form, numeric: bool = False):
    """Metric induced by a 3-form: ``g = B * det(B)**(-1/9)``.

    Exact mode needs ``B`` diagonal with monomial entries; otherwise pass
    ``numeric=True`` and get a numpy array.
    """
    B = g2_bilinear(phi)
    if numeric:
        arr = np.array([[float(x) if not isinstance(x, Scalar) else x.eval(1, 0) for x in row] for row in B])
        det = np.linalg.det(arr)
        return arr * np.cbrt(np.cbrt(det)) ** -1
    for i in range(DIM):
        for j in range(DIM):
            if i != j and B[i][j]:
                raise RequiresNumericMode("metric form is not diagonal; requires numeric mode")
    diag = [B[i][i] for i in range(DIM)]
    ctx = next((x.ctx for x in diag if isinstance(x, Scalar)), None)
    if ctx is not None:
        diag = [x if isinstance(x, Scalar) else Scalar.const(ctx, x) for x in diag]
        if not all(x.is_monomial() for x in diag):
            raise RequiresNumericMode("non-monomial metric entry; requires numeric mode")
    det = diag[0]
    for x in diag[1:]:
        det = det * x
    if not det:
        raise ValueError("degenerate 3-form")
    try:
        factor = det ** Fraction(-1, 9) if ctx is not None else rational_power(Fraction(det), Fraction(-1, 9))
    except ValueError as exc:
        raise RequiresNumericMode(str(exc)) from exc
    return [[diag[i] * factor if i == j else 0 for j in range(DIM)] for i in range(DIM)]


# -- Hodge theory on the orthonormal coframe ---------------------------------


def codifferential(alg, a: Form) -> Form:
    """``δa = (-1)**k * d*a`` on ``k``-forms in dimension 7."""
    if a.degree == 0:
        return Form(0)  # Λ^{-1} is trivial; represented by the zero 0-form
    out = hodge_star(alg.d(hodge_star(a)))
    return -out if a.degree % 2 else out


def laplacian(alg, a: Form) -> Form:
    """Hodge Laplacian ``dδ + δd``."""
    parts = []
    if a.degree > 0:
        parts.append(alg.d(codifferential(alg, a)))
    if a.degree < DIM:
        parts.append(codifferential(alg, alg.d(a)))
    out = Form(a.degree)
    for p in parts:
        if p.degree == a.degree:
            out = out + p
    return out


# -- torsion -----------------------------------------------------------------


def _coefficient_rows(basis_forms: list[Form], target: Form, degree: int):
    keys = sorted(set().union(*[set(f.keys()) for f in basis_forms], set(target.keys())))
    rows = [[f[k] for f in basis_forms] for k in keys]
    rhs = [target[k] for k in keys]
    return rows, rhs


def solve_lee_form(s: G2Structure) -> Form | None:
    """The 1-form ``τ`` with ``dφ = 3τ^φ`` and ``d*φ = 4τ^*φ``, or None."""
    dphi, dpsi = s.algebra.d(s.phi), s.algebra.d(s.psi)
    units = [Form.basis(i) for i in FULL]
    rows1, rhs1 = _coefficient_rows([3 * wedge(e, s.phi) for e in units], dphi, 4)
    rows2, rhs2 = _coefficient_rows([4 * wedge(e, s.psi) for e in units], dpsi, 5)
    sol = _linalg.solve(rows1 + rows2, rhs1 + rhs2)
    if sol.values is None:
        return None
    tau = Form(1, {(i,): v for i, v in zip(FULL, sol.values)})
    # the system is overdetermined; confirm the candidate exactly
    if dphi != 3 * wedge(tau, s.phi) or dpsi != 4 * wedge(tau, s.psi):
        return None
    return tau


def classify_torsion(s: G2Structure) -> TorsionClass:
    closed = s.algebra.d(s.phi).is_zero()
    coclosed = s.algebra.d(s.psi).is_zero()
    if closed and coclosed:
        return TorsionClass("parallel")
    if closed:
        return TorsionClass("closed")
    if coclosed:
        return TorsionClass("coclosed")
    tau = solve_lee_form(s)
    if tau is None or s.algebra.d(tau):
        return TorsionClass("other")
    return TorsionClass("lcp", tau)


# -- LCP relations between the scaling functions -----------------------------


class _FMonomials:
    """Sums of ``c * m**p * f_1**a_1 ... f_7**a_7`` (generic scaling functions)."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def mono(cls, c, m_pow, exps):
        return cls({(m_pow, tuple(exps)): Fraction(c)})

    def _lift(self, other):
        if isinstance(other, _FMonomials):
            return other
        return _FMonomials.mono(other, 0, (0,) * DIM)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return _FMonomials(out)

    __radd__ = __add__

    def __neg__(self):
        return _FMonomials({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) + (-self)

    def __mul__(self, other):
        other = self._lift(other)
        out: dict = {}
        for (p1, e1), c1 in self.terms.items():
            for (p2, e2), c2 in other.terms.items():
                k = (p1 + p2, tuple(a + b for a, b in zip(e1, e2)))
                out[k] = out.get(k, 0) + c1 * c2
        return _FMonomials(out)

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.terms)


def _unit(i):
    return tuple(1 if j == i else 0 for j in FULL)


def _generic_table(spec: AlgebraSpec) -> StructureTable:
    dx = {}
    for k, row in spec.e_table().items():
        dx[k] = {}
        for (i, j), (v, m_pow) in row.items():
            exps = tuple(a - b - c for a, b, c in zip(_unit(k), _unit(i), _unit(j)))
            dx[k][(i, j)] = _FMonomials.mono(v, m_pow, exps)
    return StructureTable(dx)


def _label(exps) -> str:
    return "".join(str(i) for i, e in zip(FULL, exps) for _ in range(e))


@dataclass
class LCPConditions:
    """Equality classes such as ``("17", "36", "45")`` meaning ``f_17 = f_36 = f_45``."""

    classes: list[tuple[str, ...]]
    relations: list[tuple[int, ...]] = field(default_factory=list)  # exponent vectors v: prod f^v = 1

    def as_sets(self) -> set[frozenset[str]]:
        return {frozenset(c) for c in self.classes}


class InconsistentLCP(ValueError):
    pass


def lcp_conditions(spec: AlgebraSpec) -> LCPConditions:
    """Relations among the scaling functions keeping ``dφ = 3m e^7^φ`` and ``d*φ = 4m e^7^*φ``.

    Expands both equations with symbolic ``f_i`` and reduces them: two-term
    equations give monomial equalities, longer ones must follow from those.
    """
    if not spec.is_cp:
        raise UnsupportedAlgebra(f"{spec.name} is not one of cp1..cp7")
    table = _generic_table(spec)
    phi = canonical_phi()
    psi = hodge_star(phi)
    # 3m e^7 = 3m f_7^{-1} x^7
    lee = Form(1, {(7,): _FMonomials.mono(1, 1, tuple(-x for x in _unit(7)))})
    eqs = list((table.d(phi) - 3 * wedge(lee, phi)).items())
    eqs += list((table.d(psi) - 4 * wedge(lee, psi)).items())

    relations: list[tuple[int, ...]] = []
    pairs: list[tuple[tuple, tuple]] = []
    longer = []
    for idx, poly in eqs:
        terms = sorted(poly.terms.items())
        if len(terms) == 1:
            raise InconsistentLCP(f"{spec.name}: coefficient of x^{idx} cannot vanish")
        if len(terms) == 2:
            ((_, e1), c1), ((_, e2), c2) = terms
            if c1 + c2:
                raise InconsistentLCP(f"{spec.name}: x^{idx} forces a non-unit constant ratio")
            v = tuple(a - b for a, b in zip(e1, e2))
            pos = tuple(max(x, 0) for x in v)
            neg = tuple(max(-x, 0) for x in v)
            pairs.append((pos, neg))
            relations.append(v)
        else:
            longer.append((idx, terms))
    for idx, terms in longer:
        base = terms[0][0][1]
        for (_, e), _c in terms[1:]:
            diff = [a - b for a, b in zip(e, base)]
            if not _linalg.in_span(diff, relations):
                raise InconsistentLCP(f"{spec.name}: x^{idx} is not implied by pairwise relations")
        if sum(c for _, c in terms):
            raise InconsistentLCP(f"{spec.name}: x^{idx} fails at t = 0")

    parent: dict[str, str] = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for pos, neg in pairs:
        a, b = find(_label(pos)), find(_label(neg))
        if a != b:
            parent[max(a, b)] = min(a, b)
    groups: dict[str, list[str]] = {}
    for x in list(parent):
        groups.setdefault(find(x), []).append(x)
    classes = sorted(tuple(sorted(g)) for g in groups.values())
    return LCPConditions(classes, relations)


def beta_relations(spec: AlgebraSpec) -> list[tuple[int, ...]]:
    """Linear relations ``v . beta = 0`` for power-law scalings ``f_i = u**beta_i``.

    One vector per adjacent pair in each equality class.
    """
    out = []
    for cls in lcp_conditions(spec).classes:
        for a, b in zip(cls, cls[1:]):
            v = [0] * DIM
            for ch in a:
                v[int(ch) - 1] += 1
            for ch in b:
                v[int(ch) - 1] -= 1
            out.append(tuple(v))
    return out


def scaling_is_lcp_compatible(spec: AlgebraSpec, betas) -> bool:
    return all(
        sum(Fraction(x) * b for x, b in zip(v, betas)) == 0 for v in beta_relations(spec)
    )


# -- closed-form Laplacian coefficients ----------------------------------------


def closed_form_rationals(spec: AlgebraSpec) -> dict[tuple[int, int, int], Fraction]:
    """``f_7**2 * Δ_ijk / m**2`` for each ``(i,j,k)`` in the canonical pattern.

    ``Δ_ijk`` is the coefficient of ``ε(i,j,k) x^{ijk}`` in ``Δφ``.
    """
    if not spec.is_cp:
        raise UnsupportedAlgebra(f"{spec.name} is not one of cp1..cp7")
    e1, e2, e3, e4, e5, e6 = spec.eta
    d = {s: Fraction(int(spec.selector == s)) for s in range(1, 8)}
    F = Fraction
    return {
        (1, 2, 7): 3 * (4 + e3 + e4 + e5 + e6) + 4 * (e1 + e2),
        (3, 4, 7): F(6, 5) * d[7] + 4 * (e3 + e4),
        (5, 6, 7): F(6, 5) * d[7] + 4 * (e5 + e6),
        (1, 3, 5): F(4, 3) * d[6] + 3 * (e2 + e4 + e6),
        (1, 4, 6): F(8, 5) * d[4] + 2 * d[5] + F(4, 3) * d[6] + 3 * (e2 + e3 + e5),
        (2, 3, 6): F(8, 3) * d[2] + 2 * d[3] + F(8, 5) * d[4] + F(4, 3) * d[6]
        + F(24, 5) * d[7] + 3 * (e1 + e4 + e5),
        # the eta term enters with a plus sign (cp1 requires -9 here)
        (2, 4, 5): 2 * d[3] + F(8, 5) * d[4] + 2 * d[5] + F(4, 3) * d[6] + 3 * (e1 + e3 + e6),
    }


def laplacian_coefficients_closed_form(
    spec: AlgebraSpec, ctx: RingContext | None = None
) -> dict[tuple[int, int, int], Scalar]:
    ctx = ctx or RingContext(0)
    return {
        idx: Scalar.monomial(ctx, c, 2, 0) for idx, c in closed_form_rationals(spec).items()
    }


def laplacian_pattern_defect(alg: ScaledAlgebra) -> Form:
    """Generic ``Δφ`` minus the closed-form prediction; zero when both paths agree."""
    spec, sc = alg.spec, alg.scaling
    lap = laplacian(alg, canonical_phi())
    pred = {}
    f7_inv_sq = alg.context.u(-2 * sc.exponents[6])
    for idx, c in laplacian_coefficients_closed_form(spec, alg.context).items():
        pred[idx] = EPS3[idx] * c * f7_inv_sq
    return lap - Form(3, pred)
