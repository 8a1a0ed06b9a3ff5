"""Catalog of 7-dimensional Lie algebras and the Chevalley-Eilenberg differential.

Every algebra is described in a coframe ``e^1..e^7`` by

    de^k = eta_k * m * e^k ^ e^7 + sum_{i<j} c^k_ij * m * e^i ^ e^j  (+ extra terms)

with ``de^7 = 0``.  A :class:`FrameScaling` replaces ``e^i`` by the rescaled
coframe ``x^i = u**beta_i * e^i``; in that coframe the metric is the
identity and all structure constants are single monomials ``r * m * u**q``.
Brackets follow ``d(alpha)(X, Y) = -alpha([X, Y])``.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .exterior import DIM, FULL, Form, sort_sign
from .scalar import RingContext, Scalar, as_fraction

CATALOG_ENV = "G2FLOW_CATALOG"

# positions of the six nilpotent structure constants: (k, i, j) for c^k_ij
C6_SLOTS = ((1, 3, 6), (1, 4, 5), (2, 3, 5), (2, 4, 6), (4, 2, 6), (5, 2, 3))

CP_NAMES = tuple(f"cp{s}" for s in range(1, 8))


class CatalogError(ValueError):
    pass


class NumericOnly(ValueError):
    """Exact arithmetic requested on an algebra with float structure constants."""


def _parse_value(v):
    if isinstance(v, float):
        return v
    return as_fraction(v)


@dataclass(frozen=True)
class AlgebraSpec:
    """Structure data of one algebra.

    ``eta`` and ``c6`` are ratios to ``m``; ``extra`` holds further
    ``(k, i, j, value)`` constants with no ``m`` factor (value may be a float
    for algebras that only support numeric mode).
    """

    name: str
    eta: tuple = (0,) * 6
    c6: tuple = (0,) * 6
    extra: tuple = ()
    m_graded: bool = True

    def __post_init__(self):
        if len(self.eta) != 6 or len(self.c6) != 6:
            raise CatalogError(f"{self.name}: eta and c6 need six entries")
        object.__setattr__(self, "eta", tuple(as_fraction(x) for x in self.eta))
        object.__setattr__(self, "c6", tuple(as_fraction(x) for x in self.c6))
        extra = []
        for k, i, j, v in self.extra:
            if not (1 <= k <= DIM and 1 <= i <= DIM and 1 <= j <= DIM and i != j):
                raise CatalogError(f"{self.name}: bad index in extra ({k},{i},{j})")
            extra.append((int(k), int(i), int(j), _parse_value(v)))
        object.__setattr__(self, "extra", tuple(extra))

    @property
    def is_cp(self) -> bool:
        return self.name in CP_NAMES

    @property
    def selector(self) -> int:
        """``s`` for ``cp_s``; 0 for everything else."""
        return int(self.name[2:]) if self.is_cp else 0

    @property
    def numeric_only(self) -> bool:
        return any(isinstance(v, float) for *_, v in self.extra)

    def e_table(self) -> dict[int, dict[tuple[int, int], tuple[object, int]]]:
        """``de^k`` as ``{k: {(i, j): (value, m_pow)}}`` with ``i < j``."""
        table: dict[int, dict] = {k: {} for k in FULL}

        def put(k, i, j, v, m_pow):
            if not v:
                return
            sign, (a, b) = sort_sign((i, j))
            v = v if sign > 0 else -v
            old = table[k].get((a, b))
            if old is not None:
                v = old[0] + v
            table[k][(a, b)] = (v, m_pow)

        for k in range(1, 7):
            put(k, k, 7, self.eta[k - 1], 1)
        for (k, i, j), c in zip(C6_SLOTS, self.c6):
            put(k, i, j, c, 1)
        for k, i, j, v in self.extra:
            put(k, i, j, v, 0)
        return table

    def to_json(self) -> dict:
        def enc(x):
            return x if isinstance(x, float) else str(x)

        return {
            "name": self.name,
            "eta": [str(x) for x in self.eta],
            "c6": [str(x) for x in self.c6],
            "extra": [[k, i, j, enc(v)] for k, i, j, v in self.extra],
            "m_graded": self.m_graded,
        }


@dataclass(frozen=True)
class FrameScaling:
    """Exponents of ``f_i = u**beta_i`` and the ring that defines ``u``."""

    exponents: tuple
    context: RingContext

    def __post_init__(self):
        if len(self.exponents) != DIM:
            raise ValueError("need seven exponents")
        object.__setattr__(self, "exponents", tuple(as_fraction(b) for b in self.exponents))

    @classmethod
    def unit(cls, context: RingContext | None = None) -> "FrameScaling":
        return cls((0,) * DIM, context or RingContext(0))

    def exponent(self, idx) -> Fraction:
        return sum((self.exponents[i - 1] for i in idx), Fraction(0))

    def f(self, idx) -> Scalar:
        """``f_I = prod_{i in I} f_i`` as a Scalar."""
        return self.context.u(self.exponent(idx))

    def f_value(self, idx, m_val, t_val) -> float:
        u = self.context.u_value(float(m_val), float(t_val))
        return u ** float(self.exponent(idx))


class StructureTable:
    """Differentials ``dx^k`` of an orthonormal coframe, with any coefficient type."""

    def __init__(self, dx: dict[int, dict[tuple[int, int], object]]):
        self.dx = {k: {ij: c for ij, c in dx.get(k, {}).items() if c} for k in FULL}
        self._cache: dict[tuple[int, ...], Form] = {}

    def d_basis(self, idx: tuple[int, ...]) -> Form:
        """``d(x^I)`` for a sorted multi-index ``I``."""
        hit = self._cache.get(idx)
        if hit is not None:
            return hit
        out: dict = {}
        for r, k in enumerate(idx):
            for (a, b), c in self.dx[k].items():
                sign, new = sort_sign(idx[:r] + (a, b) + idx[r + 1:])
                if not sign:
                    continue
                if r % 2:
                    sign = -sign
                term = c if sign > 0 else -c
                out[new] = out[new] + term if new in out else term
        form = Form(len(idx) + 1, out)
        self._cache[idx] = form
        return form

    def d(self, a: Form) -> Form:
        if a.degree >= DIM:
            return Form(DIM)
        out = Form(a.degree + 1)
        for idx, c in a.items():
            out = out + c * self.d_basis(idx)
        return out

    def brackets(self) -> dict[tuple[int, int, int], object]:
        """Nonzero ``a^k_ij`` with ``[x_i, x_j] = sum_k a^k_ij x_k``, keyed ``(k, i, j)``."""
        out = {}
        for k, row in self.dx.items():
            for (i, j), c in row.items():
                out[(k, i, j)] = -c
                out[(k, j, i)] = c
        return out


@dataclass(frozen=True)
class ScaledAlgebra:
    spec: AlgebraSpec
    scaling: FrameScaling = field(default_factory=FrameScaling.unit)

    @property
    def context(self) -> RingContext:
        return self.scaling.context

    @property
    def table(self) -> StructureTable:
        return _exact_table(self)

    def numeric(self, m_val=1, t_val=0) -> StructureTable:
        """Float structure table at frozen ``(m, t)``."""
        m = float(m_val)
        dx: dict[int, dict] = {}
        for k, row in self.spec.e_table().items():
            dx[k] = {}
            for (i, j), (v, m_pow) in row.items():
                ratio = self.scaling.f_value((k,), m_val, t_val) / self.scaling.f_value(
                    (i, j), m_val, t_val
                )
                dx[k][(i, j)] = float(v) * m**m_pow * ratio
        return StructureTable(dx)

    def d(self, a: Form) -> Form:
        return self.table.d(a)

    def brackets(self):
        return self.table.brackets()

    def to_e_basis(self, a: Form) -> Form:
        """Rewrite a form given in ``x^I`` into ``e^I`` coefficients."""
        return Form(a.degree, {idx: c * self.scaling.f(idx) for idx, c in a.items()})

    def to_x_basis(self, a: Form) -> Form:
        return Form(a.degree, {idx: c * self.scaling.f(idx).inverse() for idx, c in a.items()})


@lru_cache(maxsize=256)
def _exact_table(alg: ScaledAlgebra) -> StructureTable:
    if alg.spec.numeric_only:
        raise NumericOnly(f"{alg.spec.name} has irrational constants; use numeric mode")
    ctx, sc = alg.context, alg.scaling
    dx: dict[int, dict] = {}
    for k, row in alg.spec.e_table().items():
        dx[k] = {}
        for (i, j), (v, m_pow) in row.items():
            q = sc.exponent((k,)) - sc.exponent((i, j))
            dx[k][(i, j)] = Scalar.monomial(ctx, v, m_pow, q)
    return StructureTable(dx)


def exterior_d(alg, a: Form) -> Form:
    return alg.d(a)


def x_structure_constants(alg) -> dict[tuple[int, int, int], object]:
    return alg.brackets()


# -- catalog ---------------------------------------------------------------


def _default_catalog_text() -> str:
    return resources.files("g2flow").joinpath("data/catalog.json").read_text()


def parse_catalog(text: str) -> list[AlgebraSpec]:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CatalogError(f"catalog is not valid JSON: {exc}") from exc
    records = raw["algebras"] if isinstance(raw, dict) else raw
    specs = []
    for rec in records:
        try:
            spec = AlgebraSpec(
                name=rec["name"],
                eta=tuple(rec.get("eta", ["0"] * 6)),
                c6=tuple(rec.get("c6", ["0"] * 6)),
                extra=tuple(tuple(e) for e in rec.get("extra", [])),
                m_graded=rec.get("m_graded", True),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise CatalogError(f"malformed catalog record {rec!r}: {exc}") from exc
        check_jacobi(spec)
        specs.append(spec)
    names = [s.name for s in specs]
    if len(set(names)) != len(names):
        raise CatalogError("duplicate algebra names")
    return sorted(specs, key=lambda s: s.name)


def jacobi_defect(spec: AlgebraSpec) -> float:
    """Largest coefficient of ``d(de^k)`` over k (0.0 for a Lie algebra)."""
    if spec.numeric_only:
        table = ScaledAlgebra(spec).numeric(1, 0)
        return max(table.d(table.d(Form.basis(k))).max_abs() for k in FULL)
    table = ScaledAlgebra(spec, FrameScaling.unit(RingContext(0, spec.m_graded))).table
    bad = [k for k in FULL if table.d(table.d(Form.basis(k)))]
    return float(len(bad))


def check_jacobi(spec: AlgebraSpec, tol: float = 1e-12) -> None:
    defect = jacobi_defect(spec)
    if defect > tol:
        raise CatalogError(f"{spec.name}: d^2 != 0 (defect {defect})")


def load_catalog(path: str | os.PathLike | None = None) -> list[AlgebraSpec]:
    """All algebras, sorted by name.  ``$G2FLOW_CATALOG`` overrides the bundled file."""
    path = path or os.environ.get(CATALOG_ENV)
    text = Path(path).read_text() if path else _default_catalog_text()
    return parse_catalog(text)


def get_algebra(name: str, path=None) -> AlgebraSpec:
    for spec in load_catalog(path):
        if spec.name == name:
            return spec
    raise KeyError(f"unknown algebra {name!r}")
