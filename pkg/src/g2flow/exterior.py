"""Alternating forms on a 7-dimensional space with a fixed orthonormal coframe.

Forms are sparse maps from strictly increasing index tuples (1-based) to
coefficients.  Coefficients may be ints, Fractions, floats or
:class:`~g2flow.scalar.Scalar`; anything supporting ``+``, ``*`` and
truthiness-as-nonzero works.  Orientation is ``e^1 ^ ... ^ e^7``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Mapping

DIM = 7
FULL = tuple(range(1, DIM + 1))

# index sets of the canonical 3-form and its dual 4-form, with signs
EPS3: dict[tuple[int, ...], int] = {
    (1, 2, 7): 1, (1, 3, 5): 1, (3, 4, 7): 1, (5, 6, 7): 1,
    (1, 4, 6): -1, (2, 3, 6): -1, (2, 4, 5): -1,
}
EPS4: dict[tuple[int, ...], int] = {
    (1, 2, 3, 4): 1, (1, 2, 5, 6): 1, (1, 3, 6, 7): 1, (1, 4, 5, 7): 1,
    (2, 3, 5, 7): 1, (3, 4, 5, 6): 1, (2, 4, 6, 7): -1,
}


def sort_sign(seq: Iterable[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the permutation sorting ``seq`` (0 on a repeated index)."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0, ()
    sign = 1
    # insertion sort, counting transpositions
    for i in range(1, len(seq)):
        j = i
        while j > 0 and seq[j - 1] > seq[j]:
            seq[j - 1], seq[j] = seq[j], seq[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(seq)


def complement(idx: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(i for i in FULL if i not in idx)


def multi_indices(k: int) -> Iterator[tuple[int, ...]]:
    return combinations(FULL, k)


def _fmt_index(idx: tuple[int, ...]) -> str:
    return "".join(str(i) for i in idx) if idx else ""


class Form:
    """A degree-``k`` alternating form ``sum_I c_I e^I``."""

    __slots__ = ("degree", "_coeffs")

    def __init__(self, degree: int, coeffs: Mapping[tuple[int, ...], object] | None = None):
        if not 0 <= degree <= DIM:
            raise ValueError(f"degree {degree} outside 0..{DIM}")
        self.degree = degree
        clean = {}
        for idx, c in (coeffs or {}).items():
            idx = tuple(idx)
            if len(idx) != degree:
                raise ValueError(f"index {idx} does not have length {degree}")
            if any(b <= a for a, b in zip(idx, idx[1:])) or (
                idx and not (1 <= idx[0] and idx[-1] <= DIM)
            ):
                raise ValueError(f"index {idx} is not strictly increasing in 1..{DIM}")
            if c:
                clean[idx] = c
        self._coeffs = clean

    @classmethod
    def basis(cls, *indices: int, coeff=1) -> "Form":
        """``coeff * e^{i1} ^ ... ^ e^{ik}`` for indices in any order."""
        sign, idx = sort_sign(indices)
        if sign == 0:
            return cls(len(indices))
        return cls(len(indices), {idx: coeff if sign > 0 else -coeff})

    @classmethod
    def scalar(cls, c) -> "Form":
        return cls(0, {(): c})

    @classmethod
    def zero(cls, degree: int) -> "Form":
        return cls(degree)

    # -- access ---------------------------------------------------------------
    def __getitem__(self, idx) -> object:
        return self._coeffs.get(tuple(idx), 0)

    def items(self) -> list[tuple[tuple[int, ...], object]]:
        return sorted(self._coeffs.items())

    def keys(self):
        return sorted(self._coeffs)

    def __len__(self):
        return len(self._coeffs)

    def __bool__(self):
        return bool(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def map(self, fn) -> "Form":
        return Form(self.degree, {k: fn(c) for k, c in self._coeffs.items()})

    # -- linear structure -----------------------------------------------------
    def _check(self, other: "Form"):
        if not isinstance(other, Form):
            return NotImplemented
        if other.degree != self.degree:
            raise ValueError(f"degree mismatch {self.degree} vs {other.degree}")
        return other

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        out = dict(self._coeffs)
        for k, c in other._coeffs.items():
            out[k] = out[k] + c if k in out else c
        return Form(self.degree, out)

    def __neg__(self):
        return Form(self.degree, {k: -c for k, c in self._coeffs.items()})

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __mul__(self, c):
        if isinstance(c, Form):
            return NotImplemented
        return Form(self.degree, {k: v * c for k, v in self._coeffs.items()})

    def __rmul__(self, c):
        if isinstance(c, Form):
            return NotImplemented
        return Form(self.degree, {k: c * v for k, v in self._coeffs.items()})

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        if self.degree != other.degree:
            return False
        return (self - other).is_zero()

    __hash__ = None

    def __xor__(self, other):
        return wedge(self, other)

    def max_abs(self) -> float:
        """Largest coefficient magnitude (float coefficients only)."""
        return max((abs(float(c)) for c in self._coeffs.values()), default=0.0)

    def render(self, basis: str = "e") -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for idx, c in self.items():
            parts.append(f"({c})*{basis}^{_fmt_index(idx)}" if idx else f"({c})")
        return " + ".join(parts)

    def __repr__(self):
        return f"Form[{self.degree}]({self.render()})"


def wedge(a: Form, b: Form) -> Form:
    if a.degree + b.degree > DIM:
        raise ValueError(f"degree overflow: {a.degree} + {b.degree} > {DIM}")
    out: dict = {}
    for ia, ca in a._coeffs.items():
        for ib, cb in b._coeffs.items():
            sign, idx = sort_sign(ia + ib)
            if not sign:
                continue
            term = ca * cb if sign > 0 else -(ca * cb)
            out[idx] = out[idx] + term if idx in out else term
    return Form(a.degree + b.degree, out)


def star_sign(idx: tuple[int, ...]) -> int:
    return sort_sign(idx + complement(idx))[0]


def hodge_star(a: Form) -> Form:
    """Hodge star of the orthonormal coframe, orientation ``e^{1...7}``."""
    out = {}
    for idx, c in a._coeffs.items():
        out[complement(idx)] = c if star_sign(idx) > 0 else -c
    return Form(DIM - a.degree, out)


def interior(i: int, a: Form) -> Form:
    """Contraction with the ``i``-th frame vector."""
    if a.degree == 0:
        raise ValueError("interior product of a 0-form")
    out = {}
    for idx, c in a._coeffs.items():
        if i in idx:
            pos = idx.index(i)
            rest = idx[:pos] + idx[pos + 1:]
            out[rest] = c if pos % 2 == 0 else -c
    return Form(a.degree - 1, out)


def canonical_phi(coeff=1) -> Form:
    return Form(3, {idx: coeff * s for idx, s in EPS3.items()})


def canonical_psi(coeff=1) -> Form:
    return Form(4, {idx: coeff * s for idx, s in EPS4.items()})


def top_coefficient(a: Form):
    """Coefficient of ``e^{1234567}`` in a 7-form."""
    if a.degree != DIM:
        raise ValueError("not a top-degree form")
    return a[FULL]


def g2_bilinear(phi: Form) -> list[list[object]]:
    """``B_ij = (1/6) [i_i phi ^ i_j phi ^ phi]_{e^{1..7}}``."""
    contractions = [interior(i, phi) for i in FULL]
    rows = []
    for i in range(DIM):
        row = []
        for j in range(DIM):
            c = top_coefficient(wedge(wedge(contractions[i], contractions[j]), phi))
            row.append(c * Fraction(1, 6) if c else 0)
        rows.append(row)
    return rows
