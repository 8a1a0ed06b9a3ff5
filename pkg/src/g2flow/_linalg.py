"""Exact Gaussian elimination over Fractions and Scalars.

Only invertible entries (nonzero rationals, monomial Scalars) are used as
pivots, so every row operation stays inside the coefficient ring.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .scalar import Scalar


class NonInvertiblePivot(ArithmeticError):
    pass


def _invertible(x) -> bool:
    if isinstance(x, Scalar):
        return x.is_monomial()
    return bool(x)


def _inverse(x):
    if isinstance(x, Scalar):
        return x.inverse()
    return 1 / Fraction(x)


@dataclass
class LinearSolution:
    values: list | None  # particular solution (free variables set to 0), None if inconsistent
    nullity: int
    rank: int

    @property
    def unique(self) -> bool:
        return self.values is not None and self.nullity == 0


def solve(rows: list[list], rhs: list) -> LinearSolution:
    """Solve ``rows @ x = rhs`` exactly."""
    n = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots: list[int] = []
    r = 0
    for col in range(n):
        pick = next((i for i in range(r, len(aug)) if _invertible(aug[i][col])), None)
        if pick is None:
            if any(aug[i][col] for i in range(r, len(aug))):
                raise NonInvertiblePivot(f"column {col} has no invertible pivot")
            continue
        aug[r], aug[pick] = aug[pick], aug[r]
        inv = _inverse(aug[r][col])
        aug[r] = [x * inv for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][col]:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
    for row in aug[r:]:
        if row[-1]:
            return LinearSolution(None, n - r, r)
    values: list = [0] * n
    for i, col in enumerate(pivots):
        values[col] = aug[i][-1]
    return LinearSolution(values, n - r, r)


def rank(rows: list[list]) -> int:
    if not rows:
        return 0
    return solve(rows, [0] * len(rows)).rank


def in_span(vec, basis: list) -> bool:
    """Whether ``vec`` is a rational combination of ``basis`` vectors."""
    if not any(vec):
        return True
    if not basis:
        return False
    cols = [list(col) for col in zip(*basis)]  # len(vec) x len(basis)
    return solve(cols, list(vec)).values is not None
