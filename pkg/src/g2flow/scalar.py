"""Exact coefficients of the form  sum_k c_k * m**p_k * u**q_k.

Here ``m`` is the Lee-form parameter, ``u = 1 + kappa*m**2*t`` and ``kappa`` is
a rational constant attached to a :class:`RingContext`.  ``m`` and ``u`` are
treated as independent generators; ``u`` is never expanded.  This is enough
to carry every power-law family ``(1 - alpha*m**2*t)**beta`` together with its
time derivative, without a general computer algebra system.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator

__all__ = [
    "RingContext",
    "Scalar",
    "ContextMismatch",
    "DomainError",
    "as_fraction",
    "rational_power",
    "add",
    "mul",
    "ddt",
    "evaluate",
]


class ContextMismatch(ValueError):
    """Arithmetic between scalars living in different rings."""


class DomainError(ValueError):
    """Evaluation outside the interval where ``u > 0``."""


def as_fraction(x) -> Fraction:
    """Parse ints, Fractions and ``"num/den"`` strings exactly (floats rejected)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"not an exact rational: {x!r}")


def _iroot(n: int, k: int) -> int | None:
    """Exact integer k-th root of n >= 0, or None."""
    if n < 2:
        return n
    lo, hi = 0, 1 << (n.bit_length() // k + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid**k <= n:
            lo = mid
        else:
            hi = mid - 1
    return lo if lo**k == n else None


def rational_power(c: Fraction, q: Fraction) -> Fraction:
    """``c**q`` for rational ``q`` when the result is rational; ValueError otherwise.

    Odd roots of negative numbers are taken as the real root.
    """
    c, q = Fraction(c), Fraction(q)
    if q.denominator == 1:
        if c == 0 and q < 0:
            raise ZeroDivisionError("0 to a negative power")
        return c ** int(q)
    if c == 0:
        if q < 0:
            raise ZeroDivisionError("0 to a negative power")
        return Fraction(0)
    k = q.denominator
    sign = 1
    if c < 0:
        if k % 2 == 0:
            raise ValueError(f"even root of negative number {c}")
        sign = -1
        c = -c
    num, den = _iroot(c.numerator, k), _iroot(c.denominator, k)
    if num is None or den is None:
        raise ValueError(f"{c}**{q} is irrational")
    return (sign * Fraction(num, den)) ** q.numerator


@dataclass(frozen=True)
class RingContext:
    """The ring in which ``u = 1 + kappa * m**2 * t`` (or ``1 + kappa*t``).

    ``m_graded=False`` drops the ``m**2`` from ``u``; used for algebras that
    carry no Lee parameter.
    """

    kappa: Fraction
    m_graded: bool = True

    def __post_init__(self):
        object.__setattr__(self, "kappa", as_fraction(self.kappa))

    def u_value(self, m_val: float, t_val: float) -> float:
        if self.m_graded:
            return 1 + float(self.kappa) * m_val * m_val * t_val
        return 1 + float(self.kappa) * t_val

    def zero(self) -> "Scalar":
        return Scalar(self, ())

    def one(self) -> "Scalar":
        return Scalar.const(self, 1)

    def m(self) -> "Scalar":
        return Scalar.monomial(self, 1, 1, 0)

    def u(self, q=1) -> "Scalar":
        return Scalar.monomial(self, 1, 0, q)


Key = tuple  # (m_pow: int, u_pow: Fraction)


class Scalar:
    """Immutable, normalized sum of terms ``coeff * m**m_pow * u**u_pow``."""

    __slots__ = ("ctx", "_terms", "_hash")

    def __init__(self, ctx: RingContext, terms: Iterable[tuple] = ()):
        acc: dict[Key, Fraction] = {}
        for coeff, m_pow, u_pow in terms:
            coeff = as_fraction(coeff)
            if not coeff:
                continue
            key = (int(m_pow), as_fraction(u_pow))
            acc[key] = acc.get(key, Fraction(0)) + coeff
        self.ctx = ctx
        self._terms = tuple(
            sorted((k, c) for k, c in acc.items() if c)
        )
        self._hash = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def const(cls, ctx: RingContext, c) -> "Scalar":
        return cls(ctx, [(c, 0, 0)])

    @classmethod
    def monomial(cls, ctx: RingContext, coeff, m_pow: int, u_pow) -> "Scalar":
        return cls(ctx, [(coeff, m_pow, u_pow)])

    @classmethod
    def _raw(cls, ctx: RingContext, acc: dict) -> "Scalar":
        out = cls.__new__(cls)
        out.ctx = ctx
        out._terms = tuple(sorted((k, c) for k, c in acc.items() if c))
        out._hash = None
        return out

    # -- introspection ------------------------------------------------------
    def terms(self) -> Iterator[tuple[Fraction, int, Fraction]]:
        """Yield ``(coeff, m_pow, u_pow)`` in canonical order."""
        for (p, q), c in self._terms:
            yield c, p, q

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_constant(self) -> bool:
        return not self._terms or (
            len(self._terms) == 1 and self._terms[0][0] == (0, 0)
        )

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self._terms[0][1] if self._terms else Fraction(0)

    def leading(self) -> tuple[Fraction, int, Fraction]:
        """The single term of a monomial."""
        if len(self._terms) != 1:
            raise ValueError(f"{self} is not a monomial")
        (p, q), c = self._terms[0]
        return c, p, q

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.ctx != self.ctx:
                raise ContextMismatch(f"{self.ctx} vs {other.ctx}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Scalar.const(self.ctx, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = dict(self._terms)
        for k, c in other._terms:
            acc[k] = acc.get(k, 0) + c
        return Scalar._raw(self.ctx, acc)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw(self.ctx, {k: -c for k, c in self._terms})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc: dict[Key, Fraction] = {}
        for (p1, q1), c1 in self._terms:
            for (p2, q2), c2 in other._terms:
                k = (p1 + p2, q1 + q2)
                acc[k] = acc.get(k, 0) + c1 * c2
        return Scalar._raw(self.ctx, acc)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        """Inverse of a monomial (sums are not invertible in this ring)."""
        c, p, q = self.leading()
        return Scalar.monomial(self.ctx, 1 / c, -p, -q)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self * (1 / Fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, q):
        q = as_fraction(q)
        if self.is_monomial():
            c, p, uq = self.leading()
            mp = p * q
            if mp.denominator != 1:
                raise ValueError(f"m-power {mp} is not an integer")
            return Scalar.monomial(self.ctx, rational_power(c, q), int(mp), uq * q)
        if q.denominator != 1 or q < 0:
            raise ValueError("only non-negative integer powers of sums")
        out = Scalar.const(self.ctx, 1)
        for _ in range(int(q)):
            out = out * self
        return out

    # -- comparison ---------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.ctx == other.ctx and self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ctx, self._terms))
        return self._hash

    # -- calculus and evaluation --------------------------------------------
    def ddt(self) -> "Scalar":
        """Time derivative; ``du/dt = kappa*m**2`` (or ``kappa`` if ungraded)."""
        step = 2 if self.ctx.m_graded else 0
        k = self.ctx.kappa
        acc: dict[Key, Fraction] = {}
        for (p, q), c in self._terms:
            if q == 0 or k == 0:
                continue
            key = (p + step, q - 1)
            acc[key] = acc.get(key, 0) + c * q * k
        return Scalar._raw(self.ctx, acc)

    def eval(self, m_val, t_val) -> float:
        u = self.ctx.u_value(float(m_val), float(t_val))
        if u <= 0:
            raise DomainError(f"u = {u} <= 0 at m={m_val}, t={t_val}")
        m = float(m_val)
        return math.fsum(
            float(c) * m**p * u ** float(q) for (p, q), c in self._terms
        )

    # -- serialization ------------------------------------------------------
    def to_json(self) -> list[list[int]]:
        return [
            [c.numerator, c.denominator, p, q.numerator, q.denominator]
            for (p, q), c in self._terms
        ]

    @classmethod
    def from_json(cls, ctx: RingContext, data) -> "Scalar":
        return cls(ctx, [(Fraction(a, b), p, Fraction(c, d)) for a, b, p, c, d in data])

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for (p, q), c in self._terms:
            factors = []
            if c != 1 or (p == 0 and q == 0):
                factors.append(f"({c})" if c.denominator != 1 or c < 0 else str(c))
            if p:
                factors.append("m" if p == 1 else f"m^{p}")
            if q:
                factors.append("u" if q == 1 else f"u^({q})")
            parts.append("*".join(factors))
        return " + ".join(parts)

    def __repr__(self):
        return f"Scalar({self})"


def add(a: Scalar, b: Scalar) -> Scalar:
    return a + b


def mul(a: Scalar, b: Scalar) -> Scalar:
    return a * b


def ddt(a: Scalar) -> Scalar:
    return a.ddt()


def evaluate(a: Scalar, m_val, t_val) -> float:
    return a.eval(m_val, t_val)
