"""Normalized rational functions: reduced quotients of :class:`Poly`.

Normal form: ``gcd(num, den) = 1`` and ``den`` has coprime integer
coefficients with positive leading coefficient; zero is ``0/1``.  Two
constructions of the same function therefore compare equal field by field.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .poly import Poly, as_rat, poly_divexact, poly_gcd

__all__ = ["RatFn", "PoleError", "ratfn_normalize"]


class PoleError(ZeroDivisionError):
    """A rational function was evaluated where its denominator vanishes."""


class RatFn:
    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Poly, den: Poly | None = None):
        if den is None:
            den = Poly.one(num.vars)
        num._check(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        n, d = _normalize(num, den)
        self.num = n
        self.den = d
        self._hash = None

    @classmethod
    def _new(cls, num: Poly, den: Poly) -> "RatFn":
        obj = object.__new__(cls)
        obj.num = num
        obj.den = den
        obj._hash = None
        return obj

    @classmethod
    def _from_unreduced(cls, num: Poly, den: Poly) -> "RatFn":
        return cls._new(*_normalize(num, den))

    @classmethod
    def _from_coprime(cls, num: Poly, den: Poly) -> "RatFn":
        """Parts already coprime; only fix the scalar normalization."""
        return cls._new(*_scale_normalize(num, den))

    @classmethod
    def from_poly(cls, p: Poly) -> "RatFn":
        return cls._new(p, Poly.one(p.vars))

    @classmethod
    def zero(cls, vars: Sequence[str]) -> "RatFn":
        return cls._new(Poly.zero(vars), Poly.one(vars))

    @classmethod
    def one(cls, vars: Sequence[str]) -> "RatFn":
        return cls._new(Poly.one(vars), Poly.one(vars))

    @classmethod
    def constant(cls, vars: Sequence[str], value) -> "RatFn":
        return cls._new(Poly.constant(vars, value), Poly.one(vars))

    @classmethod
    def var(cls, vars: Sequence[str], name: str) -> "RatFn":
        return cls.from_poly(Poly.var(vars, name))

    @property
    def vars(self) -> tuple[str, ...]:
        return self.num.vars

    # ---- queries ------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.is_constant()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("rational function is not constant")
        return self.num.constant_value() / self.den.constant_value()

    def used_vars(self) -> set[int]:
        return self.num.used_vars() | self.den.used_vars()

    # ---- arithmetic ---------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, RatFn):
            self.num._check(other.num)
            return other
        if isinstance(other, Poly):
            self.num._check(other)
            return RatFn.from_poly(other)
        if isinstance(other, (int, Fraction)):
            return RatFn.constant(self.vars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        a, b, c, d = self.num, self.den, other.num, other.den
        if b == d:
            return RatFn._from_unreduced(a + c, b)
        if b.is_constant() and d.is_constant():
            return RatFn._from_coprime(a * d + c * b, b * d)
        g = poly_gcd(b, d)
        if g.is_constant():
            return RatFn._from_unreduced(a * d + c * b, b * d)
        bg = poly_divexact(b, g)
        dg = poly_divexact(d, g)
        num = a * dg + c * bg
        if num.is_zero():
            return RatFn.zero(self.vars)
        # common factors of num can only come from g
        h = poly_gcd(num, g)
        if not h.is_constant():
            num = poly_divexact(num, h)
            g = poly_divexact(g, h)
        return RatFn._from_coprime(num, bg * dg * g)

    __radd__ = __add__

    def __neg__(self) -> "RatFn":
        return RatFn._new(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return RatFn.zero(self.vars)
            return RatFn._from_coprime(self.num.scale(other), self.den)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b, c, d = self.num, self.den, other.num, other.den
        if a.is_zero() or c.is_zero():
            return RatFn.zero(self.vars)
        g1 = poly_gcd(a, d) if not d.is_constant() else None
        g2 = poly_gcd(c, b) if not b.is_constant() else None
        if g1 is not None and not g1.is_constant():
            a = poly_divexact(a, g1)
            d = poly_divexact(d, g1)
        if g2 is not None and not g2.is_constant():
            c = poly_divexact(c, g2)
            b = poly_divexact(b, g2)
        return RatFn._from_coprime(a * c, b * d)

    __rmul__ = __mul__

    def inverse(self) -> "RatFn":
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero rational function")
        return RatFn._from_coprime(self.den, self.num)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (Fraction(1) / Fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int) -> "RatFn":
        if not isinstance(k, int):
            raise ValueError("exponent must be an integer")
        if k < 0:
            return self.inverse() ** (-k)
        return RatFn._from_coprime(self.num ** k, self.den ** k)

    def __eq__(self, other) -> bool:
        if isinstance(other, RatFn):
            return self.num == other.num and self.den == other.den
        if isinstance(other, Poly):
            return self.den.is_constant() and self.num == other
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __repr__(self) -> str:
        from .parser import format_ratfn

        return f"RatFn({format_ratfn(self)!r})"

    # ---- calculus and evaluation --------------------------------------
    def diff(self, v) -> "RatFn":
        a, b = self.num, self.den
        if b.is_constant():
            return RatFn._new(a.diff(v), b)
        db = b.diff(v)
        if db.is_zero():
            return RatFn._from_unreduced(a.diff(v), b)
        # d(a/b) = (a' b - a b') / b^2 ; gcd(a' b - a b', b) divides b'
        num = a.diff(v) * b - a * db
        return RatFn._from_unreduced(num, b * b)

    def evaluate(self, point: Mapping[str, object]):
        d = self.den.evaluate(point)
        if d == 0:
            raise PoleError(f"denominator vanishes at {dict(point)}")
        return self.num.evaluate(point) / d

    def in_universe(self, vars: Sequence[str]) -> "RatFn":
        return RatFn._new(self.num.in_universe(vars), self.den.in_universe(vars))


def _scale_normalize(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    if num.is_zero():
        return num, Poly.one(num.vars)
    c = den.rational_content()
    if c != 1:
        inv = Fraction(1) / c
        num = num.scale(inv)
        den = den.scale(inv)
    return num, den


def _normalize(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    if num.is_zero():
        return num, Poly.one(num.vars)
    if not den.is_constant():
        g = poly_gcd(num, den)
        if not g.is_constant():
            num = poly_divexact(num, g)
            den = poly_divexact(den, g)
    return _scale_normalize(num, den)


def ratfn_normalize(num: Poly, den: Poly) -> RatFn:
    """Reduce ``num/den`` to the canonical form."""
    return RatFn(num, den)


def as_ratfn(value, vars: Sequence[str]) -> RatFn:
    if isinstance(value, RatFn):
        return value
    if isinstance(value, Poly):
        return RatFn.from_poly(value)
    return RatFn.constant(vars, as_rat(value))
