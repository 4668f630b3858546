"""Functions on the cotangent bundle that are polynomial in the momenta."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

from .poly import Poly
from .ratfn import RatFn

__all__ = ["PhaseSpace", "PhaseFn", "default_momenta"]


def default_momenta(coords: Sequence[str]) -> tuple[str, ...]:
    """Momentum names paired with coordinates: (x, y) -> (p, q), x1 -> p1, z -> p_z."""
    coords = tuple(coords)
    if coords == ("x", "y"):
        return ("p", "q")
    out = []
    for c in coords:
        if len(c) > 1 and c[0] == "x" and c[1:].isdigit():
            out.append("p" + c[1:])
        else:
            out.append("p_" + c)
    if set(out) & set(coords):
        raise ValueError(f"momentum names {out} collide with coordinates {coords}")
    return tuple(out)


@dataclass(frozen=True)
class PhaseSpace:
    coords: tuple[str, ...]
    momenta: tuple[str, ...]

    def __post_init__(self):
        if len(self.coords) != len(self.momenta):
            raise ValueError("need one momentum per coordinate")
        if len(set(self.vars)) != len(self.vars):
            raise ValueError(f"duplicate names in {self.vars}")

    @classmethod
    def for_coords(cls, coords: Sequence[str]) -> "PhaseSpace":
        return cls(tuple(coords), default_momenta(coords))

    @cached_property
    def vars(self) -> tuple[str, ...]:
        return self.coords + self.momenta

    @property
    def m(self) -> int:
        return len(self.coords)

    def x(self, i: int) -> int:
        """Universe index of coordinate i."""
        return i

    def p(self, i: int) -> int:
        """Universe index of momentum i."""
        return self.m + i

    def parse(self, text: str) -> "PhaseFn":
        from .parser import parse_ratfn

        return PhaseFn(self, parse_ratfn(text, self.vars))

    def parse_coord(self, text: str) -> RatFn:
        """Parse a function of the base coordinates only."""
        from .parser import parse_ratfn

        f = parse_ratfn(text, self.vars)
        if self.momentum_degree_of(f) > 0 or not self.x_only(f):
            raise ValueError(f"{text!r} depends on momenta")
        return f

    def x_only(self, f: RatFn | Poly) -> bool:
        used = f.used_vars()
        return all(i < self.m for i in used)

    def momentum_degree_of(self, f: RatFn) -> int:
        m = self.m
        return max((sum(e[m:]) for e in f.num.terms), default=0)

    def zero(self) -> "PhaseFn":
        return PhaseFn(self, RatFn.zero(self.vars))

    def const(self, value) -> "PhaseFn":
        return PhaseFn(self, RatFn.constant(self.vars, value))

    def momentum(self, i: int) -> "PhaseFn":
        return PhaseFn(self, RatFn.var(self.vars, self.momenta[i]))

    def coordinate(self, i: int) -> RatFn:
        return RatFn.var(self.vars, self.coords[i])

    def monomial(self, alpha: Sequence[int], coef: RatFn | None = None) -> "PhaseFn":
        exps = (0,) * self.m + tuple(alpha)
        mono = RatFn.from_poly(Poly._new(self.vars, {exps: 1}))
        return PhaseFn(self, mono if coef is None else mono * coef)


class PhaseFn:
    """A function ``sum_alpha c_alpha(x) p^alpha`` with rational coefficients.

    Stored as one normalized :class:`RatFn` over coordinates and momenta whose
    denominator involves only coordinates; :meth:`coefficients` gives the
    per-monomial view.
    """

    __slots__ = ("space", "f")

    def __init__(self, space: PhaseSpace, f: RatFn):
        if f.vars != space.vars:
            raise ValueError(f"function lives in {f.vars}, phase space is {space.vars}")
        if not space.x_only(f.den):
            raise ValueError("phase functions must be polynomial in the momenta")
        self.space = space
        self.f = f

    @property
    def m(self) -> int:
        return self.space.m

    @property
    def num(self) -> Poly:
        return self.f.num

    @property
    def den(self) -> Poly:
        return self.f.den

    def is_zero(self) -> bool:
        return self.f.is_zero()

    def __bool__(self) -> bool:
        return not self.f.is_zero()

    def _wrap(self, f: RatFn) -> "PhaseFn":
        return PhaseFn(self.space, f)

    def _other(self, other):
        if isinstance(other, PhaseFn):
            if other.space != self.space:
                raise ValueError(f"dimension/space mismatch: {self.space} vs {other.space}")
            return other.f
        if isinstance(other, (RatFn, int, Fraction)):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.f + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.f - o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(o - self.f)

    def __neg__(self):
        return self._wrap(-self.f)

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.f * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division by a nonzero function of the coordinates only (or a scalar)."""
        o = other.f if isinstance(other, PhaseFn) else other
        if isinstance(o, RatFn) and not self.space.x_only(o.num):
            raise ValueError("can only divide a phase function by a function of x")
        return self._wrap(self.f / o)

    def __pow__(self, k: int):
        return self._wrap(self.f ** k)

    def __eq__(self, other) -> bool:
        if isinstance(other, PhaseFn):
            return self.space == other.space and self.f == other.f
        if isinstance(other, (int, Fraction)):
            return self.f == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.space, self.f))

    def __repr__(self) -> str:
        return f"PhaseFn({self.format()!r})"

    def format(self) -> str:
        from .parser import format_ratfn

        return format_ratfn(self.f)

    # ---- structure ----------------------------------------------------
    def coefficients(self) -> dict[tuple[int, ...], RatFn]:
        """Map momentum multi-index -> coefficient function of x."""
        m = self.m
        parts: dict[tuple[int, ...], dict] = {}
        for e, c in self.num.terms.items():
            parts.setdefault(e[m:], {})[e[:m] + (0,) * m] = c
        vars = self.space.vars
        return {
            alpha: RatFn._from_unreduced(Poly._new(vars, t), self.den)
            for alpha, t in sorted(parts.items())
        }

    def coefficient(self, alpha: Sequence[int]) -> RatFn:
        return self.coefficients().get(tuple(alpha), RatFn.zero(self.space.vars))

    def degrees(self) -> set[int]:
        m = self.m
        return {sum(e[m:]) for e in self.num.terms}

    def degree(self) -> float | int:
        d = self.degrees()
        return max(d) if d else float("-inf")

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def homogeneous_part(self, k: int) -> "PhaseFn":
        m = self.m
        t = {e: c for e, c in self.num.terms.items() if sum(e[m:]) == k}
        return self._wrap(RatFn._from_unreduced(Poly._new(self.space.vars, t), self.den))

    def diff(self, name_or_index) -> "PhaseFn":
        return self._wrap(self.f.diff(name_or_index))

    def evaluate(self, point: Mapping[str, object]):
        return self.f.evaluate(point)

    def x_numerator_content(self) -> Poly:
        """gcd over Q[x] of the momentum coefficients of the numerator."""
        from .poly import poly_gcd

        m = self.m
        coeffs: dict[tuple[int, ...], dict] = {}
        for e, c in self.num.terms.items():
            coeffs.setdefault(e[m:], {})[e[:m] + (0,) * m] = c
        vars = self.space.vars
        polys = sorted((Poly._new(vars, t) for t in coeffs.values()), key=lambda p: len(p.terms))
        if not polys:
            return Poly.zero(vars)
        g = polys[0].primitive()
        for p in polys[1:]:
            if g.is_constant():
                break
            g = poly_gcd(g, p)
        return g
