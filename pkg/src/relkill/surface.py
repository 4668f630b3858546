"""Isothermal surfaces g = phi (dx^2 + dy^2) and relative Killing vectors on them.

With lambda = (1/2) ln phi and a cofactor in the normal form L = a p / phi, a
relative Killing vector u d_x + v d_y (phase function K = u p + v q) solves::

    u_x = -(a + lambda_x) u - lambda_y v
    v_x + u_y = -a v
    v_y = -lambda_x u - lambda_y v

The normal form is reached from a general cofactor by a gauge change
K -> W K, L -> L + {H, ln W}.  For W = prod f_i^{c_i} with rational c_i the
weight W is not rational, so the functions below accept a :class:`LogWeight`
and work with the rational parts: ``u = W * u_rat``, and every expression
that is linear in (u, v) and their derivatives is returned divided by W.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .geometry import Metric
from .nullspace import nullspace
from .phase import log_bracket
from .phasefn import PhaseFn, PhaseSpace
from .poly import Poly, poly_exquo, poly_lcm
from .ratfn import RatFn

__all__ = [
    "ConformalSurface",
    "CofactorProfile",
    "LogWeight",
    "GaugedProfile",
    "DegenerateBranch",
    "ProfileNotReachable",
    "Dichotomy",
    "gaussian_curvature",
    "qqq_residual",
    "gap_expression",
    "gap_coefficients",
    "ppp_rhs",
    "classify_dichotomy",
    "is_constant_function",
    "vector_components",
    "profile_from_cofactor",
    "weighted_derivative",
]


class DegenerateBranch(ValueError):
    """a_y vanishes identically; the reduced equation is not available."""


class ProfileNotReachable(ValueError):
    """No combination of the given log-potentials removes the q-part of L."""


class Dichotomy(enum.Enum):
    FIVE_DIMENSIONAL = "FiveDimensional"
    AT_MOST_THREE = "AtMostThree"

    def __str__(self) -> str:
        return self.value


def is_constant_function(f: RatFn) -> bool:
    """Exact constancy: every first partial derivative is zero."""
    return all(f.diff(i).is_zero() for i in range(len(f.vars)))


@dataclass(frozen=True)
class ConformalSurface:
    space: PhaseSpace
    phi: RatFn

    def __post_init__(self):
        if self.space.m != 2:
            raise ValueError("isothermal surfaces are two-dimensional")
        if self.phi.is_zero():
            raise ValueError("conformal factor must be nonzero")
        if not self.space.x_only(self.phi):
            raise ValueError("conformal factor depends on momenta")

    @classmethod
    def from_text(cls, text: str, coords: Sequence[str] = ("x", "y")) -> "ConformalSurface":
        sp = PhaseSpace.for_coords(coords)
        return cls(sp, sp.parse_coord(text))

    @cached_property
    def metric(self) -> Metric:
        return Metric.conformal(self.space, self.phi)

    @cached_property
    def lam_x(self) -> RatFn:
        return self.phi.diff(0) / (self.phi * 2)

    @cached_property
    def lam_y(self) -> RatFn:
        return self.phi.diff(1) / (self.phi * 2)

    @cached_property
    def lam_xx(self) -> RatFn:
        return self.lam_x.diff(0)

    @cached_property
    def lam_xy(self) -> RatFn:
        return self.lam_x.diff(1)

    @cached_property
    def lam_yy(self) -> RatFn:
        return self.lam_y.diff(1)

    @cached_property
    def laplace_lam(self) -> RatFn:
        return self.lam_xx + self.lam_yy

    @cached_property
    def curvature(self) -> RatFn:
        phi = self.phi
        px, py = phi.diff(0), phi.diff(1)
        lap = phi.diff(0).diff(0) + phi.diff(1).diff(1)
        return -(phi * lap - px * px - py * py) / (phi ** 3 * 2)


@dataclass(frozen=True)
class CofactorProfile:
    """The function a(x, y) of a normal-form cofactor L = a p / phi."""

    a: RatFn

    @cached_property
    def a_x(self) -> RatFn:
        return self.a.diff(0)

    @cached_property
    def a_y(self) -> RatFn:
        return self.a.diff(1)

    @cached_property
    def a_xx(self) -> RatFn:
        return self.a_x.diff(0)

    @cached_property
    def a_xy(self) -> RatFn:
        return self.a_x.diff(1)

    @cached_property
    def a_yy(self) -> RatFn:
        return self.a_y.diff(1)


@dataclass(frozen=True)
class LogWeight:
    """W = prod f_i^{c_i}; only the logarithmic gradient of W is ever needed."""

    factors: tuple[tuple[RatFn, Fraction], ...] = ()

    def grad(self, i: int, vars) -> RatFn:
        out = RatFn.zero(vars)
        for f, c in self.factors:
            out = out + f.diff(i) / f * c
        return out

    def is_trivial(self) -> bool:
        return all(c == 0 for _, c in self.factors)

    def describe(self) -> list[tuple[str, str]]:
        from .parser import format_ratfn

        return [(format_ratfn(f), str(c)) for f, c in self.factors]


def weighted_derivative(f: RatFn, i: int, weight: LogWeight | None = None) -> RatFn:
    """d_i(W f) / W = f_i + (ln W)_i f."""
    df = f.diff(i)
    if weight is None:
        return df
    return df + weight.grad(i, f.vars) * f


def gaussian_curvature(s: ConformalSurface) -> RatFn:
    """K = -e^{-2 lambda} Delta lambda = -(phi Delta phi - phi_x^2 - phi_y^2) / (2 phi^3)."""
    return s.curvature


def qqq_residual(s, prof, u: RatFn, v: RatFn, weight: LogWeight | None = None) -> tuple[RatFn, RatFn, RatFn]:
    a = prof.a
    ux = weighted_derivative(u, 0, weight)
    uy = weighted_derivative(u, 1, weight)
    vx = weighted_derivative(v, 0, weight)
    vy = weighted_derivative(v, 1, weight)
    r1 = ux + (a + s.lam_x) * u + s.lam_y * v
    r2 = vx + uy + a * v
    r3 = vy + s.lam_x * u + s.lam_y * v
    return r1, r2, r3


def gap_coefficients(s, prof) -> tuple[RatFn, RatFn, RatFn]:
    """Coefficients (of u_y - v_x, of u, of v) in the first compatibility condition."""
    lap = s.laplace_lam
    c0 = prof.a_y * 3
    cu = s.lam_y * prof.a_y * 2 - lap * s.lam_x * 4 + lap.diff(0) * 2 + prof.a_yy * 2
    cv = -((prof.a * 3 + s.lam_x * 2) * prof.a_y + lap * s.lam_y * 4 - lap.diff(1) * 2 + prof.a_xy * 2)
    return c0, cu, cv


def gap_expression(s, prof, u: RatFn, v: RatFn, weight: LogWeight | None = None) -> RatFn:
    c0, cu, cv = gap_coefficients(s, prof)
    uy = weighted_derivative(u, 1, weight)
    vx = weighted_derivative(v, 0, weight)
    return c0 * (uy - vx) + cu * u + cv * v


def ppp_rhs(s, prof, u: RatFn, v: RatFn) -> RatFn:
    """Right-hand side of the reduced equation for u_y (valid when a_y != 0).

    Linear in (u, v) with no derivatives, so it is the same for rational and
    weighted data; compare it with ``weighted_derivative(u, 1, weight)``.
    """
    if prof.a_y.is_zero():
        raise DegenerateBranch("a_y = 0: classify by curvature instead")
    K = s.curvature
    cu = s.phi * K.diff(0) - s.lam_y * prof.a_y - prof.a_yy
    cv = s.phi * K.diff(1) + s.lam_x * prof.a_y + prof.a_xy
    return (cu * u + cv * v) / (prof.a_y * 3)


def classify_dichotomy(s: ConformalSurface) -> Dichotomy:
    """FiveDimensional iff the Gaussian curvature is constant."""
    if is_constant_function(s.curvature):
        return Dichotomy.FIVE_DIMENSIONAL
    return Dichotomy.AT_MOST_THREE


def vector_components(K: PhaseFn) -> tuple[RatFn, RatFn]:
    """(u, v) for K = u p + v q."""
    if K.m != 2 or (not K.is_zero() and K.degrees() != {1}):
        raise ValueError("expected a momentum-linear function on a surface")
    return K.coefficient((1, 0)), K.coefficient((0, 1))


@dataclass(frozen=True)
class GaugedProfile:
    profile: CofactorProfile
    weight: LogWeight
    cofactor: PhaseFn
    exponents: tuple[Fraction, ...] = field(default=())


def _coefficient_rows(fns: list[RatFn], vars) -> list[dict[int, Fraction]]:
    common = Poly.one(vars)
    for f in fns:
        if not f.is_zero() and poly_exquo(common, f.den) is None:
            common = poly_lcm(common, f.den)
    table: dict[tuple[int, ...], dict[int, Fraction]] = {}
    for j, f in enumerate(fns):
        if f.is_zero():
            continue
        P = f.num * poly_exquo(common, f.den)
        for e, c in P.terms.items():
            table.setdefault(e, {})[j] = Fraction(c)
    return [table[e] for e in sorted(table)]


def profile_from_cofactor(s: ConformalSurface, L: PhaseFn, potentials: Sequence[RatFn] | None = None) -> GaugedProfile:
    """Gauge L to the normal form a p / phi using weights built from ``potentials``.

    Looks for constants c_i with q-part(L + sum c_i {H, ln f_i}) = 0.  The
    potentials default to [phi].  Raises :class:`ProfileNotReachable` when
    no such combination exists.
    """
    sp = s.space
    if L.space != sp:
        raise ValueError("cofactor lives on a different space")
    potentials = list(potentials) if potentials is not None else [s.phi]
    H = s.metric.hamiltonian
    lbs = [log_bracket(H, f) for f in potentials]
    q_parts = [lb.coefficient((0, 1)) for lb in lbs] + [L.coefficient((0, 1))]
    n = len(potentials)
    rows = _coefficient_rows(q_parts, sp.vars)
    ker = nullspace(rows, n + 1)
    # rows over the kernel basis: want a vector with last entry 1
    sol = None
    for v in ker:
        if v[n] != 0:
            sol = [c / v[n] for c in v[:n]]
            break
    if sol is None:
        raise ProfileNotReachable("profile not reachable in this gauge family")
    gauged = L
    for c, lb in zip(sol, lbs):
        if c:
            gauged = gauged + lb * c
    a = gauged.coefficient((1, 0)) * s.phi
    weight = LogWeight(tuple((f, Fraction(c)) for f, c in zip(potentials, sol)))
    return GaugedProfile(CofactorProfile(a), weight, gauged, tuple(Fraction(c) for c in sol))
