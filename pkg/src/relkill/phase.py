"""Poisson brackets and relative-Killing verification on phase functions.

Bracket convention (frozen)::

    {F, G} = sum_i dF/dx^i dG/dp_i - dF/dp_i dG/dx^i

With this convention the time derivative along the flow of H is
``dF/dt = {F, H} = -{H, F}``.  A relative Killing tensor satisfies
``{H, K} = L K``; :func:`cofactor_extract` returns this L.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .geometry import Metric
from .phasefn import PhaseFn
from .poly import Poly, poly_divexact, poly_exquo, poly_gcd
from .ratfn import RatFn

__all__ = [
    "NotRelativeKillingError",
    "MalformedCofactorError",
    "RationalIntegral",
    "poisson_bracket",
    "is_first_integral",
    "cofactor_extract",
    "rational_integral_check",
    "reduce_rational_integral",
    "split_homogeneous",
    "cofactor_components",
    "cofactor_curl",
    "log_bracket",
    "cohomologous_check",
    "gauge_constant",
    "cofactor_ratio",
]


class NotRelativeKillingError(ValueError):
    """K does not divide {H, K} in the momentum polynomial ring."""


class MalformedCofactorError(ValueError):
    """{H, K} / K is polynomial but not linear in the momenta."""

    def __init__(self, message: str, quotient: PhaseFn):
        super().__init__(message)
        self.quotient = quotient


def poisson_bracket(F: PhaseFn, G: PhaseFn) -> PhaseFn:
    if F.space != G.space:
        raise ValueError(f"dimension mismatch: {F.space} vs {G.space}")
    sp = F.space
    m = sp.m
    A, a = F.num, F.den
    B, b = G.num, G.den
    if A.is_zero() or B.is_zero():
        return sp.zero()
    # F = A/a, G = B/b with a, b independent of p:
    # {F,G} = sum_i [(A_xi a - A a_xi) B_pi b - A_pi (B_xi b - B b_xi) a] / (a^2 b^2)
    num = Poly.zero(sp.vars)
    a_const = a.is_constant()
    b_const = b.is_constant()
    for i in range(m):
        xi, pi = i, m + i
        Bp = B.diff(pi)
        if not Bp.is_zero():
            Fx = A.diff(xi) * a
            if not a_const:
                Fx = Fx - A * a.diff(xi)
            if not Fx.is_zero():
                num = num + Fx * Bp * b
        Ap = A.diff(pi)
        if not Ap.is_zero():
            Gx = B.diff(xi) * b
            if not b_const:
                Gx = Gx - B * b.diff(xi)
            if not Gx.is_zero():
                num = num - Ap * Gx * a
    if num.is_zero():
        return sp.zero()
    return PhaseFn(sp, RatFn._from_unreduced(num, a * a * b * b))


def is_first_integral(H: PhaseFn, F: PhaseFn) -> bool:
    return poisson_bracket(H, F).is_zero()


def _p_primitive(K: PhaseFn) -> tuple[Poly, Poly]:
    """Split numerator of K as content(x) * primitive-in-p part."""
    c = K.x_numerator_content()
    if c.is_constant():
        return Poly.one(K.space.vars), K.num
    return c, poly_divexact(K.num, c)


def cofactor_extract(H: PhaseFn, K: PhaseFn) -> PhaseFn:
    """The cofactor L with {H, K} = L K.

    Raises :class:`NotRelativeKillingError` if K does not divide {H, K}, and
    :class:`MalformedCofactorError` if the quotient is not linear in momenta.
    """
    if K.is_zero():
        raise ValueError("K must be nonzero")
    sp = K.space
    B = poisson_bracket(H, K)
    if B.is_zero():
        return sp.zero()
    # {H,K}/K = (N/D) / (c A' / a) = (N a / A') / (D c); A' primitive in p, so
    # divisibility over Q(x)[p] is divisibility over Q[x, p] (Gauss).
    c, Aprim = _p_primitive(K)
    q = poly_exquo(B.num * K.den, Aprim)
    if q is None:
        raise NotRelativeKillingError("{H,K} is not divisible by K")
    L = PhaseFn(sp, RatFn._from_unreduced(q, B.den * c))
    if L.degrees() != {1}:
        raise MalformedCofactorError(
            f"quotient has momentum degrees {sorted(L.degrees())}, expected 1", L
        )
    return L


@dataclass(frozen=True)
class RationalIntegral:
    """F = P/Q with P, Q homogeneous in momenta and coprime over Q(x)[p]."""

    P: PhaseFn
    Q: PhaseFn

    def __post_init__(self):
        if self.Q.is_zero():
            raise ValueError("denominator Q must be nonzero")
        if self.P.space != self.Q.space:
            raise ValueError("P and Q live on different spaces")

    @property
    def bidegree(self) -> tuple[int, int]:
        dp = self.P.degree()
        return (0 if dp == float("-inf") else dp, self.Q.degree())

    def as_ratfn(self) -> RatFn:
        return self.P.f / self.Q.f

    def format(self) -> str:
        return f"({self.P.format()})/({self.Q.format()})"


def rational_integral_check(H: PhaseFn, F: RationalIntegral) -> bool:
    """{H, P} Q - {H, Q} P == 0 exactly."""
    lhs = poisson_bracket(H, F.P) * F.Q - poisson_bracket(H, F.Q) * F.P
    return lhs.is_zero()


def reduce_rational_integral(P: PhaseFn, Q: PhaseFn) -> RationalIntegral:
    """Cancel common factors and scale to a canonical pair (same ratio P/Q).

    Canonical form: both polynomial in (x, p), no common factor, and Q has
    leading coefficient 1 in graded-lex order.
    """
    if Q.is_zero():
        raise ValueError("Q must be nonzero")
    sp = P.space
    if P.is_zero():
        return RationalIntegral(sp.zero(), sp.const(1))
    A, a = P.num, P.den
    B, b = Q.num, Q.den
    g = poly_gcd(A, B)
    num = poly_divexact(A, g) * b
    den = poly_divexact(B, g) * a
    h = poly_gcd(num, den)
    if not h.is_constant():
        num = poly_divexact(num, h)
        den = poly_divexact(den, h)
    lc = den.leading_coefficient()
    num = num.scale(1 / lc)
    den = den.scale(1 / lc)
    one = Poly.one(sp.vars)
    return RationalIntegral(PhaseFn(sp, RatFn._new(num, one)), PhaseFn(sp, RatFn._new(den, one)))


def split_homogeneous(F: PhaseFn) -> list[PhaseFn]:
    """Homogeneous components of F ordered by momentum degree."""
    return [F.homogeneous_part(k) for k in sorted(F.degrees())]


def cofactor_components(L: PhaseFn) -> list[RatFn]:
    """Components l^i of a cofactor L = l^i p_i."""
    if not L.is_zero() and L.degrees() != {1}:
        raise ValueError("cofactor must be linear in momenta")
    m = L.m
    out = []
    for i in range(m):
        alpha = tuple(1 if j == i else 0 for j in range(m))
        out.append(L.coefficient(alpha))
    return out


def cofactor_curl(metric: Metric, L: PhaseFn) -> list[list[RatFn]]:
    """dL for the one-form l_i = g_{ij} l^j: entries d_a l_b - d_b l_a."""
    low = metric.lower(cofactor_components(L))
    m = metric.m
    return [[low[b].diff(a) - low[a].diff(b) for b in range(m)] for a in range(m)]


def log_bracket(H: PhaseFn, f: RatFn) -> PhaseFn:
    """{H, ln f} = {H, f} / f for a nonzero function f of the coordinates."""
    if f.is_zero():
        raise ValueError("f must be nonzero")
    if not H.space.x_only(f):
        raise ValueError("f must depend on coordinates only")
    return poisson_bracket(H, PhaseFn(H.space, f)) / f


def cohomologous_check(H: PhaseFn, L1: PhaseFn, L2: PhaseFn, f, c) -> bool:
    """True iff L1 - L2 == c * {H, f}/f exactly."""
    f = f if isinstance(f, RatFn) else RatFn.from_poly(f)
    return (L1 - L2) == log_bracket(H, f) * Fraction(c)


def gauge_constant(H: PhaseFn, L1: PhaseFn, L2: PhaseFn, f) -> Fraction | None:
    """The constant c with L1 - L2 = c {H, ln f}, or None if there is none."""
    f = f if isinstance(f, RatFn) else RatFn.from_poly(f)
    diff = L1 - L2
    lb = log_bracket(H, f)
    if diff.is_zero():
        return Fraction(0)
    if lb.is_zero():
        return None
    ratio = diff.f / lb.f
    if not ratio.is_constant():
        return None
    return ratio.constant_value()


def cofactor_ratio(L: PhaseFn, reference: PhaseFn) -> Fraction | None:
    """Constant kappa with reference == kappa * L, if one exists."""
    if L.is_zero():
        return Fraction(0) if reference.is_zero() else None
    r = reference.f / L.f
    if not r.is_constant():
        return None
    return r.constant_value()
