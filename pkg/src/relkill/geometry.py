"""Exact Levi-Civita geometry of metrics with rational components.

Tensors are stored with lowered indices.  Symmetric tensors keep one entry per
sorted multi-index; general tensors are dense dicts keyed by index tuples.
Covariant derivative indices are appended on the right: ``K[s + (i,)]`` is
``nabla_i K_s`` and ``K[s + (i, j)]`` is ``nabla_j nabla_i K_s``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import factorial
from typing import Mapping, Sequence

from .phasefn import PhaseFn, PhaseSpace
from .poly import Poly
from .ratfn import RatFn

__all__ = [
    "Metric",
    "SingularMetricError",
    "SymTensorField",
    "CurvatureData",
    "metric_invert",
    "christoffel",
    "curvature",
    "covariant_derivative",
    "covariant_derivative_full",
    "killing_residual",
    "prolongation_identity_d1_residual",
    "lower_form",
    "raise_form",
    "CURVATURE_SIGN_D1",
]


class SingularMetricError(ValueError):
    pass


def _det(mat: list[list[RatFn]], zero: RatFn) -> RatFn:
    n = len(mat)
    if n == 1:
        return mat[0][0]
    if n == 2:
        return mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0]
    total = zero
    for j in range(n):
        if mat[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in mat[1:]]
        term = mat[0][j] * _det(minor, zero)
        total = total + term if j % 2 == 0 else total - term
    return total


def metric_invert(matrix: Sequence[Sequence[RatFn]]) -> tuple[tuple[RatFn, ...], ...]:
    """Exact matrix inverse via adjugate over determinant."""
    mat = [list(row) for row in matrix]
    n = len(mat)
    if any(len(r) != n for r in mat):
        raise ValueError("matrix must be square")
    zero = RatFn.zero(mat[0][0].vars)
    det = _det(mat, zero)
    if det.is_zero():
        raise SingularMetricError("matrix is singular")
    if n == 1:
        return ((det.inverse(),),)
    inv_det = det.inverse()
    out = [[zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(mat) if k != i]
            cof = _det(minor, zero)
            if (i + j) % 2:
                cof = -cof
            out[j][i] = cof * inv_det
    return tuple(tuple(r) for r in out)


class Metric:
    """A (pseudo-)Riemannian metric given by its inverse components g^{ij}."""

    def __init__(self, space: PhaseSpace, inverse_components: Sequence[Sequence[RatFn]]):
        m = space.m
        inv = [list(row) for row in inverse_components]
        if len(inv) != m or any(len(r) != m for r in inv):
            raise ValueError(f"inverse metric must be {m}x{m}")
        for i in range(m):
            for j in range(m):
                if not space.x_only(inv[i][j]):
                    raise ValueError("metric components may depend on coordinates only")
                if inv[i][j] != inv[j][i]:
                    raise ValueError(f"inverse metric is not symmetric at ({i},{j})")
        self.space = space
        self.inverse = tuple(tuple(r) for r in inv)
        # fails early on singular input
        self.components

    @classmethod
    def conformal(cls, space: PhaseSpace, factor: RatFn) -> "Metric":
        """g = factor * (dx^2 + dy^2 + ...)."""
        if factor.is_zero():
            raise SingularMetricError("conformal factor is zero")
        zero = RatFn.zero(space.vars)
        inv = factor.inverse()
        return cls(space, [[inv if i == j else zero for j in range(space.m)] for i in range(space.m)])

    @classmethod
    def from_components(cls, space: PhaseSpace, components: Sequence[Sequence[RatFn]]) -> "Metric":
        return cls(space, metric_invert(components))

    @classmethod
    def flat(cls, space: PhaseSpace, signature: Sequence[int] | None = None) -> "Metric":
        m = space.m
        signature = signature or [1] * m
        zero = RatFn.zero(space.vars)
        return cls(
            space,
            [[RatFn.constant(space.vars, signature[i]) if i == j else zero for j in range(m)] for i in range(m)],
        )

    @property
    def m(self) -> int:
        return self.space.m

    @property
    def vars(self) -> tuple[str, ...]:
        return self.space.vars

    def zero(self) -> RatFn:
        return RatFn.zero(self.vars)

    def __eq__(self, other) -> bool:
        return isinstance(other, Metric) and self.space == other.space and self.inverse == other.inverse

    def __hash__(self) -> int:
        return hash((self.space, self.inverse))

    @cached_property
    def components(self) -> tuple[tuple[RatFn, ...], ...]:
        return metric_invert(self.inverse)

    @cached_property
    def is_polynomial(self) -> bool:
        return all(c.is_poly() for row in self.inverse for c in row)

    @cached_property
    def inverse_denominator(self) -> Poly:
        """Primitive lcm of the denominators of g^{ij}."""
        from .poly import poly_lcm

        d = Poly.one(self.vars)
        for row in self.inverse:
            for c in row:
                if not c.den.is_constant():
                    d = poly_lcm(d, c.den)
        return d.primitive()

    @cached_property
    def hamiltonian(self) -> PhaseFn:
        """H = 1/2 g^{ij} p_i p_j."""
        sp = self.space
        h = sp.zero()
        for i in range(self.m):
            for j in range(self.m):
                if not self.inverse[i][j].is_zero():
                    h = h + sp.momentum(i) * sp.momentum(j) * self.inverse[i][j]
        return h * Fraction(1, 2)

    @cached_property
    def christoffel(self) -> tuple:
        """Gamma[k][i][j] = Γ^k_{ij}."""
        m = self.m
        g = self.components
        ginv = self.inverse
        dg = [[[g[i][j].diff(k) for k in range(m)] for j in range(m)] for i in range(m)]
        # lowered: Γ_{lij} = ½(∂_i g_{jl} + ∂_j g_{il} − ∂_l g_{ij})
        low = [
            [[(dg[j][l][i] + dg[i][l][j] - dg[i][j][l]) * Fraction(1, 2) for j in range(m)] for i in range(m)]
            for l in range(m)
        ]
        zero = self.zero()
        gam = []
        for k in range(m):
            rows = []
            for i in range(m):
                row = []
                for j in range(m):
                    s = zero
                    for l in range(m):
                        if not ginv[k][l].is_zero() and not low[l][i][j].is_zero():
                            s = s + ginv[k][l] * low[l][i][j]
                    row.append(s)
                rows.append(row)
            gam.append(rows)
        return tuple(tuple(tuple(r) for r in rows) for rows in gam)

    @cached_property
    def curvature(self) -> "CurvatureData":
        return _curvature(self)

    def lower(self, vec: Sequence[RatFn]) -> list[RatFn]:
        return [_dot(self.components[i], vec, self.zero()) for i in range(self.m)]

    def raise_(self, form: Sequence[RatFn]) -> list[RatFn]:
        return [_dot(self.inverse[i], form, self.zero()) for i in range(self.m)]


def _dot(row, vec, zero):
    s = zero
    for a, b in zip(row, vec):
        if not a.is_zero() and not b.is_zero():
            s = s + a * b
    return s


def christoffel(metric: Metric):
    return metric.christoffel


@dataclass(frozen=True)
class CurvatureData:
    """``riemann[i][j][k][l]`` is R_{ij}{}^k{}_l."""

    riemann: tuple
    ricci: tuple
    scalar: RatFn


def _curvature(metric: Metric) -> CurvatureData:
    # R_{ij}^k_l = ∂_iΓ^k_{jl} − ∂_jΓ^k_{il} + Γ^k_{is}Γ^s_{jl} − Γ^k_{js}Γ^s_{il}
    m = metric.m
    G = metric.christoffel
    zero = metric.zero()
    dG = [[[[G[k][j][l].diff(i) for i in range(m)] for l in range(m)] for j in range(m)] for k in range(m)]
    R = [[[[zero] * m for _ in range(m)] for _ in range(m)] for _ in range(m)]
    for i in range(m):
        for j in range(m):
            if j < i:
                for k in range(m):
                    for l in range(m):
                        R[i][j][k][l] = -R[j][i][k][l]
                continue
            if i == j:
                continue
            for k in range(m):
                for l in range(m):
                    s = dG[k][j][l][i] - dG[k][i][l][j]
                    for t in range(m):
                        a, b = G[k][i][t], G[t][j][l]
                        if not a.is_zero() and not b.is_zero():
                            s = s + a * b
                        a, b = G[k][j][t], G[t][i][l]
                        if not a.is_zero() and not b.is_zero():
                            s = s - a * b
                    R[i][j][k][l] = s
    ricci = [[_sum((R[k][j][k][l] for k in range(m)), zero) for l in range(m)] for j in range(m)]
    ginv = metric.inverse
    scalar = zero
    for j in range(m):
        for l in range(m):
            if not ginv[j][l].is_zero() and not ricci[j][l].is_zero():
                scalar = scalar + ginv[j][l] * ricci[j][l]
    return CurvatureData(
        riemann=tuple(tuple(tuple(tuple(r) for r in b) for b in a) for a in R),
        ricci=tuple(tuple(r) for r in ricci),
        scalar=scalar,
    )


def curvature(metric: Metric) -> CurvatureData:
    return metric.curvature


def _sum(items, zero):
    s = zero
    for it in items:
        if not it.is_zero():
            s = s + it
    return s


# ---------------------------------------------------------------------------
# symmetric tensor fields and their polynomial forms
# ---------------------------------------------------------------------------

def _multinomial(alpha: Sequence[int]) -> int:
    out = factorial(sum(alpha))
    for a in alpha:
        out //= factorial(a)
    return out


def _alpha_of(sigma: Sequence[int], m: int) -> tuple[int, ...]:
    alpha = [0] * m
    for s in sigma:
        alpha[s] += 1
    return tuple(alpha)


def _sigma_of(alpha: Sequence[int]) -> tuple[int, ...]:
    return tuple(i for i, a in enumerate(alpha) for _ in range(a))


@dataclass(frozen=True)
class SymTensorField:
    """Symmetric covariant d-tensor; ``entries`` keyed by sorted multi-indices."""

    space: PhaseSpace
    rank: int
    entries: Mapping[tuple[int, ...], RatFn]

    def __post_init__(self):
        for s in self.entries:
            if len(s) != self.rank or tuple(sorted(s)) != s:
                raise ValueError(f"bad multi-index {s} for rank {self.rank}")

    @property
    def m(self) -> int:
        return self.space.m

    def __getitem__(self, sigma: Sequence[int]) -> RatFn:
        return self.entries.get(tuple(sorted(sigma)), RatFn.zero(self.space.vars))

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.entries.values())

    def keys(self):
        return itertools.combinations_with_replacement(range(self.m), self.rank)

    @classmethod
    def from_form(cls, F: PhaseFn) -> "SymTensorField":
        """Read T_σ off a homogeneous form sum over all index tuples T_σ p^σ."""
        if not F.is_homogeneous():
            raise ValueError("form must be homogeneous in the momenta")
        d = F.degree()
        d = 0 if d == float("-inf") else d
        entries = {}
        for alpha, c in F.coefficients().items():
            entries[_sigma_of(alpha)] = c * Fraction(1, _multinomial(alpha))
        return cls(F.space, d, entries)

    def form(self) -> PhaseFn:
        """sum over all index tuples T_σ p^σ."""
        sp = self.space
        out = sp.zero()
        for sigma, c in self.entries.items():
            if c.is_zero():
                continue
            alpha = _alpha_of(sigma, self.m)
            out = out + sp.monomial(alpha, c * _multinomial(alpha))
        return out

    def __add__(self, other: "SymTensorField") -> "SymTensorField":
        if other.rank != self.rank or other.space != self.space:
            raise ValueError(f"cannot add tensors of rank {self.rank} and {other.rank}")
        keys = set(self.entries) | set(other.entries)
        return SymTensorField(self.space, self.rank, {k: self[k] + other[k] for k in keys})

    def scale(self, c) -> "SymTensorField":
        return SymTensorField(self.space, self.rank, {k: v * c for k, v in self.entries.items()})


def _substitute_momenta(F: PhaseFn, rows: Sequence[Sequence[RatFn]]) -> PhaseFn:
    """F(x, p) -> F(x, M p) with p_i replaced by sum_j rows[i][j] p_j."""
    sp = F.space
    m = sp.m
    lin = []
    for i in range(m):
        s = sp.zero()
        for j in range(m):
            if not rows[i][j].is_zero():
                s = s + sp.momentum(j) * rows[i][j]
        lin.append(s)
    out = sp.zero()
    for alpha, c in F.coefficients().items():
        term = PhaseFn(sp, c)
        for i, a in enumerate(alpha):
            if a:
                term = term * lin[i] ** a
        out = out + term
    return out


def lower_form(metric: Metric, F: PhaseFn) -> PhaseFn:
    """Contravariant form K^σ p_σ -> covariant form K_σ p^σ (index lowering)."""
    return _substitute_momenta(F, metric.components)


def raise_form(metric: Metric, F: PhaseFn) -> PhaseFn:
    """Covariant form T_σ v^σ evaluated at v = g^{-1} p (index raising)."""
    return _substitute_momenta(F, metric.inverse)


def lowered_tensor(metric: Metric, F: PhaseFn) -> SymTensorField:
    """Lowered symmetric tensor of a homogeneous phase function K^σ p_σ."""
    return SymTensorField.from_form(lower_form(metric, F))


def raised_phase(metric: Metric, T: SymTensorField) -> PhaseFn:
    """Phase function K^σ p_σ of a lowered symmetric tensor."""
    return raise_form(metric, T.form())


# ---------------------------------------------------------------------------
# covariant derivatives
# ---------------------------------------------------------------------------

def covariant_derivative(metric: Metric, T: SymTensorField) -> dict[tuple[int, ...], RatFn]:
    """K_{σ;i} keyed by ``σ + (i,)`` for sorted σ."""
    m = metric.m
    G = metric.christoffel
    out = {}
    for sigma in T.keys():
        for i in range(m):
            s = T[sigma].diff(i)
            for a in range(len(sigma)):
                for k in range(m):
                    g = G[k][i][sigma[a]]
                    if g.is_zero():
                        continue
                    rest = sigma[:a] + (k,) + sigma[a + 1:]
                    v = T[rest]
                    if not v.is_zero():
                        s = s - g * v
            out[sigma + (i,)] = s
    return out


def covariant_derivative_full(
    metric: Metric, T: Mapping[tuple[int, ...], RatFn], rank: int
) -> dict[tuple[int, ...], RatFn]:
    """Covariant derivative of a general covariant tensor (dense index tuples)."""
    m = metric.m
    G = metric.christoffel
    zero = metric.zero()
    out = {}
    for idx in itertools.product(range(m), repeat=rank):
        base = T.get(idx, zero)
        for i in range(m):
            s = base.diff(i)
            for a in range(rank):
                for k in range(m):
                    g = G[k][i][idx[a]]
                    if g.is_zero():
                        continue
                    v = T.get(idx[:a] + (k,) + idx[a + 1:], zero)
                    if not v.is_zero():
                        s = s - g * v
            out[idx + (i,)] = s
    return out


def killing_residual(metric: Metric, K: SymTensorField, L: Sequence[RatFn]) -> SymTensorField:
    """K_{(σ;i)} - L_{(i}K_{σ)}: zero iff K is an L-relative Killing tensor."""
    L = list(L)
    if len(L) != metric.m:
        raise ValueError("cofactor one-form must have m components")
    if K.space != metric.space:
        raise ValueError("tensor and metric live on different spaces")
    d = K.rank
    dK = covariant_derivative(metric, K)
    out = {}
    w = Fraction(1, d + 1)
    for tau in itertools.combinations_with_replacement(range(metric.m), d + 1):
        s = metric.zero()
        for a in range(d + 1):
            rest = tau[:a] + tau[a + 1:]
            s = s + dK[rest + (tau[a],)]
            if not L[tau[a]].is_zero():
                s = s - L[tau[a]] * K[rest]
        out[tau] = s * w
    return SymTensorField(metric.space, d + 1, out)


# Sign of the -1/2 (R_{ij}^k_l + R_{il}^k_j) K_k term with R as in _curvature.
# Frozen after exact evaluation on the example-1 relative Killing vectors and
# the sphere Killing vectors: the opposite sign leaves a nonzero residual.
CURVATURE_SIGN_D1 = 1


def prolongation_identity_d1_residual(
    metric: Metric,
    K: Sequence[RatFn],
    L: Sequence[RatFn],
    curvature_sign: int = CURVATURE_SIGN_D1,
    complete: bool = True,
) -> dict[tuple[int, int, int], RatFn]:
    """Residual of the resolved second-order identity for a relative Killing one-form.

    ``K`` and ``L`` are lowered components.  Requires ``K_{(i;j)} = L_{(i}K_{j)}``.
    The identity checked is::

        K_{i;(jl)} = L_{(j;l)} K_i + L_{[i;j]} K_l + L_{[i;l]} K_j + L_i L_{(j} K_{l)}
                     + L_j K_{[i;l]} + L_l K_{[i;j]}
                     - 1/2 (R_{ij}^k_l + R_{il}^k_j) K_k

    With ``complete=False`` the two terms in the antisymmetric part of nabla K
    are dropped; that truncated form only holds when those terms vanish (L = 0).
    """
    m = metric.m
    space = metric.space
    Kt = SymTensorField(space, 1, {(i,): K[i] for i in range(m)})
    if not killing_residual(metric, Kt, L).is_zero():
        raise ValueError("K is not an L-relative Killing one-form")
    zero = metric.zero()
    K1 = covariant_derivative_full(metric, {(i,): K[i] for i in range(m)}, 1)
    K2 = covariant_derivative_full(metric, K1, 2)
    L1 = covariant_derivative_full(metric, {(i,): L[i] for i in range(m)}, 1)
    R = metric.curvature.riemann
    half = Fraction(1, 2)
    out = {}
    for i, j, l in itertools.product(range(m), repeat=3):
        lhs = (K2[(i, j, l)] + K2[(i, l, j)]) * half
        rhs = (L1[(j, l)] + L1[(l, j)]) * half * K[i]
        rhs = rhs + (L1[(i, j)] - L1[(j, i)]) * half * K[l]
        rhs = rhs + (L1[(i, l)] - L1[(l, i)]) * half * K[j]
        rhs = rhs + L[i] * (L[j] * K[l] + L[l] * K[j]) * half
        if complete:
            rhs = rhs + L[j] * (K1[(i, l)] - K1[(l, i)]) * half
            rhs = rhs + L[l] * (K1[(i, j)] - K1[(j, i)]) * half
        curv = zero
        for k in range(m):
            c = R[i][j][k][l] + R[i][l][k][j]
            if not c.is_zero() and not K[k].is_zero():
                curv = curv + c * K[k]
        rhs = rhs - curv * half * curvature_sign
        out[(i, j, l)] = lhs - rhs
    return out
