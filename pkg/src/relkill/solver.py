"""Ansatz solver for Killing, relative Killing and conformal Killing tensors.

Every statement made here is relative to a finite window: coefficients of
the form ``(polynomial of degree <= N) / D^k``.  An empty result means
"none within the ansatz", never "none exist".
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, factorial
from typing import Sequence

from .geometry import Metric
from .nullspace import apply_rows, nullspace, rank
from .phase import poisson_bracket, rational_integral_check, reduce_rational_integral
from .phasefn import PhaseFn, PhaseSpace
from .poly import Poly, poly_exquo, poly_lcm
from .ratfn import RatFn

__all__ = [
    "lambda_dim",
    "param_count_n",
    "Ansatz",
    "LinearSystem",
    "Basis",
    "DimensionBoundError",
    "assemble_system",
    "solve_space",
    "frlin_from_basis",
    "FrlinList",
    "rational_family_dimension",
    "momentum_multi_indices",
    "monomial_exponents",
]

log = logging.getLogger(__name__)

MODES = ("killing", "relative", "conformal")


def lambda_dim(m: int, d: int) -> int:
    """(m+d-1)! (m+d)! / ((m-1)! m! d! (d+1)!), the maximal Killing dimension."""
    if m < 1 or d < 0:
        raise ValueError("need m >= 1 and d >= 0")
    num = factorial(m + d - 1) * factorial(m + d)
    den = factorial(m - 1) * factorial(m) * factorial(d) * factorial(d + 1)
    return num // den


def param_count_n(m: int, r: int, s: int) -> int:
    """Number of parameters fixing a rational integral of bidegree (r, s)."""
    if m < 1 or r < 0 or s < 0:
        raise ValueError("need m >= 1 and r, s >= 0")
    return comb(r + m - 1, r) + comb(s + m - 1, s) - 1


def momentum_multi_indices(m: int, d: int) -> list[tuple[int, ...]]:
    """All alpha with |alpha| = d, in descending lexicographic order."""
    if m == 1:
        return [(d,)]
    out = []
    for first in range(d, -1, -1):
        for rest in momentum_multi_indices(m - 1, d - first):
            out.append((first,) + rest)
    return out


def monomial_exponents(m: int, N: int) -> list[tuple[int, ...]]:
    """Exponent vectors of total degree <= N, ascending graded-lex."""
    out = []
    for deg in range(N + 1):
        out.extend(reversed(momentum_multi_indices(m, deg)))
    return out


@dataclass(frozen=True)
class Ansatz:
    """Search window: degree-d momentum polynomials with coefficients P(x)/D^k, deg P <= N."""

    space: PhaseSpace
    d: int
    N: int
    D: Poly | None = None
    k: int = 0

    def __post_init__(self):
        if self.d < 0 or self.N < 0 or self.k < 0:
            raise ValueError("d, N and k must be nonnegative")
        if self.D is not None:
            if self.D.vars != self.space.vars or not self.space.x_only(self.D):
                raise ValueError("ansatz denominator must be a polynomial in the coordinates")
            if self.D.is_zero():
                raise ValueError("ansatz denominator must be nonzero")

    @property
    def m(self) -> int:
        return self.space.m

    @property
    def denominator(self) -> Poly:
        one = Poly.one(self.space.vars)
        if self.D is None or self.k == 0:
            return one
        return self.D ** self.k

    @property
    def slots(self) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        """Unknown table: (momentum multi-index, x-exponent) pairs."""
        xs = monomial_exponents(self.m, self.N)
        return [(alpha, beta) for alpha in momentum_multi_indices(self.m, self.d) for beta in xs]

    def expected_slot_count(self) -> int:
        return comb(self.m + self.d - 1, self.d) * comb(self.m + self.N, self.N)

    def slot_function(self, alpha, beta) -> PhaseFn:
        sp = self.space
        mono = Poly._new(sp.vars, {tuple(beta) + tuple(alpha): 1})
        return PhaseFn(sp, RatFn._from_unreduced(mono, self.denominator))

    def element(self, coeffs: Sequence) -> PhaseFn:
        sp = self.space
        terms = {}
        for (alpha, beta), c in zip(self.slots, coeffs):
            if c:
                terms[tuple(beta) + tuple(alpha)] = Fraction(c)
        return PhaseFn(sp, RatFn._from_unreduced(Poly(sp.vars, terms), self.denominator))


@dataclass
class LinearSystem:
    """Rows are sparse maps {unknown index: Rat}; ``provenance[i]`` is the monomial of row i."""

    ncols: int
    rows: list[dict[int, Fraction]]
    provenance: list[tuple[int, ...]]
    ansatz: Ansatz
    mode: str
    multiplier: Ansatz | None = None

    def __len__(self) -> int:
        return len(self.rows)


class DimensionBoundError(AssertionError):
    """A computed dimension exceeded the universal upper bound."""


@dataclass
class Basis:
    elements: list[PhaseFn]
    mode: str
    ansatz: Ansatz
    cofactor: PhaseFn | None = None
    multipliers: list[PhaseFn] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.elements)

    def formatted(self) -> list[str]:
        return [e.format() for e in self.elements]


def _clear(exprs: list[PhaseFn], vars) -> list[Poly]:
    """Numerators of ``exprs`` over their least common denominator."""
    dens = []
    seen = set()
    for e in exprs:
        if not e.is_zero() and e.den not in seen:
            seen.add(e.den)
            dens.append(e.den)
    common = Poly.one(vars)
    for d in dens:
        if poly_exquo(common, d) is None:
            common = poly_lcm(common, d)
    out = []
    for e in exprs:
        if e.is_zero():
            out.append(Poly.zero(vars))
        else:
            out.append(e.num * poly_exquo(common, e.den))
    return out


def _multiplier_ansatz(metric: Metric, ansatz: Ansatz) -> Ansatz:
    D = ansatz.D
    degD = 0 if D is None or D.is_constant() else D.degree()
    k = ansatz.k + 1 if degD else 0
    N = max(ansatz.N + degD - 1, 0)
    return Ansatz(ansatz.space, max(ansatz.d - 1, 0), N, D, k)


def assemble_system(metric: Metric, ansatz: Ansatz, mode: str = "killing", L: PhaseFn | None = None) -> LinearSystem:
    """Linear conditions on the ansatz unknowns for the chosen defining equation.

    killing: {H,K} = 0; relative: {H,K} - L K = 0; conformal: {H,K} - M H = 0
    with the degree-(d-1) multiplier M appended as extra unknowns.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    if ansatz.space != metric.space:
        raise ValueError("ansatz and metric live on different spaces")
    if mode == "killing" and L is not None and not L.is_zero():
        raise ValueError("killing mode takes no cofactor; use relative mode")
    if mode == "relative":
        if L is None:
            raise ValueError("relative mode needs a cofactor L")
        if L.space != metric.space:
            raise ValueError("cofactor lives on a different space")
        if not L.is_zero() and L.degrees() != {1}:
            raise ValueError("cofactor must be linear in the momenta")
    if mode == "conformal" and ansatz.d == 0:
        raise ValueError("conformal mode needs d >= 1")
    H = metric.hamiltonian
    exprs = []
    for alpha, beta in ansatz.slots:
        s = ansatz.slot_function(alpha, beta)
        e = poisson_bracket(H, s)
        if mode == "relative" and not L.is_zero():
            e = e - L * s
        exprs.append(e)
    mult = None
    if mode == "conformal":
        mult = _multiplier_ansatz(metric, ansatz)
        for alpha, beta in mult.slots:
            exprs.append(-(mult.slot_function(alpha, beta) * H))
    polys = _clear(exprs, metric.vars)
    table: dict[tuple[int, ...], dict[int, Fraction]] = {}
    for j, P in enumerate(polys):
        for e, c in P.terms.items():
            table.setdefault(e, {})[j] = Fraction(c)
    order = sorted(table, key=lambda e: (sum(e), e))
    return LinearSystem(len(exprs), [table[e] for e in order], order, ansatz, mode, mult)


def _primitive(F: PhaseFn) -> PhaseFn:
    return F * (Fraction(1) / F.num.rational_content())


def _verify(H: PhaseFn, K: PhaseFn, mode: str, L: PhaseFn | None, M: PhaseFn | None) -> bool:
    b = poisson_bracket(H, K)
    if mode == "killing":
        return b.is_zero()
    if mode == "relative":
        return b == L * K
    return b == M * H


def default_window(metric: Metric, d: int, N: int | None = None, D: Poly | None = None, k: int | None = None) -> Ansatz:
    flat = all(c.is_constant() for row in metric.inverse for c in row)
    if N is None:
        N = d if flat else d + 2
    if D is None:
        D = metric.inverse_denominator
    if k is None:
        k = 0 if D.is_constant() else 1
    return Ansatz(metric.space, d, N, None if D.is_constant() else D, k)


def solve_space(
    metric: Metric,
    d: int,
    N: int | None = None,
    mode: str = "killing",
    L: PhaseFn | None = None,
    D: Poly | None = None,
    k: int | None = None,
    ansatz: Ansatz | None = None,
) -> Basis:
    """Exact basis of the solution space inside the ansatz window.

    Each element is re-verified against the defining equation; in killing and
    relative modes the dimension is checked against ``lambda_dim(m, d)``.
    """
    if ansatz is None:
        ansatz = default_window(metric, d, N, D, k)
    sys = assemble_system(metric, ansatz, mode, L)
    kernel = nullspace(sys.rows, sys.ncols)
    for v in kernel:
        if any(apply_rows(sys.rows, v)):
            raise ArithmeticError("kernel vector does not annihilate the system")
    nK = len(ansatz.slots)
    H = metric.hamiltonian
    elements, mults = [], []
    for v in kernel:
        K = ansatz.element(v[:nK])
        M = sys.multiplier.element(v[nK:]) if sys.multiplier is not None else None
        if K.is_zero():
            raise ArithmeticError("kernel vector with vanishing tensor part")
        if not _verify(H, K, mode, L, M):
            raise ArithmeticError(f"reconstructed element fails its defining equation: {K.format()}")
        scaled = _primitive(K)
        elements.append(scaled)
        if M is not None:
            mults.append(M * (scaled.f / K.f))
    basis = Basis(elements, mode, ansatz, L if mode == "relative" else None, mults)
    if mode != "conformal":
        bound = lambda_dim(metric.m, d)
        if basis.dim > bound:
            raise DimensionBoundError(f"dimension {basis.dim} exceeds Lambda_{metric.m},{d} = {bound}")
    return basis


class FrlinList(list):
    """List of rational integrals with an optional diagnostic message."""

    diagnostic: str | None = None


def frlin_from_basis(H: PhaseFn, basis: Basis) -> FrlinList:
    """All pairwise ratios P_i/P_j (i < j) of a common-cofactor basis."""
    out = FrlinList()
    if basis.mode == "conformal":
        raise ValueError("ratios need a killing or relative basis")
    if basis.dim < 2:
        out.diagnostic = f"basis has dimension {basis.dim}; at least 2 are needed for a ratio"
        log.info(out.diagnostic)
        return out
    for Pi, Pj in combinations(basis.elements, 2):
        F = reduce_rational_integral(Pi, Pj)
        if not rational_integral_check(H, F):
            raise ArithmeticError(f"ratio {F.format()} is not an integral")
        out.append(F)
    return out


def numerator_rows(fns: list[PhaseFn], vars) -> tuple[list[dict[int, Fraction]], int]:
    polys = _clear(fns, vars)
    monos = sorted({e for P in polys for e in P.terms})
    index = {e: i for i, e in enumerate(monos)}
    rows = [{index[e]: Fraction(c) for e, c in P.terms.items()} for P in polys]
    return rows, len(monos)


def rational_family_dimension(
    numerators: Sequence[PhaseFn],
    denominators: Sequence[PhaseFn] | None = None,
    seed: int = 0,
    trials: int = 3,
) -> int:
    """Dimension of the family {P/Q : P in span(numerators), Q in span(denominators)}.

    Computed as the rank of the differential of (P, Q) -> P/Q at a random
    rational point, i.e. the rank of {K Q} u {P K'}; the scaling direction
    (P, Q) -> (cP, cQ) is the one-dimensional kernel, so a generic pair
    gives (#numerators + #denominators - 1).  The maximum over a few seeded
    trials is returned.
    """
    denominators = list(numerators if denominators is None else denominators)
    numerators = list(numerators)
    if not numerators or not denominators:
        return 0
    rng = random.Random(seed)
    vars = numerators[0].space.vars
    best = 0
    for _ in range(trials):
        a = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in numerators]
        b = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in denominators]
        P = sum((c * K for c, K in zip(a, numerators)), numerators[0].space.zero())
        Q = sum((c * K for c, K in zip(b, denominators)), denominators[0].space.zero())
        if P.is_zero() or Q.is_zero():
            continue
        fns = [K * Q for K in numerators] + [P * K for K in denominators]
        rows, n = numerator_rows(fns, vars)
        best = max(best, rank(rows, n))
    return best
