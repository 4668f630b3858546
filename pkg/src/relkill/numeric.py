"""Floating-point geodesic flows: fixed-step RK4 and conservation diagnostics.

This is the independent numerical cross-check for the exact engine and the
only place where non-rational metrics (the Bessel fixture) are handled.
Flow equations: x' = dH/dp, p' = -dH/dx, so dF/dt = {F, H} along the flow.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .geometry import Metric
from .phasefn import PhaseFn
from .poly import Poly
from .ratfn import RatFn

__all__ = [
    "NumericHamiltonian",
    "Trajectory",
    "ConservationReport",
    "RelativeConservationReport",
    "BesselPair",
    "bessel_j",
    "compile_ratfn",
    "phase_evaluator",
    "integrate",
    "conservation_report",
    "relative_conservation_report",
    "gradient_check",
    "order_factor",
    "bessel_hamiltonian",
    "bessel_integral",
    "random_starts",
]

BESSEL_RANGE = 12.0


# ---------------------------------------------------------------------------
# Bessel functions of the first kind, orders 0 and 1
# ---------------------------------------------------------------------------

# Series are summed in binary fixed point with _PREC fraction bits, so the
# cancellation between large alternating terms near |y| = 12 costs nothing
# and the result is the correctly rounded value of the truncated series.
_PREC = 128
_SCALE = float(1 << _PREC)


def _fixed_series(y: float, lead_shift: int, order: int, with_y: bool) -> float:
    # sum_k (-1)^k (y/2)^(2k) / (k! (k+order)!) * c, term_0 given by lead
    Y = int(y * _SCALE)
    h2 = (Y * Y) >> (_PREC + 2)
    term = (Y >> 1) if with_y else (1 << _PREC) >> lead_shift
    total = term
    k = 0
    while term:
        k += 1
        term = -((term * h2) >> _PREC) // (k * (k + order))
        total += term
    return total / (1 << _PREC)


def bessel_j(order: int, y: float) -> float:
    """J_0 or J_1 by power series on |y| <= 12 (absolute error below 1e-12)."""
    if order not in (0, 1):
        raise ValueError("only orders 0 and 1 are provided")
    if not abs(y) <= BESSEL_RANGE:
        raise ValueError(f"|y| = {abs(y)} outside the working interval [0, {BESSEL_RANGE}]")
    if order == 0:
        return _fixed_series(y, 0, 0, False)
    return _fixed_series(y, 0, 1, True)


def _j1_over_y(y: float) -> float:
    """J_1(y)/y, regular at y = 0."""
    return _fixed_series(y, 1, 1, False)


@dataclass(frozen=True)
class BesselPair:
    """y -> (J0, J1) with J0' = -J1 and J1' = J0 - J1/y."""

    def __call__(self, y: float) -> tuple[float, float]:
        return bessel_j(0, y), bessel_j(1, y)

    def derivatives(self, y: float) -> tuple[float, float]:
        if not abs(y) <= BESSEL_RANGE:
            raise ValueError(f"|y| = {abs(y)} outside the working interval")
        j0, j1 = self(y)
        return -j1, j0 - _j1_over_y(y)

    def identity_residual(self, y: float, h: float = 1e-5) -> float:
        """|J0' + J1| with J0' from central differences."""
        d0 = (bessel_j(0, y + h) - bessel_j(0, y - h)) / (2 * h)
        return abs(d0 + bessel_j(1, y))


# ---------------------------------------------------------------------------
# compiling exact data to float callbacks
# ---------------------------------------------------------------------------

def _poly_source(p: Poly, names: Sequence[str]) -> str:
    if p.is_zero():
        return "0.0"
    parts = []
    for e, c in p.sorted_terms():
        factors = [repr(float(c))]
        for name, k in zip(names, e):
            if k == 1:
                factors.append(name)
            elif k > 1:
                factors.append(f"{name}**{k}")
        parts.append("*".join(factors))
    return " + ".join(parts)


def _ratfn_source(f: RatFn, names: Sequence[str]) -> str:
    num = _poly_source(f.num, names)
    if f.den.is_constant():
        return f"({num}) / {float(f.den.constant_value())!r}"
    return f"({num}) / ({_poly_source(f.den, names)})"


def compile_ratfn(f: RatFn) -> Callable[..., float]:
    """Positional float evaluator over ``f.vars`` (raises ZeroDivisionError at poles)."""
    names = [f"v{i}" for i in range(len(f.vars))]
    src = f"lambda {', '.join(names)}: {_ratfn_source(f, names)}"
    return eval(src, {"__builtins__": {}})


def _compile_many(fns: Sequence[RatFn]) -> Callable[..., tuple]:
    names = [f"v{i}" for i in range(len(fns[0].vars))]
    body = ", ".join(_ratfn_source(f, names) for f in fns)
    return eval(f"lambda {', '.join(names)}: ({body},)", {"__builtins__": {}})


def phase_evaluator(F) -> Callable[[Sequence[float], Sequence[float]], float]:
    """Float evaluator F(x, p) for a PhaseFn, a RatFn on phase space or a RationalIntegral."""
    if hasattr(F, "as_ratfn"):
        F = F.as_ratfn()
    g = compile_ratfn(F.f if isinstance(F, PhaseFn) else F)
    return lambda x, p: g(*x, *p)


@dataclass
class NumericHamiltonian:
    """H(x, p) with its gradients as float callbacks on (x, p) sequences."""

    m: int
    H: Callable[[Sequence[float], Sequence[float]], float]
    dH_dx: Callable[[Sequence[float], Sequence[float]], Sequence[float]]
    dH_dp: Callable[[Sequence[float], Sequence[float]], Sequence[float]]
    name: str = ""
    vector_field: Callable | None = None

    @classmethod
    def from_phase(cls, H: PhaseFn, name: str = "") -> "NumericHamiltonian":
        m = H.m
        fH = compile_ratfn(H.f)
        gx = [H.f.diff(i) for i in range(m)]
        gp = [H.f.diff(m + i) for i in range(m)]
        fx = _compile_many(gx)
        fp = _compile_many(gp)
        flow = _compile_many(gp + [-g for g in gx])
        return cls(
            m,
            lambda x, p: fH(*x, *p),
            lambda x, p: fx(*x, *p),
            lambda x, p: fp(*x, *p),
            name,
            lambda z: flow(*z),
        )

    @classmethod
    def from_metric(cls, metric: Metric, name: str = "") -> "NumericHamiltonian":
        return cls.from_phase(metric.hamiltonian, name)

    def rhs(self, z: Sequence[float]) -> tuple:
        if self.vector_field is not None:
            return self.vector_field(z)
        x, p = z[: self.m], z[self.m :]
        dp = self.dH_dp(x, p)
        dx = self.dH_dx(x, p)
        return tuple(dp) + tuple(-v for v in dx)


# ---------------------------------------------------------------------------
# the Bessel fixture
# ---------------------------------------------------------------------------

def _bessel_parts(y: float) -> tuple[float, float, float]:
    """(J0, J1, J1/y) from two series evaluations."""
    if not abs(y) <= BESSEL_RANGE:
        raise ValueError(f"|y| = {abs(y)} outside the working interval [0, {BESSEL_RANGE}]")
    j0 = _fixed_series(y, 0, 0, False)
    r = _fixed_series(y, 1, 1, False)
    return j0, r * y, r


def bessel_hamiltonian() -> NumericHamiltonian:
    """H = e^{-2x} (p^2 + q^2) / (J0(y)^2 + J1(y)^2)."""

    def parts(x):
        j0, j1, r = _bessel_parts(x[1])
        return math.exp(-2.0 * x[0]), j0 * j0 + j1 * j1, j1, r

    def H(x, p):
        e, s, _, _ = parts(x)
        return e * (p[0] ** 2 + p[1] ** 2) / s

    def dH_dx(x, p):
        e, s, j1, r = parts(x)
        h = e * (p[0] ** 2 + p[1] ** 2) / s
        # S' = -2 J1^2 / y
        ds = -2.0 * j1 * r
        return (-2.0 * h, -h * ds / s)

    def dH_dp(x, p):
        e, s, _, _ = parts(x)
        return (2.0 * e * p[0] / s, 2.0 * e * p[1] / s)

    def flow(z):
        X, Y, P, Q = z
        e, s, j1, r = parts((X, Y))
        h = e * (P * P + Q * Q) / s
        return (2.0 * e * P / s, 2.0 * e * Q / s, 2.0 * h, -2.0 * h * j1 * r / s)

    return NumericHamiltonian(2, H, dH_dx, dH_dp, "bessel-ex3", flow)


def bessel_integral(x: Sequence[float], p: Sequence[float]) -> float:
    """((x p + y q) J1 - (y p - x q) J0) / (J1 p + J0 q)."""
    X, Y = x
    P, Q = p
    j0, j1, _ = _bessel_parts(Y)
    return ((X * P + Y * Q) * j1 - (Y * P - X * Q) * j0) / (j1 * P + j0 * Q)


# ---------------------------------------------------------------------------
# integration and reports
# ---------------------------------------------------------------------------

@dataclass
class Trajectory:
    h: float
    T: float
    t: np.ndarray
    x: np.ndarray
    p: np.ndarray
    energy: np.ndarray
    diagnostic: str | None = None

    @property
    def truncated(self) -> bool:
        return self.diagnostic is not None

    @property
    def energy_drift(self) -> float:
        """max |H(t) - H(0)| / |H(0)| (absolute when H(0) = 0)."""
        if len(self.energy) == 0:
            return float("nan")
        e0 = self.energy[0]
        scale = abs(e0) if e0 != 0 else 1.0
        return float(np.max(np.abs(self.energy - e0)) / scale)

    def __len__(self) -> int:
        return len(self.t)


def _finite(vals) -> bool:
    return all(math.isfinite(v) for v in vals)


def integrate(Hn: NumericHamiltonian, x0, p0, h: float, T: float) -> Trajectory:
    """Classic RK4 with uniform step h up to time T."""
    if not h > 0 or not T > 0:
        raise ValueError("need h > 0 and T > 0")
    m = Hn.m
    if len(x0) != m or len(p0) != m:
        raise ValueError(f"start point must have {m} coordinates and {m} momenta")
    n = int(round(T / h))
    z = tuple(float(v) for v in x0) + tuple(float(v) for v in p0)
    samples = [z]
    diag = None
    rhs = Hn.rhs
    try:
        energies = [Hn.H(z[:m], z[m:])]
        if not _finite(energies) or not _finite(rhs(z)):
            raise ZeroDivisionError
    except (ZeroDivisionError, OverflowError, ValueError) as exc:
        empty = np.empty((0, m))
        return Trajectory(h, T, np.empty(0), empty, empty, np.empty(0), f"start point is singular: {exc or 'nonfinite value'}")
    for step in range(n):
        try:
            k1 = rhs(z)
            k2 = rhs(tuple(a + 0.5 * h * b for a, b in zip(z, k1)))
            k3 = rhs(tuple(a + 0.5 * h * b for a, b in zip(z, k2)))
            k4 = rhs(tuple(a + h * b for a, b in zip(z, k3)))
            z = tuple(a + h / 6.0 * (b + 2.0 * c + 2.0 * d + e) for a, b, c, d, e in zip(z, k1, k2, k3, k4))
            energy = Hn.H(z[:m], z[m:])
            if not (_finite(z) and math.isfinite(energy)):
                raise OverflowError("nonfinite state")
        except (ZeroDivisionError, OverflowError, ValueError) as exc:
            diag = f"stopped at t={step * h:.6g}: {exc}"
            break
        samples.append(z)
        energies.append(energy)
    arr = np.array(samples)
    t = h * np.arange(len(samples))
    return Trajectory(h, T, t, arr[:, :m], arr[:, m:], np.array(energies), diag)


@dataclass
class ConservationReport:
    max_drift: float
    samples: int
    masked: int = 0

    def passes(self, tol: float) -> bool:
        return self.samples > 0 and self.max_drift < tol


def _values(F, traj: Trajectory):
    vals = np.full(len(traj), np.nan)
    for i in range(len(traj)):
        try:
            v = F(traj.x[i], traj.p[i])
        except (ZeroDivisionError, ValueError, OverflowError):
            continue
        if math.isfinite(v):
            vals[i] = v
    return vals


def conservation_report(F, traj: Trajectory) -> ConservationReport:
    """max |F(t_i) - F(0)| / (1 + |F(0)|) over samples where F is defined."""
    if not callable(F):
        F = phase_evaluator(F)
    vals = _values(F, traj)
    ok = ~np.isnan(vals)
    if not ok.any() or not ok[0]:
        return ConservationReport(float("nan"), 0, int((~ok).sum()))
    f0 = vals[0]
    drift = np.abs(vals[ok] - f0) / (1.0 + abs(f0))
    return ConservationReport(float(drift.max()), int(ok.sum()), int((~ok).sum()))


@dataclass
class RelativeConservationReport:
    max_drift: float | None
    samples: int
    max_abs_k: float
    sign_changes: list[float] = field(default_factory=list)

    def passes(self, tol: float) -> bool:
        return self.max_drift is not None and self.max_drift < tol


def relative_conservation_report(K, L, traj: Trajectory) -> RelativeConservationReport:
    """Drift of K(t) exp(-int_0^t L) where dK/dt = L K along the flow.

    With the bracket {F,G} = F_x G_p - F_p G_x and {H,K} = C K, the flow
    cofactor is L = -C.  The integral uses the trapezoid rule on the samples.
    If K changes sign the sign-change times are reported instead of a drift.
    """
    if not callable(K):
        K = phase_evaluator(K)
    if not callable(L):
        L = phase_evaluator(L)
    kv = _values(K, traj)
    lv = _values(L, traj)
    if np.isnan(kv).any() or np.isnan(lv).any():
        raise ValueError("K or L is undefined along the trajectory")
    max_abs = float(np.max(np.abs(kv))) if len(kv) else float("nan")
    signs = np.sign(kv)
    changes = [float(traj.t[i]) for i in range(1, len(kv)) if signs[i] * signs[i - 1] < 0]
    if len(kv) == 0 or kv[0] == 0 or changes:
        return RelativeConservationReport(None, len(kv), max_abs, changes)
    integral = np.concatenate(([0.0], np.cumsum(0.5 * (lv[1:] + lv[:-1]) * np.diff(traj.t))))
    comp = kv * np.exp(-integral)
    drift = np.abs(comp - comp[0]) / (1.0 + abs(comp[0]))
    return RelativeConservationReport(float(drift.max()), len(kv), max_abs, [])


def gradient_check(Hn: NumericHamiltonian, points, step: float = 1e-6) -> float:
    """Largest relative gap between analytic gradients and central differences.

    ``points`` is a sequence of (x, p) pairs; the error is |a - fd| / max(1, |a|).
    """
    worst = 0.0
    m = Hn.m
    for x, p in points:
        x, p = list(map(float, x)), list(map(float, p))
        ax, ap = Hn.dH_dx(x, p), Hn.dH_dp(x, p)
        for i in range(m):
            for vec, analytic in ((x, ax), (p, ap)):
                orig = vec[i]
                vec[i] = orig + step
                fp = Hn.H(x, p)
                vec[i] = orig - step
                fm = Hn.H(x, p)
                vec[i] = orig
                fd = (fp - fm) / (2 * step)
                worst = max(worst, abs(analytic[i] - fd) / max(1.0, abs(analytic[i])))
    return worst


def order_factor(Hn: NumericHamiltonian, x0, p0, h: float, T: float) -> float:
    """Energy drift at step h divided by the drift at h/2 (about 16 for RK4)."""
    a = integrate(Hn, x0, p0, h, T)
    b = integrate(Hn, x0, p0, h / 2, T)
    if a.truncated or b.truncated:
        raise ValueError(a.diagnostic or b.diagnostic)
    return a.energy_drift / b.energy_drift


def random_starts(n: int, box: Sequence[tuple[float, float]], seed: int = 0, momentum: float = 1.0):
    """n reproducible (x0, p0) pairs: x uniform in the box, p uniform in [-momentum, momentum]."""
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        x = [rng.uniform(lo, hi) for lo, hi in box]
        p = [rng.uniform(-momentum, momentum) for _ in box]
        out.append((x, p))
    return out
