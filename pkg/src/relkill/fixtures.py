"""Built-in example data as canonical expression strings.

Printed cofactors are kept exactly as published; they agree with
:func:`relkill.phase.cofactor_extract` only up to a constant factor, which
the verification suites measure rather than assume.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .geometry import Metric
from .phasefn import PhaseSpace
from .ratfn import RatFn

__all__ = ["MetricFixture", "FIXTURES", "NUMERIC_FIXTURES", "get_fixture", "metric_names"]


@dataclass(frozen=True)
class MetricFixture:
    key: str
    label: str
    coords: tuple[str, ...]
    conformal_factor: str | None = None
    inverse_metric: tuple[tuple[str, ...], ...] | None = None
    hamiltonian: str | None = None
    data: dict = field(default_factory=dict)

    @cached_property
    def space(self) -> PhaseSpace:
        return PhaseSpace.for_coords(self.coords)

    @cached_property
    def metric(self) -> Metric:
        sp = self.space
        if self.conformal_factor is not None:
            return Metric.conformal(sp, sp.parse_coord(self.conformal_factor))
        return Metric(sp, [[sp.parse_coord(e) for e in row] for row in self.inverse_metric])

    @cached_property
    def H(self):
        if self.hamiltonian is not None:
            return self.space.parse(self.hamiltonian)
        return self.metric.hamiltonian

    def phase(self, name: str):
        return self.space.parse(self.data[name])

    def coord(self, name: str) -> RatFn:
        return self.space.parse_coord(self.data[name])


FIXTURES: dict[str, MetricFixture] = {}


def _add(fx: MetricFixture) -> None:
    FIXTURES[fx.key] = fx


_add(MetricFixture(
    "ex1",
    "example 1: g = (x^2+4y^2)(dx^2+dy^2)",
    ("x", "y"),
    conformal_factor="x^2+4*y^2",
    data={
        "phi": "x^2+4*y^2",
        "F1": "(2*y*p-x*q)*(2*y*p+x*q)/(x^2+4*y^2)",
        "F2": "(2*y*p-x*q)*(x^2*p+2*y^2*p-x*y*q)/(x^2+4*y^2)",
        "F3": "(2*y*p-x*q)*(2*x*p^2-2*y*p*q+x*q^2)/(x^2+4*y^2)",
        "G1_num": "x^2*p+2*y^2*p-x*y*q",
        "G1_den": "2*y*p+x*q",
        "G2_num": "2*x*p^2-2*y*p*q+x*q^2",
        "G2_den": "x^2*p+2*y^2*p-x*y*q",
        "R0": "x^2*p+2*y^2*p-x*y*q",
        "R1": "2*y*p-x*q",
        "R2": "2*y*p+x*q",
        "R3": "2*x*p^2-2*y*p*q+x*q^2",
        # printed cofactors
        "L_minus": "-6*(x*p+2*y*q)/(x^2+4*y^2)^2",
        "L_plus": "2*(x*p-2*y*q)/(x^2+4*y^2)^2",
        "L": "3*x*p/(x^2+4*y^2)^2",
        # printed {H, -1/4 ln phi}
        "log_shift": "(x*p+4*y*q)/(x^2+4*y^2)^2",
        "cofactor_of": {"R0": "L_minus", "R1": "L_plus", "R2": "L_minus", "R3": "L_minus"},
    },
))

_add(MetricFixture(
    "ex2",
    "example 2: g = (x^4+4y^4)(dx^2+dy^2)",
    ("x", "y"),
    conformal_factor="x^4+4*y^4",
    data={
        "phi": "x^4+4*y^4",
        "2H": "(p^2+q^2)/(x^4+4*y^4)",
        "F2": "(2*y^2*p-x^2*q)*(2*y^2*p+x^2*q)/(x^4+4*y^4)",
        "R1": "2*y^2*p-x^2*q",
        "R2": "2*y^2*p+x^2*q",
        "R3": "(x^2+2*y^2)*y*p+x^3*q",
        "R4": "(x^2-2*y^2)*p-2*x*y*q",
        "L1": "-2*(x-2*y)*(x^2*p-2*y^2*q)/(x^4+4*y^4)^2",
        "L2": "-2*(x+2*y)*(x^2*p+2*y^2*q)/(x^4+4*y^4)^2",
        "L3": "-(4*x*(x^2+y^2)*p+2*y*(x^2+6*y^2)*q)/(x^4+4*y^4)^2",
        "L4": "-(4*x*(x^2+y^2)*p+2*y*(x^2+6*y^2)*q)/(x^4+4*y^4)^2",
        "cofactor_of": {"R1": "L1", "R2": "L2", "R3": "L3", "R4": "L4"},
    },
))

_add(MetricFixture(
    "ex4",
    "example 4: H = |p|^2/2 + (b.p)(m1 x1 p1 + m2 x2 p2), b = (1,0), m = (1,2)",
    ("x1", "x2"),
    inverse_metric=(("1", "0"), ("0", "1")),
    hamiltonian="(p1^2+p2^2)/2+p1*(x1*p1+2*x2*p2)",
    data={
        "b": (1, 0),
        "m": (1, 2),
        "b_dot_p": "p1",
        "integral_num": "p1^2",
        "integral_den": "p2",
    },
))

_add(MetricFixture("flat2", "flat plane", ("x", "y"), conformal_factor="1"))
_add(MetricFixture(
    "flat3",
    "flat 3-space",
    ("x1", "x2", "x3"),
    inverse_metric=(("1", "0", "0"), ("0", "1", "0"), ("0", "0", "1")),
))
_add(MetricFixture(
    "sphere",
    "round sphere in stereographic coordinates",
    ("x", "y"),
    conformal_factor="4/(1+x^2+y^2)^2",
))

NUMERIC_FIXTURES = {
    "bessel-ex3": "example 3: H = e^{-2x}(p^2+q^2)/(J0(y)^2+J1(y)^2)",
}


def get_fixture(key: str) -> MetricFixture:
    try:
        return FIXTURES[key]
    except KeyError:
        raise KeyError(f"unknown fixture {key!r}; known: {', '.join(sorted(FIXTURES))}") from None


def metric_names() -> list[str]:
    return sorted(FIXTURES)
