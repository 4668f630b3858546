import random
from fractions import Fraction

import pytest

from relkill.fixtures import get_fixture
from relkill.phasefn import PhaseSpace
from relkill.poly import Poly
from relkill.ratfn import RatFn

SPACE2 = PhaseSpace.for_coords(("x", "y"))


def rand_coef(rng, lo=-3, hi=3):
    num = rng.randint(lo, hi)
    return Fraction(num, rng.choice((1, 1, 1, 2, 3)))


def rand_poly(rng, vars, max_deg=3, n_terms=4, only=None):
    """Random polynomial; ``only`` restricts to the listed variable indices."""
    idx = list(range(len(vars))) if only is None else list(only)
    terms = {}
    for _ in range(n_terms):
        e = [0] * len(vars)
        for _ in range(rng.randint(0, max_deg)):
            e[rng.choice(idx)] += 1
        terms[tuple(e)] = rand_coef(rng)
    return Poly(vars, terms)


def rand_phase(rng, space=SPACE2, max_p=2, max_x=2, rational=False):
    """Random phase function, polynomial in the momenta."""
    m = space.m
    xs = list(range(m))
    ps = list(range(m, 2 * m))
    f = Poly.zero(space.vars)
    for _ in range(rng.randint(1, 4)):
        cx = rand_poly(rng, space.vars, max_x, 2, only=xs)
        cp = rand_poly(rng, space.vars, max_p, 1, only=ps)
        f = f + cx * cp
    r = RatFn(f)
    if rational:
        den = rand_poly(rng, space.vars, 2, 2, only=xs) + Poly.constant(space.vars, rng.choice((1, 2, 5)))
        if not den.is_zero():
            r = r / RatFn(den)
    return _wrap(space, r)


def _wrap(space, r):
    from relkill.phasefn import PhaseFn

    return PhaseFn(space, r)


@pytest.fixture
def rng():
    return random.Random(20240917)


@pytest.fixture(scope="session")
def ex1():
    return get_fixture("ex1")


@pytest.fixture(scope="session")
def ex2():
    return get_fixture("ex2")


# acceptance summary, one line per criterion
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, text = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {text}")
