import numpy as np
import pytest
from scipy.integrate import solve_ivp
from scipy.special import j0, j1

from relkill.fixtures import get_fixture
from relkill.numeric import (
    BesselPair,
    NumericHamiltonian,
    bessel_hamiltonian,
    bessel_integral,
    bessel_j,
    compile_ratfn,
    conservation_report,
    gradient_check,
    integrate,
    order_factor,
    phase_evaluator,
    random_starts,
    relative_conservation_report,
)
from relkill.phase import RationalIntegral, cofactor_extract


def test_bessel_against_scipy():
    ys = np.linspace(-12, 12, 241)
    assert max(abs(bessel_j(0, y) - j0(y)) for y in ys) < 1e-14
    assert max(abs(bessel_j(1, y) - j1(y)) for y in ys) < 1e-14
    with pytest.raises(ValueError):
        bessel_j(0, 50.0)


def test_bessel_identities():
    B = BesselPair()
    for y in (0.3, 1.0, 2.5, 7.0):
        a, b = B(y)
        da, db = B.derivatives(y)
        assert da == pytest.approx(-b, abs=1e-14)
        assert db == pytest.approx(a - b / y, abs=1e-13)
        assert B.identity_residual(y) < 1e-8


def test_compiled_matches_exact():
    fx = get_fixture("ex1")
    F = fx.phase("F2")
    f = phase_evaluator(F)
    from fractions import Fraction

    pt = {"x": Fraction(1, 3), "y": Fraction(5, 4), "p": Fraction(-2), "q": Fraction(7, 5)}
    assert f((1 / 3, 1.25), (-2.0, 1.4)) == pytest.approx(float(F.evaluate(pt)), rel=1e-14)
    g = compile_ratfn(fx.coord("phi"))
    assert g(1.0, 2.0, 0.0, 0.0) == 17.0


def test_flat_geodesics_are_lines():
    fx = get_fixture("flat2")
    Hn = NumericHamiltonian.from_metric(fx.metric)
    tr = integrate(Hn, [0.0, 1.0], [0.5, -0.25], 0.01, 2.0)
    assert tr.x[-1] == pytest.approx([1.0, 0.5], abs=1e-12)
    assert tr.energy_drift < 1e-14


def test_against_scipy_ivp():
    fx = get_fixture("ex1")
    Hn = NumericHamiltonian.from_phase(fx.H)
    x0, p0 = [0.7, 1.1], [0.4, -0.9]
    tr = integrate(Hn, x0, p0, 1e-3, 3.0)
    sol = solve_ivp(lambda t, z: Hn.rhs(z), (0, 3.0), x0 + p0, rtol=1e-12, atol=1e-12)
    assert np.allclose(np.concatenate([tr.x[-1], tr.p[-1]]), sol.y[:, -1], atol=1e-8)


def test_example1_integrals_conserved():
    fx = get_fixture("ex1")
    Hn = NumericHamiltonian.from_phase(fx.H)
    tr = integrate(Hn, [0.6, 0.9], [1.0, 0.2], 1e-3, 5.0)
    for n in ("F1", "F2", "F3"):
        assert conservation_report(fx.phase(n), tr).max_drift < 1e-9
    G1 = RationalIntegral(fx.phase("G1_num"), fx.phase("G1_den"))
    assert conservation_report(G1, tr).max_drift < 1e-8


def test_relative_conservation_uses_flow_cofactor():
    fx = get_fixture("ex1")
    Hn = NumericHamiltonian.from_phase(fx.H)
    tr = integrate(Hn, [0.6, 0.9], [1.0, 0.2], 1e-3, 3.0)
    K = fx.phase("R2")
    L = cofactor_extract(fx.H, K)
    assert relative_conservation_report(K, -L, tr).max_drift < 1e-7
    assert relative_conservation_report(K, L, tr).max_drift > 1e-3


def test_singular_start():
    fx = get_fixture("ex1")
    Hn = NumericHamiltonian.from_phase(fx.H)
    tr = integrate(Hn, [0.0, 0.0], [1.0, 0.0], 1e-3, 1.0)
    assert tr.truncated and "singular" in tr.diagnostic


def test_bessel_flow():
    Hn = bessel_hamiltonian()
    (x0, p0), = random_starts(1, [(0.0, 1.0), (0.5, 3.0)], seed=7)
    tr = integrate(Hn, x0, p0, 1e-3, 2.0)
    assert conservation_report(bessel_integral, tr).max_drift < 1e-9
    assert gradient_check(Hn, random_starts(20, [(0.0, 1.0), (0.5, 3.0)], seed=1)) < 1e-6
    assert 12 <= order_factor(Hn, x0, p0, 0.02, 2.0) <= 20


def test_random_starts_are_deterministic():
    a = random_starts(3, [(0, 1), (0.5, 3)], seed=5)
    b = random_starts(3, [(0, 1), (0.5, 3)], seed=5)
    assert [list(map(list, s)) for s in a] == [list(map(list, s)) for s in b]
    for x, p in a:
        assert 0 <= x[0] <= 1 and 0.5 <= x[1] <= 3
        assert all(-1 <= c <= 1 for c in p)
