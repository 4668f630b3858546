import random

import pytest

from conftest import SPACE2, rand_phase
from relkill.fixtures import get_fixture
from relkill.geometry import (
    CURVATURE_SIGN_D1,
    Metric,
    SingularMetricError,
    SymTensorField,
    covariant_derivative_full,
    curvature,
    killing_residual,
    lowered_tensor,
    metric_invert,
    prolongation_identity_d1_residual,
    raised_phase,
)
from relkill.phase import cofactor_components, cofactor_extract, poisson_bracket
from relkill.phasefn import PhaseSpace

SP3 = PhaseSpace.for_coords(("x1", "x2", "x3"))


def metric3():
    c = SP3.parse_coord
    return Metric.from_components(SP3, [[c("1+x2^2"), c("0"), c("0")], [c("0"), c("1"), c("x1")],
                                        [c("0"), c("x1"), c("2+x3^2")]])


def metrics():
    return [get_fixture("ex1").metric, get_fixture("ex2").metric, get_fixture("sphere").metric, metric3()]


@pytest.mark.parametrize("g", metrics(), ids=["ex1", "ex2", "sphere", "m3"])
def test_metric_compatibility(g):
    m = g.m
    comps = {(i, j): g.components[i][j] for i in range(m) for j in range(m)}
    for v in covariant_derivative_full(g, comps, 2).values():
        assert v.is_zero()


@pytest.mark.parametrize("g", metrics(), ids=["ex1", "ex2", "sphere", "m3"])
def test_first_bianchi_and_antisymmetry(g):
    R = g.curvature.riemann
    m = g.m
    for i in range(m):
        for j in range(m):
            for k in range(m):
                for l in range(m):
                    assert (R[i][j][k][l] + R[j][i][k][l]).is_zero()
                    assert (R[i][j][k][l] + R[j][l][k][i] + R[l][i][k][j]).is_zero()


def test_curvature_values():
    assert get_fixture("sphere").metric.curvature.scalar == 2
    flat = Metric.flat(SP3)
    assert all(c.is_zero() for a in flat.curvature.riemann for b in a for r in b for c in r)
    sph = get_fixture("sphere").metric
    ric = curvature(sph).ricci
    assert all((ric[i][j] - sph.components[i][j]).is_zero() for i in range(2) for j in range(2))


def test_inverse_round_trip():
    g = metric3()
    inv = metric_invert(g.components)
    assert all((inv[i][j] - g.inverse[i][j]).is_zero() for i in range(3) for j in range(3))


def test_singular_metric():
    c = SPACE2.parse_coord
    with pytest.raises(SingularMetricError):
        Metric(SPACE2, [[c("x"), c("x")], [c("x"), c("x")]])


def test_lower_raise_round_trip():
    g = get_fixture("ex1").metric
    rng = random.Random(4)
    for d in (1, 2, 3):
        K = rand_phase(rng, max_p=d).homogeneous_part(d)
        if K.is_zero():
            continue
        assert raised_phase(g, lowered_tensor(g, K)) == K


@pytest.mark.parametrize("key", ["flat2", "ex1", "ex2"])
def test_bracket_is_minus_symmetrized_derivative(key):
    g = get_fixture(key).metric
    rng = random.Random(8)
    for i in range(15):
        d = 1 + i % 3
        K = rand_phase(rng, max_p=d, rational=i % 2 == 0).homogeneous_part(d)
        if K.is_zero():
            continue
        S = killing_residual(g, lowered_tensor(g, K), [g.zero()] * 2)
        assert (poisson_bracket(g.hamiltonian, K) + raised_phase(g, S)).is_zero()


def test_killing_residual_linear():
    g = get_fixture("ex1").metric
    rng = random.Random(12)
    A = lowered_tensor(g, rand_phase(rng, max_p=2).homogeneous_part(2) + g.space.parse("x*p*q"))
    B = lowered_tensor(g, rand_phase(rng, max_p=2).homogeneous_part(2) + g.space.parse("q^2"))
    with pytest.raises(ValueError):
        A + lowered_tensor(g, g.space.parse("p"))
    L = [g.zero()] * 2
    lhs = killing_residual(g, A + B.scale(3), L)
    rhs = killing_residual(g, A, L) + killing_residual(g, B, L).scale(3)
    assert all((lhs[k] - rhs[k]).is_zero() for k in lhs.keys())


def test_relative_killing_residual_vanishes_on_examples():
    fx = get_fixture("ex1")
    g = fx.metric
    for R in ("R0", "R1", "R2", "R3"):
        K = fx.phase(R)
        ell = [-c for c in g.lower(cofactor_components(cofactor_extract(fx.H, K)))]
        assert killing_residual(g, lowered_tensor(g, K), ell).is_zero()


def _d1(g, K, ell, **kw):
    Kl = lowered_tensor(g, K)
    return prolongation_identity_d1_residual(g, [Kl[(i,)] for i in range(g.m)], ell, **kw)


def test_prolongation_sign_is_frozen():
    fx = get_fixture("ex1")
    g = fx.metric
    K = fx.phase("R1")
    ell = [-c for c in g.lower(cofactor_components(cofactor_extract(fx.H, K)))]
    assert CURVATURE_SIGN_D1 == 1
    assert all(v.is_zero() for v in _d1(g, K, ell).values())
    assert not all(v.is_zero() for v in _d1(g, K, ell, curvature_sign=-1).values())


def test_truncated_identity_needs_the_antisymmetric_terms():
    fx = get_fixture("ex1")
    g = fx.metric
    K = fx.phase("R2")
    ell = [-c for c in g.lower(cofactor_components(cofactor_extract(fx.H, K)))]
    assert not all(v.is_zero() for v in _d1(g, K, ell, complete=False).values())
    sph = get_fixture("sphere").metric
    rot = sph.space.parse("x*q-y*p")
    assert all(v.is_zero() for v in _d1(sph, rot, [sph.zero()] * 2, complete=False).values())


def test_prolongation_rejects_non_solutions():
    g = get_fixture("ex1").metric
    with pytest.raises(ValueError):
        _d1(g, g.space.parse("x*p"), [g.zero()] * 2)


def test_sym_tensor_form_round_trip():
    K = SPACE2.parse("x*p^2 + 3*y*p*q - q^2")
    T = SymTensorField.from_form(K)
    assert T.form() == K
