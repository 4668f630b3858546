import pytest

from relkill.fixtures import get_fixture
from relkill.phase import cofactor_extract
from relkill.surface import (
    CofactorProfile,
    ConformalSurface,
    DegenerateBranch,
    Dichotomy,
    ProfileNotReachable,
    classify_dichotomy,
    gap_coefficients,
    gap_expression,
    gaussian_curvature,
    ppp_rhs,
    profile_from_cofactor,
    qqq_residual,
    vector_components,
    weighted_derivative,
)


def test_curvature_matches_geometry():
    for text in ("1", "4/(1+x^2+y^2)^2", "x^2+4*y^2", "x^4+4*y^4", "1/y^2"):
        s = ConformalSurface.from_text(text)
        assert s.metric.curvature.scalar == gaussian_curvature(s) * 2


def test_hyperbolic_half_plane():
    s = ConformalSurface.from_text("1/y^2")
    assert gaussian_curvature(s) == -1
    assert classify_dichotomy(s) is Dichotomy.FIVE_DIMENSIONAL


def test_bad_factor():
    with pytest.raises(ValueError):
        ConformalSurface.from_text("x*p")
    with pytest.raises(ValueError):
        ConformalSurface.from_text("x", coords=("x", "y", "z"))


def test_gap_vanishes_on_constant_curvature():
    s = ConformalSurface.from_text("4/(1+x^2+y^2)^2")
    prof = CofactorProfile(s.space.parse_coord("0"))
    assert all(c.is_zero() for c in gap_coefficients(s, prof))


def test_gauged_example1_profiles():
    fx = get_fixture("ex1")
    s = ConformalSurface(fx.space, fx.coord("phi"))
    expected = {"R0": (-3, 4), "R1": (-1, 4), "R2": (-3, 4)}
    for R, (a, b) in expected.items():
        K = fx.phase(R)
        gp = profile_from_cofactor(s, cofactor_extract(fx.H, K))
        assert gp.exponents[0] == a / b
        u, v = vector_components(K)
        assert all(r.is_zero() for r in qqq_residual(s, gp.profile, u, v, gp.weight))
        assert gap_expression(s, gp.profile, u, v, gp.weight).is_zero()
        assert ppp_rhs(s, gp.profile, u, v) == weighted_derivative(u, 1, gp.weight)


def test_qqq_detects_non_solutions():
    fx = get_fixture("ex1")
    s = ConformalSurface(fx.space, fx.coord("phi"))
    u, v = vector_components(fx.space.parse("x*p"))
    prof = CofactorProfile(fx.space.parse_coord("x"))
    assert any(not r.is_zero() for r in qqq_residual(s, prof, u, v))


def test_degenerate_branch():
    s = ConformalSurface.from_text("x^2+4*y^2")
    prof = CofactorProfile(s.space.parse_coord("x"))
    one = s.space.parse_coord("1")
    with pytest.raises(DegenerateBranch):
        ppp_rhs(s, prof, one, one)


def test_example2_profile_not_reachable():
    fx = get_fixture("ex2")
    s = ConformalSurface(fx.space, fx.coord("phi"))
    with pytest.raises(ProfileNotReachable):
        profile_from_cofactor(s, cofactor_extract(fx.H, fx.phase("R3")))


def test_vector_components_need_degree_one():
    fx = get_fixture("ex1")
    with pytest.raises(ValueError):
        vector_components(fx.phase("R3"))
