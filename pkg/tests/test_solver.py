from math import comb

import pytest

from relkill.fixtures import get_fixture
from relkill.geometry import Metric
from relkill.phase import cofactor_extract, is_first_integral, rational_integral_check
from relkill.phasefn import PhaseSpace
from relkill.solver import (
    Ansatz,
    Basis,
    DimensionBoundError,
    assemble_system,
    frlin_from_basis,
    lambda_dim,
    momentum_multi_indices,
    monomial_exponents,
    param_count_n,
    rational_family_dimension,
    solve_space,
)
from relkill.suites import _span_rank

SP2 = PhaseSpace.for_coords(("x", "y"))


@pytest.mark.parametrize("m", range(1, 6))
@pytest.mark.parametrize("d", range(0, 6))
def test_lambda_closed_form(m, d):
    assert lambda_dim(m, d) * (d + 1) == comb(m + d - 1, d) * comb(m + d, d)


def test_lambda_domain():
    with pytest.raises(ValueError):
        lambda_dim(0, 1)
    assert lambda_dim(1, 4) == 1


def test_param_count():
    assert param_count_n(2, 1, 1) == 3
    assert param_count_n(3, 2, 1) == 8


def test_index_orders():
    assert momentum_multi_indices(2, 2) == [(2, 0), (1, 1), (0, 2)]
    assert monomial_exponents(2, 1) == [(0, 0), (0, 1), (1, 0)]
    assert len(monomial_exponents(3, 2)) == comb(5, 2)


def test_ansatz_slots():
    a = Ansatz(SP2, 2, 3)
    assert len(a.slots) == a.expected_slot_count() == 3 * comb(5, 2)


def test_flat_known_bases():
    g = Metric.flat(SP2)
    b = solve_space(g, 1, N=1)
    assert b.dim == 3
    assert _span_rank(b.elements + [SP2.parse("p"), SP2.parse("q"), SP2.parse("x*q-y*p")]) == 3
    for K in b.elements:
        assert is_first_integral(g.hamiltonian, K)


def test_dimension_monotone_in_window():
    g = get_fixture("ex1").metric
    dims = [solve_space(g, 2, N=N).dim for N in range(0, 5)]
    assert dims == sorted(dims)
    assert dims[-1] == 3


def test_bound_error_is_raised_on_a_bad_basis(monkeypatch):
    import relkill.solver as solver

    g = Metric.flat(SP2)
    monkeypatch.setattr(solver, "lambda_dim", lambda m, d: 1)
    with pytest.raises(DimensionBoundError):
        solver.solve_space(g, 1, N=1)


def test_relative_mode():
    fx = get_fixture("ex1")
    L = cofactor_extract(fx.H, fx.phase("R2"))
    b = solve_space(fx.metric, 1, N=4, mode="relative", L=L)
    assert b.dim == 2
    for K in b.elements:
        assert cofactor_extract(fx.H, K) == L


def test_conformal_flat_vectors():
    g = Metric.flat(SP2)
    b = solve_space(g, 1, N=2, mode="conformal")
    assert b.dim == 6
    assert len(b.multipliers) == b.dim


def test_mode_errors():
    g = Metric.flat(SP2)
    with pytest.raises(ValueError):
        solve_space(g, 1, N=1, mode="bogus")
    with pytest.raises(ValueError):
        solve_space(g, 1, N=1, mode="relative")
    with pytest.raises(ValueError):
        solve_space(g, 1, N=1, mode="killing", L=SP2.parse("p"))
    with pytest.raises(ValueError):
        solve_space(g, 0, N=1, mode="conformal")


def test_system_has_provenance():
    g = get_fixture("ex1").metric
    sysm = assemble_system(g, Ansatz(SP2, 1, 2), "killing", None)
    assert sysm.ncols == len(Ansatz(SP2, 1, 2).slots)
    assert len(sysm.rows) == len(sysm.provenance)


def test_frlin_and_family():
    g = Metric.flat(SP2)
    b = solve_space(g, 1, N=1)
    found = frlin_from_basis(g.hamiltonian, b)
    assert len(found) == 3
    assert all(rational_integral_check(g.hamiltonian, F) for F in found)
    assert rational_family_dimension(b.elements) == 5
    single = frlin_from_basis(g.hamiltonian, Basis(b.elements[:1], "killing", b.ansatz))
    assert single == [] and single.diagnostic


def test_empty_window_is_reported_as_zero():
    g = get_fixture("ex2").metric
    assert solve_space(g, 1, N=4).dim == 0
