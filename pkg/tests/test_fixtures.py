import pytest

from relkill.fixtures import FIXTURES, NUMERIC_FIXTURES, get_fixture, metric_names
from relkill.phase import is_first_integral


@pytest.mark.parametrize("key", sorted(FIXTURES))
def test_every_string_parses(key):
    fx = get_fixture(key)
    assert fx.metric.m == len(fx.coords)
    for name, value in fx.data.items():
        if isinstance(value, str):
            fx.phase(name)
    assert is_first_integral(fx.H, fx.H)


def test_ex4_hamiltonian_is_not_geodesic():
    fx = get_fixture("ex4")
    assert fx.H != fx.metric.hamiltonian


def test_names():
    assert metric_names() == sorted(FIXTURES)
    assert "bessel-ex3" in NUMERIC_FIXTURES
    with pytest.raises(KeyError):
        get_fixture("nope")
