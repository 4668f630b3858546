import json

from relkill.suites import FAIL, PASS, run_example_suite, suite_ex2, suite_ex3


def statuses(rep):
    return {c.name: c.status for c in rep.checks}


def test_ex1_passes():
    rep = run_example_suite("ex1")
    assert rep.status == PASS, [c for c in rep.checks if c.status != PASS]
    kappa = rep.checks[3].detail["kappa"]
    assert kappa == 2


def test_ex2_only_the_cross_example_constant_differs():
    rep = run_example_suite("ex2")
    st = statuses(rep)
    assert rep.status == FAIL
    assert [n for n, s in st.items() if s != PASS] == ["that constant equals the example-1 constant"]
    assert suite_ex2(reference_kappa=1).status == PASS


def test_ex3_small():
    rep = suite_ex3(n=2, T=2.0)
    assert rep.status == PASS


def test_other_suites_pass():
    for key in ("ex4", "flat", "sphere"):
        assert run_example_suite(key).status == PASS, key


def test_reports_are_deterministic():
    a = json.dumps(run_example_suite("ex4").to_dict(), sort_keys=True)
    b = json.dumps(run_example_suite("ex4").to_dict(), sort_keys=True)
    assert a == b


def test_unknown_suite():
    import pytest

    with pytest.raises(KeyError):
        run_example_suite("ex9")
