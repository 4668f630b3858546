import json
from pathlib import Path

import pytest

from relkill.fixtures import get_fixture
from relkill.spec_io import SpecError, load_metric_spec, parse_metric_spec

METRICS = Path(__file__).resolve().parent.parent / "metrics"


def test_example_files():
    g1 = load_metric_spec(METRICS / "ex1.json").metric
    assert g1 == get_fixture("ex1").metric
    assert load_metric_spec(METRICS / "ex2.json").metric == get_fixture("ex2").metric
    num = load_metric_spec(METRICS / "bessel-ex3.json")
    assert not num.is_symbolic and num.numeric.m == 2
    assert load_metric_spec(METRICS / "flat3.json").metric.m == 3


@pytest.mark.parametrize(
    "doc, path",
    [
        ({"dim": 2, "coords": ["x", "y"], "conformal_factor": "x", "colour": 1}, "$"),
        ({"dim": 2, "coords": ["x", "y"]}, "$"),
        ({"dim": 2, "coords": ["x", "y"], "conformal_factor": "x", "inverse_metric": [["1"]]}, "$"),
        ({"dim": 2, "coords": ["x", "y"], "conformal_factor": 3}, "$.conformal_factor"),
        ({"dim": 2, "coords": ["x", "1y"], "conformal_factor": "1"}, "$.coords[1]"),
        ({"schema": "relkill/2", "fixture_id": "bessel-ex3"}, "$.schema"),
        ({"fixture_id": "moon"}, "$.fixture_id"),
        ({"dim": 3, "coords": ["x", "y"], "conformal_factor": "1"}, "$.coords"),
        ({"dim": 3, "coords": ["x", "y", "z"], "conformal_factor": "1"}, "$.conformal_factor"),
        ({"dim": 2, "coords": ["x", "y"], "conformal_factor": "x^"}, "$.conformal_factor"),
        ({"dim": 2, "coords": ["x", "y"], "conformal_factor": "p"}, "$.conformal_factor"),
        ({"dim": 2, "coords": ["x", "y"], "inverse_metric": [["1", "0"]]}, "$.inverse_metric"),
        ({"dim": 2, "coords": ["x", "y"], "inverse_metric": [["1", "x"], ["y", "1"]]}, "$.inverse_metric[0][1]"),
        ({"dim": 2, "coords": ["x", "y"], "inverse_metric": [["x", "x"], ["x", "x"]]}, "$"),
        ({"dim": 2, "coords": ["x", "y"], "conformal_factor": "0"}, "$"),
    ],
)
def test_rejections_carry_a_path(doc, path):
    with pytest.raises(SpecError) as info:
        parse_metric_spec(doc)
    assert info.value.path == path


def test_invalid_json(tmp_path):
    f = tmp_path / "m.json"
    f.write_text("{not json")
    with pytest.raises(SpecError):
        load_metric_spec(f)


def test_round_trip_through_file(tmp_path):
    doc = {"dim": 2, "coords": ["u", "v"], "inverse_metric": [["1+u^2", "u*v"], ["u*v", "1+v^2"]]}
    f = tmp_path / "m.json"
    f.write_text(json.dumps(doc))
    g = load_metric_spec(f).metric
    assert g.vars == ("u", "v", "p_u", "p_v") or g.space.coords == ("u", "v")
