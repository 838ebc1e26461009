import json
from fractions import Fraction
from pathlib import Path

import pytest

from pwrot.cyclotomic import zeta
from pwrot.geometry import point
from pwrot.scenario import ScenarioError, load_scenario, map_from_spec, parse_point, run_scenario

SCENARIOS = Path(__file__).resolve().parents[1] / "scenarios"


def test_parse_point_forms():
    assert parse_point("(1/2, -3)", 8) == point(Fraction(1, 2), -3, 8)
    assert parse_point([1, "cyclo(8)[0,1,0,1]"], 8) == point(1, zeta(8) + zeta(8, 3), 8)
    assert parse_point("cyclo(8)[0,0,1,0]", 8) == zeta(8, 2)
    with pytest.raises(ScenarioError):
        parse_point("(1, 2, 3)", 8)


def test_map_spec_errors():
    with pytest.raises(ScenarioError):
        map_from_spec({"sigma": "0"})
    with pytest.raises(ScenarioError):
        map_from_spec({"theta": "1/4", "sigma": "0", "centers": ["(0,1)", "(0,-1)"]})
    with pytest.raises(ScenarioError):
        map_from_spec({"theta": "1/4", "centers": ["(0,0)", "(0,-1)"]})


@pytest.mark.parametrize(
    "data",
    [
        [],
        {"name": "x", "map": {}},
        {"name": "x", "map": {}, "pipeline": [{"foo": 1}]},
        {"name": "x", "map": {}, "pipeline": [{"action": "nope"}]},
        {"name": "x", "map": {}, "pipeline": [{"action": "cone", "expect": {"pieces": 1}}]},
    ],
)
def test_schema_errors(tmp_path, data):
    p = tmp_path / "s.json"
    p.write_text(json.dumps(data))
    with pytest.raises(ScenarioError):
        load_scenario(str(p))


def test_every_shipped_scenario_is_well_formed():
    files = sorted(SCENARIOS.glob("*.json"))
    assert len(files) >= 10
    for f in files:
        data = load_scenario(str(f))
        map_from_spec(data["map"])
        for step in data["pipeline"]:
            exp = step.get("expect")
            if exp is not None:
                assert exp["source"].split(":")[0] in {"published", "derived"}


def test_small_pipeline_runs_and_reports():
    rep = run_scenario({
        "name": "quarter",
        "map": {"theta": "1/4", "sigma": "0"},
        "pipeline": [
            {"action": "cone"},
            {"action": "first_return", "expect": {"source": "derived: four pieces", "pieces": 4}},
            {"action": "tables"},
        ],
    })
    assert rep.ok and rep.exit_code == 0
    assert "overall: PASS" in rep.text()
    assert [a["action"] for a in rep.to_json()["actions"]] == ["cone", "first_return", "tables"]


def test_action_ordering_error():
    with pytest.raises(ScenarioError):
        run_scenario({"name": "x", "map": {"theta": "1/4", "sigma": "0"}, "pipeline": [{"action": "tables"}]})
