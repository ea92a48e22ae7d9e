import json
import os
import pathlib

import pytest

import evactree

DATA = pathlib.Path(os.environ.get("EVACTREE_DATA_DIR", pathlib.Path(__file__).resolve().parents[2] / "data"))

NET = """<NUMBER OF NODES> 4
<NUMBER OF LINKS> 7
<END OF METADATA>
1 2 20 1 2 0.15 4 ;
2 1 20 1 2 0.15 4 ;
1 3 30 1 1 0.15 4 ;
3 4 30 1 1 0.15 4 ;
2 4 20 1 3 0.15 4 ;
1 4 10 1 6 0.15 4 ;
3 2 20 1 1 0.15 4 ;
"""


@pytest.fixture
def small(tmp_path):
    (tmp_path / "net.tntp").write_text(NET)
    doc = {
        "label": "small",
        "network_path": "net.tntp",
        "shelters": [4],
        "node_totals": {"1": 30, "2": 20, "3": 10, "4": 0},
        "classes": [
            {"name": "car", "tau_hops": 2, "refuel_rate_min_per_hop": 15, "stations": [3], "share": 1.0}
        ],
    }
    path = tmp_path / "small.json"
    path.write_text(json.dumps(doc))
    return path, doc, tmp_path


def test_solve_validate_export(small):
    path, _, _ = small
    sol = evactree.solve(path)
    assert sol["status"] == "optimal-heuristic"
    assert sol["objective"]["total"] > 0
    assert sol["objective"]["total"] == pytest.approx(sol["objective"]["travel"] + sol["objective"]["refuel"])
    report = evactree.validate(sol, path)
    assert report["pass"] is True
    assert evactree.export(sol, "graph").startswith("digraph")
    assert evactree.export(sol, "table").startswith("class,arc,tail,head,flow")
    with pytest.raises(ValueError):
        evactree.export(sol, "svg")


def test_dict_scenario_and_oracle(small):
    _, doc, base = small
    sol = evactree.solve(doc, base_dir=str(base))
    best = evactree.oracle(doc, base_dir=str(base))
    assert best["status"] == "optimal-heuristic"
    assert sol["objective"]["total"] >= best["objective"]["total"] - 1e-6
    assert sol["objective"]["total"] <= 1.10 * best["objective"]["total"]


def test_config_and_determinism(small):
    path, _, _ = small
    cfg = evactree.default_config()
    assert cfg["refuel_convention"] == "geq"
    a = evactree.solve(path, {"max_nodes": 50})
    b = evactree.solve(path, {"max_nodes": 50})
    a["diagnostics"].pop("wall_seconds", None)
    b["diagnostics"].pop("wall_seconds", None)
    assert a == b
    with pytest.raises(evactree.ConfigError):
        evactree.solve(path, {"no_such_key": 1})


def test_tampered_solution_is_flagged(small):
    path, _, _ = small
    sol = evactree.solve(path)
    sol["paths"][0]["hops"] += 1
    report = evactree.validate(sol, path)
    assert report["pass"] is False
    assert any(v["family"] == "hop-label" for v in report["violations"])


def test_zero_range_infeasible(small):
    _, doc, base = small
    doc["classes"][0]["tau_hops"] = 0
    assert evactree.solve(doc, base_dir=str(base))["status"] == "infeasible"


def test_sioux_falls_scenario_loads():
    scen = evactree.load_scenario(DATA / "sioux_falls_tau4.json")
    assert scen["classes"][0]["tau_hops"] == 4
    assert sum(scen["classes"][0]["demand"].values()) == pytest.approx(356600)
    with pytest.raises(evactree.OracleRefusal):
        evactree.oracle(DATA / "sioux_falls_tau4.json")


def test_helpers():
    assert evactree.tau_from_range(100.0, 25.0) == 4
    assert evactree.bpr_time(2.0, 10.0, 10.0) == pytest.approx(2.0 * 1.15)
    with pytest.raises(evactree.ConfigError):
        evactree.load_scenario({"network_path": "missing.tntp", "shelters": [1], "classes": []})
