import json

import numpy as np
import pytest

from pkgroles.cli import main
from pkgroles.ingest import read_matrix_csv
from pkgroles.pipeline import ConfigError, RunConfig, parse_config

FIG = "a,b\na,c\nb,d\nb,e\nc,f\n"


@pytest.fixture
def fig_file(tmp_path):
    p = tmp_path / "fig.csv"
    p.write_text(FIG)
    return p


def read_json(p):
    return json.loads(p.read_text())


def test_ingest_json(tmp_path, capsys):
    p = tmp_path / "r.json"
    p.write_text(json.dumps([{"name": "a", "dependencies": ["zlib"]}]))
    assert main(["ingest", str(p), "-o", str(tmp_path / "e.csv")]) == 0
    assert json.loads(capsys.readouterr().out) == {"nodes": 2, "edges": 1, "external": 1}


def test_bad_input_exit_code(tmp_path, capsys):
    p = tmp_path / "bad.csv"
    p.write_text("x,x\n")
    assert main(["ingest", str(p)]) == 2
    assert "line 1" in capsys.readouterr().err


def test_structural_and_contraction(fig_file, tmp_path):
    out, con = tmp_path / "m.csv", tmp_path / "c.json"
    assert main(["structural", str(fig_file), "--neighborhood", "undirected",
                 "-o", str(out), "--contraction", str(con)]) == 0
    m, labels = read_matrix_csv(out)
    assert labels == ["a", "b", "c", "d", "f"]
    assert read_json(con)["classes"] == [["d", "e"]]


def test_regular_cluster_report_chain(fig_file, tmp_path):
    m, roles = tmp_path / "m.csv", tmp_path / "roles.json"
    assert main(["regular", str(fig_file), "-o", str(m), "--roles", str(roles), "--trace"]) == 0
    part = read_json(roles)
    assert part["classes"] == [["a"], ["b", "c"], ["d", "e", "f"]]
    assert len(part["trace"]) == 2
    a, sweep = tmp_path / "a.json", tmp_path / "s.csv"
    assert main(["cluster", str(m), "--k-min", "2", "--k-max", "5", "-o", str(a), "--sweep", str(sweep)]) == 0
    assert read_json(a)["k"] == 3
    assert sweep.read_text().splitlines()[0] == "k,silhouette,cost"
    rep = tmp_path / "rep"
    assert main(["report", str(m), str(a), "--graph", str(fig_file), "-o", str(rep)]) == 0
    roles = read_json(rep / "roles.json")
    assert {r["role"] for r in roles.values()} == {"core", "popular", "supplementary"}
    assert (rep / "blockmodel.pgm").read_text().startswith("P2\n6 6\n255\n")
    header = (rep / "embedding.csv").read_text().splitlines()[0]
    assert header == "node,x,y,cluster"


def test_closure_sample_synth(tmp_path, fig_file):
    assert main(["closure", str(fig_file), "-o", str(tmp_path / "c.csv")]) == 0
    g = tmp_path / "dag.csv"
    assert main(["synth", "dag", "--nodes", "200", "--mean-deps", "3", "-o", str(g)]) == 0
    assert main(["sample", str(g), "--sample-size", "50", "--samples", "3", "-o", str(tmp_path / "s")]) == 0
    assert len(list((tmp_path / "s").glob("sample-*.csv"))) == 3
    assert main(["synth", "planted", "-o", str(tmp_path / "p.csv")]) == 0


def test_run_with_config_and_env(tmp_path, fig_file, monkeypatch):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(f"# fig 2\npipeline = regular\ninput = {fig_file}\nsample = no\nk-max = 4\n")
    monkeypatch.setenv("PKGROLES_OUTPUT_ROOT", str(tmp_path / "root"))
    assert main(["run", "--config", str(cfg), "-o", "res", "--k-max", "3"]) == 0
    summary = read_json(tmp_path / "root" / "res" / "summary.json")
    assert summary["config"]["k_max"] == 3
    assert summary["samples"][0]["best_k"] == 3


def test_parse_config():
    vals = parse_config("seed = 7\nclosure = off\nnode_cap = none\nrestart-prob = 0.3\n")
    assert vals == {"seed": 7, "closure": False, "node_cap": None, "restart_prob": 0.3}
    with pytest.raises(ConfigError):
        parse_config("bogus = 1")
    with pytest.raises(ConfigError):
        parse_config("seed = x")


def test_config_defaults_follow_pipeline():
    r = RunConfig(pipeline="regular").resolved()
    assert (r.samples, r.sample_size, r.k_min, r.k_max, r.closure) == (20, 500, 2, 20, False)
    s = RunConfig(pipeline="structural").resolved()
    assert (s.samples, s.sample_size, s.k_min, s.k_max, s.closure) == (20, 1000, 1, 30, True)
    with pytest.raises(ConfigError):
        RunConfig(pipeline="nope").resolved()


def test_run_failed_sample_recorded(tmp_path):
    g = tmp_path / "g.csv"
    g.write_text("a,b\nb,c\nc,d\n")
    out = tmp_path / "o"
    # CATREGE cap of 2 nodes rejects the 3-node samples; failures are recorded, not raised
    rc = main(["run", str(g), "--pipeline", "regular", "--samples", "2", "--sample-size", "3",
               "--node-cap", "2", "-o", str(out)])
    assert rc == 1
    summary = read_json(out / "summary.json")
    assert summary["aggregate"]["failed"] == 2
    assert all("cap" in s["error"] for s in summary["samples"])


def test_run_sampled_structural_closure_first(tmp_path):
    g = tmp_path / "dag.csv"
    main(["synth", "dag", "--nodes", "300", "--mean-deps", "4", "-o", str(g)])
    out = tmp_path / "o"
    assert main(["run", str(g), "--pipeline", "structural", "--samples", "2", "--sample-size", "80",
                 "--k-max", "6", "--closure-order", "closure-first", "-o", str(out)]) == 0
    s = read_json(out / "summary.json")
    assert s["aggregate"]["failed"] == 0 and s["aggregate"]["nodes"]["mean"] == 80
