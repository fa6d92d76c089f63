import csv
import json
import math

import numpy as np
import pytest

import gaitgraph.io as gio
from gaitgraph.cli import main
from gaitgraph.eulerian import plan_trials
from gaitgraph.graph import build_complete_digraph
from gaitgraph.learning import synthetic_weights

from oracles import make_pose_trace


def strip_manifest(path):
    doc = json.loads(path.read_text())
    doc.pop("manifest", None)
    return json.dumps(doc, sort_keys=True)


def write_demo_traces(tmp_path, graph, plan, seed=0):
    rng = np.random.default_rng(seed)
    transforms = {
        k: (rng.uniform(-4, 4, 2), rng.uniform(-0.15, 0.15))
        for k in range(graph.m)
    }
    paths = []
    for i, walk in enumerate(plan.trials):
        poses = make_pose_trace(walk, graph, transforms, tau_s=plan.tau_ms / 1000)
        p = tmp_path / f"trace{i}.csv"
        gio.write_pose_trace(p, poses)
        paths.append(str(p))
    return paths, transforms


class TestGraphPlan:
    def test_graph_subcommand(self, tmp_path, capsys):
        out = tmp_path / "g.json"
        assert main(["graph", "--limbs", "3", "--states", "2", "-o", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert doc["n"] == 8 and doc["m"] == 56
        assert "manifest" in doc

    def test_plan_subcommand_t_total(self, tmp_path):
        g = tmp_path / "g.json"
        p = tmp_path / "plan.json"
        main(["graph", "--limbs", "3", "-o", str(g)])
        assert main(["plan", "--graph", str(g), "--trials", "5",
                     "--tau-ms", "550", "--seed", "7", "-o", str(p)]) == 0
        doc = json.loads(p.read_text())
        assert doc["t_total_ms"] == 154_000
        assert len(doc["trials"]) == 5

    def test_graph_round_trip(self, tmp_path):
        out = tmp_path / "g.json"
        main(["graph", "--limbs", "2", "-o", str(out)])
        g = gio.read_graph(out)
        fresh = build_complete_digraph(2, 2)
        assert g.edges == fresh.edges and np.array_equal(g.B, fresh.B)

    def test_plan_round_trip(self, tmp_path, g8):
        plan = plan_trials(g8, 3, 450, seed=2)
        out = tmp_path / "plan.json"
        gio.write_plan(out, plan)
        back = gio.read_plan(out)
        assert back.trials == plan.trials
        assert back.t_total_ms == plan.t_total_ms


class TestIngest:
    def test_pipeline_recovers_known_transforms(self, tmp_path):
        g = tmp_path / "g.json"
        p = tmp_path / "plan.json"
        w = tmp_path / "w.json"
        main(["graph", "--limbs", "2", "-o", str(g)])
        main(["plan", "--graph", str(g), "--trials", "3", "--tau-ms", "500",
              "--seed", "1", "-o", str(p)])
        graph = gio.read_graph(g)
        plan = gio.read_plan(p)
        traces, transforms = write_demo_traces(tmp_path, graph, plan)
        assert main(["ingest", "--graph", str(g), "--plan", str(p),
                     "--traces", *traces, "-o", str(w)]) == 0
        weighted = gio.read_weights(w)
        for k in range(graph.m):
            expected = np.array([*transforms[k][0], transforms[k][1]])
            assert np.allclose(weighted.weights[k].mu, expected, atol=1e-9)
            assert weighted.weights[k].sample_count == 3

    def test_trace_count_mismatch_is_usage_error(self, tmp_path):
        g = tmp_path / "g.json"
        p = tmp_path / "plan.json"
        main(["graph", "--limbs", "2", "-o", str(g)])
        main(["plan", "--graph", str(g), "--trials", "2", "--tau-ms", "500",
              "--seed", "1", "-o", str(p)])
        graph, plan = gio.read_graph(g), gio.read_plan(p)
        traces, _ = write_demo_traces(tmp_path, graph, plan)
        assert main(["ingest", "--graph", str(g), "--plan", str(p),
                     "--traces", traces[0], "-o", str(tmp_path / "w.json")]) == 2

    def test_marker_mode(self, tmp_path, g4):
        plan = plan_trials(g4, 1, 500, seed=3)
        rng = np.random.default_rng(4)
        transforms = {k: (rng.uniform(-3, 3, 2), rng.uniform(-0.1, 0.1))
                      for k in range(12)}
        poses = make_pose_trace(plan.trials[0], g4, transforms, tau_s=0.5)
        markers = np.array([[60.0, 0.0], [-30.0, 40.0], [-30.0, -40.0]])
        trace = tmp_path / "markers.csv"
        with open(trace, "w", newline="") as fh:
            wtr = csv.writer(fh)
            wtr.writerow(["frame", "t", "m1x", "m1y", "m2x", "m2y", "m3x", "m3y"])
            for p in poses:
                R = np.array([[math.cos(p.theta), -math.sin(p.theta)],
                              [math.sin(p.theta), math.cos(p.theta)]])
                pts = markers @ R.T + np.array([p.x, p.y])
                wtr.writerow([p.frame, f"{p.t:.9f}"] + [f"{v:.9f}" for v in pts.ravel()])
        gfile, pfile, wfile = tmp_path / "g.json", tmp_path / "p.json", tmp_path / "w.json"
        main(["graph", "--limbs", "2", "-o", str(gfile)])
        gio.write_plan(pfile, plan)
        assert main(["ingest", "--graph", str(gfile), "--plan", str(pfile),
                     "--markers", "--traces", str(trace), "-o", str(wfile)]) == 0
        weighted = gio.read_weights(wfile)
        for k in range(12):
            expected = np.array([*transforms[k][0], transforms[k][1]])
            assert np.allclose(weighted.weights[k].mu, expected, atol=1e-6)


class TestSynthesizeEnumerate:
    @pytest.fixture()
    def weights_file(self, tmp_path, g4):
        w = synthetic_weights(g4, seed=21)
        path = tmp_path / "w.json"
        gio.write_weights(path, w)
        return path

    def test_synthesize_outputs_sorted(self, tmp_path, weights_file):
        out = tmp_path / "gaits.json"
        assert main(["synthesize", "--weights", str(weights_file),
                     "--goal", "rotation", "--n", "5", "--eps-t", "4.0",
                     "--seed", "3", "-o", str(out)]) == 0
        doc = json.loads(out.read_text())
        objs = [g["objective"] for g in doc["gaits"]]
        assert objs == sorted(objs)
        assert doc["goal"] == "rotation"

    def test_config_file_equivalent_to_flags(self, tmp_path, weights_file):
        by_flags = tmp_path / "flags.json"
        assert main(["synthesize", "--weights", str(weights_file),
                     "--goal", "rotation", "--n", "5", "--max-cuts", "50",
                     "--beta", "1.0", "--gamma", "0.1", "--eps-t", "4.0",
                     "--seed", "3", "-o", str(by_flags)]) == 0
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({
            "goal": "rotation", "N": 5, "L": 50, "beta": 1.0, "gamma": 0.1,
            "eps_t": 4.0, "seed": 3, "alpha_range": [-1, 1],
        }))
        by_config = tmp_path / "config.json"
        assert main(["synthesize", "--weights", str(weights_file),
                     "--config", str(cfg), "-o", str(by_config)]) == 0
        assert strip_manifest(by_flags) == strip_manifest(by_config)

    def test_config_file_rejects_other_alpha_range(self, tmp_path, weights_file):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({
            "goal": "rotation", "N": 2, "L": 5, "beta": 1.0, "gamma": 0.1,
            "eps_t": 4.0, "seed": 3, "alpha_range": [-2, 2],
        }))
        assert main(["synthesize", "--weights", str(weights_file),
                     "--config", str(cfg), "-o", str(tmp_path / "o.json")]) == 2

    def test_goal_required_without_config(self, tmp_path, weights_file):
        assert main(["synthesize", "--weights", str(weights_file),
                     "--seed", "1", "-o", str(tmp_path / "o.json")]) == 2

    def test_enumerate_counts(self, tmp_path):
        g = tmp_path / "g.json"
        out = tmp_path / "cycles.csv"
        main(["graph", "--limbs", "2", "-o", str(g)])
        assert main(["enumerate", "--graph", str(g), "-o", str(out)]) == 0
        with open(out) as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 20
        assert rows[0]["vertex_sequence"].count(";") >= 2
        assert set(rows[0]["z"]) <= {"0", "1"}

    def test_enumerate_cap_is_domain_error(self, tmp_path):
        g = tmp_path / "g.json"
        main(["graph", "--limbs", "4", "-o", str(g)])
        assert main(["enumerate", "--graph", str(g),
                     "-o", str(tmp_path / "c.csv")]) == 1

    def test_pareto_flags(self, tmp_path, weights_file):
        out = tmp_path / "costs.csv"
        assert main(["pareto", "--weights", str(weights_file), "-o", str(out)]) == 0
        with open(out) as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 20
        assert any(r["pareto_t"] == "1" for r in rows)
        assert any(r["pareto_theta"] == "1" for r in rows)


class TestSimulateCharacterize:
    def test_simulate_and_characterize(self, tmp_path, g4):
        w = synthetic_weights(g4, seed=5)
        wfile = tmp_path / "w.json"
        gio.write_weights(wfile, w)
        traj = tmp_path / "traj.csv"
        assert main(["simulate", "--weights", str(wfile), "--gait", "1;2;3",
                     "--cycles", "4", "--tau-ms", "500", "-o", str(traj)]) == 0
        with open(traj) as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 13  # initial pose + 4 cycles x 3 primitives
        char = tmp_path / "char.csv"
        assert main(["characterize", "--trajectory", str(traj),
                     "--edges-per-cycle", "3", "--tau-ms", "500",
                     "--body-length-mm", "220", "-o", str(char)]) == 0
        with open(char) as fh:
            recs = list(csv.DictReader(fh))
        assert len(recs) == 1
        assert float(recs[0]["mean_v_mm_s"]) > 0
        assert recs[0]["bl_per_s"] != ""

    def test_characterize_deg_flag(self, tmp_path, g4, capsys):
        w = synthetic_weights(g4, seed=5)
        wfile = tmp_path / "w.json"
        gio.write_weights(wfile, w)
        traj = tmp_path / "traj.csv"
        main(["simulate", "--weights", str(wfile), "--gait", "1;2",
              "--cycles", "3", "--tau-ms", "500", "-o", str(traj)])
        assert main(["characterize", "--trajectory", str(traj),
                     "--edges-per-cycle", "2", "--tau-ms", "500", "--deg",
                     "-o", str(tmp_path / "c.csv")]) == 0
        assert "deg/s" in capsys.readouterr().out

    def test_sampled_mode_seeded(self, tmp_path, g4):
        w = synthetic_weights(g4, seed=5)
        wfile = tmp_path / "w.json"
        gio.write_weights(wfile, w)
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (a, b):
            assert main(["simulate", "--weights", str(wfile), "--gait", "1;2",
                         "--cycles", "3", "--mode", "sampled", "--seed", "9",
                         "-o", str(out)]) == 0
        assert a.read_bytes() == b.read_bytes()


class TestPrune:
    def test_prune_with_weights(self, tmp_path, g16):
        g = tmp_path / "g.json"
        main(["graph", "--limbs", "4", "-o", str(g)])
        w = synthetic_weights(g16, seed=8)
        wfile = tmp_path / "w.json"
        gio.write_weights(wfile, w)
        out, wout = tmp_path / "pruned.json", tmp_path / "wp.json"
        assert main(["prune", "--graph", str(g), "--stuck", "4:0",
                     "--weights", str(wfile), "--weights-output", str(wout),
                     "-o", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert doc["n"] == 8 and doc["m"] == 56
        sub = gio.read_weights(wout)
        assert sub.graph.m == 56

    def test_bad_stuck_format(self, tmp_path):
        g = tmp_path / "g.json"
        main(["graph", "--limbs", "2", "-o", str(g)])
        assert main(["prune", "--graph", str(g), "--stuck", "nonsense",
                     "-o", str(tmp_path / "o.json")]) == 2


class TestErrorsAndDeterminism:
    def test_missing_file_is_exit_2(self, tmp_path):
        assert main(["plan", "--graph", str(tmp_path / "nope.json"),
                     "--tau-ms", "500", "--seed", "1",
                     "-o", str(tmp_path / "p.json")]) == 2

    def test_schema_error_is_exit_2(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{}")
        assert main(["plan", "--graph", str(bad), "--tau-ms", "500",
                     "--seed", "1", "-o", str(tmp_path / "p.json")]) == 2

    def test_domain_error_is_exit_1(self, tmp_path):
        assert main(["graph", "--limbs", "9", "-o", str(tmp_path / "g.json")]) == 1

    def test_usage_error_is_exit_2(self):
        with pytest.raises(SystemExit) as err:
            main(["graph", "--limbs"])
        assert err.value.code == 2

    @pytest.mark.parametrize("stage", ["graph", "plan", "synthesize"])
    def test_data_sections_byte_identical(self, tmp_path, stage, g4):
        outs = []
        for run in ("a", "b"):
            g = tmp_path / f"g_{run}.json"
            main(["graph", "--limbs", "2", "-o", str(g)])
            if stage == "graph":
                outs.append(g)
                continue
            p = tmp_path / f"p_{run}.json"
            main(["plan", "--graph", str(g), "--trials", "2", "--tau-ms", "500",
                  "--seed", "11", "-o", str(p)])
            if stage == "plan":
                outs.append(p)
                continue
            w = tmp_path / f"w_{run}.json"
            gio.write_weights(w, synthetic_weights(g4, seed=13))
            s = tmp_path / f"s_{run}.json"
            main(["synthesize", "--weights", str(w), "--goal", "translation",
                  "--n", "4", "--eps-theta", "0.3", "--seed", "17", "-o", str(s)])
            outs.append(s)
        assert strip_manifest(outs[0]) == strip_manifest(outs[1])
