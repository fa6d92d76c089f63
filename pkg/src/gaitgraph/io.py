"""File interchange: JSON and CSV schemas plus run manifests.

Units are fixed at millimeters, radians, and milliseconds in every
file; each weights file declares them in its header block.  JSON
outputs embed their manifest under the "manifest" key; CSV outputs get
a sidecar "<file>.manifest.json".  Data sections are deterministic
given identical inputs and seed; only the manifest timestamp varies.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

import gaitgraph
from gaitgraph.errors import SchemaError
from gaitgraph.eulerian import EulerianPlan
from gaitgraph.graph import StateDigraph, _build
from gaitgraph.learning import (
    EdgeWeight,
    MarkerFrame,
    PoseSample,
    WeightedDigraph,
)

UNITS = {"length": "mm", "angle": "rad", "time": "ms"}


@dataclass
class RunManifest:
    command: str
    seed: int | None
    inputs: dict[str, str]
    version: str = gaitgraph.__version__
    created_at: str = ""

    def to_dict(self) -> dict:
        return {
            "tool": "gaitgraph",
            "version": self.version,
            "command": self.command,
            "seed": self.seed,
            "inputs": self.inputs,
            "created_at": self.created_at or datetime.now(timezone.utc).isoformat(),
        }


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def make_manifest(command: str, inputs: list, seed: int | None = None) -> RunManifest:
    return RunManifest(
        command=command,
        seed=seed,
        inputs={str(p): file_digest(p) for p in inputs},
    )


def _write_json(path, payload: dict, manifest: RunManifest | None) -> None:
    doc = dict(payload)
    if manifest is not None:
        doc["manifest"] = manifest.to_dict()
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _write_csv(path, header: list[str], rows, manifest: RunManifest | None) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    if manifest is not None:
        Path(str(path) + ".manifest.json").write_text(
            json.dumps(manifest.to_dict(), indent=2, sort_keys=True) + "\n"
        )


def _load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from exc


def _require(doc: dict, keys, path) -> None:
    missing = [k for k in keys if k not in doc]
    if missing:
        raise SchemaError(f"{path}: missing keys {missing}")


# graph JSON ----------------------------------------------------------------

def write_graph(path, graph: StateDigraph, manifest: RunManifest | None = None):
    _write_json(
        path,
        {
            "n_limbs": graph.n_limbs,
            "states_per_limb": graph.states_per_limb,
            "n": graph.n,
            "m": graph.m,
            "edges": [[s, t] for s, t in graph.edges],
        },
        manifest,
    )


def read_graph(path) -> StateDigraph:
    doc = _load_json(path)
    _require(doc, ["n_limbs", "states_per_limb", "n", "m", "edges"], path)
    graph = _build(int(doc["n_limbs"]), int(doc["states_per_limb"]))
    if graph.n != doc["n"] or graph.m != doc["m"]:
        raise SchemaError(f"{path}: n/m inconsistent with limb counts")
    if [[s, t] for s, t in graph.edges] != [list(map(int, e)) for e in doc["edges"]]:
        raise SchemaError(f"{path}: edges not in canonical order")
    return graph


# plan JSON -----------------------------------------------------------------

def write_plan(path, plan: EulerianPlan, manifest: RunManifest | None = None):
    _write_json(
        path,
        {
            "n": plan.n,
            "seed": plan.seed,
            "tau_ms": plan.tau_ms,
            "trials": plan.trials,
            "t_total_ms": plan.t_total_ms,
        },
        manifest,
    )


def read_plan(path) -> EulerianPlan:
    doc = _load_json(path)
    _require(doc, ["n", "seed", "tau_ms", "trials"], path)
    return EulerianPlan(
        n=int(doc["n"]),
        seed=int(doc["seed"]),
        tau_ms=float(doc["tau_ms"]),
        trials=[[int(v) for v in trial] for trial in doc["trials"]],
    )


# weights JSON --------------------------------------------------------------

def write_weights(path, weighted: WeightedDigraph, manifest: RunManifest | None = None):
    g = weighted.graph
    _write_json(
        path,
        {
            "units": UNITS,
            "graph": {
                "n_limbs": g.n_limbs,
                "states_per_limb": g.states_per_limb,
                "n": g.n,
                "m": g.m,
            },
            "edges": [
                {
                    "src": g.edges[k][0],
                    "dst": g.edges[k][1],
                    "mu": [float(v) for v in w.mu],
                    "sigma": [[float(v) for v in row] for row in w.sigma],
                    "count": w.sample_count,
                }
                for k, w in enumerate(weighted.weights)
            ],
        },
        manifest,
    )


def read_weights(path) -> WeightedDigraph:
    doc = _load_json(path)
    _require(doc, ["units", "graph", "edges"], path)
    if doc["units"] != UNITS:
        raise SchemaError(f"{path}: units {doc['units']} are not {UNITS}")
    gdoc = doc["graph"]
    _require(gdoc, ["n_limbs", "states_per_limb"], path)
    graph = _build(int(gdoc["n_limbs"]), int(gdoc["states_per_limb"]))
    if len(doc["edges"]) != graph.m:
        raise SchemaError(f"{path}: expected {graph.m} edges, got {len(doc['edges'])}")
    weights = [None] * graph.m
    for entry in doc["edges"]:
        _require(entry, ["src", "dst", "mu", "sigma", "count"], path)
        key = (int(entry["src"]), int(entry["dst"]))
        if key not in graph.edge_index:
            raise SchemaError(f"{path}: unknown edge {key}")
        weights[graph.edge_index[key]] = EdgeWeight(
            mu=np.array(entry["mu"], dtype=float),
            sigma=np.array(entry["sigma"], dtype=float),
            sample_count=int(entry["count"]),
        )
    if any(w is None for w in weights):
        raise SchemaError(f"{path}: duplicate/missing edges")
    return WeightedDigraph(graph=graph, weights=weights)


# synthesized gaits JSON ----------------------------------------------------

def write_gaits(path, gaits, goal: str, manifest: RunManifest | None = None):
    _write_json(
        path,
        {
            "goal": goal,
            "gaits": [
                {
                    "z": "".join(str(int(v)) for v in s.gait.z),
                    "vertices": s.gait.ordered_vertices,
                    "predicted": {
                        "dx": float(s.predicted_mu[0]),
                        "dy": float(s.predicted_mu[1]),
                        "dtheta": float(s.predicted_mu[2]),
                        "sp": s.s_p_sum,
                        "stheta": s.s_theta_sum,
                    },
                    "objective": s.objective,
                    "alpha": [float(a) for a in s.alpha],
                    "multiplicity": s.multiplicity,
                    "cuts_used": s.cuts_used,
                }
                for s in gaits
            ],
        },
        manifest,
    )


def read_gaits(path) -> list[dict]:
    doc = _load_json(path)
    _require(doc, ["goal", "gaits"], path)
    return doc["gaits"]


# synthesis config JSON -----------------------------------------------------

def read_synthesis_config(path) -> dict:
    doc = _load_json(path)
    _require(doc, ["goal", "N", "L", "beta", "gamma", "seed"], path)
    if doc["goal"] not in ("translation", "rotation"):
        raise SchemaError(f"{path}: goal must be translation or rotation")
    needed = "eps_theta" if doc["goal"] == "translation" else "eps_t"
    if needed not in doc:
        raise SchemaError(f"{path}: missing {needed}")
    if "alpha_range" in doc and list(doc["alpha_range"]) != [-1, 1]:
        raise SchemaError(f"{path}: the direction-weight sweep is fixed at [-1, 1]")
    return doc


# cycle CSV -----------------------------------------------------------------

def write_cycles_csv(path, gaits, manifest: RunManifest | None = None):
    rows = [
        [
            i,
            g.length,
            ";".join(str(v) for v in g.ordered_vertices),
            "".join(str(int(b)) for b in g.z),
        ]
        for i, g in enumerate(gaits)
    ]
    _write_csv(path, ["id", "length", "vertex_sequence", "z"], rows, manifest)


# costs CSV -----------------------------------------------------------------

def write_costs_csv(path, records, pareto_t_ids, pareto_theta_ids,
                    manifest: RunManifest | None = None):
    rows = []
    for i, r in enumerate(records):
        rows.append(
            [
                i,
                r.length,
                f"{r.J_t_nl:.12g}",
                f"{r.J_theta_nl:.12g}",
                f"{r.p_norm:.12g}",
                f"{r.theta_abs:.12g}",
                f"{r.s_p:.12g}",
                f"{r.s_theta:.12g}",
                int(i in pareto_t_ids),
                int(i in pareto_theta_ids),
            ]
        )
    _write_csv(
        path,
        ["id", "length", "J_t_nl", "J_theta_nl", "p_norm", "theta_abs",
         "s_p", "s_theta", "pareto_t", "pareto_theta"],
        rows,
        manifest,
    )


# trajectory CSV ------------------------------------------------------------

def write_trajectory_csv(path, trajectory, manifest: RunManifest | None = None):
    rows = []
    for i, pose in enumerate(trajectory.poses):
        cycle, prim = divmod(i, trajectory.edges_per_cycle)
        rows.append(
            [
                cycle,
                prim,
                f"{i * trajectory.tau_ms / 1000.0:.12g}",
                f"{pose[0]:.12g}",
                f"{pose[1]:.12g}",
                f"{pose[2]:.12g}",
            ]
        )
    _write_csv(
        path, ["cycle", "primitive", "t_s", "x_mm", "y_mm", "theta_rad"], rows, manifest
    )


def read_trajectory_csv(path, edges_per_cycle: int, tau_ms: float):
    from gaitgraph.simulate import Trajectory

    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not set(
            ["cycle", "primitive", "t_s", "x_mm", "y_mm", "theta_rad"]
        ).issubset(reader.fieldnames):
            raise SchemaError(f"{path}: not a trajectory CSV")
        poses = [
            [float(row["x_mm"]), float(row["y_mm"]), float(row["theta_rad"])]
            for row in reader
        ]
    if not poses:
        raise SchemaError(f"{path}: empty trajectory")
    return Trajectory(
        poses=np.array(poses),
        edges_per_cycle=edges_per_cycle,
        cycles=(len(poses) - 1) // edges_per_cycle,
        tau_ms=tau_ms,
    )


# characterization CSV ------------------------------------------------------

def write_characterization_csv(path, records, manifest: RunManifest | None = None):
    rows = [
        [
            r.gait_id,
            f"{r.mean_v:.12g}",
            "" if r.std_v is None else f"{r.std_v:.12g}",
            f"{r.mean_w:.12g}",
            "" if r.std_w is None else f"{r.std_w:.12g}",
            "" if r.body_lengths_per_s is None else f"{r.body_lengths_per_s:.12g}",
        ]
        for r in records
    ]
    _write_csv(
        path,
        ["gait_id", "mean_v_mm_s", "std_v", "mean_w_rad_s", "std_w", "bl_per_s"],
        rows,
        manifest,
    )


# trace CSVs ----------------------------------------------------------------

def read_pose_trace(path) -> list[PoseSample]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not set(["frame", "t", "x", "y", "theta"]).issubset(
            reader.fieldnames
        ):
            raise SchemaError(f"{path}: expected header frame,t,x,y,theta")
        out = [
            PoseSample(
                frame=int(row["frame"]),
                t=float(row["t"]),
                x=float(row["x"]),
                y=float(row["y"]),
                theta=float(row["theta"]),
            )
            for row in reader
        ]
    for a, b in zip(out, out[1:]):
        if b.t <= a.t:
            raise SchemaError(f"{path}: time not strictly increasing at frame {b.frame}")
    return out


def write_pose_trace(path, poses: list[PoseSample], manifest=None):
    rows = [
        [p.frame, f"{p.t:.12g}", f"{p.x:.12g}", f"{p.y:.12g}", f"{p.theta:.12g}"]
        for p in poses
    ]
    _write_csv(path, ["frame", "t", "x", "y", "theta"], rows, manifest)


def read_marker_trace(path) -> list[MarkerFrame]:
    """Marker-mode trace: frame,t,m1x,m1y,m2x,m2y,...; empty cells = occluded."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or header[:2] != ["frame", "t"] or len(header) < 6:
            raise SchemaError(f"{path}: expected header frame,t,m1x,m1y,...")
        if (len(header) - 2) % 2:
            raise SchemaError(f"{path}: odd number of marker columns")
        n_markers = (len(header) - 2) // 2
        frames = []
        for row in reader:
            markers: list[np.ndarray | None] = []
            for i in range(n_markers):
                sx, sy = row[2 + 2 * i], row[3 + 2 * i]
                if sx == "" or sy == "":
                    markers.append(None)
                else:
                    markers.append(np.array([float(sx), float(sy)]))
            frames.append(
                MarkerFrame(frame=int(row[0]), t=float(row[1]), markers=markers)
            )
    return frames
