"""Command-line front end.

Subcommands mirror the pipeline: graph -> plan -> ingest -> synthesize
-> enumerate/pareto -> simulate -> characterize, plus prune for
loss-of-limb re-synthesis.  Every stochastic subcommand takes --seed
and reproduces byte-identical data sections when rerun.  Exit codes:
0 success, 1 domain error, 2 usage or file error.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

import gaitgraph.io as gio
from gaitgraph import __version__
from gaitgraph.errors import GaitGraphError, SchemaError
from gaitgraph.eulerian import plan_trials
from gaitgraph.graph import build_complete_digraph, prune_failed_limbs
from gaitgraph.learning import (
    estimate_weights,
    merge_observations,
    poses_from_markers,
    restrict_weights,
    segment_trace,
)
from gaitgraph.cycles import enumerate_simple_cycles, gait_from_walk
from gaitgraph.oracle import exhaustive_evaluate, pareto_front
from gaitgraph.simulate import RolloutMode, characterize, rollout
from gaitgraph.synthesis import Goal, SynthesisConfig, synthesize


def _cmd_graph(args) -> int:
    graph = build_complete_digraph(args.limbs, args.states)
    gio.write_graph(args.output, graph, gio.make_manifest("graph", []))
    print(f"wrote {args.output}: n={graph.n} m={graph.m}")
    return 0


def _cmd_plan(args) -> int:
    graph = gio.read_graph(args.graph)
    plan = plan_trials(graph, args.trials, args.tau_ms, args.seed)
    gio.write_plan(
        args.output, plan, gio.make_manifest("plan", [args.graph], seed=args.seed)
    )
    minutes = plan.t_total_ms / 60000.0
    print(f"wrote {args.output}: {args.trials} trials, "
          f"t_total={plan.t_total_ms:.0f} ms ({minutes:.1f} min)")
    return 0


def _cmd_ingest(args) -> int:
    graph = gio.read_graph(args.graph)
    plan = gio.read_plan(args.plan)
    if len(args.traces) != len(plan.trials):
        raise SchemaError(
            f"{len(args.traces)} traces for {len(plan.trials)} scheduled trials"
        )
    parts = []
    for path, walk in zip(args.traces, plan.trials):
        if args.markers:
            frames = gio.read_marker_trace(path)
            poses, dropped = poses_from_markers(frames)
            if dropped:
                print(f"{path}: dropped unrecoverable frames {dropped}",
                      file=sys.stderr)
        else:
            poses = gio.read_pose_trace(path)
        parts.append(segment_trace(poses, walk, graph, plan.tau_ms))
    weighted = estimate_weights(merge_observations(parts), graph)
    gio.write_weights(
        args.output,
        weighted,
        gio.make_manifest("ingest", [args.graph, args.plan, *args.traces]),
    )
    print(f"wrote {args.output}: {graph.m} edge weights")
    return 0


def _cmd_synthesize(args) -> int:
    weighted = gio.read_weights(args.weights)
    if args.config:
        cfg = gio.read_synthesis_config(args.config)
        goal = Goal(cfg["goal"])
        seed = int(cfg["seed"])
        config = SynthesisConfig(
            goal=goal,
            n_samples=int(cfg["N"]),
            max_cuts=int(cfg["L"]),
            beta=float(cfg["beta"]),
            gamma=float(cfg["gamma"]),
            eps_theta=float(cfg.get("eps_theta", args.eps_theta)),
            eps_t=float(cfg.get("eps_t", args.eps_t)),
        )
    else:
        if not args.goal:
            raise SchemaError("--goal is required without --config")
        if args.seed is None:
            raise SchemaError("--seed is required without --config")
        goal = Goal(args.goal)
        seed = args.seed
        config = SynthesisConfig(
            goal=goal,
            n_samples=args.n,
            max_cuts=args.max_cuts,
            beta=args.beta,
            gamma=args.gamma,
            eps_theta=args.eps_theta,
            eps_t=args.eps_t,
        )
    rng = np.random.default_rng(seed)
    gaits, report = synthesize(weighted, config, rng)
    inputs = [args.weights] + ([args.config] if args.config else [])
    gio.write_gaits(
        args.output,
        gaits,
        goal.value,
        gio.make_manifest("synthesize", inputs, seed=seed),
    )
    print(
        f"wrote {args.output}: {len(gaits)} distinct gaits "
        f"({report.n_emitted}/{len(report.outcomes)} samples emitted)"
    )
    return 0


def _cmd_enumerate(args) -> int:
    graph = gio.read_graph(args.graph)
    gaits = list(enumerate_simple_cycles(graph, max_len=args.max_len))
    gio.write_cycles_csv(args.output, gaits, gio.make_manifest("enumerate", [args.graph]))
    print(f"wrote {args.output}: {len(gaits)} simple cycles")
    return 0


def _cmd_pareto(args) -> int:
    weighted = gio.read_weights(args.weights)
    records = exhaustive_evaluate(weighted, args.lambda_t, args.lambda_theta)
    ids = {id(r): i for i, r in enumerate(records)}
    front_t = {ids[id(r)] for r in pareto_front(records, "translation")}
    front_th = {ids[id(r)] for r in pareto_front(records, "rotation")}
    gio.write_costs_csv(
        args.output, records, front_t, front_th,
        gio.make_manifest("pareto", [args.weights]),
    )
    print(f"wrote {args.output}: {len(records)} cycles, "
          f"{len(front_t)} translation-front, {len(front_th)} rotation-front")
    return 0


def _parse_gait(args, weighted):
    if args.gait:
        vertices = [int(v) for v in args.gait.split(";")]
        if vertices[0] != vertices[-1]:
            vertices.append(vertices[0])
        return gait_from_walk(vertices, weighted.graph)
    entries = gio.read_gaits(args.gaits)
    if not 0 <= args.index < len(entries):
        raise SchemaError(f"gait index {args.index} outside 0..{len(entries) - 1}")
    vertices = [int(v) for v in entries[args.index]["vertices"]]
    return gait_from_walk(vertices, weighted.graph)


def _cmd_simulate(args) -> int:
    weighted = gio.read_weights(args.weights)
    gait = _parse_gait(args, weighted)
    rng = np.random.default_rng(args.seed)
    traj = rollout(
        gait,
        weighted,
        cycles=args.cycles,
        mode=RolloutMode(args.mode),
        rng=rng,
        tau_ms=args.tau_ms,
    )
    inputs = [args.weights] + ([args.gaits] if args.gaits else [])
    gio.write_trajectory_csv(
        args.output, traj, gio.make_manifest("simulate", inputs, seed=args.seed)
    )
    print(f"wrote {args.output}: {args.cycles} cycles x {gait.length} primitives")
    return 0


def _cmd_characterize(args) -> int:
    traj = gio.read_trajectory_csv(args.trajectory, args.edges_per_cycle, args.tau_ms)
    record = characterize(traj, gait_id=args.gait_id,
                          body_length_mm=args.body_length_mm)
    gio.write_characterization_csv(
        args.output, [record], gio.make_manifest("characterize", [args.trajectory])
    )
    w_unit = "deg/s" if args.deg else "rad/s"
    w = math.degrees(record.mean_w) if args.deg else record.mean_w
    print(f"wrote {args.output}: v={record.mean_v:.3f} mm/s, w={w:.3f} {w_unit}")
    return 0


def _cmd_prune(args) -> int:
    graph = gio.read_graph(args.graph)
    failures = []
    for pair in args.stuck:
        try:
            limb, state = pair.split(":")
            failures.append((int(limb), int(state)))
        except ValueError as exc:
            raise SchemaError(f"bad --stuck value {pair!r}, want limb:state") from exc
    result = prune_failed_limbs(graph, failures)
    gio.write_graph(args.output, result.graph, gio.make_manifest("prune", [args.graph]))
    if args.weights:
        if not args.weights_output:
            raise SchemaError("--weights requires --weights-output")
        weighted = gio.read_weights(args.weights)
        restricted = restrict_weights(weighted, result)
        gio.write_weights(
            args.weights_output,
            restricted,
            gio.make_manifest("prune", [args.graph, args.weights]),
        )
    print(
        f"wrote {args.output}: pruned to n={result.graph.n} m={result.graph.m} "
        f"(kept vertices {result.kept_vertices})"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaitgraph",
        description="Learn per-edge motion models of a limbed soft robot and "
        "synthesize optimal locomotion gaits.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("graph", help="build the limb-state digraph")
    p.add_argument("--limbs", type=int, required=True)
    p.add_argument("--states", type=int, default=2)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_graph)

    p = sub.add_parser("plan", help="schedule Eulerian data-collection trials")
    p.add_argument("--graph", required=True)
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--tau-ms", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_plan)

    p = sub.add_parser("ingest", help="estimate edge weights from recorded traces")
    p.add_argument("--graph", required=True)
    p.add_argument("--plan", required=True)
    p.add_argument("--traces", nargs="+", required=True,
                   help="one trace CSV per scheduled trial, in order")
    p.add_argument("--markers", action="store_true",
                   help="traces are marker centroids, not poses")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("synthesize", help="sweep the BILP for optimal gaits")
    p.add_argument("--weights", required=True)
    p.add_argument("--config", default=None,
                   help="JSON with goal/N/L/beta/gamma/eps_*/seed "
                        "(replaces the individual flags)")
    p.add_argument("--goal", choices=["translation", "rotation"])
    p.add_argument("--n", type=int, default=100, help="LHS sample count")
    p.add_argument("--max-cuts", type=int, default=50)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--gamma", type=float, default=0.1)
    p.add_argument("--eps-theta", type=float, default=0.1,
                   help="|net rotation| cap for translation goals (rad)")
    p.add_argument("--eps-t", type=float, default=1.0,
                   help="|net translation| cap for rotation goals (mm)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_synthesize)

    p = sub.add_parser("enumerate", help="list all simple cycles (small graphs)")
    p.add_argument("--graph", required=True)
    p.add_argument("--max-len", type=int, default=None)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("pareto", help="exhaustive nonlinear costs + Pareto flags")
    p.add_argument("--weights", required=True)
    p.add_argument("--lambda-t", type=float, default=1.0)
    p.add_argument("--lambda-theta", type=float, default=1.0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_pareto)

    p = sub.add_parser("simulate", help="roll a gait out over repeated cycles")
    p.add_argument("--weights", required=True)
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--gait", help="vertex walk like '1;2;3' (closed implicitly)")
    grp.add_argument("--gaits", help="gaits JSON from synthesize")
    p.add_argument("--index", type=int, default=0, help="gait index in --gaits")
    p.add_argument("--cycles", type=int, default=10)
    p.add_argument("--mode", choices=["mean", "sampled"], default="mean")
    p.add_argument("--tau-ms", type=float, default=500.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("characterize", help="per-cycle speed statistics")
    p.add_argument("--trajectory", required=True)
    p.add_argument("--edges-per-cycle", type=int, required=True)
    p.add_argument("--tau-ms", type=float, required=True)
    p.add_argument("--gait-id", default="gait")
    p.add_argument("--body-length-mm", type=float, default=None)
    p.add_argument("--deg", action="store_true",
                   help="report rotation speed in deg/s (storage stays rad)")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_characterize)

    p = sub.add_parser("prune", help="drop states unreachable with stuck limbs")
    p.add_argument("--graph", required=True)
    p.add_argument("--stuck", nargs="+", required=True, metavar="LIMB:STATE")
    p.add_argument("--weights", default=None,
                   help="also restrict these learned weights")
    p.add_argument("--weights-output", default=None)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_prune)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GaitGraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
