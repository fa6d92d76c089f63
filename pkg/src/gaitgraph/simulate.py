"""Gait rollout and characterization.

Rolls a gait out over repeated cycles, either at the mean edge
transforms or sampling each execution from the learned Gaussians, and
summarizes per-cycle translational and rotational speeds.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from gaitgraph.learning import WeightedDigraph
from gaitgraph.se2 import Se2Transform, compose
from gaitgraph.stats import psd_factor, sample_gaussian

BODY_LENGTH_PRESETS_MM = {"three-limb": 220.0, "four-limb": 350.0}


class RolloutMode(enum.Enum):
    MEAN = "mean"
    SAMPLED = "sampled"


@dataclass(eq=False)
class Trajectory:
    """Pose after every executed primitive; row 0 is the identity pose."""

    poses: np.ndarray  # (k+1, 3): x mm, y mm, theta rad (unwrapped)
    edges_per_cycle: int
    cycles: int
    tau_ms: float

    def cycle_poses(self) -> np.ndarray:
        """Poses at cycle boundaries, shape (cycles+1, 3)."""
        return self.poses[:: self.edges_per_cycle]


@dataclass
class CharacterizationRecord:
    gait_id: str
    mean_v: float  # mm/s per gait cycle
    std_v: float | None
    mean_w: float  # rad/s per gait cycle
    std_w: float | None
    body_lengths_per_s: float | None = None


def rollout(
    gait,
    weights: WeightedDigraph,
    cycles: int,
    mode: RolloutMode = RolloutMode.MEAN,
    rng: np.random.Generator | None = None,
    tau_ms: float = 500.0,
) -> Trajectory:
    """Compose the gait's edge transforms from the identity pose.

    ``gait`` is anything with ``ordered_edges`` (a GaitVector or a
    SynthesizedGait's gait).  Sampled mode draws every execution of an
    edge independently from its Gaussian.
    """
    if cycles < 1:
        raise ValueError("need at least one cycle")
    edges = list(getattr(gait, "ordered_edges", gait))
    if mode is RolloutMode.SAMPLED and rng is None:
        raise ValueError("sampled mode needs an rng")

    factors = None
    if mode is RolloutMode.SAMPLED:
        factors = {
            k: psd_factor(weights.weights[k].sigma, f"edge {k} covariance")
            for k in set(edges)
        }

    g = Se2Transform.identity()
    poses = [np.array([0.0, 0.0, 0.0])]
    for _ in range(cycles):
        for k in edges:
            mu = weights.weights[k].mu
            if mode is RolloutMode.SAMPLED:
                w = sample_gaussian(mu, factors[k], rng)
            else:
                w = mu
            g = compose(g, Se2Transform(float(w[2]), w[:2]))
            poses.append(np.array([g.p[0], g.p[1], g.theta]))
    return Trajectory(
        poses=np.stack(poses),
        edges_per_cycle=len(edges),
        cycles=cycles,
        tau_ms=tau_ms,
    )


def characterize(
    trajectory: Trajectory,
    gait_id: str = "",
    body_length_mm: float | None = None,
) -> CharacterizationRecord:
    """Per-cycle speed statistics.

    Speeds are per completed gait cycle: displacement (or absolute
    rotation) across the cycle divided by its duration.  The standard
    deviations need at least two cycles and are reported absent
    otherwise.
    """
    if trajectory.poses.shape[0] < 2:
        raise ValueError("empty trajectory")
    bounds = trajectory.cycle_poses()
    if bounds.shape[0] < 2:
        raise ValueError("no completed cycle")
    dt = trajectory.edges_per_cycle * trajectory.tau_ms / 1000.0
    deltas = np.diff(bounds, axis=0)
    v = np.linalg.norm(deltas[:, :2], axis=1) / dt
    w = np.abs(deltas[:, 2]) / dt
    record = CharacterizationRecord(
        gait_id=gait_id,
        mean_v=float(v.mean()),
        std_v=float(v.std(ddof=1)) if v.size > 1 else None,
        mean_w=float(w.mean()),
        std_w=float(w.std(ddof=1)) if w.size > 1 else None,
    )
    if body_length_mm is not None:
        if body_length_mm <= 0:
            raise ValueError("body length must be positive")
        record.body_lengths_per_s = record.mean_v / body_length_mm
    return record


def improvement(best_synth: float, best_intuitive: float) -> float:
    """Percent speed improvement of the best synthesized gait."""
    if best_intuitive <= 0:
        raise ValueError("baseline speed must be positive")
    return 100.0 * (best_synth - best_intuitive) / best_intuitive
