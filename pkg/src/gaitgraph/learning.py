"""From recorded experiment traces to a probabilistic weighted digraph.

The pipeline is: marker centroids -> robot pose series -> per-edge
displacement observations (sliced by the Eulerian schedule, expressed
in the body frame at each primitive's start) -> per-edge Gaussian
statistics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from gaitgraph.errors import (
    DegenerateGeometryError,
    MissingEdgeDataError,
    TraceTruncationError,
    UnrecoverableFrameError,
)
from gaitgraph.graph import StateDigraph
from gaitgraph.se2 import Se2Transform, rotation


@dataclass
class PoseSample:
    frame: int
    t: float  # seconds
    x: float  # mm
    y: float
    theta: float  # radians, unwrapped


@dataclass
class MarkerFrame:
    """One video frame of marker centroids; occluded markers are None."""

    frame: int
    t: float
    markers: list[np.ndarray | None]

    def visible_indices(self) -> list[int]:
        return [i for i, p in enumerate(self.markers) if p is not None]


@dataclass(eq=False)
class EdgeWeight:
    """Gaussian motion model of one primitive, in its initial-vertex frame."""

    mu: np.ndarray  # (dx mm, dy mm, dtheta rad)
    sigma: np.ndarray  # 3x3
    sample_count: int

    def __post_init__(self):
        self.mu = np.asarray(self.mu, dtype=float).reshape(3)
        self.sigma = np.asarray(self.sigma, dtype=float).reshape(3, 3)


@dataclass(eq=False)
class WeightedDigraph:
    """Digraph plus per-edge weights and the stacked weight matrices."""

    graph: StateDigraph
    weights: list[EdgeWeight]
    P: np.ndarray = field(init=False)  # 2 x m mean translations
    Theta: np.ndarray = field(init=False)  # m mean rotations
    S: np.ndarray = field(init=False)  # m x 3 x 3 covariances
    S_p: np.ndarray = field(init=False)  # m translation-covariance traces
    S_theta: np.ndarray = field(init=False)  # m rotation variances

    def __post_init__(self):
        if len(self.weights) != self.graph.m:
            raise ValueError(
                f"expected {self.graph.m} edge weights, got {len(self.weights)}"
            )
        mu = np.stack([w.mu for w in self.weights])
        self.P = mu[:, :2].T.copy()
        self.Theta = mu[:, 2].copy()
        self.S = np.stack([w.sigma for w in self.weights])
        self.S_p = self.S[:, 0, 0] + self.S[:, 1, 1]
        self.S_theta = self.S[:, 2, 2].copy()

    def edge_transforms(self, edge_indices) -> list[tuple[np.ndarray, float]]:
        """(p, theta) mean transforms for an ordered edge index list."""
        return [
            (self.weights[k].mu[:2], float(self.weights[k].mu[2]))
            for k in edge_indices
        ]


def estimate_pose(reference: np.ndarray, current: np.ndarray) -> Se2Transform:
    """Least-squares planar rigid transform mapping reference onto current.

    Minimizes sum ||R q_k + t - q'_k||^2: the rotation comes from the
    atan2 of the summed cross and dot products of the centered pairs,
    the translation from the centroids.
    """
    a = np.asarray(reference, dtype=float).reshape(-1, 2)
    b = np.asarray(current, dtype=float).reshape(-1, 2)
    if a.shape != b.shape:
        raise ValueError("marker sets must have equal size")
    if a.shape[0] < 2:
        raise DegenerateGeometryError("need at least two matched markers")
    ca, cb = a.mean(axis=0), b.mean(axis=0)
    a0, b0 = a - ca, b - cb
    if np.linalg.norm(a0) < 1e-12 or np.linalg.norm(b0) < 1e-12:
        raise DegenerateGeometryError("markers are coincident")
    cross = float(np.sum(a0[:, 0] * b0[:, 1] - a0[:, 1] * b0[:, 0]))
    dot = float(np.sum(a0 * b0))
    theta = math.atan2(cross, dot)
    t = cb - rotation(theta) @ ca
    return Se2Transform(theta, t)


def reconstruct_occluded(
    previous: np.ndarray,
    current: list[np.ndarray | None] | np.ndarray,
    pose: Se2Transform | None = None,
) -> np.ndarray:
    """Fill occluded markers from the frame-to-frame motion.

    ``previous`` is the full marker set of the last frame; ``current``
    may contain None (or NaN rows) for occluded markers, or be an
    unordered shorter list of detections.  Detections are matched to
    the nearest previous marker, the pose is estimated from the matched
    pairs (unless given), and unmatched slots are filled by pushing the
    previous positions through that pose.
    """
    prev = np.asarray(previous, dtype=float).reshape(-1, 2)
    k = prev.shape[0]

    if isinstance(current, np.ndarray) and current.ndim == 2 and len(current) == k:
        cur_list = [None if np.isnan(row).any() else row for row in current]
    else:
        cur_list = list(current)

    if len(cur_list) == k:
        detections = [(i, np.asarray(p, float)) for i, p in enumerate(cur_list)
                      if p is not None]
        matched = {i: p for i, p in detections}
    else:
        # unordered detections: greedy nearest-neighbor against previous
        matched = {}
        taken = set()
        for p in cur_list:
            if p is None:
                continue
            p = np.asarray(p, dtype=float)
            order = np.argsort(np.linalg.norm(prev - p, axis=1))
            for i in order:
                if int(i) not in taken:
                    matched[int(i)] = p
                    taken.add(int(i))
                    break

    if len(matched) < 2:
        raise UnrecoverableFrameError(
            f"only {len(matched)} visible markers; frame dropped"
        )
    idx = sorted(matched)
    if pose is None:
        pose = estimate_pose(prev[idx], np.stack([matched[i] for i in idx]))

    out = np.empty_like(prev)
    for i in range(k):
        out[i] = matched[i] if i in matched else pose.apply(prev[i])
    return out


def poses_from_markers(
    frames: list[MarkerFrame],
) -> tuple[list[PoseSample], list[int]]:
    """Pose series relative to the first frame; returns (poses, dropped frames).

    Occlusions are reconstructed frame to frame; frames with fewer than
    two visible markers are dropped and reported.  Angles are unwrapped
    across the series.
    """
    if not frames:
        return [], []
    first = frames[0]
    if len(first.visible_indices()) != len(first.markers):
        raise UnrecoverableFrameError("first frame must have all markers visible")
    ref = np.stack([np.asarray(p, float) for p in first.markers])

    poses = []
    dropped = []
    prev_full = ref
    raw_thetas = []
    for f in frames:
        try:
            full = reconstruct_occluded(prev_full, f.markers)
        except UnrecoverableFrameError:
            dropped.append(f.frame)
            continue
        g = estimate_pose(ref, full)
        poses.append(PoseSample(frame=f.frame, t=f.t, x=g.p[0], y=g.p[1],
                                theta=g.theta))
        raw_thetas.append(g.theta)
        prev_full = full
    if poses:
        unwrapped = np.unwrap(np.array(raw_thetas))
        for p, th in zip(poses, unwrapped):
            p.theta = float(th)
    return poses, dropped


def _interp_pose(poses: list[PoseSample], t: float) -> np.ndarray:
    """Linear interpolation of (x, y, unwrapped theta) at time t."""
    ts = np.array([p.t for p in poses])
    i = int(np.searchsorted(ts, t, side="right")) - 1
    if i < 0:
        i = 0
    if i >= len(poses) - 1:
        return np.array([poses[-1].x, poses[-1].y, poses[-1].theta])
    a, b = poses[i], poses[i + 1]
    if b.t == a.t:
        w = 0.0
    else:
        w = (t - a.t) / (b.t - a.t)
    return np.array(
        [a.x + w * (b.x - a.x), a.y + w * (b.y - a.y),
         a.theta + w * (b.theta - a.theta)]
    )


def segment_trace(
    poses: list[PoseSample],
    walk: list[int],
    graph: StateDigraph,
    tau_ms: float,
) -> dict[int, list[np.ndarray]]:
    """Per-edge displacement observations for one scheduled trial.

    Primitive k runs over [k*tau, (k+1)*tau); its observation is the
    window-end pose relative to the window-start pose, rotated into the
    body frame at the window start:
    dp = R(-theta_start) (p_end - p_start), dtheta = theta_end - theta_start.
    """
    if not poses:
        raise TraceTruncationError(range(len(walk) - 1))
    tau_s = tau_ms / 1000.0
    n_edges = len(walk) - 1
    t_last = poses[-1].t
    missing = [k for k in range(n_edges) if (k + 1) * tau_s > t_last + 1e-9]
    if missing:
        raise TraceTruncationError(missing)

    obs: dict[int, list[np.ndarray]] = {}
    for k in range(n_edges):
        edge = graph.edge_index[(walk[k], walk[k + 1])]
        start = _interp_pose(poses, k * tau_s)
        end = _interp_pose(poses, (k + 1) * tau_s)
        dp = rotation(-start[2]) @ (end[:2] - start[:2])
        obs.setdefault(edge, []).append(np.array([dp[0], dp[1], end[2] - start[2]]))
    return obs


def merge_observations(parts) -> dict[int, list[np.ndarray]]:
    merged: dict[int, list[np.ndarray]] = {}
    for part in parts:
        for edge, lst in part.items():
            merged.setdefault(edge, []).extend(lst)
    return merged


def estimate_weights(
    observations: dict[int, list[np.ndarray]], graph: StateDigraph
) -> WeightedDigraph:
    """Sample mean and unbiased covariance per edge.

    Single-observation edges get a zero covariance rather than an
    error so one-trial quick looks stay usable.
    """
    missing = [k for k in range(graph.m) if not observations.get(k)]
    if missing:
        raise MissingEdgeDataError(missing)
    weights = []
    for k in range(graph.m):
        data = np.stack(observations[k])
        mu = data.mean(axis=0)
        if data.shape[0] > 1:
            sigma = np.cov(data.T, ddof=1).reshape(3, 3)
            sigma = 0.5 * (sigma + sigma.T)
        else:
            sigma = np.zeros((3, 3))
        weights.append(EdgeWeight(mu=mu, sigma=sigma, sample_count=data.shape[0]))
    return WeightedDigraph(graph=graph, weights=weights)


def synthetic_weights(
    graph: StateDigraph,
    seed: int,
    p_scale: float = 5.0,
    theta_scale: float = 0.25,
    sigma_scale: float = 0.05,
    sample_count: int = 5,
) -> WeightedDigraph:
    """Deterministic random weights for fixtures and tests.

    Means are uniform in [-p_scale, p_scale] mm and
    [-theta_scale, theta_scale] rad; covariances are A A^T scaled, so
    always positive semidefinite.  Zero scales give zero weights.
    """
    rng = np.random.default_rng(seed)
    weights = []
    for _ in range(graph.m):
        mu = np.concatenate(
            [rng.uniform(-p_scale, p_scale, 2),
             rng.uniform(-theta_scale, theta_scale, 1)]
        )
        a = rng.normal(size=(3, 3))
        sigma = sigma_scale * (a @ a.T)
        weights.append(EdgeWeight(mu=mu, sigma=sigma, sample_count=sample_count))
    return WeightedDigraph(graph=graph, weights=weights)


def restrict_weights(weighted: WeightedDigraph, prune) -> WeightedDigraph:
    """Carry learned weights onto a pruned subgraph (no re-learning)."""
    sub = prune.graph
    new_weights: list[EdgeWeight | None] = [None] * sub.m
    for old_idx, new_idx in prune.edge_map.items():
        new_weights[new_idx] = weighted.weights[old_idx]
    if any(w is None for w in new_weights):
        raise MissingEdgeDataError(
            [k for k, w in enumerate(new_weights) if w is None]
        )
    return WeightedDigraph(graph=sub, weights=new_weights)
