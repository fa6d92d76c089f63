"""Exhaustive nonlinear gait evaluation and Pareto analysis.

For graphs small enough to enumerate, every simple cycle is scored by
the nonlinear figures of merit: motion magnitude plus weighted
uncertainty, normalized by cycle length.  These are scores (higher =
more dominant motion); the linear synthesis objective is their
minimization surrogate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from gaitgraph.cycles import GaitVector, enumerate_simple_cycles
from gaitgraph.learning import WeightedDigraph
from gaitgraph.se2 import cycle_transform, rotation
from gaitgraph.stats import psd_factor


@dataclass(eq=False)
class CycleCostRecord:
    gait: GaitVector
    length: int
    J_t_nl: float
    J_theta_nl: float
    p_norm: float
    theta_abs: float
    s_p: float
    s_theta: float


def propagate_cycle_covariance(edge_weights) -> np.ndarray:
    """First-order covariance of the whole-cycle (x, y, theta).

    ``edge_weights`` is the ordered list of (mu, sigma) pairs from the
    canonical start; edges are independent.  The rotation variance
    accumulates exactly (theta is a plain sum); translation noise of
    edge k enters through the mean rotation accumulated before k, and
    rotation noise of edge j shears every later translation, which the
    chained Jacobians capture.
    """
    cov = np.zeros((3, 3))
    theta_pre = 0.0
    p_acc = np.zeros(2)
    for mu, sigma in edge_weights:
        mu = np.asarray(mu, dtype=float).reshape(3)
        sigma = np.asarray(sigma, dtype=float).reshape(3, 3)
        R = rotation(theta_pre)
        dR = np.array(
            [[-np.sin(theta_pre), -np.cos(theta_pre)],
             [np.cos(theta_pre), -np.sin(theta_pre)]]
        )
        F = np.eye(3)
        F[:2, 2] = dR @ mu[:2]
        G = np.eye(3)
        G[:2, :2] = R
        cov = F @ cov @ F.T + G @ sigma @ G.T
        p_acc = p_acc + R @ mu[:2]
        theta_pre += mu[2]
    return cov


def monte_carlo_cycle_covariance(
    edge_weights, rng: np.random.Generator, samples: int = 200_000
) -> np.ndarray:
    """Sampled covariance of the exactly-composed cycle transform.

    Accuracy oracle for the first-order propagation: each edge draw is
    composed through the full nonlinear chain.
    """
    mus = [np.asarray(mu, dtype=float).reshape(3) for mu, _ in edge_weights]
    factors = [psd_factor(np.asarray(s, float).reshape(3, 3)) for _, s in edge_weights]
    x = np.zeros((samples, 2))
    theta = np.zeros(samples)
    for mu, L in zip(mus, factors):
        draw = mu + rng.standard_normal((samples, 3)) @ L.T
        c, s = np.cos(theta), np.sin(theta)
        x[:, 0] += c * draw[:, 0] - s * draw[:, 1]
        x[:, 1] += s * draw[:, 0] + c * draw[:, 1]
        theta += draw[:, 2]
    data = np.column_stack([x, theta])
    return np.cov(data.T, ddof=1)


def nonlinear_costs(
    gait: GaitVector,
    weights: WeightedDigraph,
    lambda_t: float = 1.0,
    lambda_theta: float = 1.0,
) -> CycleCostRecord:
    """Length-normalized motion-plus-uncertainty scores for one cycle."""
    pairs = [
        (weights.weights[k].mu, weights.weights[k].sigma)
        for k in gait.ordered_edges
    ]
    g = cycle_transform([(mu[:2], mu[2]) for mu, _ in pairs])
    cov = propagate_cycle_covariance(pairs)
    s_p = float(cov[0, 0] + cov[1, 1])
    s_theta = float(cov[2, 2])
    length = gait.length
    p_norm = float(np.linalg.norm(g.p))
    theta_abs = abs(float(weights.Theta @ gait.z))
    return CycleCostRecord(
        gait=gait,
        length=length,
        J_t_nl=(p_norm + lambda_t * s_p) / length,
        J_theta_nl=(theta_abs + lambda_theta * s_theta) / length,
        p_norm=p_norm,
        theta_abs=theta_abs,
        s_p=s_p,
        s_theta=s_theta,
    )


def exhaustive_evaluate(
    weights: WeightedDigraph,
    lambda_t: float = 1.0,
    lambda_theta: float = 1.0,
    max_len: int | None = None,
    cap: int = 10,
) -> list[CycleCostRecord]:
    """One cost record per simple cycle; refuses graphs beyond the cap."""
    return [
        nonlinear_costs(gait, weights, lambda_t, lambda_theta)
        for gait in enumerate_simple_cycles(weights.graph, max_len=max_len, cap=cap)
    ]


def pareto_front(records, mode: str = "translation") -> list[CycleCostRecord]:
    """Non-dominated records; the dominant score is maximized, the other
    minimized.  Exact ties on both axes are all kept."""
    if not records:
        raise ValueError("no records")
    if mode not in ("translation", "rotation"):
        raise ValueError(f"unknown mode {mode!r}")

    def axes(r):
        if mode == "translation":
            return r.J_t_nl, r.J_theta_nl
        return r.J_theta_nl, r.J_t_nl

    # sort by dominant score descending, sweep the best opposing score:
    # a record survives iff nothing with a higher dominant score has an
    # opposing score at or below its own, and nothing with the same
    # dominant score beats its opposing score
    order = sorted(range(len(records)), key=lambda i: (-axes(records[i])[0], axes(records[i])[1]))
    front_idx = []
    best_down = np.inf
    i = 0
    while i < len(order):
        up_i = axes(records[order[i]])[0]
        group = [order[i]]
        i += 1
        while i < len(order) and axes(records[order[i]])[0] == up_i:
            group.append(order[i])
            i += 1
        gmin = min(axes(records[g])[1] for g in group)
        if gmin < best_down:
            front_idx.extend(g for g in group if axes(records[g])[1] == gmin)
            best_down = gmin
    front_idx.sort()
    return [records[i] for i in front_idx]
