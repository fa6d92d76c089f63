"""Eulerian-cycle experiment schedules for complete digraphs.

A data-collection trial drives the robot through every motion primitive
exactly once.  On a complete digraph that schedule can be generated in
O(m) by pairing vertices off a shuffled order instead of running the
general Hierholzer search; shuffling the order gives one of n! distinct
Eulerian cycles per trial.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from gaitgraph.graph import StateDigraph


def hierholzer_walk(order: list[int]) -> list[int]:
    """Closed Eulerian walk over the complete digraph on ``order``.

    For i = n-1..1 the walk appends the pairs (order[j], order[i]) for
    j = 0..i-1, then closes at order[0].  Every ordered vertex pair is
    used exactly once, so the walk has n(n-1) edges.
    """
    n = len(order)
    if n < 2:
        raise ValueError("need at least two vertices for an Eulerian cycle")
    walk = []
    for i in range(n - 1, 0, -1):
        for j in range(0, i):
            walk.append(order[j])
            walk.append(order[i])
    walk.append(order[0])
    return walk


def stochastic_hierholzer(n: int, rng: np.random.Generator) -> list[int]:
    """One uniformly shuffled Eulerian cycle on vertices 1..n.

    Returns the closed vertex walk (first vertex repeated at the end),
    with exactly m = n(n-1) edges.
    """
    if n < 2:
        raise ValueError("need at least two vertices for an Eulerian cycle")
    order = list(range(1, n + 1))
    perm = rng.permutation(n)
    return hierholzer_walk([order[k] for k in perm])


def eulerian_verify(walk: list[int], graph: StateDigraph) -> bool:
    """True iff ``walk`` is a closed walk using every edge exactly once."""
    if len(walk) != graph.m + 1:
        return False
    if walk[0] != walk[-1]:
        return False
    seen = set()
    for a, b in zip(walk, walk[1:]):
        if (a, b) not in graph.edge_index:
            return False
        if (a, b) in seen:
            return False
        seen.add((a, b))
    return len(seen) == graph.m


@dataclass
class EulerianPlan:
    """A batch of independently shuffled Eulerian trials."""

    n: int
    seed: int
    tau_ms: float
    trials: list[list[int]]

    @property
    def m(self) -> int:
        return self.n * (self.n - 1)

    @property
    def t_total_ms(self) -> float:
        return len(self.trials) * self.m * self.tau_ms


def plan_trials(
    graph: StateDigraph, trials: int, tau_ms: float, seed: int
) -> EulerianPlan:
    """Schedule ``trials`` Eulerian cycles; total time is trials*m*tau."""
    if trials < 1:
        raise ValueError("need at least one trial")
    if tau_ms <= 0:
        raise ValueError("tau_ms must be positive")
    rng = np.random.default_rng(seed)
    return EulerianPlan(
        n=graph.n,
        seed=seed,
        tau_ms=tau_ms,
        trials=[stochastic_hierholzer(graph.n, rng) for _ in range(trials)],
    )
