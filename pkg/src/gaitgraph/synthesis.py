"""Gait synthesis: LHS-swept BILP with iterative cycle detection.

For each sampled direction weight alpha a linear edge cost is built
from the learned means and variances, the cycle-space constraints and
the goal tolerance are assembled into a BILP, and the solver is rerun
with no-good cuts until its support is one connected simple cycle (or
the cut budget runs out).  Gaits found under different alphas are
deduplicated and returned sorted by objective.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from gaitgraph.bilp import BilpProblem, solve_bilp
from gaitgraph.cycles import GaitVector, enumerate_simple_cycles, is_simple_cycle, order_cycle
from gaitgraph.errors import SolverBudgetError
from gaitgraph.graph import _build
from gaitgraph.learning import WeightedDigraph
from gaitgraph.se2 import cycle_transform


class Goal(enum.Enum):
    TRANSLATION = "translation"
    ROTATION = "rotation"


@dataclass
class SynthesisConfig:
    """Hyperparameters of one synthesis sweep.

    ``alpha`` is normally None and swept by Latin hypercube over
    [-1, 1]^M (M = 2 for translation, 1 for rotation); pass an explicit
    value to pin it.  ``beta`` weights variance, ``gamma`` length.
    ``eps_theta`` caps |net rotation| for translation goals,
    ``eps_t`` caps |net translation| componentwise for rotation goals.
    """

    goal: Goal
    n_samples: int = 100
    max_cuts: int = 50
    beta: float = 1.0
    gamma: float = 0.1
    eps_theta: float = 0.1
    eps_t: float = 1.0
    alpha: np.ndarray | None = None
    min_length: int = 2
    max_nodes: int = 200_000

    def __post_init__(self):
        if self.n_samples < 1 or self.max_cuts < 1:
            raise ValueError("n_samples and max_cuts must be >= 1")
        if self.beta < 0 or self.gamma < 0:
            raise ValueError("beta and gamma must be nonnegative")
        if self.eps_theta < 0 or self.eps_t < 0:
            raise ValueError("tolerances must be nonnegative")

    @property
    def alpha_dim(self) -> int:
        return 2 if self.goal is Goal.TRANSLATION else 1


def lhs_sample(n: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """Latin hypercube: one uniform draw per stratum, strata shuffled per axis."""
    if n < 1 or m < 1:
        raise ValueError("n and m must be >= 1")
    H = np.empty((n, m))
    for col in range(m):
        H[:, col] = (rng.permutation(n) + rng.uniform(size=n)) / n
    return H


def map_to_signed(h: np.ndarray) -> np.ndarray:
    """[0,1] -> [-1,1]."""
    return 2.0 * np.asarray(h) - 1.0


def build_cost(
    goal: Goal, weights: WeightedDigraph, alpha, beta: float, gamma: float
) -> np.ndarray:
    """Linear edge cost: direction-weighted motion + variance + length."""
    ones = np.ones(weights.graph.m)
    if goal is Goal.TRANSLATION:
        alpha = np.asarray(alpha, dtype=float).reshape(2)
        return alpha @ weights.P + beta * weights.S_p + gamma * ones
    return float(alpha) * weights.Theta + beta * weights.S_theta + gamma * ones


def goal_rows(
    goal: Goal, weights: WeightedDigraph, config: SynthesisConfig
) -> tuple[np.ndarray, np.ndarray]:
    """Inequality rows enforcing the goal tolerance."""
    if goal is Goal.TRANSLATION:
        th = weights.Theta[None, :]
        return np.vstack([th, -th]), np.array([config.eps_theta, config.eps_theta])
    P = weights.P
    e = config.eps_t
    return np.vstack([P, -P]), np.array([e, e, e, e])


@dataclass(eq=False)
class SynthesizedGait:
    gait: GaitVector
    objective: float
    alpha: np.ndarray
    predicted_mu: np.ndarray  # (dx, dy, dtheta) from the canonical start
    s_p_sum: float
    s_theta_sum: float
    cuts_used: int
    multiplicity: int
    config: SynthesisConfig


@dataclass(eq=False)
class Cut:
    """One no-good row a@z <= rhs plus the solution that triggered it."""

    a: np.ndarray
    rhs: float
    trigger: np.ndarray

    def excludes(self, z) -> bool:
        return float(self.a @ z) > self.rhs + 1e-12


@dataclass(eq=False)
class SampleOutcome:
    """What happened for one alpha sample of the sweep."""

    alpha: np.ndarray
    emitted: bool
    infeasible: bool
    cut_limit_reached: bool
    cuts_used: int
    objective: float | None


@dataclass
class SweepReport:
    outcomes: list[SampleOutcome] = field(default_factory=list)

    @property
    def n_emitted(self) -> int:
        return sum(o.emitted for o in self.outcomes)

    @property
    def all_infeasible(self) -> bool:
        return bool(self.outcomes) and all(o.infeasible for o in self.outcomes)


@lru_cache(maxsize=8)
def _short_cycle_matrix(n_limbs: int, states_per_limb: int, max_len: int = 3):
    """Indicator matrix of all cycles up to max_len, for incumbent seeding."""
    graph = _build(n_limbs, states_per_limb)
    return np.stack(
        [g.z for g in enumerate_simple_cycles(graph, max_len=max_len)]
    ).astype(np.float64)


def _seed_incumbent(weights, config, c):
    """Cheapest short simple cycle satisfying the goal rows, if any.

    Short cycles can never violate a no-good cut on a disjoint union
    (their support is too small to contain one), so a seed stays
    feasible throughout the cut loop.
    """
    g = weights.graph
    Zs = _short_cycle_matrix(g.n_limbs, g.states_per_limb)
    G_rows, g_rhs = goal_rows(config.goal, weights, config)
    ok = np.all(G_rows @ Zs.T <= g_rhs[:, None] + 1e-12, axis=0)
    ok &= Zs.sum(axis=1) >= config.min_length
    if not ok.any():
        return None
    objs = Zs[ok] @ c
    return Zs[ok][int(np.argmin(objs))].astype(np.int8)


def _base_problem(weights: WeightedDigraph, config: SynthesisConfig, c):
    g = weights.graph
    G_rows, g_rhs = goal_rows(config.goal, weights, config)
    A_le = np.vstack(
        [g.B_i.astype(float), G_rows, -np.ones((1, g.m))]
    )
    b_le = np.concatenate(
        [np.ones(g.n), g_rhs, [-float(config.min_length)]]
    )
    return BilpProblem(
        c=c, A_eq=g.B.astype(float), b_eq=np.zeros(g.n), A_le=A_le, b_le=b_le
    )


def synthesize_one(
    weights: WeightedDigraph,
    config: SynthesisConfig,
    alpha,
    kernel=None,
) -> tuple[SynthesizedGait | None, SampleOutcome, list[Cut]]:
    """Run the solve/cut loop for a single alpha.

    Returns (gait or None, outcome, cuts added).  Cut state is local to
    the sample, as samples are independent.
    """
    c = build_cost(config.goal, weights, alpha, config.beta, config.gamma)
    problem = _base_problem(weights, config, c)
    alpha_arr = np.atleast_1d(np.asarray(alpha, dtype=float))
    seed = _seed_incumbent(weights, config, c)
    cuts: list[Cut] = []
    for _ in range(config.max_cuts):
        result = solve_bilp(
            problem, max_nodes=config.max_nodes, kernel=kernel, incumbent=seed
        )
        if not result.optimal:
            return None, SampleOutcome(
                alpha_arr, False, True, False, len(cuts), None
            ), cuts
        check = is_simple_cycle(result.z, weights.graph)
        if check.ok:
            gait = order_cycle(result.z, weights.graph)
            mus = [weights.weights[e].mu for e in gait.ordered_edges]
            gtot = cycle_transform([(mu[:2], mu[2]) for mu in mus])
            synth = SynthesizedGait(
                gait=gait,
                objective=result.objective,
                alpha=alpha_arr,
                predicted_mu=np.array([gtot.p[0], gtot.p[1], gtot.theta]),
                s_p_sum=float(weights.S_p @ gait.z),
                s_theta_sum=float(weights.S_theta @ gait.z),
                cuts_used=len(cuts),
                multiplicity=1,
                config=config,
            )
            return synth, SampleOutcome(
                alpha_arr, True, False, False, len(cuts), result.objective
            ), cuts
        # No-good cuts: the support is a union of >= 2 vertex-disjoint
        # cycles, and no single simple cycle can contain two of them,
        # so every component pair yields a sound cut.  For two
        # components this is exactly the full-support no-good cut; for
        # more it is strictly stronger and implies it.
        comps = check.components
        for i in range(len(comps)):
            for j in range(i + 1, len(comps)):
                support = np.zeros(weights.graph.m)
                support[comps[i]] = 1.0
                support[comps[j]] = 1.0
                rhs = float(support.sum()) - 1.0
                problem.add_cut(support, rhs)
                cuts.append(Cut(a=support, rhs=rhs, trigger=result.z.copy()))
    return None, SampleOutcome(
        alpha_arr, False, False, True, len(cuts), None
    ), cuts


def synthesize(
    weights: WeightedDigraph,
    config: SynthesisConfig,
    rng: np.random.Generator,
    kernel=None,
) -> tuple[list[SynthesizedGait], SweepReport]:
    """LHS sweep over alpha; deduplicated gaits sorted by objective."""
    if config.alpha is not None:
        alphas = np.atleast_2d(np.asarray(config.alpha, dtype=float))
    else:
        alphas = map_to_signed(lhs_sample(config.n_samples, config.alpha_dim, rng))
    report = SweepReport()
    found: dict[bytes, SynthesizedGait] = {}
    for alpha in alphas:
        a = alpha if config.goal is Goal.TRANSLATION else float(alpha[0])
        try:
            synth, outcome, _ = synthesize_one(weights, config, a, kernel=kernel)
        except SolverBudgetError:
            report.outcomes.append(
                SampleOutcome(np.atleast_1d(alpha), False, False, True, config.max_cuts, None)
            )
            continue
        report.outcomes.append(outcome)
        if synth is None:
            continue
        key = synth.gait.key()
        if key in found:
            # same gait under another alpha: record multiplicity, keep
            # the first-found objective/alpha pair
            prev = found[key]
            found[key] = replace(prev, multiplicity=prev.multiplicity + 1)
        else:
            found[key] = synth
    gaits = sorted(found.values(), key=lambda s: s.objective)
    return gaits, report
