"""Probabilistic graph-based gait synthesis for multi-limb soft robots.

A robot with discrete limb states is modeled as a complete digraph
whose edges carry experimentally learned Gaussian SE(2) motions.
Locomotion gaits are simple cycles of that graph; optimal translation-
and rotation-dominant gaits are synthesized by binary integer linear
programming with iterative cycle detection, and validated against an
exhaustive cycle-enumeration oracle on small graphs.
"""

__version__ = "0.1.0"

from gaitgraph.errors import GaitGraphError
from gaitgraph.graph import (
    StateDigraph,
    PruneResult,
    build_complete_digraph,
    incidence_check,
    prune_failed_limbs,
)
from gaitgraph.eulerian import (
    EulerianPlan,
    eulerian_verify,
    hierholzer_walk,
    plan_trials,
    stochastic_hierholzer,
)
from gaitgraph.se2 import (
    GaitClass,
    Se2Transform,
    classify_gait,
    compose,
    cycle_transform,
    invariance_report,
)
from gaitgraph.cycles import (
    GaitVector,
    count_simple_cycles,
    count_simple_cycles_formula,
    enumerate_simple_cycles,
    gait_from_walk,
    indicator_from_walk,
    is_simple_cycle,
    order_cycle,
)
from gaitgraph.learning import (
    EdgeWeight,
    WeightedDigraph,
    estimate_pose,
    estimate_weights,
    reconstruct_occluded,
    restrict_weights,
    segment_trace,
    synthetic_weights,
)
from gaitgraph.bilp import BilpProblem, BilpResult, BilpStatus, solve_bilp
from gaitgraph.synthesis import (
    Goal,
    SynthesisConfig,
    SynthesizedGait,
    build_cost,
    lhs_sample,
    map_to_signed,
    synthesize,
)
from gaitgraph.oracle import (
    CycleCostRecord,
    exhaustive_evaluate,
    monte_carlo_cycle_covariance,
    nonlinear_costs,
    pareto_front,
    propagate_cycle_covariance,
)
from gaitgraph.simulate import (
    CharacterizationRecord,
    RolloutMode,
    Trajectory,
    characterize,
    improvement,
    rollout,
)

__all__ = [name for name in dir() if not name.startswith("_")]
