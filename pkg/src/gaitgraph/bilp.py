"""Exact binary integer linear programming by branch and bound.

Solves min c@z over binary z subject to equality and inequality rows
(plus accumulated cutting planes).  Bounds come from the LP relaxation
over the [0,1] box; branching fixes the most fractional variable, ties
toward the lower index, exploring the zero branch first.  The search is
exhaustive, so the returned solution is provably optimal.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from gaitgraph._kernels import simplex_bounded as _default_kernel
from gaitgraph._kernels import pure as _pure
from gaitgraph.errors import SolverBudgetError

INT_TOL = 1e-6
PRUNE_TOL = 1e-10
FEAS_TOL = 1e-7


@dataclass(eq=False)
class BilpProblem:
    """min c@z, A_eq z = b_eq, A_le z <= b_le (plus cuts), z binary."""

    c: np.ndarray
    A_eq: np.ndarray
    b_eq: np.ndarray
    A_le: np.ndarray
    b_le: np.ndarray
    cuts: list[tuple[np.ndarray, float]] = field(default_factory=list)

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float)
        self.A_eq = np.atleast_2d(np.asarray(self.A_eq, dtype=float))
        self.b_eq = np.asarray(self.b_eq, dtype=float)
        self.A_le = np.atleast_2d(np.asarray(self.A_le, dtype=float))
        self.b_le = np.asarray(self.b_le, dtype=float)
        m = self.c.shape[0]
        for name, rows in (("A_eq", self.A_eq), ("A_le", self.A_le)):
            if rows.size and rows.shape[1] != m:
                raise ValueError(f"{name} must have {m} columns")

    @property
    def n_vars(self) -> int:
        return self.c.shape[0]

    def add_cut(self, a: np.ndarray, rhs: float) -> None:
        self.cuts.append((np.asarray(a, dtype=float), float(rhs)))

    def inequality_rows(self) -> tuple[np.ndarray, np.ndarray]:
        """A_le and b_le with the cut rows appended."""
        if not self.cuts:
            return self.A_le, self.b_le
        extra = np.vstack([a for a, _ in self.cuts])
        rhs = np.array([r for _, r in self.cuts])
        if self.A_le.size:
            return np.vstack([self.A_le, extra]), np.concatenate([self.b_le, rhs])
        return extra, rhs


class BilpStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"


@dataclass(eq=False)
class BilpResult:
    status: BilpStatus
    z: np.ndarray | None
    objective: float
    nodes: int
    bound: float
    incumbent_history: list[float] = field(default_factory=list)

    @property
    def optimal(self) -> bool:
        return self.status is BilpStatus.OPTIMAL


def _standard_form(problem: BilpProblem):
    """Equality standard form with slack columns for the <= rows."""
    A_le, b_le = problem.inequality_rows()
    m = problem.n_vars
    q = A_le.shape[0] if A_le.size else 0
    p = problem.A_eq.shape[0] if problem.A_eq.size else 0
    A = np.zeros((p + q, m + q))
    b = np.zeros(p + q)
    if p:
        A[:p, :m] = problem.A_eq
        b[:p] = problem.b_eq
    if q:
        A[p:, :m] = A_le
        A[p:, m:] = np.eye(q)
        b[p:] = b_le
    c = np.concatenate([problem.c, np.zeros(q)])
    u = np.concatenate([np.ones(m), np.full(q, np.inf)])
    return A, b, c, u


def _solve_relaxation(A, b, c, u, lo, hi, m, kernel):
    """LP over the box [lo, hi] for the structural variables."""
    lo_ext = np.zeros(A.shape[1])
    lo_ext[:m] = lo
    u_node = u.copy()
    u_node[:m] = hi - lo
    if np.any(u_node[:m] < -1e-12):
        return _pure.INFEASIBLE, None, np.inf
    b_node = b - A @ lo_ext
    status, x, obj = kernel(A, b_node, c, np.maximum(u_node, 0.0))
    if status != _pure.OPTIMAL:
        return status, None, np.inf
    z = x[:m] + lo
    return status, z, float(c[:m] @ z)


def solve_bilp(
    problem: BilpProblem,
    max_nodes: int = 200_000,
    kernel=None,
    incumbent: np.ndarray | None = None,
) -> BilpResult:
    """Depth-first branch and bound over the 0/1 hypercube.

    ``nodes`` counts LP relaxations solved; an integral root relaxation
    therefore reports exactly one node.  ``incumbent`` optionally seeds
    the search with a known feasible binary point (it is re-checked
    against the constraints), which only tightens pruning.  Raises
    SolverBudgetError when ``max_nodes`` is exhausted before the tree.
    """
    kernel = kernel or _default_kernel
    A, b, c, u = _standard_form(problem)
    m = problem.n_vars
    A_le, b_le = problem.inequality_rows()

    best_z = None
    best_obj = np.inf
    history = []
    if incumbent is not None:
        z0 = np.asarray(incumbent, dtype=np.int8)
        if _feasible(z0, problem, A_le, b_le):
            best_z = z0
            best_obj = float(problem.c @ z0)
            history.append(best_obj)
    nodes = 0
    stack = [(np.zeros(m), np.ones(m))]

    while stack:
        lo, hi = stack.pop()
        if nodes >= max_nodes:
            raise SolverBudgetError(best_obj, None, nodes)
        nodes += 1
        status, z, obj = _solve_relaxation(A, b, c, u, lo, hi, m, kernel)
        if status != _pure.OPTIMAL:
            continue
        if obj >= best_obj - PRUNE_TOL:
            continue
        frac = np.abs(z - np.round(z))
        j = int(np.argmax(frac))
        if frac[j] <= INT_TOL:
            z_int = np.round(z).astype(np.int8)
            if _feasible(z_int, problem, A_le, b_le):
                obj_int = float(problem.c @ z_int)
                if obj_int < best_obj - PRUNE_TOL:
                    best_obj = obj_int
                    best_z = z_int
                    history.append(best_obj)
                continue
            if frac[j] <= 1e-12:
                continue  # numerically integral yet infeasible: dead end
        # branch on the most fractional variable; np.argmax already
        # breaks ties toward the lower index
        hi1, lo1 = hi.copy(), lo.copy()
        hi1[j] = 0.0
        lo1[j] = 1.0
        stack.append((lo1, hi.copy()))  # z_j = 1 explored second
        stack.append((lo.copy(), hi1))  # z_j = 0 explored first

    if best_z is None:
        return BilpResult(BilpStatus.INFEASIBLE, None, np.inf, nodes, np.inf, history)
    return BilpResult(BilpStatus.OPTIMAL, best_z, best_obj, nodes, best_obj, history)


def _feasible(z, problem, A_le, b_le) -> bool:
    scale = 1.0 + np.abs(problem.b_eq).max(initial=0.0)
    if problem.A_eq.size and np.any(
        np.abs(problem.A_eq @ z - problem.b_eq) > FEAS_TOL * scale
    ):
        return False
    if A_le is not None and A_le.size:
        scale = 1.0 + np.abs(b_le).max(initial=0.0)
        if np.any(A_le @ z - b_le > FEAS_TOL * scale):
            return False
    return True
