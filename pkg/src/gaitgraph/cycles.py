"""Simple-cycle machinery on the state digraph.

A candidate gait is a binary edge-indicator vector z of length m.  It
is a simple cycle iff flow balance holds at every vertex (B z = 0), no
vertex is departed more than once (B_i z <= 1), and the selected edges
form one connected cycle rather than several disjoint ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from gaitgraph.errors import EnumerationCapError, SimpleCycleError
from gaitgraph.graph import StateDigraph

ENUMERATION_CAP = 10


@dataclass(eq=False)
class GaitVector:
    """A simple cycle: indicator vector plus its recovered ordering.

    ``ordered_vertices`` is the closed walk starting at the smallest
    vertex present (canonical start); ``ordered_edges`` holds the
    0-based edge indices in traversal order.
    """

    z: np.ndarray
    ordered_edges: list[int]
    ordered_vertices: list[int]

    def __post_init__(self):
        self.z = np.asarray(self.z, dtype=np.int8)

    @property
    def length(self) -> int:
        return len(self.ordered_edges)

    def key(self) -> bytes:
        return self.z.tobytes()


@dataclass
class CycleCheck:
    """Outcome of the simple-cycle test with a failure diagnosis."""

    ok: bool
    empty: bool = False
    flow_violations: list[int] = field(default_factory=list)
    degree_violations: list[int] = field(default_factory=list)
    components: list[list[int]] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "simple cycle"
        if self.empty:
            return "empty edge selection"
        if self.flow_violations:
            return f"flow imbalance (B z != 0) at vertices {self.flow_violations}"
        if self.degree_violations:
            return (
                "out-degree above one (B_i z > 1) at vertices "
                f"{self.degree_violations}"
            )
        return f"disconnected: {len(self.components)} disjoint cycles"


def indicator_from_walk(vertices: list[int], graph: StateDigraph) -> np.ndarray:
    """Edge-indicator vector of a closed vertex walk.

    Repeated edges saturate at 1, so an invalid walk still produces a
    vector that the simple-cycle test can diagnose.
    """
    z = np.zeros(graph.m, dtype=np.int8)
    for a, b in zip(vertices, vertices[1:]):
        if (a, b) not in graph.edge_index:
            raise ValueError(f"({a}, {b}) is not an edge")
        z[graph.edge_index[(a, b)]] = 1
    return z


def is_simple_cycle(z: np.ndarray, graph: StateDigraph) -> CycleCheck:
    """Check the two linear constraints, then connectivity by DFS."""
    z = np.asarray(z).astype(np.int64)
    if z.shape != (graph.m,):
        raise ValueError(f"z must have length {graph.m}")
    if not z.any():
        return CycleCheck(ok=False, empty=True)

    flow = graph.B.astype(np.int64) @ z
    bad_flow = [int(v) + 1 for v in np.nonzero(flow)[0]]
    if bad_flow:
        return CycleCheck(ok=False, flow_violations=bad_flow)

    outdeg = graph.B_i.astype(np.int64) @ z
    bad_deg = [int(v) + 1 for v in np.nonzero(outdeg > 1)[0]]
    if bad_deg:
        return CycleCheck(ok=False, degree_violations=bad_deg)

    # Flow balance with out-degree <= 1 means the support is a disjoint
    # union of simple cycles; walk successor chains to split components.
    succ = {}
    edge_of = {}
    for k in np.nonzero(z)[0]:
        s, t = graph.edges[k]
        succ[s] = t
        edge_of[s] = int(k)
    components = []
    seen = set()
    for start in sorted(succ):
        if start in seen:
            continue
        comp = []
        v = start
        while v not in seen:
            seen.add(v)
            comp.append(edge_of[v])
            v = succ[v]
        components.append(comp)
    if len(components) > 1:
        return CycleCheck(ok=False, components=components)
    return CycleCheck(ok=True)


def order_cycle(z: np.ndarray, graph: StateDigraph) -> GaitVector:
    """Recover the vertex/edge ordering of a simple cycle.

    The walk starts at the smallest vertex present.  Raises
    SimpleCycleError (with the diagnosis) if z is not a simple cycle.
    """
    check = is_simple_cycle(z, graph)
    if not check.ok:
        raise SimpleCycleError(check)
    z = np.asarray(z, dtype=np.int8)
    succ = {}
    edge_of = {}
    for k in np.nonzero(z)[0]:
        s, t = graph.edges[k]
        succ[s] = t
        edge_of[s] = int(k)
    start = min(succ)
    vertices = [start]
    edges = []
    v = start
    while True:
        edges.append(edge_of[v])
        v = succ[v]
        vertices.append(v)
        if v == start:
            break
    return GaitVector(z=z, ordered_edges=edges, ordered_vertices=vertices)


def gait_from_walk(vertices: list[int], graph: StateDigraph) -> GaitVector:
    """GaitVector of a closed vertex walk, validated as a simple cycle."""
    return order_cycle(indicator_from_walk(vertices, graph), graph)


def count_simple_cycles_formula(n: int) -> int:
    """Closed-form cycle count sum_{i=1..n} C(n, n-i+1) (n-i)!.

    Exact in arbitrary precision.  The i = n term contributes n
    length-one items that a loopless digraph does not have, so the
    formula exceeds the true enumeration count by exactly n.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return sum(
        math.comb(n, n - i + 1) * math.factorial(n - i) for i in range(1, n + 1)
    )


def count_simple_cycles(n: int) -> int:
    """Number of simple cycles of length >= 2 in the complete digraph."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return sum(math.comb(n, k) * math.factorial(k - 1) for k in range(2, n + 1))


def enumerate_simple_cycles(
    graph: StateDigraph,
    max_len: int | None = None,
    cap: int = ENUMERATION_CAP,
):
    """Yield every simple cycle of length >= 2 exactly once.

    Cycles are emitted in canonical form (walk starting at the smallest
    vertex), each rotation class once.  Uses Johnson-style search with
    blocking lists rooted at successively larger vertices.  Without
    ``max_len`` the graph must have at most ``cap`` vertices because the
    cycle count grows combinatorially; the refusal names the estimate.
    """
    if max_len is None and graph.n > cap:
        raise EnumerationCapError(graph.n, float(count_simple_cycles(graph.n)))
    bound = graph.n if max_len is None else min(max_len, graph.n)

    adj = {v: [] for v in range(1, graph.n + 1)}
    for s, t in graph.edges:
        adj[s].append(t)
    for v in adj:
        adj[v].sort()

    for root in range(1, graph.n + 1):
        # Search the subgraph induced on vertices >= root so each cycle
        # is found exactly once, rooted at its smallest vertex.
        blocked = {v: False for v in range(root, graph.n + 1)}
        block_map = {v: set() for v in range(root, graph.n + 1)}
        path = [root]

        def unblock(v):
            stack = [v]
            while stack:
                u = stack.pop()
                if blocked[u]:
                    blocked[u] = False
                    stack.extend(block_map[u])
                    block_map[u].clear()

        def circuit(v):
            found = False
            blocked[v] = True
            for w in adj[v]:
                if w < root:
                    continue
                if w == root:
                    if len(path) >= 2:
                        walk = path + [root]
                        z = np.zeros(graph.m, dtype=np.int8)
                        eids = []
                        for a, b in zip(walk, walk[1:]):
                            k = graph.edge_index[(a, b)]
                            z[k] = 1
                            eids.append(k)
                        yield GaitVector(
                            z=z, ordered_edges=eids, ordered_vertices=walk
                        )
                        found = True
                elif not blocked[w] and len(path) < bound:
                    path.append(w)
                    for c in circuit(w):
                        yield c
                        found = True
                    path.pop()
            if found or max_len is not None:
                # With a depth bound the blocking lists are not sound
                # (a vertex may be blocked purely by the bound), so
                # unblock unconditionally.
                unblock(v)
            else:
                for w in adj[v]:
                    if w >= root:
                        block_map[w].add(v)
            return

        yield from circuit(root)
