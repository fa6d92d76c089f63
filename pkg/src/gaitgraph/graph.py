"""Complete digraph of discrete limb states.

Vertices are the robot's discrete configurations (one limb state per
limb), edges are the motion primitives between them.  Vertex numbering
is the big-endian positional encoding of the limb-state tuple plus one,
so a two-limb binary robot has {00}=v1, {01}=v2, {10}=v3, {11}=v4.
Edges are ordered lexicographically by (source, target).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from gaitgraph.errors import GraphSizeError

DEFAULT_VERTEX_CAP = 256


@dataclass(eq=False)
class StateDigraph:
    """Loopless complete digraph on the n = states_per_limb**n_limbs states.

    ``edges`` holds 1-based (source, target) vertex pairs in canonical
    order.  ``B`` is the signed incidence matrix, ``B_i``/``B_t`` the
    initial/terminal matrices with ``B = B_i - B_t``.
    """

    n_limbs: int
    states_per_limb: int
    n: int
    m: int
    edges: list[tuple[int, int]]
    B: np.ndarray
    B_i: np.ndarray
    B_t: np.ndarray
    edge_index: dict[tuple[int, int], int] = field(repr=False, default_factory=dict)

    def __post_init__(self):
        if not self.edge_index:
            self.edge_index = {e: k for k, e in enumerate(self.edges)}

    def vertex_of_state(self, limb_states) -> int:
        """1-based vertex index of a limb-state tuple (limb 1 most significant)."""
        limb_states = tuple(limb_states)
        if len(limb_states) != self.n_limbs:
            raise ValueError(
                f"expected {self.n_limbs} limb states, got {len(limb_states)}"
            )
        v = 0
        for s in limb_states:
            if not 0 <= s < self.states_per_limb:
                raise ValueError(f"limb state {s} outside [0, {self.states_per_limb})")
            v = v * self.states_per_limb + s
        return v + 1

    def state_of_vertex(self, vertex: int) -> tuple[int, ...]:
        """Limb-state tuple encoded by a 1-based vertex index."""
        if not 1 <= vertex <= self.n:
            raise ValueError(f"vertex {vertex} outside 1..{self.n}")
        v = vertex - 1
        states = []
        for _ in range(self.n_limbs):
            states.append(v % self.states_per_limb)
            v //= self.states_per_limb
        return tuple(reversed(states))


def _build(n_limbs: int, states_per_limb: int) -> StateDigraph:
    n = states_per_limb**n_limbs
    edges = [(s, t) for s in range(1, n + 1) for t in range(1, n + 1) if s != t]
    m = len(edges)
    B_i = np.zeros((n, m), dtype=np.int8)
    B_t = np.zeros((n, m), dtype=np.int8)
    for k, (s, t) in enumerate(edges):
        B_i[s - 1, k] = 1
        B_t[t - 1, k] = 1
    return StateDigraph(
        n_limbs=n_limbs,
        states_per_limb=states_per_limb,
        n=n,
        m=m,
        edges=edges,
        B=(B_i.astype(np.int16) - B_t.astype(np.int16)).astype(np.int8),
        B_i=B_i,
        B_t=B_t,
    )


def build_complete_digraph(
    n_limbs: int, states_per_limb: int, max_vertices: int = DEFAULT_VERTEX_CAP
) -> StateDigraph:
    """Construct the complete limb-state digraph with incidence matrices.

    Raises GraphSizeError when states_per_limb**n_limbs exceeds
    ``max_vertices`` (default 256).
    """
    if n_limbs < 1:
        raise ValueError("need at least one limb")
    if states_per_limb < 2:
        raise ValueError("need at least two states per limb")
    n = states_per_limb**n_limbs
    if n > max_vertices:
        raise GraphSizeError(
            f"{n} vertices exceed the cap of {max_vertices}; "
            f"raise max_vertices to force construction"
        )
    return _build(n_limbs, states_per_limb)


def incidence_check(graph: StateDigraph) -> bool:
    """True iff B = B_i - B_t elementwise and every column of B sums to 0."""
    diff = graph.B_i.astype(np.int16) - graph.B_t.astype(np.int16)
    if not np.array_equal(graph.B.astype(np.int16), diff):
        return False
    return bool((graph.B.sum(axis=0) == 0).all())


@dataclass(eq=False)
class PruneResult:
    """Induced complete subdigraph after limb failures, with remap tables.

    ``vertex_map``/``edge_map`` send old 1-based vertices / old 0-based
    edge indices to their new counterparts; vertices and edges that did
    not survive are absent.  ``kept_vertices[k]`` is the old vertex for
    new vertex k+1.
    """

    graph: StateDigraph
    vertex_map: dict[int, int]
    edge_map: dict[int, int]
    kept_vertices: list[int]
    surviving_limbs: tuple[int, ...]


def prune_failed_limbs(
    graph: StateDigraph, failures: list[tuple[int, int]]
) -> PruneResult:
    """Restrict the digraph to states consistent with stuck limbs.

    ``failures`` lists (limb index, stuck state) with 1-based limb
    indices.  The surviving vertices are exactly those whose failed
    limbs sit at their stuck state; the result is the complete digraph
    on those vertices, i.e. the graph of a robot with the surviving
    limbs only.
    """
    failed = {}
    for limb, stuck in failures:
        if not 1 <= limb <= graph.n_limbs:
            raise ValueError(f"limb {limb} outside 1..{graph.n_limbs}")
        if not 0 <= stuck < graph.states_per_limb:
            raise ValueError(f"stuck state {stuck} outside [0, {graph.states_per_limb})")
        if limb in failed:
            raise ValueError(f"limb {limb} listed twice")
        failed[limb] = stuck

    kept = [
        v
        for v in range(1, graph.n + 1)
        if all(
            graph.state_of_vertex(v)[limb - 1] == stuck
            for limb, stuck in failed.items()
        )
    ]
    surviving = tuple(l for l in range(1, graph.n_limbs + 1) if l not in failed)
    sub = _build(len(surviving), graph.states_per_limb)

    vertex_map = {old: new + 1 for new, old in enumerate(kept)}
    edge_map = {}
    for old_idx, (s, t) in enumerate(graph.edges):
        if s in vertex_map and t in vertex_map:
            edge_map[old_idx] = sub.edge_index[(vertex_map[s], vertex_map[t])]
    return PruneResult(
        graph=sub,
        vertex_map=vertex_map,
        edge_map=edge_map,
        kept_vertices=kept,
        surviving_limbs=surviving,
    )
