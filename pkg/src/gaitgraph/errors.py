"""Exception types shared across the package."""


class GaitGraphError(Exception):
    """Base class for all domain errors raised by this package."""


class GraphSizeError(GaitGraphError):
    """Requested digraph exceeds the configured vertex cap."""


class DegenerateGeometryError(GaitGraphError):
    """Point configuration too degenerate for pose estimation."""


class UnrecoverableFrameError(GaitGraphError):
    """Fewer than two visible markers; the frame must be dropped."""


class TraceTruncationError(GaitGraphError):
    """Recorded trace ends before the schedule does."""

    def __init__(self, missing_edges):
        self.missing_edges = list(missing_edges)
        super().__init__(
            f"trace too short: no data for {len(self.missing_edges)} "
            f"scheduled edges {self.missing_edges[:8]}"
            + ("..." if len(self.missing_edges) > 8 else "")
        )


class MissingEdgeDataError(GaitGraphError):
    """One or more edges have no observations."""

    def __init__(self, edge_ids):
        self.edge_ids = sorted(edge_ids)
        super().__init__(f"no observations for edges {self.edge_ids}")


class SimpleCycleError(GaitGraphError):
    """Edge-indicator vector is not a single simple cycle."""

    def __init__(self, diagnosis):
        self.diagnosis = diagnosis
        super().__init__(str(diagnosis))


class EnumerationCapError(GaitGraphError):
    """Exhaustive cycle enumeration refused for a graph this large."""

    def __init__(self, n, estimated):
        self.n = n
        self.estimated = estimated
        super().__init__(
            f"refusing exhaustive enumeration for n={n}: roughly "
            f"{estimated:.3g} simple cycles; pass max_len or raise the cap"
        )


class SolverBudgetError(GaitGraphError):
    """Branch-and-bound ran out of its node budget."""

    def __init__(self, incumbent, bound, nodes):
        self.incumbent = incumbent
        self.bound = bound
        self.nodes = nodes
        super().__init__(
            f"node budget exhausted after {nodes} nodes "
            f"(incumbent={incumbent}, bound={bound})"
        )


class CovarianceModelError(GaitGraphError):
    """Covariance matrix is not positive semidefinite."""


class SchemaError(GaitGraphError):
    """Input file does not match the expected schema."""
