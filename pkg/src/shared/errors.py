from typing import Optional


class HypergraphError(Exception):
    """Base class for every error raised by the toolkit."""


class NodeOutOfRange(HypergraphError, ValueError):
    def __init__(self, node: int, num_nodes: int, edge_index: Optional[int] = None):
        self.node = node
        self.num_nodes = num_nodes
        self.edge_index = edge_index
        where = f" in edge {edge_index}" if edge_index is not None else ""
        super().__init__(f"Node id {node}{where} is outside [0, {num_nodes})")


class EmptyEdge(HypergraphError, ValueError):
    def __init__(self, edge_index: int):
        self.edge_index = edge_index
        super().__init__(f"Edge {edge_index} has no nodes")


class InvalidLevelCount(HypergraphError, ValueError):
    def __init__(self, levels: int, num_nodes: int):
        self.levels = levels
        self.num_nodes = num_nodes
        super().__init__(
            f"Level count {levels} is invalid for {num_nodes} nodes "
            f"(need 1 <= L <= floor(log2 |V|))"
        )


class ParseError(HypergraphError):
    def __init__(self, message: str, line_number: int, path: Optional[str] = None):
        self.line_number = line_number
        self.path = path
        location = f"{path}:{line_number}" if path else f"line {line_number}"
        super().__init__(f"{location}: {message}")


class EmptyDataset(HypergraphError):
    pass


class DatasetIOError(HypergraphError, OSError):
    pass


class EmptyInput(HypergraphError, ValueError):
    pass


class CapacityExceeded(HypergraphError):
    def __init__(self, required: int, capacity: int, what: str = "node pairs"):
        self.required = required
        self.capacity = capacity
        super().__init__(f"Enumerating {required:,} {what} exceeds the capacity of {capacity:,}")


class MissingPair(HypergraphError):
    def __init__(self, u: int, v: int):
        self.pair = (u, v)
        super().__init__(f"Pair ({u}, {v}) is missing from the pair-degree table")


class DegenerateDenominator(HypergraphError):
    pass


class InsufficientTail(HypergraphError, ValueError):
    def __init__(self, n_tail: int, required: int):
        self.n_tail = n_tail
        self.required = required
        super().__init__(f"Only {n_tail} values above xmin; at least {required} are required")


class DegenerateData(HypergraphError, ValueError):
    pass


class InfeasibleSize(HypergraphError, ValueError):
    def __init__(self, size: int, available: int):
        self.size = size
        self.available = available
        super().__init__(
            f"Hyperedge size {size} exceeds the {available} positive-degree nodes available"
        )


class NonConvergence(HypergraphError):
    def __init__(self, size: int, draws: int):
        self.size = size
        self.draws = draws
        super().__init__(
            f"Could not draw {size} distinct nodes within {draws} draws; "
            f"weight mass is concentrated on too few nodes"
        )


class InvalidWeights(HypergraphError, ValueError):
    pass


class NoEligibleEdges(HypergraphError):
    def __init__(self, level: int):
        self.level = level
        super().__init__(f"No edges at level {level - 1} are eligible for level {level}")
