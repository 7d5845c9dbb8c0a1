"""hyperlap: hyperedge overlap analysis and realistic hypergraph generation."""

__version__ = "0.1.0"
