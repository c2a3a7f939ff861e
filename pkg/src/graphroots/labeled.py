from __future__ import annotations

from dataclasses import dataclass, field

from .graph import Graph


@dataclass(frozen=True)
class LabeledGraph:
    """A graph whose vertices carry role records (plain dicts).

    ``summary`` holds builder bookkeeping such as edge-class counts.
    """

    graph: Graph
    labels: dict
    summary: dict = field(default_factory=dict, compare=False)

    def vertices_with(self, **match) -> list:
        return [
            v
            for v in self.graph.vertices
            if all(self.labels[v].get(k) == val for k, val in match.items())
        ]
