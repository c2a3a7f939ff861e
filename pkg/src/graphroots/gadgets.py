"""The two 16-vertex girth-5 gadgets, their common square and chain families.

``G1`` and ``G2`` are non-isomorphic, have girth 5 and minimum degree 2, and
have identical squares.  ``G1`` encodes FALSE and ``G2`` encodes TRUE in the
SAT reduction.  Vertices 1, 12 and 14 have the same neighbourhood in both
gadgets, so gadgets glued at those vertices can be swapped independently
without changing the square.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Sequence

from .canon import canonical_form
from .graph import Graph, girth, square
from .labeled import LabeledGraph

__all__ = [
    "GadgetKind",
    "BlockGraph",
    "G1_EDGES",
    "G2_EDGES",
    "ATTACH_POINTS",
    "gadget_g1",
    "gadget_g2",
    "gadget",
    "gadget_square",
    "chain_family",
    "chain_patterns",
    "family_root_count",
    "RootMismatchError",
]


class GadgetKind(enum.Enum):
    G1 = "G1"  # FALSE
    G2 = "G2"  # TRUE

    @property
    def truth(self) -> bool:
        return self is GadgetKind.G2

    @classmethod
    def from_truth(cls, value: bool) -> "GadgetKind":
        return cls.G2 if value else cls.G1

    @classmethod
    def parse(cls, token) -> "GadgetKind":
        if isinstance(token, cls):
            return token
        token = str(token).upper()
        if token in ("1", "G1", "F", "FALSE"):
            return cls.G1
        if token in ("2", "G2", "T", "TRUE"):
            return cls.G2
        raise ValueError(f"not a gadget kind: {token!r}")

    def flipped(self) -> "GadgetKind":
        return GadgetKind.G2 if self is GadgetKind.G1 else GadgetKind.G1


# Edge tables checked at load time by _checked_tables.  Note G1 has
# N(7) = {1, 13}, and G2 has N(2) = {8, 12, 16} and N(3) = {9, 12, 15}.
G1_EDGES = (
    (1, 7), (1, 11), (1, 12), (2, 8), (2, 12), (2, 15), (3, 9), (3, 12),
    (3, 16), (4, 10), (4, 14), (4, 15), (5, 11), (5, 13), (5, 15), (6, 13),
    (6, 14), (7, 13), (8, 14), (8, 16), (9, 15), (10, 16), (11, 14), (13, 16),
)
G2_EDGES = (
    (1, 7), (1, 11), (1, 12), (2, 8), (2, 12), (2, 16), (3, 9), (3, 12),
    (3, 15), (4, 10), (4, 14), (4, 16), (5, 6), (5, 7), (5, 13), (5, 16),
    (6, 14), (8, 14), (8, 15), (9, 16), (10, 15), (11, 13), (11, 14), (13, 15),
)

#: Local vertices whose neighbourhoods agree in G1 and G2.
ATTACH_POINTS = ("1", "12", "14")

LOCAL_VERTICES = tuple(str(i) for i in range(1, 17))


@dataclass(frozen=True)
class BlockGraph:
    graph: Graph
    kind: GadgetKind


def _build(edges) -> Graph:
    return Graph(LOCAL_VERTICES, edges)


@lru_cache(maxsize=None)
def _checked_tables() -> tuple:
    g1, g2 = _build(G1_EDGES), _build(G2_EDGES)
    for name, g in (("G1", g1), ("G2", g2)):
        if (g.n, g.m, girth(g), g.min_degree()) != (16, 24, 5, 2):
            raise AssertionError(f"corrupted gadget table {name}")
    sq1, sq2 = square(g1), square(g2)
    if sq1 != sq2:
        diff = sq1.edge_set() ^ sq2.edge_set()
        raise AssertionError(f"gadget squares differ on {sorted(map(sorted, diff))}")
    shared = [v for v in LOCAL_VERTICES if g1.neighbors(v) == g2.neighbors(v)]
    if tuple(shared) != ATTACH_POINTS:
        raise AssertionError(f"unexpected shared neighbourhoods at {shared}")
    return g1, g2, sq1


def gadget_g1() -> BlockGraph:
    return BlockGraph(_checked_tables()[0], GadgetKind.G1)


def gadget_g2() -> BlockGraph:
    return BlockGraph(_checked_tables()[1], GadgetKind.G2)


def gadget(kind) -> BlockGraph:
    kind = GadgetKind.parse(kind)
    return gadget_g2() if kind is GadgetKind.G2 else gadget_g1()


def gadget_square() -> Graph:
    """The common square of G1 and G2 (16 vertices, 76 edges)."""
    return _checked_tables()[2]


def chain_family(pattern: Sequence, attach_points: Sequence = ()) -> LabeledGraph:
    """Glue ``len(pattern)`` gadgets in a row.

    Block ``t+1`` is glued to block ``t`` by identifying their copies of
    local vertex ``attach_points[t]``.  Block vertices are named
    ``b<t>:<local>`` (blocks numbered from 1); an identified vertex keeps the
    name from the lower block.
    """
    kinds = [GadgetKind.parse(p) for p in pattern]
    attach = [str(a) for a in attach_points]
    if not kinds:
        raise ValueError("empty pattern")
    if len(attach) != len(kinds) - 1:
        raise ValueError(
            f"{len(kinds)} blocks need {len(kinds) - 1} attach points, got {len(attach)}"
        )
    for a in attach:
        if a not in ATTACH_POINTS:
            raise ValueError(f"attach point {a!r} not in {{1, 12, 14}}")

    names: list = []  # per block: local -> global name
    labels: dict = {}
    for t, kind in enumerate(kinds, 1):
        local = {v: f"b{t}:{v}" for v in LOCAL_VERTICES}
        if t > 1:
            a = attach[t - 2]
            local[a] = names[-1][a]
        names.append(local)
        for v, name in local.items():
            labels.setdefault(name, {"role": "block", "block": t, "local": int(v), "kind": kind.value})
    edges = []
    for local, kind in zip(names, kinds):
        edges += [(local[u], local[v]) for u, v in gadget(kind).graph.edges()]
    g = Graph(labels, edges)
    return LabeledGraph(g, labels, {"pattern": "".join(k.value[1] for k in kinds), "attach": attach})


def chain_patterns(k: int) -> list:
    """All ``2**k`` kind patterns in lexicographic order (G1 before G2)."""
    return [list(p) for p in product((GadgetKind.G1, GadgetKind.G2), repeat=k)]


class RootMismatchError(ValueError):
    pass


def family_root_count(sq: Graph, candidates: Sequence[Graph]) -> int:
    """Number of isomorphism classes among candidates, all of which must square to ``sq``."""
    forms = set()
    for idx, h in enumerate(candidates):
        h2 = square(h)
        if h2 != sq:
            if h2.vertices != sq.vertices:
                raise RootMismatchError(f"candidate {idx}: vertex set differs from the square's")
            diff = sorted(tuple(sorted(e)) for e in h2.edge_set() ^ sq.edge_set())
            raise RootMismatchError(f"candidate {idx}: square differs, e.g. on edge {diff[0]}")
        forms.add(canonical_form(h))
    return len(forms)
