"""Simple undirected graphs with stable string vertex names.

A :class:`Graph` is immutable.  Vertex names are mapped to dense indices
internally and adjacency is stored as one integer bitmask per vertex, which
keeps powers, BFS and clique enumeration cheap at desk scale.
"""

from __future__ import annotations

import math
import re
from collections import deque
from itertools import combinations
from typing import Iterable, Iterator, Mapping

__all__ = [
    "Graph",
    "UNREACHABLE",
    "natural_key",
    "kth_power",
    "square",
    "distance",
    "all_pairs_distances",
    "girth",
    "maximal_cliques",
    "connected_components",
    "is_connected",
    "disjoint_union",
    "iter_bits",
]

#: Distance between vertices in different components.
UNREACHABLE = math.inf

_DIGITS = re.compile(r"(\d+)")


def natural_key(name: str) -> tuple:
    """Sort key that orders ``"b1:2" < "b1:10"``."""
    parts = _DIGITS.split(name)
    return tuple((0, int(p), "") if p.isdigit() else (1, 0, p) for p in parts)


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Graph:
    """Immutable simple undirected graph.

    Vertices are strings; anything else passed in is converted with ``str``.
    Vertices are kept in natural sort order, so ``vertices``, ``edges`` and
    every derived listing are deterministic.

    >>> g = Graph(edges=[(1, 2), (2, 3)])
    >>> g.vertices
    ('1', '2', '3')
    >>> g.has_edge("3", "2")
    True
    """

    __slots__ = ("_names", "_index", "_masks", "_hash")

    def __init__(self, vertices: Iterable = (), edges: Iterable = ()):
        edges = [(str(u), str(v)) for u, v in edges]
        names = {str(v) for v in vertices}
        for u, v in edges:
            names.add(u)
            names.add(v)
        self._names = tuple(sorted(names, key=natural_key))
        self._index = {name: i for i, name in enumerate(self._names)}
        masks = [0] * len(self._names)
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u!r}")
            i, j = self._index[u], self._index[v]
            masks[i] |= 1 << j
            masks[j] |= 1 << i
        self._masks = tuple(masks)
        self._hash = None

    @classmethod
    def _from_masks(cls, names: tuple, masks: Iterable[int]) -> "Graph":
        g = cls.__new__(cls)
        g._names = names
        g._index = {name: i for i, name in enumerate(names)}
        g._masks = tuple(masks)
        g._hash = None
        return g

    # -- basic queries -------------------------------------------------

    @property
    def vertices(self) -> tuple:
        return self._names

    @property
    def masks(self) -> tuple:
        """Adjacency bitmasks, indexed like :attr:`vertices`."""
        return self._masks

    def index(self, v) -> int:
        try:
            return self._index[str(v)]
        except KeyError:
            raise KeyError(f"unknown vertex {v!r}") from None

    def __contains__(self, v) -> bool:
        return str(v) in self._index

    def __len__(self) -> int:
        return len(self._names)

    @property
    def n(self) -> int:
        return len(self._names)

    @property
    def m(self) -> int:
        return sum(mask.bit_count() for mask in self._masks) // 2

    def edges(self) -> list:
        """Edges as ``(u, v)`` name pairs with ``u`` before ``v`` in vertex order."""
        out = []
        names = self._names
        for i, mask in enumerate(self._masks):
            for j in iter_bits(mask >> (i + 1)):
                out.append((names[i], names[i + 1 + j]))
        return out

    def edge_set(self) -> frozenset:
        return frozenset(frozenset(e) for e in self.edges())

    def neighbors(self, v) -> frozenset:
        return frozenset(self._names[j] for j in iter_bits(self._masks[self.index(v)]))

    def closed_neighborhood(self, v) -> frozenset:
        return self.neighbors(v) | {str(v)}

    def degree(self, v) -> int:
        return self._masks[self.index(v)].bit_count()

    def min_degree(self) -> int:
        return min((mask.bit_count() for mask in self._masks), default=0)

    def has_edge(self, u, v) -> bool:
        return bool(self._masks[self.index(u)] >> self.index(v) & 1)

    # -- derived graphs ------------------------------------------------

    def subgraph(self, vertices: Iterable) -> "Graph":
        """Induced subgraph."""
        keep = {str(v) for v in vertices}
        for v in keep:
            self.index(v)
        names = tuple(v for v in self._names if v in keep)
        pos = {self._index[v]: k for k, v in enumerate(names)}
        masks = []
        for v in names:
            mask = 0
            for j in iter_bits(self._masks[self._index[v]]):
                if j in pos:
                    mask |= 1 << pos[j]
            masks.append(mask)
        return Graph._from_masks(names, masks)

    def relabel(self, mapping: Mapping) -> "Graph":
        """Rename vertices; names missing from ``mapping`` are kept."""
        new = {v: str(mapping.get(v, v)) for v in self._names}
        if len(set(new.values())) != len(new):
            raise ValueError("relabeling is not injective")
        return Graph(new.values(), ((new[u], new[v]) for u, v in self.edges()))

    def add_edges(self, edges: Iterable) -> "Graph":
        return Graph(self._names, list(self.edges()) + [tuple(e) for e in edges])

    # -- dunder --------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._names == other._names and self._masks == other._masks

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._names, self._masks))
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def disjoint_union(*graphs: Graph) -> Graph:
    vertices, edges = [], []
    for g in graphs:
        vertices.extend(g.vertices)
        edges.extend(g.edges())
    if len(set(vertices)) != len(vertices):
        raise ValueError("graphs share vertex names")
    return Graph(vertices, edges)


def _reach_masks(masks: tuple, k: int) -> list:
    out = []
    for i, mask in enumerate(masks):
        reach = mask | (1 << i)
        frontier = mask
        for _ in range(k - 1):
            new = 0
            for j in iter_bits(frontier):
                new |= masks[j]
            frontier = new & ~reach
            if not frontier:
                break
            reach |= frontier
        out.append(reach & ~(1 << i))
    return out


def kth_power(g: Graph, k: int) -> Graph:
    """Join every pair at distance ``1..k``.

    >>> kth_power(Graph(edges=[("a", "b"), ("b", "c")]), 2).edges()
    [('a', 'b'), ('a', 'c'), ('b', 'c')]
    """
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"power must be a positive integer, got {k!r}")
    if k == 1:
        return g
    return Graph._from_masks(g.vertices, _reach_masks(g.masks, k))


def square(g: Graph) -> Graph:
    return kth_power(g, 2)


def _bfs(masks: tuple, source: int) -> list:
    dist = [None] * len(masks)
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in iter_bits(masks[u]):
            if dist[w] is None:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def distance(g: Graph, u, v):
    """Shortest-path length, or :data:`UNREACHABLE`."""
    i, j = g.index(u), g.index(v)
    d = _bfs(g.masks, i)[j]
    return UNREACHABLE if d is None else d


def all_pairs_distances(g: Graph) -> dict:
    out = {}
    for i, name in enumerate(g.vertices):
        dist = _bfs(g.masks, i)
        out[name] = {
            other: (UNREACHABLE if d is None else d)
            for other, d in zip(g.vertices, dist)
        }
    return out


def girth(g: Graph):
    """Length of a shortest cycle, ``math.inf`` for forests.

    One BFS per root; a non-tree edge ``(u, w)`` met during the search from
    ``r`` closes a closed walk of length ``d(u) + d(w) + 1`` through ``r``,
    and the minimum over all roots is exactly the girth.
    """
    masks = g.masks
    best = math.inf
    for root in range(len(masks)):
        dist = [-1] * len(masks)
        parent = [-1] * len(masks)
        dist[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] + 1 >= best:
                break
            for w in iter_bits(masks[u]):
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif w != parent[u]:
                    best = min(best, dist[u] + dist[w] + 1)
    return best


def connected_components(g: Graph) -> list:
    """Vertex sets of the components, ordered by their first vertex."""
    seen = 0
    comps = []
    for i in range(g.n):
        if seen >> i & 1:
            continue
        comp = 1 << i
        frontier = comp
        while frontier:
            new = 0
            for j in iter_bits(frontier):
                new |= g.masks[j]
            frontier = new & ~comp
            comp |= frontier
        seen |= comp
        comps.append(frozenset(g.vertices[j] for j in iter_bits(comp)))
    return comps


def is_connected(g: Graph) -> bool:
    return len(connected_components(g)) <= 1


def _bron_kerbosch(masks, r, p, x, out):
    if not p and not x:
        out.append(r)
        return
    # pivot on the vertex of P | X with most neighbours in P
    pivot = max(iter_bits(p | x), key=lambda u: (masks[u] & p).bit_count())
    for v in iter_bits(p & ~masks[pivot]):
        _bron_kerbosch(masks, r | (1 << v), p & masks[v], x & masks[v], out)
        p &= ~(1 << v)
        x |= 1 << v


def clique_masks(masks: tuple, within: int | None = None) -> list:
    """Maximal cliques of the graph induced on ``within`` as bitmasks."""
    if within is None:
        within = (1 << len(masks)) - 1
    out: list = []
    if within:
        restricted = [m & within for m in masks]
        _bron_kerbosch(restricted, 0, within, 0, out)
    return out


def maximal_cliques(g: Graph, within: Iterable | None = None) -> list:
    """Inclusion-maximal cliques as sorted tuples, in sorted order.

    ``within`` restricts the enumeration to an induced subgraph.
    """
    sel = None
    if within is not None:
        sel = 0
        for v in within:
            sel |= 1 << g.index(v)
    cliques = [tuple(g.vertices[i] for i in iter_bits(c)) for c in clique_masks(g.masks, sel)]
    return sorted(cliques, key=lambda c: [natural_key(v) for v in c])


def is_clique(g: Graph, vertices: Iterable) -> bool:
    return all(g.has_edge(u, v) for u, v in combinations(list(vertices), 2))
