"""Square roots of a graph under a girth lower bound.

The search works on a host ``G`` and decides, for every edge of ``G``,
whether it is an edge of the root ``H`` (IN) or not (OUT).  Three families of
constraints drive propagation:

* non-edges: if ``uv`` is not an edge of ``G`` then ``u`` and ``v`` have no
  common H-neighbour, so an IN edge ``uw`` forces every G-edge ``wx`` with
  ``x`` outside ``N_G[u]`` OUT;
* girth: an IN edge may not close a cycle shorter than the bound, and any
  undecided edge that would do so is forced OUT;
* coverage: every G-edge ``ab`` is an H-edge or has a common H-neighbour
  ``w``.  When only one witness is left it is forced IN; when none is left
  the state is dead.

For a vertex ``v`` with some H-neighbours committed and an OUT edge ``vx``,
the remaining coverage witnesses for ``vx`` are exactly ``L_v(x)``, the
committed H-neighbours of ``v`` that are G-adjacent to ``x``.  Under girth
at least 5 exactly one of them is H-adjacent to ``x``.

Search seeds at a minimum-degree vertex ``r`` by branching over every clique
of ``G[N_G(r)]`` that dominates ``N_G(r)`` as the H-neighbourhood of ``r``,
then branches on the unsatisfied coverage constraint with the fewest
witnesses.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

import numpy as np

from .canon import canonical_form
from .graph import Graph, girth, is_clique, is_connected, iter_bits, natural_key, square

__all__ = [
    "IN",
    "OUT",
    "UNDECIDED",
    "CONTRADICTION",
    "Contradiction",
    "RootSearchState",
    "RootReport",
    "RootList",
    "CliqueCover",
    "verify_root",
    "l_set",
    "propagate",
    "find_square_roots",
    "brute_force_roots",
    "root_to_clique_cover",
    "check_clique_cover",
    "clique_cover_to_root",
    "FOREST",
]

IN, OUT, UNDECIDED = "IN", "OUT", "UNDECIDED"

#: Girth bound meaning "the root must be a forest".
FOREST = math.inf


class Contradiction(Exception):
    """Raised inside propagation; never escapes the public API."""


class _ContradictionType:
    __slots__ = ()

    def __repr__(self):
        return "CONTRADICTION"

    def __bool__(self):
        return False


#: Returned by :func:`propagate` for a dead state.
CONTRADICTION = _ContradictionType()


def _bound(girth_min, n: int) -> int:
    if girth_min is None:
        girth_min = 3
    if girth_min == math.inf:
        return n + 1
    girth_min = int(girth_min)
    if girth_min < 3:
        raise ValueError(f"girth bound must be at least 3, got {girth_min}")
    return girth_min


# --------------------------------------------------------------------------
# verification


@dataclass
class RootReport:
    ok: bool
    missing: list = field(default_factory=list)  # G-edges absent from H^2
    extra: list = field(default_factory=list)  # H^2 edges absent from G
    girth: float = math.inf
    girth_min: float = 3

    def __bool__(self):
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "root verified"
        parts = []
        if self.missing:
            parts.append(f"{len(self.missing)} square edges missing: {self.missing[:10]}")
        if self.extra:
            parts.append(f"{len(self.extra)} extra square edges: {self.extra[:10]}")
        if self.girth < self.girth_min:
            parts.append(f"girth {self.girth} below {self.girth_min}")
        return "; ".join(parts)


def _sorted_pairs(pairs: Iterable) -> list:
    out = [tuple(sorted(p, key=natural_key)) for p in pairs]
    return sorted(out, key=lambda e: (natural_key(e[0]), natural_key(e[1])))


def verify_root(h: Graph, g: Graph, girth_min=3) -> RootReport:
    """Check ``h**2 == g`` and ``girth(h) >= girth_min``, listing every discrepancy."""
    if h.vertices != g.vertices:
        only_h = set(h.vertices) - set(g.vertices)
        only_g = set(g.vertices) - set(h.vertices)
        raise ValueError(f"vertex sets differ: root-only {sorted(only_h)}, square-only {sorted(only_g)}")
    h2 = square(h)
    e2, eg = h2.edge_set(), g.edge_set()
    gh = girth(h)
    missing = _sorted_pairs(eg - e2)
    extra = _sorted_pairs(e2 - eg)
    ok = not missing and not extra and gh >= girth_min
    return RootReport(ok, missing, extra, gh, girth_min)


# --------------------------------------------------------------------------
# search state


class RootSearchState:
    """Partial root hypothesis over the edges of a host graph.

    ``hin[v]`` / ``hout[v]`` are bitmasks of the G-neighbours ``x`` with
    ``vx`` decided IN / OUT; every other G-edge is undecided.  Instances are
    treated as values: the mutating helpers are private to the search, and
    public operations return fresh states.
    """

    __slots__ = ("host", "gm", "hin", "hout", "frontier")

    def __init__(self, host: Graph, hin=None, hout=None, frontier=()):
        self.host = host
        self.gm = host.masks
        n = host.n
        self.hin = list(hin) if hin is not None else [0] * n
        self.hout = list(hout) if hout is not None else [0] * n
        self.frontier = list(frontier)

    def copy(self) -> "RootSearchState":
        return RootSearchState(self.host, self.hin, self.hout, self.frontier)

    # -- name-level views ----------------------------------------------

    def status(self, u, v) -> str:
        i, j = self.host.index(u), self.host.index(v)
        if not self.gm[i] >> j & 1:
            return OUT
        if self.hin[i] >> j & 1:
            return IN
        if self.hout[i] >> j & 1:
            return OUT
        return UNDECIDED

    def decisions(self) -> dict:
        return {frozenset(e): self.status(*e) for e in self.host.edges()}

    def h_neighbors(self, v) -> frozenset:
        names = self.host.vertices
        return frozenset(names[j] for j in iter_bits(self.hin[self.host.index(v)]))

    def committed_edges(self) -> list:
        names = self.host.vertices
        return [
            (names[i], names[j])
            for i, mask in enumerate(self.hin)
            for j in iter_bits(mask)
            if i < j
        ]

    def undecided_count(self) -> int:
        total = 0
        for i, mask in enumerate(self.gm):
            total += (mask & ~self.hin[i] & ~self.hout[i]).bit_count()
        return total // 2

    def to_graph(self) -> Graph:
        return Graph(self.host.vertices, self.committed_edges())

    def commit(self, u, v) -> "RootSearchState":
        """Copy with ``uv`` set IN (no propagation)."""
        s = self.copy()
        i, j = self.host.index(u), self.host.index(v)
        if not self.gm[i] >> j & 1:
            raise ValueError(f"{u}-{v} is not an edge of the host, so it cannot be a root edge")
        if s.hout[i] >> j & 1:
            raise ValueError(f"{u}-{v} already excluded")
        s.hin[i] |= 1 << j
        s.hin[j] |= 1 << i
        s.frontier.append((IN, i, j))
        return s

    def exclude(self, u, v) -> "RootSearchState":
        """Copy with ``uv`` set OUT (no propagation)."""
        s = self.copy()
        i, j = self.host.index(u), self.host.index(v)
        if s.hin[i] >> j & 1:
            raise ValueError(f"{u}-{v} already committed")
        if self.gm[i] >> j & 1:
            s.hout[i] |= 1 << j
            s.hout[j] |= 1 << i
            s.frontier.append((OUT, i, j))
        return s

    def __repr__(self):
        return (
            f"RootSearchState(in={sum(m.bit_count() for m in self.hin) // 2}, "
            f"undecided={self.undecided_count()})"
        )


def l_set(g: Graph, state: RootSearchState, v, x) -> frozenset:
    """Committed H-neighbours of ``v`` that are G-adjacent to ``x``."""
    i, j = g.index(v), g.index(x)
    names = g.vertices
    return frozenset(names[k] for k in iter_bits(state.hin[i] & g.masks[j]))


# --------------------------------------------------------------------------
# propagation


class _Propagator:
    def __init__(self, s: RootSearchState, bound: int):
        self.s = s
        self.gm = s.gm
        self.hin = s.hin
        self.hout = s.hout
        self.bound = bound
        self.events: list = []
        self.coverage: list = []

    # edge assignments push events; rules run in run()

    def set_in(self, i: int, j: int) -> None:
        if self.hin[i] >> j & 1:
            return
        if self.hout[i] >> j & 1 or not self.gm[i] >> j & 1:
            raise Contradiction
        self._check_cycle(i, j)
        self.hin[i] |= 1 << j
        self.hin[j] |= 1 << i
        self.events.append((IN, i, j))

    def set_out(self, i: int, j: int) -> None:
        if self.hout[i] >> j & 1 or not self.gm[i] >> j & 1:
            return
        if self.hin[i] >> j & 1:
            raise Contradiction
        self.hout[i] |= 1 << j
        self.hout[j] |= 1 << i
        self.events.append((OUT, i, j))

    def _layers(self, src: int, depth: int, avoid: int) -> list:
        hin = self.hin
        seen = (1 << src) | (1 << avoid)
        layers = [1 << src]
        frontier = 1 << src
        for _ in range(depth):
            nxt = 0
            for a in iter_bits(frontier):
                nxt |= hin[a]
            nxt &= ~seen
            if not nxt:
                break
            seen |= nxt
            layers.append(nxt)
            frontier = nxt
        return layers

    def _check_cycle(self, i: int, j: int) -> None:
        # a path of length <= bound - 2 from i to j would close a short cycle
        depth = self.bound - 2
        hin = self.hin
        seen = 1 << i
        frontier = 1 << i
        for _ in range(depth):
            nxt = 0
            for a in iter_bits(frontier):
                nxt |= hin[a]
            if nxt >> j & 1:
                raise Contradiction
            nxt &= ~seen
            if not nxt:
                return
            seen |= nxt
            frontier = nxt

    def _after_in(self, i: int, j: int) -> None:
        gm, hin, hout = self.gm, self.hin, self.hout
        # non-edge rule: H-neighbours of j lie in N_G[i] and vice versa
        for a, b in ((i, j), (j, i)):
            allowed = gm[a] | (1 << a)
            if hin[b] & ~allowed:
                raise Contradiction
            for x in iter_bits(gm[b] & ~allowed & ~hout[b]):
                self.set_out(b, x)
        # girth rule
        reach = self.bound - 3
        if reach < 0:
            return
        la = self._layers(i, reach, j)
        lb = self._layers(j, reach, i)
        for da, amask in enumerate(la):
            for db in range(min(len(lb), reach - da + 1)):
                if da == 0 and db == 0:
                    continue
                bmask = lb[db]
                for a in iter_bits(amask):
                    # set_out raises if the edge is already IN
                    for b in iter_bits(gm[a] & bmask & ~hout[a]):
                        self.set_out(a, b)

    def _after_out(self, i: int, j: int) -> None:
        cov = self.coverage
        cov.append((i, j))
        common = self.gm[i] & self.gm[j]
        for w in iter_bits(common):
            cov.append((i, w))
            cov.append((j, w))

    def check_coverage(self, a: int, b: int) -> None:
        gm, hin, hout = self.gm, self.hin, self.hout
        if hin[a] >> b & 1 or hin[a] & hin[b]:
            return
        direct = not (hout[a] >> b & 1)
        paths = gm[a] & ~hout[a] & gm[b] & ~hout[b]
        count = direct + paths.bit_count()
        if count == 0:
            raise Contradiction
        if count == 1:
            if direct:
                self.set_in(a, b)
            else:
                w = paths.bit_length() - 1
                self.set_in(a, w)
                self.set_in(w, b)

    def run(self, pending=(), full=False) -> None:
        for kind, i, j in pending:
            if kind == IN:
                self.events.append((IN, i, j))
            else:
                self.events.append((OUT, i, j))
        if full:
            for a in range(len(self.gm)):
                for b in iter_bits(self.gm[a] >> (a + 1)):
                    self.coverage.append((a, a + 1 + b))
        events, cov = self.events, self.coverage
        while events or cov:
            while events:
                kind, i, j = events.pop()
                if kind == IN:
                    self._after_in(i, j)
                else:
                    self._after_out(i, j)
            if cov:
                a, b = cov.pop()
                self.check_coverage(a, b)


def _validate_committed(s: RootSearchState, bound: int) -> None:
    """Raise if the IN edges alone already violate a hard constraint."""
    committed = Graph(s.host.vertices, s.committed_edges())
    if girth(committed) < bound:
        raise Contradiction
    for i, mask in enumerate(s.hin):
        allowed = s.gm[i] | (1 << i)
        for j in iter_bits(mask):
            if s.hin[j] & ~allowed:
                raise Contradiction


def propagate(state: RootSearchState, girth_min=3):
    """Fixpoint of the propagation rules, or :data:`CONTRADICTION`.

    The input state is not modified.
    """
    s = state.copy()
    bound = _bound(girth_min, s.host.n)
    pending, s.frontier = s.frontier, []
    prop = _Propagator(s, bound)
    try:
        _validate_committed(s, bound)
        prop.run(pending, full=True)
    except Contradiction:
        return CONTRADICTION
    return s


# --------------------------------------------------------------------------
# search


class RootList(list):
    """List of roots with a ``complete`` flag and search statistics."""

    complete: bool = True
    stats: dict

    def __init__(self, items=(), complete=True, stats=None):
        super().__init__(items)
        self.complete = complete
        self.stats = stats or {}


class _LimitReached(Exception):
    pass


class _Search:
    def __init__(self, g: Graph, bound: int, girth_min, limit):
        self.g = g
        self.gm = g.masks
        self.n = g.n
        self.bound = bound
        self.girth_min = girth_min
        self.limit = limit
        self.found: list = []
        self.seen: set = set()
        self.nodes = 0
        self.dead = 0

    def _apply(self, s: RootSearchState, ins=(), outs=()):
        """Copy of ``s`` with decisions applied and propagated, or ``None``."""
        t = RootSearchState(self.g, s.hin, s.hout)
        prop = _Propagator(t, self.bound)
        try:
            for i, j in ins:
                prop.set_in(i, j)
            for i, j in outs:
                prop.set_out(i, j)
            prop.run()
        except Contradiction:
            self.dead += 1
            return None
        return t

    def seeds(self, r: int) -> list:
        """Candidate H-neighbourhoods of ``r``: dominating cliques of ``G[N_G(r)]``."""
        gm = self.gm
        nbrs = gm[r]
        verts = list(iter_bits(nbrs))
        out = []

        def extend(clique: int, cand: int, start: int):
            if clique:
                dom = clique
                for c in iter_bits(clique):
                    dom |= gm[c]
                if nbrs & ~dom == 0:
                    out.append(clique)
            for k in range(start, len(verts)):
                v = verts[k]
                if cand >> v & 1:
                    extend(clique | (1 << v), cand & gm[v], k + 1)

        extend(0, nbrs, 0)
        return out

    def choose(self, s: RootSearchState):
        """Edge to branch on, or ``None`` when every coverage constraint holds."""
        gm, hin, hout = self.gm, s.hin, s.hout
        best = None
        best_count = None
        for a in range(self.n):
            for b in iter_bits(gm[a] >> (a + 1)):
                b += a + 1
                if hin[a] >> b & 1 or hin[a] & hin[b]:
                    continue
                direct = not (hout[a] >> b & 1)
                paths = gm[a] & ~hout[a] & gm[b] & ~hout[b]
                count = direct + paths.bit_count()
                if best_count is None or count < best_count:
                    best_count = count
                    best = (a, b, direct, paths)
                    if count <= 2:
                        break
            if best_count is not None and best_count <= 2:
                break
        if best is None:
            return None
        a, b, direct, paths = best
        # prefer a witness already half committed (an L-set member)
        for w in iter_bits(paths):
            if hin[a] >> w & 1:
                return (w, b)
            if hin[b] >> w & 1:
                return (a, w)
        if direct:
            return (a, b)
        w = paths & -paths
        w = w.bit_length() - 1
        return (a, w)

    def first_undecided(self, s: RootSearchState):
        for a in range(self.n):
            free = self.gm[a] & ~s.hin[a] & ~s.hout[a]
            free >>= a + 1
            if free:
                return (a, a + 1 + ((free & -free).bit_length() - 1))
        return None

    def leaf(self, s: RootSearchState) -> None:
        h = s.to_graph()
        key = h.edge_set()
        if key in self.seen:
            return
        report = verify_root(h, self.g, self.girth_min)
        if report.ok:
            self.seen.add(key)
            self.found.append(h)
            if self.limit is not None and len(self.found) >= self.limit:
                raise _LimitReached

    def dfs(self, root: RootSearchState) -> None:
        stack = [root]
        while stack:
            s = stack.pop()
            self.nodes += 1
            edge = self.choose(s)
            if edge is None:
                edge = self.first_undecided(s)
                if edge is None:
                    self.leaf(s)
                    continue
            i, j = edge
            # explore IN before OUT
            t = self._apply(s, outs=[(i, j)])
            if t is not None:
                stack.append(t)
            t = self._apply(s, ins=[(i, j)])
            if t is not None:
                stack.append(t)

    def run(self) -> None:
        start = RootSearchState(self.g)
        prop = _Propagator(start, self.bound)
        try:
            prop.run(full=True)
        except Contradiction:
            return
        if self.n == 1:
            self.leaf(start)
            return
        r = min(range(self.n), key=lambda v: (self.gm[v].bit_count(), natural_key(self.g.vertices[v])))
        for clique in self.seeds(r):
            ins = [(r, c) for c in iter_bits(clique)]
            outs = [(r, c) for c in iter_bits(self.gm[r] & ~clique)]
            t = self._apply(start, ins, outs)
            if t is not None:
                self.dfs(t)


def _root_order(h: Graph):
    return [(natural_key(u), natural_key(v)) for u, v in h.edges()]


def find_square_roots(
    g: Graph,
    girth_min=3,
    limit: int | None = None,
    up_to_iso: bool = False,
    dedup: bool = True,
) -> RootList:
    """All square roots of connected ``g`` with girth at least ``girth_min``.

    ``girth_min`` may be :data:`FOREST` (``math.inf``).  With ``limit`` the
    search stops after that many labeled roots and the result is flagged
    incomplete.  ``up_to_iso`` keeps the first root of each isomorphism
    class.  Labeled roots are never produced twice, so ``dedup`` only
    matters as a safety net.
    """
    if not is_connected(g):
        raise ValueError("host graph is disconnected; solve each component separately")
    bound = _bound(girth_min, g.n)
    search = _Search(g, bound, girth_min if girth_min is not None else 3, limit)
    started = time.perf_counter()
    complete = True
    try:
        search.run()
    except _LimitReached:
        complete = False
    roots = sorted(search.found, key=_root_order)
    if up_to_iso:
        forms, unique = set(), []
        for h in roots:
            form = canonical_form(h)
            if form not in forms:
                forms.add(form)
                unique.append(h)
        roots = unique
    stats = {
        "nodes": search.nodes,
        "dead_ends": search.dead,
        "labeled_roots": len(search.found),
        "seconds": round(time.perf_counter() - started, 3),
    }
    return RootList(roots, complete, stats)


# --------------------------------------------------------------------------
# brute force oracle

BRUTE_FORCE_MAX_EDGES = 20


def brute_force_roots(g: Graph, girth_min=3) -> list:
    """Every subset of ``E(G)`` whose square is ``G``, filtered by girth.

    Squares of all ``2**m`` subsets are computed at once with numpy bit
    arithmetic; surviving subsets are then checked with :func:`verify_root`.
    """
    edges = g.edges()
    m = len(edges)
    if m > BRUTE_FORCE_MAX_EDGES:
        raise ValueError(f"brute force limited to {BRUTE_FORCE_MAX_EDGES} edges, host has {m}")
    n = g.n
    if n > 63:
        raise ValueError("brute force supports at most 63 vertices")
    idx = [(g.index(u), g.index(v)) for u, v in edges]
    target = np.array(g.masks, dtype=np.uint64)
    survivors = []
    chunk = 1 << min(m, 18)
    for lo in range(0, 1 << m, chunk):
        subsets = np.arange(lo, lo + chunk, dtype=np.uint64)
        adj = np.zeros((n, chunk), dtype=np.uint64)
        bits = []
        for e, (i, j) in enumerate(idx):
            bit = (subsets >> np.uint64(e)) & np.uint64(1)
            bits.append(bit)
            adj[i] |= bit << np.uint64(j)
            adj[j] |= bit << np.uint64(i)
        ok = np.ones(chunk, dtype=bool)
        for v in range(n):
            sq = adj[v].copy()
            for e, (i, j) in enumerate(idx):
                if i == v:
                    sq |= np.where(bits[e] == 1, adj[j], np.uint64(0))
                elif j == v:
                    sq |= np.where(bits[e] == 1, adj[i], np.uint64(0))
            sq &= ~np.uint64(1 << v)
            ok &= sq == target[v]
        survivors.extend(int(s) for s in subsets[ok])
    roots = []
    for subset in survivors:
        h = Graph(g.vertices, [edges[e] for e in range(m) if subset >> e & 1])
        if verify_root(h, g, girth_min).ok:
            roots.append(h)
    return sorted(roots, key=_root_order)


# --------------------------------------------------------------------------
# clique covers


@dataclass(frozen=True)
class CliqueCover:
    """One clique per vertex: ``cliques[v]`` contains ``v``."""

    cliques: dict

    def __getitem__(self, v):
        return self.cliques[v]


def root_to_clique_cover(h: Graph) -> CliqueCover:
    return CliqueCover({v: h.closed_neighborhood(v) for v in h.vertices})


def check_clique_cover(g: Graph, cover: CliqueCover, explain: bool = False):
    """Validate the per-vertex clique conditions for ``g`` being a square.

    Conditions: (1) ``v`` in ``G_v``; (2) ``v`` in ``G_u`` iff ``u`` in
    ``G_v``; (3) every edge of ``g`` lies inside some ``G_v``; plus each
    ``G_v`` is a clique of ``g``.  With ``explain=True`` returns
    ``(ok, reason)``.
    """

    def result(ok, reason=""):
        return (ok, reason) if explain else ok

    c = {str(v): frozenset(map(str, s)) for v, s in cover.cliques.items()}
    if set(c) != set(g.vertices):
        return result(False, "cover does not list exactly the host's vertices")
    for v in g.vertices:
        if v not in c[v]:
            return result(False, f"condition 1 violated: {v} not in its own clique")
        unknown = c[v] - set(g.vertices)
        if unknown:
            return result(False, f"clique of {v} has unknown vertices {sorted(unknown)}")
    for v in g.vertices:
        for u in c[v]:
            if v not in c[u]:
                return result(False, f"condition 2 violated: {u} in G_{v} but {v} not in G_{u}")
    for v in g.vertices:
        if not is_clique(g, c[v]):
            return result(False, f"G_{v} is not a clique of the host")
    covered = set()
    for v in g.vertices:
        covered.update(frozenset(p) for p in combinations(sorted(c[v]), 2))
    missing = g.edge_set() - covered
    if missing:
        first = sorted(tuple(sorted(e)) for e in missing)[0]
        return result(False, f"condition 3 violated: edge {first} not covered")
    return result(True)


def clique_cover_to_root(cover: CliqueCover) -> Graph:
    """The graph ``u ~ v`` iff ``u`` in ``G_v``, ``u != v``."""
    edges = [(v, u) for v, s in cover.cliques.items() for u in s if u != v]
    return Graph(cover.cliques, edges)
