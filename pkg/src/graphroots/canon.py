"""Exact canonical labeling and isomorphism testing.

Individualization-refinement: refine an ordered partition to an equitable
one, individualize each vertex of the first non-singleton cell in turn and
recurse.  Every discrete leaf yields a labeling; the canonical labeling is the
one whose relabeled edge list is lexicographically smallest.  Leaves that
reproduce the current best certificate give automorphisms, which prune
sibling branches lying in the same orbit of the pointwise stabilizer of the
current prefix.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import Graph, iter_bits

__all__ = ["CanonicalForm", "canonical_form", "are_isomorphic", "isomorphism"]


@dataclass(frozen=True)
class CanonicalForm:
    """Relabeling-invariant fingerprint.

    Equality and hashing use only ``n`` and ``edges``; ``mapping`` is the
    certificate sending original vertex names to canonical indices.
    """

    n: int
    edges: tuple
    mapping: dict = field(compare=False, hash=False, repr=False)

    def check(self, g: Graph) -> bool:
        relabeled = sorted(
            tuple(sorted((self.mapping[u], self.mapping[v]))) for u, v in g.edges()
        )
        return tuple(relabeled) == self.edges


def _refine(masks: list, cells: list) -> list:
    """Refine an ordered partition (list of lists) until equitable.

    New cells are ordered by (old cell, neighbour-count signature), which
    depends only on isomorphism-invariant data.
    """
    while True:
        cell_of = {}
        cell_masks = []
        for ci, cell in enumerate(cells):
            cm = 0
            for v in cell:
                cell_of[v] = ci
                cm |= 1 << v
            cell_masks.append(cm)
        new_cells = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            groups: dict = {}
            for v in cell:
                sig = tuple((masks[v] & cm).bit_count() for cm in cell_masks)
                groups.setdefault(sig, []).append(v)
            if len(groups) > 1:
                changed = True
                for sig in sorted(groups):
                    new_cells.append(groups[sig])
            else:
                new_cells.append(cell)
        cells = new_cells
        if not changed:
            return cells


def _individualize(cells: list, ci: int, v: int) -> list:
    cell = cells[ci]
    rest = [u for u in cell if u != v]
    return cells[:ci] + [[v], rest] + cells[ci + 1 :]


class _Search:
    def __init__(self, masks: list):
        self.masks = masks
        self.n = len(masks)
        self.best_cert = None
        self.best_perm = None
        self.generators: list = []

    def certificate(self, order: list) -> tuple:
        pos = [0] * self.n
        for k, v in enumerate(order):
            pos[v] = k
        edges = []
        for u in range(self.n):
            for w in iter_bits(self.masks[u]):
                a, b = pos[u], pos[w]
                if a < b:
                    edges.append((a, b))
        edges.sort()
        return tuple(edges), pos

    def run(self, cells: list, prefix: tuple) -> None:
        cells = _refine(self.masks, cells)
        target = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if target is None:
            order = [c[0] for c in cells]
            cert, pos = self.certificate(order)
            if self.best_cert is None or cert < self.best_cert:
                self.best_cert, self.best_perm = cert, pos
            elif cert == self.best_cert:
                # pos_best^-1 . pos maps this leaf's vertex to the best leaf's vertex
                inv = [0] * self.n
                for v, p in enumerate(self.best_perm):
                    inv[p] = v
                gamma = tuple(inv[pos[v]] for v in range(self.n))
                if any(gamma[v] != v for v in range(self.n)):
                    self.generators.append(gamma)
            return
        done: list = []
        for v in sorted(cells[target]):
            if any(self._same_orbit(prefix, v, u) for u in done):
                continue
            self.run(_individualize(cells, target, v), prefix + (v,))
            done.append(v)

    def _same_orbit(self, prefix: tuple, v: int, u: int) -> bool:
        gens = [g for g in self.generators if all(g[p] == p for p in prefix)]
        if not gens:
            return False
        parent = list(range(self.n))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for g in gens:
            for a in range(self.n):
                ra, rb = find(a), find(g[a])
                if ra != rb:
                    parent[ra] = rb
        return find(v) == find(u)


def canonical_form(g: Graph) -> CanonicalForm:
    """Exact canonical form: equal forms iff the graphs are isomorphic."""
    masks = list(g.masks)
    if not masks:
        return CanonicalForm(0, (), {})
    by_degree: dict = {}
    for v, mask in enumerate(masks):
        by_degree.setdefault(mask.bit_count(), []).append(v)
    cells = [by_degree[d] for d in sorted(by_degree)]
    search = _Search(masks)
    search.run(cells, ())
    mapping = {g.vertices[v]: p for v, p in enumerate(search.best_perm)}
    return CanonicalForm(len(masks), search.best_cert, mapping)


def isomorphism(g1: Graph, g2: Graph) -> dict | None:
    """An explicit edge-preserving bijection ``g1 -> g2``, or ``None``."""
    c1, c2 = canonical_form(g1), canonical_form(g2)
    if c1 != c2:
        return None
    back = {p: v for v, p in c2.mapping.items()}
    f = {v: back[p] for v, p in c1.mapping.items()}
    if g1.m != g2.m or any(not g2.has_edge(f[u], f[v]) for u, v in g1.edges()):
        raise AssertionError("canonical forms agree but the bijection is not an isomorphism")
    return f


def are_isomorphic(g1: Graph, g2: Graph, witness: bool = False):
    """``True``/``False``; with ``witness=True`` return ``(flag, bijection)``."""
    if witness:
        f = isomorphism(g1, g2)
        return f is not None, f
    if g1.n != g2.n or g1.m != g2.m:
        return False
    return canonical_form(g1) == canonical_form(g2)
