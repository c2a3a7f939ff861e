"""Reduction from positive minimum-intersecting 1-in-3 SAT to girth-5 square roots.

Each occurrence ("copy") of a variable in a clause becomes a 16-vertex block
inducing the common gadget square; its root is ``G2`` when the variable is
TRUE and ``G1`` when it is FALSE.  Every clause adds four vertices
``y1..y4`` that, in the root, form a Petersen graph with vertices 5 and 13 of
its three blocks.  Linked copies of one variable get a vertex pair ``v, w``
closing a 6-cycle through vertices 5 and 13 of both blocks.

Vertex names::

    <var>@<clause>:<local>      block vertex, e.g. ``x@1:5``
    c<clause>:y<k>              clause vertex, e.g. ``c1:y3``
    v[<var>@<i>~<j>]            link vertices of copies i < j
    w[<var>@<i>~<j>]

Terminology used below: in a block, the *A side* is ``{11, 15}`` (the open
neighbourhood of 5 in G1, of 13 in G2, minus the 5-13 edge) and the *B side*
is ``{6, 7, 16}``.
"""

from __future__ import annotations

import enum
from collections import Counter
from itertools import combinations, product

from .canon import are_isomorphic
from .gadgets import GadgetKind, gadget, gadget_square
from .graph import Graph, connected_components, disjoint_union, girth, square
from .labeled import LabeledGraph
from .roots import find_square_roots, verify_root
from .sat import SatInstance, intersection_violations, violated_clause

__all__ = [
    "LinkingPolicy",
    "ReductionError",
    "RootDecodeError",
    "SLOTS",
    "build_reduction_graph",
    "assignment_to_root",
    "root_to_assignment",
    "linked_pairs",
    "expected_counts",
    "forward_consistency",
    "solve_reduction",
    "clause_gadget_root",
    "copy_gadget_square",
    "copy_gadget_root",
    "block_name",
    "clause_name",
    "link_names",
    "PETERSEN_WIRING",
    "SLOT_SIDES",
]

SLOTS = ("x", "y", "z")

A_SIDE = ("11", "15")
B_SIDE = ("6", "7", "16")

#: Side of each slot's block that clause vertex ``y_k`` sees in the square.
#: Every row follows from squaring the Petersen wiring below (a row with B
#: for slot y at ``y4`` leaves the clause square without any girth-5 root).
SLOT_SIDES = {
    1: ("A", "B", "A"),
    2: ("B", "A", "A"),
    3: ("B", "B", "B"),
    4: ("A", "A", "B"),
}

#: ``PETERSEN_WIRING[true slot][k]`` gives, per slot, whether ``y_k`` is
#: H-adjacent to local vertex 5 or 13 of that slot's block.
PETERSEN_WIRING = {
    0: {1: ("13", "13", "5"), 2: ("5", "5", "5"), 3: ("5", "13", "13"), 4: ("13", "5", "13")},
    1: {1: ("5", "5", "5"), 2: ("13", "13", "5"), 3: ("13", "5", "13"), 4: ("5", "13", "13")},
    2: {1: ("5", "13", "13"), 2: ("13", "5", "13"), 3: ("13", "13", "5"), 4: ("5", "5", "5")},
}


class LinkingPolicy(enum.Enum):
    CHAIN = "chain"
    ALL_PAIRS = "all-pairs"

    @classmethod
    def parse(cls, value) -> "LinkingPolicy":
        if isinstance(value, cls):
            return value
        value = str(value).lower().replace("_", "-")
        for p in cls:
            if p.value == value:
                return p
        raise ValueError(f"unknown linking policy {value!r}")


class ReductionError(ValueError):
    pass


class RootDecodeError(ValueError):
    """A root of G(phi) that cannot be read as a truth assignment."""


def block_name(var: str, clause: int, local) -> str:
    return f"{var}@{clause}:{local}"


def clause_name(clause: int, k: int) -> str:
    return f"c{clause}:y{k}"


def link_names(var: str, i: int, j: int) -> tuple:
    return f"v[{var}@{i}~{j}]", f"w[{var}@{i}~{j}]"


def linked_pairs(phi: SatInstance, policy=LinkingPolicy.CHAIN) -> dict:
    """``variable -> [(i, j), ...]`` clause-index pairs that get link vertices."""
    policy = LinkingPolicy.parse(policy)
    out = {}
    for var in phi.variables:
        occ = [i for i, _ in phi.occurrences(var)]
        if len(occ) < 2:
            continue
        if policy is LinkingPolicy.CHAIN:
            out[var] = list(zip(occ, occ[1:]))
        else:
            out[var] = list(combinations(occ, 2))
    return out


def _link_adjacency(pairs: list, policy: LinkingPolicy) -> list:
    """Pairs of link pairs whose v (and w) vertices are adjacent in the square."""
    if policy is LinkingPolicy.CHAIN:
        return [(p, q) for p, q in zip(pairs, pairs[1:])]
    return list(combinations(pairs, 2))


def expected_counts(phi: SatInstance, policy=LinkingPolicy.CHAIN) -> dict:
    """Closed-form vertex and edge counts of G(phi)."""
    policy = LinkingPolicy.parse(policy)
    n_clauses = len(phi.clauses)
    pairs = linked_pairs(phi, policy)
    n_pairs = sum(len(p) for p in pairs.values())
    n_pair_pairs = sum(len(_link_adjacency(p, policy)) for p in pairs.values())
    sq = gadget_square()
    y_edges = sum(
        sum(len(A_SIDE) if s == "A" else len(B_SIDE) for s in sides)
        for sides in SLOT_SIDES.values()
    )
    per_clause = 3 * sq.m + (45 - 3) + y_edges
    per_pair = 2 * (len(A_SIDE) + 2) + 2 * (len(B_SIDE) + 2) + 2 + 8
    return {
        "vertices": n_clauses * (3 * 16 + 4) + 2 * n_pairs,
        "edges": n_clauses * per_clause + n_pairs * per_pair + 2 * n_pair_pairs,
        "clauses": n_clauses,
        "linked_pairs": n_pairs,
    }


class _EdgeBook:
    """Collects edges by class; a repeated edge is an error unless allowed."""

    ALLOWED_OVERLAP = {frozenset({"variable", "clause"})}

    def __init__(self):
        self.owner: dict = {}
        self.counts: Counter = Counter()
        self.overlaps: Counter = Counter()

    def add(self, u: str, v: str, cls: str) -> None:
        if u == v:
            raise AssertionError(f"self-loop {u} in class {cls}")
        key = frozenset((u, v))
        prev = self.owner.get(key)
        if prev is not None:
            if frozenset({prev, cls}) not in self.ALLOWED_OVERLAP:
                raise AssertionError(f"edge {u}-{v} emitted by both {prev} and {cls}")
            self.overlaps[(prev, cls)] += 1
            return
        self.owner[key] = cls
        self.counts[cls] += 1

    def edges(self) -> list:
        return [tuple(sorted(k)) for k in self.owner]


def _related(a: dict, b: dict) -> bool:
    ra, rb = a["role"], b["role"]
    if ra == "block" and rb == "block":
        if a["clause"] == b["clause"]:
            return True
        return a["variable"] == b["variable"]
    if {ra, rb} == {"block", "clause"}:
        blk, cl = (a, b) if ra == "block" else (b, a)
        return blk["clause"] == cl["clause"]
    if ra == "clause" and rb == "clause":
        return a["clause"] == b["clause"]
    if ra.startswith("link") and rb.startswith("link"):
        return a["variable"] == b["variable"]
    if ra.startswith("link") or rb.startswith("link"):
        link, other = (a, b) if ra.startswith("link") else (b, a)
        if other["role"] == "block":
            return other["variable"] == link["variable"] and other["clause"] in link["copies"]
        return other["clause"] in link["copies"]
    return False


def _validate(phi: SatInstance) -> None:
    bad = intersection_violations(phi)
    if bad:
        i, j = bad[0]
        raise ReductionError(
            f"clauses {i} and {j} share more than one variable: "
            f"{phi.clauses[i - 1]} / {phi.clauses[j - 1]}"
        )


def _labels(phi: SatInstance, pairs: dict) -> dict:
    labels = {}
    for i, clause in enumerate(phi.clauses, 1):
        for slot, var in zip(SLOTS, clause):
            for local in range(1, 17):
                labels[block_name(var, i, local)] = {
                    "role": "block",
                    "clause": i,
                    "slot": slot,
                    "variable": var,
                    "local": local,
                }
        for k in range(1, 5):
            labels[clause_name(i, k)] = {"role": "clause", "clause": i, "index": k}
    for var, plist in pairs.items():
        for i, j in plist:
            v, w = link_names(var, i, j)
            labels[v] = {"role": "link_v", "variable": var, "copies": [i, j]}
            labels[w] = {"role": "link_w", "variable": var, "copies": [i, j]}
    return labels


def build_reduction_graph(phi: SatInstance, policy=LinkingPolicy.CHAIN) -> LabeledGraph:
    """The graph G(phi)."""
    policy = LinkingPolicy.parse(policy)
    _validate(phi)
    pairs = linked_pairs(phi, policy)
    labels = _labels(phi, pairs)
    book = _EdgeBook()
    sq = gadget_square()
    pairs_of_copy: dict = {}
    for var, plist in pairs.items():
        for p in plist:
            for c in p:
                pairs_of_copy.setdefault((var, c), []).append(p)

    for i, clause in enumerate(phi.clauses, 1):
        # variable edges
        for var in clause:
            for a, b in sq.edges():
                book.add(block_name(var, i, a), block_name(var, i, b), "variable")
        # clause edges: K10 on the 5/13 vertices and y1..y4
        ten = [block_name(var, i, loc) for var in clause for loc in ("5", "13")]
        ten += [clause_name(i, k) for k in range(1, 5)]
        for a, b in combinations(ten, 2):
            book.add(a, b, "clause")
        for k, sides in SLOT_SIDES.items():
            y = clause_name(i, k)
            for var, side in zip(clause, sides):
                for loc in A_SIDE if side == "A" else B_SIDE:
                    book.add(y, block_name(var, i, loc), "clause")
                # intra-clause edges to the link vertices of this copy
                for p in pairs_of_copy.get((var, i), ()):
                    v, w = link_names(var, *p)
                    book.add(y, v if side == "A" else w, "intra_clause")

    for var, plist in pairs.items():
        for i, j in plist:
            v, w = link_names(var, i, j)
            for c in (i, j):
                for loc in ("5", "13") + A_SIDE:
                    book.add(v, block_name(var, c, loc), "copy")
                for loc in ("5", "13") + B_SIDE:
                    book.add(w, block_name(var, c, loc), "copy")
            for loc in ("13", "5"):
                book.add(block_name(var, i, loc), block_name(var, j, loc), "derived_square_edge")
        for p, q in _link_adjacency(plist, policy):
            vp, wp = link_names(var, *p)
            vq, wq = link_names(var, *q)
            book.add(vp, vq, "copy_copy")
            book.add(wp, wq, "copy_copy")

    for u, v in book.edges():
        if not _related(labels[u], labels[v]):
            raise AssertionError(f"edge {u}-{v} joins unrelated roles")

    g = Graph(labels, book.edges())
    summary = {
        "policy": policy.value,
        "vertices": g.n,
        "edges": g.m,
        "edge_classes": dict(sorted(book.counts.items())),
        "overlaps": {f"{a}/{b}": n for (a, b), n in sorted(book.overlaps.items())},
        "linked_pairs": {var: [list(p) for p in plist] for var, plist in pairs.items()},
        "expected": expected_counts(phi, policy),
    }
    return LabeledGraph(g, labels, summary)


def assignment_to_root(phi: SatInstance, assignment: dict, policy=LinkingPolicy.CHAIN) -> LabeledGraph:
    """The root H built from a satisfying assignment."""
    policy = LinkingPolicy.parse(policy)
    _validate(phi)
    missing = [v for v in phi.variables if v not in assignment]
    if missing:
        raise ReductionError(f"assignment misses variables {missing}")
    bad = violated_clause(phi, assignment)
    if bad is not None:
        raise ReductionError(
            f"assignment violates clause {bad} {phi.clauses[bad - 1]}: "
            "it needs exactly one true variable"
        )
    pairs = linked_pairs(phi, policy)
    labels = _labels(phi, pairs)
    edges = []
    for i, clause in enumerate(phi.clauses, 1):
        for var in clause:
            kind = GadgetKind.from_truth(bool(assignment[var]))
            edges += [(block_name(var, i, a), block_name(var, i, b)) for a, b in gadget(kind).graph.edges()]
        true_slot = next(s for s, var in enumerate(clause) if assignment[var])
        for k, attach in PETERSEN_WIRING[true_slot].items():
            for var, loc in zip(clause, attach):
                edges.append((clause_name(i, k), block_name(var, i, loc)))
    for var, plist in pairs.items():
        hub_v, hub_w = ("13", "5") if assignment[var] else ("5", "13")
        for i, j in plist:
            v, w = link_names(var, i, j)
            for c in (i, j):
                edges.append((v, block_name(var, c, hub_v)))
                edges.append((w, block_name(var, c, hub_w)))
    h = Graph(labels, edges)
    g = girth(h)
    if g != 5:
        raise AssertionError(f"constructed root has girth {g}, expected 5")
    for i, clause in enumerate(phi.clauses, 1):
        ten = [block_name(var, i, loc) for var in clause for loc in ("5", "13")]
        ten += [clause_name(i, k) for k in range(1, 5)]
        pet = h.subgraph(ten)
        if pet.m != 15 or any(pet.degree(v) != 3 for v in ten) or girth(pet) != 5:
            raise AssertionError(f"clause {i}: the ten clause vertices do not form a Petersen graph")
    truth = {v: bool(assignment[v]) for v in phi.variables}
    return LabeledGraph(h, labels, {"assignment": truth, "policy": policy.value})


def _block_graph(h: Graph, var: str, clause: int) -> Graph:
    names = {block_name(var, clause, loc): str(loc) for loc in range(1, 17)}
    return h.subgraph(names).relabel(names)


def root_to_assignment(gphi: LabeledGraph, h: Graph, phi: SatInstance | None = None) -> dict:
    """Read the truth values off a girth-5 root of G(phi)."""
    report = verify_root(h, gphi.graph, 5)
    if not report.ok:
        raise RootDecodeError(f"not a girth-5 square root of G(phi): {report.describe()}")
    g1, g2 = gadget(GadgetKind.G1).graph, gadget(GadgetKind.G2).graph
    copies: dict = {}
    for name, lab in gphi.labels.items():
        if lab["role"] == "block" and lab["local"] == 1:
            copies.setdefault(lab["variable"], []).append(lab["clause"])
    truth = {}
    for var in sorted(copies):
        kinds = {}
        for clause in sorted(copies[var]):
            blk = _block_graph(h, var, clause)
            if are_isomorphic(blk, g2):
                kinds[clause] = True
            elif are_isomorphic(blk, g1):
                kinds[clause] = False
            else:
                raise RootDecodeError(
                    f"block {var}@{clause} is isomorphic to neither gadget"
                )
        if len(set(kinds.values())) > 1:
            raise RootDecodeError(f"copies of {var} disagree: {kinds}")
        truth[var] = next(iter(kinds.values()))
    if phi is not None:
        bad = violated_clause(phi, truth)
        if bad is not None:
            raise RootDecodeError(f"decoded assignment violates clause {bad}")
    return truth


def forward_consistency(phi: SatInstance, assignment: dict, policy=LinkingPolicy.CHAIN) -> dict:
    """Compare ``square(assignment_to_root)`` with G(phi) edge by edge."""
    gphi = build_reduction_graph(phi, policy)
    h = assignment_to_root(phi, assignment, policy).graph
    report = verify_root(h, gphi.graph, 5)
    return {
        "equal": report.ok,
        "missing_from_square": report.missing,
        "extra_in_square": report.extra,
        "root_girth": report.girth,
    }


def solve_reduction(gphi: LabeledGraph, girth_min=5, limit: int | None = None):
    """All girth-bounded roots of G(phi), solving each component separately.

    Returns ``(roots, complete)``.  Roots of the whole graph are the products
    of component roots, so ``limit`` caps the per-component search and the
    number of combined roots.
    """
    g = gphi.graph
    per_component = []
    complete = True
    for comp in connected_components(g):
        sub = g.subgraph(comp)
        found = find_square_roots(sub, girth_min, limit=limit)
        complete &= found.complete
        if not found:
            return [], complete
        per_component.append(list(found))
    roots = []
    for combo in product(*per_component):
        roots.append(disjoint_union(*combo) if len(combo) > 1 else combo[0])
        if limit is not None and len(roots) >= limit:
            complete = False
            break
    return roots, complete


# -- stand-alone gadgets ---------------------------------------------------


def clause_gadget_root(true_slot: int) -> LabeledGraph:
    """Root of the single-clause gadget with the given slot (0, 1, 2) TRUE."""
    phi = SatInstance((SLOTS,))
    assignment = {var: k == true_slot for k, var in enumerate(SLOTS)}
    return assignment_to_root(phi, assignment)


def _copy_gadget_phi() -> SatInstance:
    return SatInstance((("x", "a", "b"), ("x", "c", "d")))


def copy_gadget_square() -> LabeledGraph:
    """Square of two blocks of one variable joined by their ``v, w`` pair."""
    gphi = build_reduction_graph(_copy_gadget_phi())
    keep = [
        v for v, lab in gphi.labels.items()
        if lab.get("variable") == "x" and lab["role"] != "clause"
    ]
    g = gphi.graph.subgraph(keep)
    return LabeledGraph(g, {v: gphi.labels[v] for v in g.vertices}, {"gadget": "copy"})


def copy_gadget_root(kind_i, kind_j=None) -> LabeledGraph:
    """Candidate root of the copy gadget.

    Equal kinds give the genuine root.  Mixed kinds follow the only wiring
    that keeps each link vertex on the matching side of both blocks: ``v``
    joins 13 of a G2 block and 5 of a G1 block, ``w`` the other two.
    """
    ki = GadgetKind.parse(kind_i)
    kj = ki if kind_j is None else GadgetKind.parse(kind_j)
    sq = copy_gadget_square()
    v, w = link_names("x", 1, 2)
    edges = []
    for c, kind in ((1, ki), (2, kj)):
        edges += [(block_name("x", c, a), block_name("x", c, b)) for a, b in gadget(kind).graph.edges()]
        hub_v, hub_w = ("13", "5") if kind.truth else ("5", "13")
        edges.append((v, block_name("x", c, hub_v)))
        edges.append((w, block_name("x", c, hub_w)))
    h = Graph(sq.graph.vertices, edges)
    return LabeledGraph(h, sq.labels, {"kinds": (ki.value, kj.value)})
