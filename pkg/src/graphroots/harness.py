"""Named acceptance checks A1..A11 and the suite runner behind ``verify``.

Every check is deterministic for a given seed.  Reports and artifacts are
written under the work directory; ``report.json`` collects all statuses.
"""

from __future__ import annotations

import json
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import product
from pathlib import Path

from .canon import are_isomorphic, canonical_form
from .gadgets import ATTACH_POINTS, GadgetKind, chain_family, chain_patterns, family_root_count, gadget, gadget_square
from .graph import Graph, girth, is_connected, square
from .io import write_graph
from .reduction import (
    SLOTS,
    LinkingPolicy,
    RootDecodeError,
    _block_graph,
    block_name,
    build_reduction_graph,
    clause_name,
    copy_gadget_root,
    copy_gadget_square,
    forward_consistency,
    root_to_assignment,
    solve_reduction,
)
from .roots import BRUTE_FORCE_MAX_EDGES, brute_force_roots, find_square_roots, verify_root
from .sat import (
    SatInstance,
    all_solutions,
    brute_force_satisfiable,
    is_min_intersecting,
    minimize_intersections,
    solve_one_in_three,
    UNSAT,
)

__all__ = [
    "CheckReport",
    "PASS",
    "FAIL",
    "RECORDED",
    "CHECKS",
    "DEFAULT_SEED",
    "UnknownCheckError",
    "run_suite",
    "run_check",
    "small_instances",
    "random_instances",
    "connected_hosts",
    "FANO_INSTANCE",
    "WORKERS_ENV",
]

PASS, FAIL, RECORDED = "PASS", "FAIL", "RECORDED"
DEFAULT_SEED = 20240611
WORKERS_ENV = "GRAPHROOTS_WORKERS"

FANO_INSTANCE = SatInstance(
    tuple(
        tuple(f"p{k}" for k in line)
        for line in ((1, 2, 3), (1, 4, 5), (1, 6, 7), (2, 4, 6), (2, 5, 7), (3, 4, 7), (3, 5, 6))
    )
)


class UnknownCheckError(KeyError):
    def __str__(self):
        return f"unknown check {self.args[0]!r}"


@dataclass
class CheckReport:
    name: str
    status: str
    details: str = ""
    artifacts: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status != FAIL

    def line(self) -> str:
        return f"{self.name}: {self.status} ({self.seconds:.2f}s) {self.details.splitlines()[0] if self.details else ''}".rstrip()


class _Out:
    """Collects detail lines and artifact paths for one check."""

    def __init__(self, name: str, workdir: Path | None):
        self.name = name
        self.workdir = workdir
        self.lines: list = []
        self.artifacts: list = []

    def say(self, msg: str) -> None:
        self.lines.append(msg)

    def emit(self, g: Graph, stem: str, labels=None) -> None:
        if self.workdir is None:
            return
        path = self.workdir / f"{self.name}_{stem}.json"
        write_graph(g, path, "json", labels)
        self.artifacts.append(str(path))

    def report(self, status: str) -> CheckReport:
        return CheckReport(self.name, status, "\n".join(self.lines), self.artifacts)


def _untimed(stats: dict) -> dict:
    return {k: v for k, v in stats.items() if k != "seconds"}


def _status(ok: bool) -> str:
    return PASS if ok else FAIL


# -- instance sets ----------------------------------------------------------


def small_instances() -> list:
    """Every instance with at most two clauses, up to renaming of variables.

    Slot positions matter to the reduction, so a shared variable is placed
    in every slot of both clauses.
    """
    out = [SatInstance((("a", "b", "c"),)), SatInstance((("a", "b", "c"), ("d", "e", "f")))]
    for i, j in product(range(3), repeat=2):
        second = ["d", "e"]
        second.insert(j, ("a", "b", "c")[i])
        out.append(SatInstance((("a", "b", "c"), tuple(second))))
    return out


def random_instances(count: int, rng: random.Random, max_clauses: int = 3, pool: int = 7,
                     satisfiable: bool | None = True, min_intersecting: bool = True) -> list:
    out = []
    names = [f"x{k}" for k in range(1, pool + 1)]
    while len(out) < count:
        k = rng.randint(1, max_clauses)
        phi = SatInstance(tuple(tuple(rng.sample(names, 3)) for _ in range(k)))
        if min_intersecting and not is_min_intersecting(phi):
            continue
        if satisfiable is not None and brute_force_satisfiable(phi) != satisfiable:
            continue
        out.append(phi)
    return out


def connected_hosts(max_edges: int) -> list:
    """One representative of every connected graph with 1..max_edges edges.

    Grown edge by edge from a single edge; each new edge joins two existing
    vertices or hangs a new vertex.  Isomorphic graphs are merged through
    canonical forms.
    """
    start = Graph(["0", "1"], [("0", "1")])
    layer = {canonical_form(start): start}
    hosts = [start]
    for _ in range(max_edges - 1):
        nxt: dict = {}
        for g in layer.values():
            vs = list(g.vertices)
            new = str(len(vs))
            cands = [(u, w) for a, u in enumerate(vs) for w in vs[a + 1:] if not g.has_edge(u, w)]
            cands += [(u, new) for u in vs]
            for u, w in cands:
                h = g.add_edges([(u, w)])
                form = canonical_form(h)
                if form not in nxt:
                    nxt[form] = h
        layer = nxt
        hosts.extend(layer.values())
    return hosts


def _random_connected(rng: random.Random, n: int, p: float) -> Graph:
    names = [str(i) for i in range(n)]
    while True:
        edges = [(names[i], names[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
        g = Graph(names, edges)
        if is_connected(g):
            return g


def _edge_sets(roots) -> set:
    return {frozenset(frozenset(e) for e in h.edges()) for h in roots}


# -- checks -------------------------------------------------------------------


def check_a1(out: _Out, rng: random.Random) -> str:
    g1, g2 = gadget(GadgetKind.G1).graph, gadget(GadgetKind.G2).graph
    ok = True
    for name, g in (("G1", g1), ("G2", g2)):
        stats = (g.n, g.m, girth(g), g.min_degree())
        out.say(f"{name}: n={stats[0]} m={stats[1]} girth={stats[2]} min_degree={stats[3]}")
        ok &= stats == (16, 24, 5, 2)
    iso = are_isomorphic(g1, g2)
    out.say(f"G1 isomorphic to G2: {iso}")
    same = square(g1).edge_set() == square(g2).edge_set()
    out.say(f"squares edge-identical: {same} ({square(g1).m} edges)")
    out.emit(square(g1), "square")
    return _status(ok and not iso and same)


def check_a2(out: _Out, rng: random.Random) -> str:
    sq = gadget_square()
    roots = find_square_roots(sq, 5, up_to_iso=True)
    forms = {canonical_form(h) for h in roots}
    want = {canonical_form(gadget(k).graph) for k in GadgetKind}
    out.say(f"{len(roots)} classes, complete={roots.complete}, stats={_untimed(roots.stats)}")
    for k, h in enumerate(roots, 1):
        form = canonical_form(h)
        kind = next((kd.value for kd in GadgetKind if canonical_form(gadget(kd).graph) == form), "other")
        out.say(f"class {k}: {kind} canonical edges {list(form.edges)}")
        out.emit(h, f"root{k}")
    return _status(roots.complete and len(roots) == 2 and forms == want)


def check_a3(out: _Out, rng: random.Random) -> str:
    members = [chain_family(p, ("1",)).graph for p in chain_patterns(2)]
    squares = {square(h) for h in members}
    classes = family_root_count(square(members[0]), members)
    out.say(f"patterns give {len(squares)} distinct square(s), {len(set(members))} labeled roots, {classes} classes")
    found = find_square_roots(square(members[0]), 5)
    same_set = _edge_sets(found) == _edge_sets(members)
    out.say(f"solver: {len(found)} labeled girth-5 roots, equal to the pattern roots: {same_set}")
    out.emit(square(members[0]), "square")
    return _status(len(squares) == 1 and len(set(members)) == 4 and classes == 3 and same_set and found.complete)


def check_a4(out: _Out, rng: random.Random) -> str:
    ok = True
    for k, attach in ((2, ("1",)), (3, ("1", "1")), (4, ("12", "14", "12"))):
        members = [chain_family(p, attach).graph for p in chain_patterns(k)]
        squares = {square(h) for h in members}
        ok &= len(squares) == 1
        out.say(f"k={k} attach={'/'.join(attach)}: {len(squares)} square(s), "
                f"{family_root_count(square(members[0]), members)} classes among {len(members)} patterns")
    hits = []
    for attach in product(ATTACH_POINTS, repeat=3):
        members = [chain_family(p, attach).graph for p in chain_patterns(4)]
        sq = square(members[0])
        if any(square(h) != sq for h in members):
            ok = False
            out.say(f"k=4 attach={'/'.join(attach)}: patterns square differently")
            continue
        count = family_root_count(sq, members)
        if count == 16:
            hits.append(attach)
    out.say(f"k=4 attach combinations with 16 classes: {['/'.join(a) for a in hits]}")
    if hits:
        fam = chain_family(["G1"] * 4, hits[0])
        out.emit(square(fam.graph), "square16", None)
    return _status(ok and bool(hits))


def _is_petersen(g: Graph) -> bool:
    return g.n == 10 and g.m == 15 and all(g.degree(v) == 3 for v in g.vertices) and girth(g) == 5


def check_a5(out: _Out, rng: random.Random) -> str:
    phi = SatInstance((SLOTS,))
    gphi = build_reduction_graph(phi)
    roots = find_square_roots(gphi.graph, 5)
    g2 = gadget(GadgetKind.G2).graph
    classes = {canonical_form(h) for h in roots}
    out.say(f"{len(roots)} labeled girth-5 roots, {len(classes)} classes, complete={roots.complete}")
    ok = roots.complete and len(roots) == 3 and len(classes) == 1
    for idx, h in enumerate(roots, 1):
        kinds = ["G2" if are_isomorphic(_block_graph(h, var, 1), g2) else "G1" for var in SLOTS]
        ten = [block_name(var, 1, loc) for var in SLOTS for loc in ("5", "13")]
        ten += [clause_name(1, k) for k in range(1, 5)]
        pet = _is_petersen(h.subgraph(ten))
        out.say(f"root {idx}: blocks {kinds}, clause subgraph Petersen: {pet}")
        ok &= kinds.count("G2") == 1 and pet
        out.emit(h, f"root{idx}")
    return _status(ok)


def check_a6(out: _Out, rng: random.Random) -> str:
    sq = copy_gadget_square()
    roots = find_square_roots(sq.graph, 5)
    g2 = gadget(GadgetKind.G2).graph
    ok = roots.complete and len(roots) > 0
    for idx, h in enumerate(roots, 1):
        kinds = [are_isomorphic(_block_graph(h, "x", c), g2) for c in (1, 2)]
        out.say(f"root {idx}: blocks {['G2' if k else 'G1' for k in kinds]}")
        ok &= kinds[0] == kinds[1]
    mixed = copy_gadget_root("G1", "G2")
    rep = verify_root(mixed.graph, sq.graph, 5)
    witness = (block_name("x", 1, 5), block_name("x", 2, 13))
    has_witness = witness in rep.extra
    out.say(f"mixed candidate: {rep.describe()}")
    out.say(f"witness edge {witness[0]}-{witness[1]} reported: {has_witness}")
    return _status(ok and not rep.ok and has_witness)


def _a7_a8_instances(rng: random.Random) -> list:
    small = [phi for phi in small_instances() if brute_force_satisfiable(phi)]
    return small + random_instances(50, rng)


def check_a7(out: _Out, rng: random.Random) -> str:
    instances = _a7_a8_instances(rng)
    checked, failures = 0, 0
    for phi in instances:
        for assignment in all_solutions(phi):
            res = forward_consistency(phi, assignment, LinkingPolicy.CHAIN)
            checked += 1
            if not res["equal"] or res["root_girth"] != 5:
                failures += 1
                if failures <= 5:
                    out.say(f"{phi.clauses} {assignment}: missing {res['missing_from_square'][:5]} "
                            f"extra {res['extra_in_square'][:5]} girth {res['root_girth']}")
    out.lines.insert(0, f"{len(instances)} instances, {checked} assignments, {failures} mismatches")
    return _status(failures == 0)


A8_ROOT_LIMIT = 256


def check_a8(out: _Out, rng: random.Random) -> str:
    instances = _a7_a8_instances(rng)
    bad_roots, total = 0, 0
    for phi in instances:
        gphi = build_reduction_graph(phi)
        roots, complete = solve_reduction(gphi, 5, limit=A8_ROOT_LIMIT)
        for h in roots:
            total += 1
            try:
                root_to_assignment(gphi, h, phi)
            except RootDecodeError as err:
                bad_roots += 1
                if bad_roots <= 3:
                    out.say(f"{phi.clauses}: {err}")
    out.lines.insert(0, f"{len(instances)} satisfiable instances, {total} roots, {bad_roots} do not decode to exactly-1 assignments")
    unsat = [FANO_INSTANCE]
    unsat_roots = 0
    for phi in unsat:
        roots, _ = solve_reduction(build_reduction_graph(phi), 5, limit=1)
        unsat_roots += len(roots)
        out.say(f"unsatisfiable instance with {len(phi)} clauses: {'a root exists' if roots else 'no root'}")
        if roots:
            out.emit(roots[0], "unsat_root")
    return _status(bad_roots == 0 and unsat_roots == 0)


def check_a9(out: _Out, rng: random.Random) -> str:
    instances = random_instances(200, rng, max_clauses=6, pool=6, satisfiable=None, min_intersecting=False)
    invariant, agree = 0, 0
    for phi in instances:
        reduced, _ = minimize_intersections(phi)
        invariant += is_min_intersecting(reduced)
        after = solve_one_in_three(reduced, max_variables=10**6) is not UNSAT
        agree += brute_force_satisfiable(phi) == after
    out.say(f"{len(instances)} instances: invariant holds on {invariant}, satisfiability preserved on {agree}")
    return _status(invariant == agree == len(instances))


def check_a10(out: _Out, rng: random.Random) -> str:
    hosts = connected_hosts(8)
    squares = []
    while len(squares) < 100:
        sq = square(_random_connected(rng, rng.randint(2, 7), rng.uniform(0.25, 0.6)))
        if sq.m <= BRUTE_FORCE_MAX_EDGES:
            squares.append(sq)
    mismatches = 0
    with_roots = 0
    for g in hosts + squares:
        fast = find_square_roots(g, 3)
        slow = brute_force_roots(g, 3)
        with_roots += bool(slow)
        if _edge_sets(fast) != _edge_sets(slow):
            mismatches += 1
            if mismatches <= 3:
                out.say(f"mismatch on {sorted(g.edges())}: {len(fast)} vs {len(slow)}")
    out.lines.insert(0, f"{len(hosts)} hosts with <= 8 edges and {len(squares)} random squares; "
                        f"{with_roots} have roots; {mismatches} mismatches")
    return _status(mismatches == 0)


A11_LIMIT = 2000


def check_a11(out: _Out, rng: random.Random) -> str:
    sq = gadget_square()
    r6 = find_square_roots(sq, 6)
    out.say(f"roots of girth >= 6: {len(r6)} (complete={r6.complete})")
    r3 = find_square_roots(sq, 3, limit=A11_LIMIT)
    out.say(f"labeled roots at girth_min 3: {len(r3)}{'' if r3.complete else ' (limit reached)'}; stats {_untimed(r3.stats)}")
    return RECORDED


CHECKS = {
    "A1": check_a1,
    "A2": check_a2,
    "A3": check_a3,
    "A4": check_a4,
    "A5": check_a5,
    "A6": check_a6,
    "A7": check_a7,
    "A8": check_a8,
    "A9": check_a9,
    "A10": check_a10,
    "A11": check_a11,
}


def run_check(name: str, workdir=None, seed: int = DEFAULT_SEED) -> CheckReport:
    key = str(name).upper()
    if key not in CHECKS:
        raise UnknownCheckError(name)
    wd = Path(workdir) if workdir is not None else None
    if wd is not None:
        wd.mkdir(parents=True, exist_ok=True)
    out = _Out(key, wd)
    started = time.perf_counter()
    status = CHECKS[key](out, random.Random(f"{seed}:{key}"))
    rep = out.report(status)
    rep.seconds = round(time.perf_counter() - started, 3)
    if wd is not None:
        doc = {k: v for k, v in asdict(rep).items() if k != "seconds"}
        (wd / f"{key}.json").write_text(json.dumps(doc, indent=2) + "\n")
    return rep


def _resolve(names) -> list:
    if names in (None, "all") or list(names) == ["all"]:
        return list(CHECKS)
    keys = []
    for name in names:
        if str(name).upper() not in CHECKS:
            raise UnknownCheckError(name)
        keys.append(str(name).upper())
    return keys


def run_suite(names=None, workdir=None, seed: int = DEFAULT_SEED, workers: int | None = None) -> list:
    """Run the named checks (default: all) and return their reports in id order.

    Unknown names raise :class:`UnknownCheckError` before anything runs.
    ``workers`` defaults to the ``GRAPHROOTS_WORKERS`` environment variable.
    """
    keys = _resolve(names)
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1") or 1)
    if workers > 1 and len(keys) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(run_check, k, workdir, seed) for k in keys]
            reports = [f.result() for f in futures]
    else:
        reports = [run_check(k, workdir, seed) for k in keys]
    if workdir is not None:
        summary = {r.name: r.status for r in reports}
        (Path(workdir) / "report.json").write_text(json.dumps(summary, indent=2) + "\n")
    return reports
