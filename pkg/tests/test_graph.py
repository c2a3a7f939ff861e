import math
from collections import deque

import pytest
from hypothesis import given, settings, strategies as st

from graphroots.gadgets import gadget
from graphroots.graph import (
    UNREACHABLE,
    Graph,
    all_pairs_distances,
    connected_components,
    disjoint_union,
    distance,
    girth,
    is_connected,
    kth_power,
    maximal_cliques,
    square,
)

from conftest import complete, cycle, path, petersen, random_graph, star


def oracle_distances(g):
    """Floyd-Warshall on the edge list."""
    vs = list(g.vertices)
    d = {(u, v): (0 if u == v else math.inf) for u in vs for v in vs}
    for u, v in g.edges():
        d[u, v] = d[v, u] = 1
    for w in vs:
        for u in vs:
            for v in vs:
                if d[u, w] + d[w, v] < d[u, v]:
                    d[u, v] = d[u, w] + d[w, v]
    return d


def oracle_girth(g):
    best = math.inf
    for u, v in g.edges():
        # shortest u-v path avoiding the edge uv, plus the edge
        seen = {u: 0}
        queue = deque([u])
        while queue:
            x = queue.popleft()
            for y in g.neighbors(x):
                if {x, y} == {u, v} or y in seen:
                    continue
                seen[y] = seen[x] + 1
                queue.append(y)
        if v in seen:
            best = min(best, seen[v] + 1)
    return best


def test_path_square_is_triangle():
    assert square(path(3)).edge_set() == complete(3).edge_set()


def test_c5_and_star_square_to_k5():
    assert square(cycle(5, "")) == complete(5)
    assert square(star(4)) == complete(5)


def test_gadget_squares_equal():
    assert square(gadget("G1").graph) == square(gadget("G2").graph)


def test_power_rejects_k0():
    with pytest.raises(ValueError):
        kth_power(path(3), 0)


def test_power_matches_distance_oracle(rng):
    for _ in range(300):
        g = random_graph(rng, rng.randint(1, 9), rng.uniform(0.1, 0.6))
        k = rng.randint(1, 4)
        d = oracle_distances(g)
        want = {frozenset((u, v)) for (u, v), dist in d.items() if u != v and dist <= k}
        assert kth_power(g, k).edge_set() == want


def test_power_monotone_in_k(rng):
    for _ in range(50):
        g = random_graph(rng, 8, 0.25)
        prev = g.edge_set()
        for k in range(2, 6):
            cur = kth_power(g, k).edge_set()
            assert prev <= cur
            prev = cur


def test_distance_examples():
    c5 = cycle(5, "")
    assert distance(c5, "0", "2") == 2
    two = disjoint_union(path(2), Graph(["a", "b"], [("a", "b")]))
    assert distance(two, "0", "a") == UNREACHABLE
    assert distance(gadget("G1").graph, "1", "5") == 2


def test_all_pairs_distances_agree(rng):
    g = random_graph(rng, 8, 0.3)
    d = oracle_distances(g)
    got = all_pairs_distances(g)
    for u in g.vertices:
        for v in g.vertices:
            assert got[u][v] == d[u, v]


def test_distance_unknown_vertex():
    with pytest.raises(KeyError, match="unknown vertex"):
        distance(path(3), "0", "zz")


def test_girth_examples():
    assert girth(path(6)) == math.inf
    assert girth(star(5)) == math.inf
    assert girth(cycle(5)) == 5
    assert girth(complete(3)) == 3
    assert girth(petersen()) == 5
    assert girth(gadget("G1").graph) == 5
    assert girth(gadget("G2").graph) == 5


def test_girth_matches_oracle(rng):
    for _ in range(200):
        g = random_graph(rng, rng.randint(3, 10), rng.uniform(0.1, 0.45))
        assert girth(g) == oracle_girth(g)


def test_girth_infinite_iff_forest(rng):
    for _ in range(100):
        g = random_graph(rng, rng.randint(1, 9), 0.2)
        forest = g.m == g.n - len(connected_components(g))
        assert (girth(g) == math.inf) == forest


def test_components_and_union():
    g = disjoint_union(path(3), cycle(4, "c"))
    comps = connected_components(g)
    assert sorted(len(c) for c in comps) == [3, 4]
    assert not is_connected(g)
    assert is_connected(petersen())


def test_maximal_cliques_examples():
    assert [set(c) for c in maximal_cliques(complete(5))] == [set(complete(5).vertices)]
    c5 = maximal_cliques(cycle(5))
    assert sorted(sorted(c) for c in c5) == sorted(sorted(e) for e in cycle(5).edges())


def test_gadget_square_clique_at_1():
    sq = square(gadget("G1").graph)
    cliques = maximal_cliques(sq, within=sq.closed_neighborhood("1"))
    assert any({"1", "7", "11", "12"} <= set(c) for c in cliques)


def test_maximal_cliques_against_brute_force(rng):
    from itertools import combinations

    for _ in range(40):
        g = random_graph(rng, 7, 0.5)
        vs = list(g.vertices)
        cliques = [
            set(s)
            for r in range(1, len(vs) + 1)
            for s in combinations(vs, r)
            if all(g.has_edge(a, b) for a, b in combinations(s, 2))
        ]
        maximal = [c for c in cliques if not any(c < o for o in cliques)]
        assert sorted(map(sorted, maximal)) == sorted(map(sorted, maximal_cliques(g)))


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 8), st.lists(st.tuples(st.integers(0, 7), st.integers(0, 7)), max_size=20))
def test_square_contains_graph(n, pairs):
    names = [str(i) for i in range(n)]
    edges = [(names[a % n], names[b % n]) for a, b in pairs if a % n != b % n]
    g = Graph(names, edges)
    sq = square(g)
    assert g.edge_set() <= sq.edge_set()
    assert all(sq.degree(v) >= g.degree(v) for v in names)


def test_graph_rejects_loops():
    with pytest.raises(ValueError):
        Graph(["a"], [("a", "a")])
