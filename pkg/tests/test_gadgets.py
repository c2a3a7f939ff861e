import pytest

from graphroots.canon import canonical_form
from graphroots.gadgets import (
    ATTACH_POINTS,
    GadgetKind,
    RootMismatchError,
    chain_family,
    chain_patterns,
    family_root_count,
    gadget,
    gadget_g1,
    gadget_g2,
    gadget_square,
)
from graphroots.graph import Graph, girth, square


def nb(g, v, closed=False):
    s = set(g.closed_neighborhood(v) if closed else g.neighbors(v))
    return {int(x) for x in s}


def test_table_invariants():
    for blk in (gadget_g1(), gadget_g2()):
        g = blk.graph
        assert (g.n, g.m, girth(g), g.min_degree()) == (16, 24, 5, 2)
    assert gadget_square().m == 76


def test_g1_neighbourhoods():
    g = gadget_g1().graph
    assert nb(g, "5", closed=True) == {5, 13, 11, 15}
    assert nb(g, "13", closed=True) == {5, 13, 6, 7, 16}
    assert nb(g, "1") == {7, 11, 12}


def test_g2_neighbourhoods():
    g = gadget_g2().graph
    assert nb(g, "13", closed=True) == {13, 5, 11, 15}
    assert nb(g, "5", closed=True) == {5, 6, 7, 13, 16}
    assert nb(g, "12") == {1, 2, 3}


def test_square_facts():
    sq = gadget_square()
    assert sq.has_edge("1", "12")
    assert {8, 9, 15, 16} <= nb(sq, "12") - nb(gadget_g1().graph, "12")
    g1 = gadget_g1().graph
    assert all(sq.degree(v) >= g1.degree(v) for v in sq.vertices)


def test_attach_points_shared():
    g1, g2 = gadget_g1().graph, gadget_g2().graph
    shared = [v for v in g1.vertices if g1.neighbors(v) == g2.neighbors(v)]
    assert tuple(shared) == ATTACH_POINTS


def test_kind_parsing():
    assert GadgetKind.parse("2") is GadgetKind.G2
    assert GadgetKind.parse("false") is GadgetKind.G1
    assert GadgetKind.from_truth(True).truth
    assert GadgetKind.G1.flipped() is GadgetKind.G2
    with pytest.raises(ValueError):
        GadgetKind.parse("G3")


def test_single_block_chain_is_gadget():
    fam = chain_family(["G1"])
    rename = {v: v.split(":")[1] for v in fam.graph.vertices}
    assert fam.graph.relabel(rename) == gadget("G1").graph


def test_chain_vertex_count():
    fam = chain_family(["G1", "G2", "G1"], ["1", "14"])
    assert fam.graph.n == 3 * 16 - 2
    assert fam.graph.m == 3 * 24
    assert fam.summary["pattern"] == "121"


def test_k2_chain_at_vertex_1():
    members = [chain_family(p, ["1"]).graph for p in chain_patterns(2)]
    sq = square(members[0])
    assert all(square(h) == sq for h in members)
    assert family_root_count(sq, members) == 3


def test_block_swap_keeps_square():
    for k in (2, 3, 4):
        for attach in (["1"] * (k - 1), ["12", "14", "12"][: k - 1], ["14"] * (k - 1)):
            members = [chain_family(p, attach).graph for p in chain_patterns(k)]
            sq = square(members[0])
            assert all(square(h) == sq for h in members)


def test_k3_chain_classes():
    # oracle: deduplicate the 8 candidates directly by canonical form
    members = [chain_family(p, ["1", "1"]).graph for p in chain_patterns(3)]
    forms = {canonical_form(h) for h in members}
    assert family_root_count(square(members[0]), members) == len(forms) == 4


def test_k4_sixteen_classes():
    members = [chain_family(p, ["1", "12", "14"]).graph for p in chain_patterns(4)]
    assert family_root_count(square(members[0]), members) == 16


def test_k4_default_attach_classes():
    members = [chain_family(p, ["12", "14", "12"]).graph for p in chain_patterns(4)]
    assert family_root_count(square(members[0]), members) == 10


def test_family_count_single_candidate():
    g = gadget("G2").graph
    assert family_root_count(square(g), [g]) == 1


def test_family_count_rejects_foreign_candidate():
    g = gadget("G1").graph
    bad = Graph(g.vertices, list(g.edges())[:-1])
    with pytest.raises(RootMismatchError, match="candidate 0"):
        family_root_count(square(g), [bad])


def test_chain_argument_errors():
    with pytest.raises(ValueError, match="attach points"):
        chain_family(["G1", "G2"], [])
    with pytest.raises(ValueError, match="not in"):
        chain_family(["G1", "G2"], ["5"])
    with pytest.raises(ValueError):
        chain_family([])
