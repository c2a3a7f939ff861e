import pytest
from hypothesis import given, settings, strategies as st

from graphroots.sat import (
    UNSAT,
    InstanceError,
    SatInstance,
    all_solutions,
    brute_force_satisfiable,
    format_instance,
    intersection_violations,
    is_min_intersecting,
    minimize_intersections,
    parse_instance,
    satisfies,
    solve_one_in_three,
    violated_clause,
)

EXAMPLE = SatInstance((("x", "y", "z"), ("x", "u", "v"), ("y", "a", "b")))


def random_instance(rng, clauses, pool):
    names = [f"v{k}" for k in range(pool)]
    return SatInstance(tuple(tuple(rng.sample(names, 3)) for _ in range(clauses)))


def test_parse_single_clause():
    phi = parse_instance("c x y z\n")
    assert phi.clauses == (("x", "y", "z"),)


def test_parse_example():
    phi = parse_instance("# example\nc x y z\nc x u v\nc y a b\n")
    assert phi == EXAMPLE
    assert len(phi) == 3 and len(phi.variables) == 7


def test_parse_errors():
    with pytest.raises(InstanceError, match="line 1.*repeated"):
        parse_instance("c x x y\n")
    with pytest.raises(InstanceError, match="line 2.*2 variables"):
        parse_instance("c a b c\nc a b\n")
    with pytest.raises(InstanceError, match="line 1"):
        parse_instance("d a b c\n")
    with pytest.raises(InstanceError, match="variable token"):
        parse_instance("c a b c-d\n")


def test_format_roundtrip():
    assert parse_instance(format_instance(EXAMPLE)) == EXAMPLE


def test_minimize_example():
    phi = SatInstance((("x", "y", "z"), ("x", "y", "u"), ("u", "a", "b")))
    out, log = minimize_intersections(phi)
    assert out.clauses == (("x", "y", "z"), ("z", "a", "b"))
    assert log == [("rename", "u", "z", ("x", "y", "u"))]


def test_minimize_noop():
    out, log = minimize_intersections(EXAMPLE)
    assert out == EXAMPLE and log == []


def test_minimize_duplicate():
    phi = SatInstance((("a", "b", "c"), ("c", "b", "a")))
    out, log = minimize_intersections(phi)
    assert out.clauses == (("a", "b", "c"),)
    assert log[0][0] == "duplicate"


def test_minimize_forced_clause():
    # the rename turns (a, d, e) into (a, d, a): a FALSE, d TRUE
    phi = SatInstance((("a", "b", "c"), ("e", "b", "c"), ("a", "d", "e")))
    out, log = minimize_intersections(phi)
    assert ("forced", "a", False, "d", True) in log
    assert is_min_intersecting(out)
    assert brute_force_satisfiable(phi) == (solve_one_in_three(out, 10**6) is not UNSAT)


def test_minimize_preserves_satisfiability(rng):
    for _ in range(200):
        phi = random_instance(rng, rng.randint(1, 5), rng.randint(3, 6))
        out, _ = minimize_intersections(phi)
        assert is_min_intersecting(out)
        assert brute_force_satisfiable(phi) == (solve_one_in_three(out, 10**6) is not UNSAT)


def test_violations():
    phi = SatInstance((("x", "y", "z"), ("x", "y", "u"), ("a", "b", "c")))
    assert intersection_violations(phi) == [(1, 2)]


def test_solver_examples():
    assert solve_one_in_three(SatInstance((("x", "y", "z"),))) == {"x": True, "y": False, "z": False}
    truth = {"x": True, "b": True, "y": False, "z": False, "u": False, "a": False, "v": False}
    assert satisfies(EXAMPLE, truth)
    assert truth in all_solutions(EXAMPLE)


def test_solver_on_three_overlapping():
    phi = SatInstance((("x", "y", "z"), ("x", "y", "u"), ("x", "z", "u")))
    out, _ = minimize_intersections(phi)
    want = brute_force_satisfiable(phi)
    assert (solve_one_in_three(out, 10**6) is not UNSAT) == want


def test_fano_unsat():
    lines = ((1, 2, 3), (1, 4, 5), (1, 6, 7), (2, 4, 6), (2, 5, 7), (3, 4, 7), (3, 5, 6))
    phi = SatInstance(tuple(tuple(f"p{k}" for k in line) for line in lines))
    assert solve_one_in_three(phi) is UNSAT
    assert not brute_force_satisfiable(phi)


def test_violated_clause_reports_index():
    assert violated_clause(EXAMPLE, {v: False for v in EXAMPLE.variables}) == 1


def test_solver_limit():
    phi = SatInstance(tuple((f"a{k}", f"b{k}", f"c{k}") for k in range(9)))
    with pytest.raises(InstanceError, match="limit"):
        solve_one_in_three(phi)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.lists(st.integers(0, 6), min_size=3, max_size=3, unique=True), min_size=1, max_size=5))
def test_solver_agrees_with_brute_force(rows):
    phi = SatInstance(tuple(tuple(f"x{i}" for i in r) for r in rows))
    sols = all_solutions(phi)
    assert bool(sols) == brute_force_satisfiable(phi)
    assert all(satisfies(phi, s) for s in sols)
