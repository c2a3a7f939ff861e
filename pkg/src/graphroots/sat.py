"""Positive 1-in-3 SAT: instances, clause files, preprocessing and a reference solver.

Clause file format: one clause per line, ``c <var> <var> <var>``; ``#``
starts a comment.  Variable names are word characters only (letters, digits,
underscore) because reduction vertex names embed them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations

from .graph import natural_key

__all__ = [
    "SatInstance",
    "Assignment",
    "InstanceError",
    "parse_instance",
    "format_instance",
    "minimize_intersections",
    "is_min_intersecting",
    "intersection_violations",
    "satisfies",
    "violated_clause",
    "solve_one_in_three",
    "all_solutions",
    "brute_force_satisfiable",
    "UNSAT",
    "MAX_SOLVER_VARIABLES",
]

_NAME = re.compile(r"^\w+$")

MAX_SOLVER_VARIABLES = 24


class InstanceError(ValueError):
    pass


class _Unsat:
    __slots__ = ()

    def __repr__(self):
        return "UNSAT"

    def __bool__(self):
        return False


UNSAT = _Unsat()

#: A truth map ``variable -> bool``.
Assignment = dict


@dataclass(frozen=True)
class SatInstance:
    """Ordered clauses of three positive variables.

    Slot order inside a clause is significant for the reduction and is kept
    exactly as given.
    """

    clauses: tuple

    def __post_init__(self):
        clauses = tuple(tuple(str(v) for v in c) for c in self.clauses)
        object.__setattr__(self, "clauses", clauses)
        for k, c in enumerate(clauses, 1):
            if len(c) != 3:
                raise InstanceError(f"clause {k}: expected 3 variables, got {len(c)}")
            if len(set(c)) != 3:
                raise InstanceError(f"clause {k}: repeated variable in {c}")
            for v in c:
                if not _NAME.match(v):
                    raise InstanceError(f"clause {k}: bad variable name {v!r}")

    @property
    def variables(self) -> tuple:
        return tuple(sorted({v for c in self.clauses for v in c}, key=natural_key))

    def occurrences(self, var: str) -> list:
        """``(clause index, slot)`` pairs, clause indices starting at 1."""
        return [(i, c.index(var)) for i, c in enumerate(self.clauses, 1) if var in c]

    def __len__(self):
        return len(self.clauses)


def parse_instance(text: str) -> SatInstance:
    clauses = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] != "c":
            raise InstanceError(f"line {lineno}: expected 'c <var> <var> <var>', got {line!r}")
        vars_ = tokens[1:]
        if len(vars_) != 3:
            raise InstanceError(f"line {lineno}: clause has {len(vars_)} variables, need 3")
        if len(set(vars_)) != 3:
            raise InstanceError(f"line {lineno}: repeated variable in clause {vars_}")
        for v in vars_:
            if not _NAME.match(v):
                raise InstanceError(f"line {lineno}: unreadable variable token {v!r}")
        clauses.append(tuple(vars_))
    return SatInstance(tuple(clauses))


def format_instance(phi: SatInstance) -> str:
    return "".join(f"c {' '.join(c)}\n" for c in phi.clauses)


def intersection_violations(phi: SatInstance) -> list:
    """Index pairs ``(i, j)`` (1-based) of clauses sharing two or more variables."""
    sets = [set(c) for c in phi.clauses]
    return [
        (i + 1, j + 1)
        for i, j in combinations(range(len(sets)), 2)
        if len(sets[i] & sets[j]) >= 2
    ]


def is_min_intersecting(phi: SatInstance) -> bool:
    return not intersection_violations(phi)


# -- preprocessing -----------------------------------------------------

# Cubic graph made of two K4s, each with one edge subdivided, joined by a
# bridge between the subdivision vertices.  Clauses are its vertices and
# variables its edges, so solutions are perfect matchings: the bridge is in
# every one of them and the other edges at its ends are in none.
_FORCING_VERTICES = {
    "s": ("B", "ps1", "ps2"),
    "p1": ("ps1", "p13", "p14"),
    "p2": ("ps2", "p23", "p24"),
    "p3": ("p13", "p23", "p34"),
    "p4": ("p14", "p24", "p34"),
    "t": ("B", "qs1", "qs2"),
    "q1": ("qs1", "q13", "q14"),
    "q2": ("qs2", "q23", "q24"),
    "q3": ("q13", "q23", "q34"),
    "q4": ("q14", "q24", "q34"),
}

# Seven lines of the Fano plane: any two meet in one point and no point set
# meets every line exactly once, so the instance is unsatisfiable.
_FANO = ((1, 2, 3), (1, 4, 5), (1, 6, 7), (2, 4, 6), (2, 5, 7), (3, 4, 7), (3, 5, 6))


def _fresh(prefix: str, used: set) -> str:
    k = 1
    while f"{prefix}{k}" in used:
        k += 1
    name = f"{prefix}{k}"
    used.add(name)
    return name


def _forcing_clauses(true_var: str, false_var: str, used: set) -> list:
    tag = _fresh("_force", used)
    names = {"B": true_var, "ps1": false_var}
    out = []
    for vertex in _FORCING_VERTICES.values():
        clause = []
        for e in vertex:
            if e not in names:
                names[e] = f"{tag}_{e}"
                used.add(names[e])
            clause.append(names[e])
        out.append(tuple(clause))
    return out


def _fano_clauses(used: set) -> list:
    tag = _fresh("_fano", used)
    for k in range(1, 8):
        used.add(f"{tag}_{k}")
    return [tuple(f"{tag}_{k}" for k in line) for line in _FANO]


def minimize_intersections(phi: SatInstance):
    """Remove two-variable overlaps between clauses.

    While clauses ``(x, y, z)`` and ``(x, y, u)`` share two variables,
    ``u`` and ``z`` must agree in every exactly-one assignment, so ``u`` is
    replaced by ``z`` everywhere and the second clause is dropped.  Returns
    ``(instance, log)``; each log entry is a tuple whose first item names the
    event: ``"rename"``, ``"duplicate"``, ``"forced"`` or ``"unsat"``.

    A substitution can leave a clause ``(v, v, c)``, which holds exactly
    when ``v`` is false and ``c`` true; it is replaced by a gadget forcing
    those values.  A clause ``(v, v, v)`` is unsatisfiable and is replaced by
    the Fano-plane instance on fresh variables.
    """
    clauses = [tuple(c) for c in phi.clauses]
    used = {v for c in clauses for v in c}
    log: list = []
    while True:
        bad = next(
            (
                (i, c)
                for i, c in enumerate(clauses)
                if len(set(c)) < 3
            ),
            None,
        )
        if bad is not None:
            i, c = bad
            del clauses[i]
            distinct = sorted(set(c), key=c.index)
            if len(distinct) == 1:
                log.append(("unsat", c))
                clauses.extend(_fano_clauses(used))
            else:
                twice = next(v for v in distinct if c.count(v) == 2)
                once = next(v for v in distinct if c.count(v) == 1)
                log.append(("forced", twice, False, once, True))
                clauses.extend(_forcing_clauses(once, twice, used))
            continue
        pair = next(
            (
                (i, j)
                for i, j in combinations(range(len(clauses)), 2)
                if len(set(clauses[i]) & set(clauses[j])) >= 2
            ),
            None,
        )
        if pair is None:
            break
        i, j = pair
        ci, cj = clauses[i], clauses[j]
        shared = set(ci) & set(cj)
        if len(shared) == 3:
            log.append(("duplicate", cj))
            del clauses[j]
            continue
        z = next(v for v in ci if v not in shared)
        u = next(v for v in cj if v not in shared)
        log.append(("rename", u, z, cj))
        del clauses[j]
        clauses = [tuple(z if v == u else v for v in c) for c in clauses]
    # SatInstance validation cannot fail here: repeats were removed above
    return SatInstance(tuple(clauses)), log


# -- semantics -----------------------------------------------------------


def violated_clause(phi: SatInstance, assignment: dict):
    """Index (1-based) of the first clause without exactly one true variable."""
    for i, c in enumerate(phi.clauses, 1):
        if sum(bool(assignment[v]) for v in c) != 1:
            return i
    return None


def satisfies(phi: SatInstance, assignment: dict) -> bool:
    return violated_clause(phi, assignment) is None


def _search(phi: SatInstance, first_only: bool):
    variables = phi.variables
    by_var: dict = {v: [] for v in variables}
    for c in phi.clauses:
        for v in c:
            by_var[v].append(c)
    value: dict = {}
    found = []

    def consistent(var) -> bool:
        for c in by_var[var]:
            trues = sum(1 for v in c if value.get(v) is True)
            unknown = sum(1 for v in c if v not in value)
            if trues > 1 or (trues == 0 and unknown == 0):
                return False
        return True

    def dfs(k: int) -> bool:
        if k == len(variables):
            found.append(dict(value))
            return first_only
        var = variables[k]
        for choice in (True, False):
            value[var] = choice
            if consistent(var) and dfs(k + 1):
                return True
            del value[var]
        return False

    dfs(0)
    return found


def solve_one_in_three(phi: SatInstance, max_variables: int = MAX_SOLVER_VARIABLES):
    """First satisfying assignment in lexicographic order (TRUE before FALSE,
    variables in sorted order), or :data:`UNSAT`.
    """
    if len(phi.variables) > max_variables:
        raise InstanceError(
            f"instance has {len(phi.variables)} variables, solver limit is {max_variables}"
        )
    found = _search(phi, first_only=True)
    return found[0] if found else UNSAT


def all_solutions(phi: SatInstance, max_variables: int = MAX_SOLVER_VARIABLES) -> list:
    if len(phi.variables) > max_variables:
        raise InstanceError(
            f"instance has {len(phi.variables)} variables, solver limit is {max_variables}"
        )
    return _search(phi, first_only=False)


def brute_force_satisfiable(phi: SatInstance) -> bool:
    """Plain enumeration of all ``2**n`` assignments; independent oracle."""
    variables = phi.variables
    if len(variables) > 22:
        raise InstanceError("brute force limited to 22 variables")
    idx = {v: k for k, v in enumerate(variables)}
    masks = [tuple(1 << idx[v] for v in c) for c in phi.clauses]
    for bits in range(1 << len(variables)):
        if all(((bits & a) > 0) + ((bits & b) > 0) + ((bits & c) > 0) == 1 for a, b, c in masks):
            return True
    return False
