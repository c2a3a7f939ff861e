"""Square roots of graphs: powers, gadgets, a girth-bounded root search and
the 1-in-3 SAT reduction built on them."""

from .graph import (
    Graph,
    UNREACHABLE,
    kth_power,
    square,
    distance,
    girth,
    maximal_cliques,
    connected_components,
    is_connected,
)
from .canon import CanonicalForm, canonical_form, are_isomorphic, isomorphism
from .labeled import LabeledGraph
from .gadgets import GadgetKind, gadget, gadget_g1, gadget_g2, gadget_square, chain_family
from .roots import (
    FOREST,
    RootReport,
    find_square_roots,
    brute_force_roots,
    verify_root,
    propagate,
    l_set,
)
from .sat import SatInstance, parse_instance, minimize_intersections, solve_one_in_three, UNSAT
from .reduction import (
    LinkingPolicy,
    build_reduction_graph,
    assignment_to_root,
    root_to_assignment,
)

__version__ = "0.1.0"
