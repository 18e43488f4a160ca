"""List homomorphisms of signed graphs: classification, polynomial solvers, brute-force oracle and hardness gadgets."""

from .sgraph import (
    BI, BLUE, RED, EdgeKind, Homomorphism, InputError, Instance, ParseError, Sign, SignedGraph,
    apply_switching, bicoloured_part, blue_part, build_switching_graph, closed_walk_sign,
    is_uni_balanced, parse_graph, parse_lists, serialize_graph, serialize_lists,
)
from .oracle import check_homomorphism, enumerate_homs, s_core, shom_easy, solve_bruteforce, switching_equivalent
from .classifier import NPCOMPLETE, OUT_OF_SCOPE, POLYNOMIAL, Chain, Classification, classify, find_chain
from .polymorph import build_tree_majority, find_conservative_majority, verify_majority
from .solver import Refused, SolveResult, solve
from .gadgets import (
    NaeFormula, QuadFormula, build_chain_nae_gadget, build_general_d_gadget, build_quadruple_gadget,
    build_reflexive_m_gadget, parse_formula,
)
