"""Reduction instances from NAE-SAT and the quadruple relation.

Every builder returns an Instance whose solvability should match the
satisfiability of the formula it was built from.  Internal vertices are named
``<clause-id>.<role>`` so two builds of the same formula diff cleanly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .classifier import Chain
from .sgraph import BI, BLUE, RED, InputError, Instance, ParseError, SignedGraph

__all__ = [
    "NaeFormula", "QuadFormula", "parse_formula",
    "build_chain_nae_gadget", "build_reflexive_m_gadget", "build_general_d_gadget",
    "case_m_target", "case_d_target", "f2_target", "build_chooser", "chooser_contract",
    "build_f2_nae_gadget", "hard_cycle_target", "build_quadruple_gadget",
]


# formulas

@dataclass
class NaeFormula:
    variables: List[str] = field(default_factory=list)
    clauses: List[Tuple[str, str, str]] = field(default_factory=list)

    def __post_init__(self):
        seen = list(self.variables)
        for c in self.clauses:
            if len(c) != 3:
                raise InputError(f"NAE clause needs three variables, got {c}")
            for x in c:
                if x not in seen:
                    seen.append(x)
        self.variables = seen
        self.clauses = [tuple(c) for c in self.clauses]

    def holds(self, assignment: Dict[str, int]) -> bool:
        return all(len({assignment[x] for x in c}) == 2 for c in self.clauses)

    def satisfiable(self) -> bool:
        return _brute(self)


@dataclass
class QuadFormula:
    variables: List[str] = field(default_factory=list)
    quadruples: List[Tuple[str, str, str, str]] = field(default_factory=list)

    def __post_init__(self):
        seen = list(self.variables)
        for q in self.quadruples:
            if len(q) != 4:
                raise InputError(f"quadruple needs four variables, got {q}")
            for x in q:
                if x not in seen:
                    seen.append(x)
        self.variables = seen
        self.quadruples = [tuple(q) for q in self.quadruples]

    @staticmethod
    def relation(a, b, c, d) -> bool:
        return (a == b == c == d) or a != c

    def holds(self, assignment: Dict[str, int]) -> bool:
        return all(self.relation(*(assignment[x] for x in q)) for q in self.quadruples)

    def satisfiable(self) -> bool:
        return _brute(self)


def _brute(f) -> bool:
    vs = f.variables
    for bits in itertools.product((0, 1), repeat=len(vs)):
        if f.holds(dict(zip(vs, bits))):
            return True
    return False


def parse_formula(text: str):
    """Read ``nae x y z`` / ``quad a b c d`` lines; '#' starts a comment."""
    nae, quad = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "nae" and len(parts) == 4:
            nae.append(tuple(parts[1:]))
        elif parts[0] == "quad" and len(parts) == 5:
            quad.append(tuple(parts[1:]))
        else:
            raise ParseError(lineno, f"malformed clause {raw.strip()!r}")
    if nae and quad:
        raise InputError("a formula mixes nae and quad clauses")
    if quad:
        return QuadFormula(quadruples=quad)
    return NaeFormula(clauses=nae)


class _Builder:
    """Accumulates vertices, edges and lists of an input graph."""

    def __init__(self, H: SignedGraph):
        self.H = H
        self.G = SignedGraph()
        self.lists: Dict[str, List[str]] = {}

    def vertex(self, name: str, lst: Sequence[str]) -> str:
        if name not in self.G:
            self.G.add_vertex(name)
            self.lists[name] = list(lst)
        return name

    def edge(self, u: str, v: str, kind=BLUE):
        self.G.add_edge(u, v, kind)

    def link(self, occurrences: Dict[str, List[str]], role: str, lst: Sequence[str]):
        # one extra vertex per repeated variable, joined by blue edges
        for x, occ in occurrences.items():
            if len(occ) > 1:
                hub = self.vertex(f"{x}.{role}", lst)
                for o in occ:
                    self.edge(hub, o)

    def instance(self) -> Instance:
        return Instance(self.G, self.H, self.lists)


# chain gadget

def build_chain_nae_gadget(H: SignedGraph, chain: Chain, f: NaeFormula) -> Instance:
    problems = chain.problems(H)
    if problems:
        raise InputError("invalid chain: " + "; ".join(problems))
    U, D = chain.U, chain.D
    k = len(U) - 1
    b = _Builder(H)
    occ: Dict[str, List[str]] = {}
    for ci, clause in enumerate(f.clauses, 1):
        c = f"c{ci}"
        roles = ("x", "y", "z")
        for role, var in zip(roles, clause):
            b.vertex(f"{c}.{role}", [U[0]])
            b.vertex(f"{c}.{role}'", [U[k]])
            occ.setdefault(var, []).append(f"{c}.{role}")
        for r, s in zip(roles, roles[1:] + roles[:1]):
            path = [f"{c}.P({r},{s}).a{i}" for i in range(1, k)]
            for i, name in enumerate(path, 1):
                b.vertex(name, {U[i], D[i]})
            for i in range(1, k - 1):
                both = H.kind(U[i], U[i + 1]) is BI and H.kind(D[i], D[i + 1]) is BI
                b.edge(path[i - 1], path[i], BI if both else BLUE)
            # hexagon edges: red to the first vertex, blue to the second
            b.edge(path[0], f"{c}.{r}", RED)
            b.edge(path[0], f"{c}.{s}", BLUE)
            b.edge(path[-1], f"{c}.{r}'", RED)
            b.edge(path[-1], f"{c}.{s}'", BLUE)
    b.link(occ, "link", [U[1]])
    return b.instance()


# fixed trees for the two clause-tree reductions

def case_m_target() -> SignedGraph:
    """Reflexive path 2-3-5-4: red loop at 2, bicoloured loop at 3, blue loops at 5 and 4."""
    return SignedGraph(["2", "3", "4", "5"],
                       [("2", "3", BLUE), ("3", "5", BLUE), ("5", "4", BLUE)],
                       {"2": RED, "3": BI, "4": BLUE, "5": BLUE})


def case_d_target() -> SignedGraph:
    """Path 1-2-4-3 with a pendant 5 on a bicoloured edge; loops red at 1, blue at 3 and 4."""
    return SignedGraph(["1", "2", "3", "4", "5"],
                       [("1", "2", BLUE), ("2", "4", BLUE), ("4", "3", BLUE), ("2", "5", BI)],
                       {"1": RED, "3": BLUE, "4": BLUE})


# Clause tree: leaves x, y, z hang off m through three paths (all edges blue).
# With m on its first image, x and m agree, y disagrees with m and z is free;
# on the second image x, y agree with m and z disagrees.
_CASE_M = {
    "leaf": "5", "m": ("2", "4"),
    "x": [("3", "4", "5")],
    "y": [("2", "4"), ("3", "5")],
    "z": [("3", "5"), ("3",), ("2",), ("2",), ("3",)],
}
_CASE_D = {
    "leaf": "4", "m": ("1", "3"),
    "x": [("2", "3", "4")],
    "y": [("1", "3"), ("2", "4")],
    "z": [("2", "4"), ("2", "5"), ("1", "2"), ("1", "5"), ("2",)],
}


def _clause_tree_gadget(H: SignedGraph, spec, f: NaeFormula) -> Instance:
    b = _Builder(H)
    occ: Dict[str, List[str]] = {}
    for ci, clause in enumerate(f.clauses, 1):
        c = f"c{ci}"
        m = b.vertex(f"{c}.m", spec["m"])
        for role, var in zip("xyz", clause):
            prev = m
            for i, lst in enumerate(spec[role], 1):
                cur = b.vertex(f"{c}.{role}{i}", lst)
                b.edge(prev, cur)
                prev = cur
            leaf = b.vertex(f"{c}.{role}", [spec["leaf"]])
            b.edge(prev, leaf)
            occ.setdefault(var, []).append(leaf)
    # occurrences share the leaf image, so a common neighbour on it ties their switches
    b.link(occ, "link", [spec["leaf"]])
    return b.instance()


def build_reflexive_m_gadget(f: NaeFormula) -> Instance:
    return _clause_tree_gadget(case_m_target(), _CASE_M, f)


def build_general_d_gadget(f: NaeFormula) -> Instance:
    return _clause_tree_gadget(case_d_target(), _CASE_D, f)


# choosers on F2

def f2_target(loops: Optional[Dict[str, object]] = None) -> SignedGraph:
    """Reflexive F2: leaves 0, 1, 2 on i - i+ edges, bicoloured edges i+ - c.

    Loops default to blue with a bicoloured loop at c; pass ``loops`` to override.
    """
    vs = ["0", "1", "2", "0+", "1+", "2+", "c"]
    es = [(i, i + "+", BLUE) for i in "012"] + [(i + "+", "c", BI) for i in "012"]
    lp = {v: BLUE for v in vs}
    lp["c"] = BI
    if loops:
        lp.update(loops)
    return SignedGraph(vs, es, lp)


_Q_LISTS = ["0 1", "0+ 1+", "0 1+", "0+ c 1+", "0 2+ 1", "0+ 2 1+",
            "0+ 2+ 1", "0+ c 1+", "0 2+ 1", "0+ 2+ 1+", "0 2 1"]
_R_LISTS = ["0 1", "0+ 1+", "0 1+", "0+ c", "0 2+", "0+ 2+", "0 2"]


def _permute(lists, perm):
    def one(tok):
        if tok == "c":
            return tok
        return perm[tok[0]] + tok[1:]
    return [[one(t) for t in row.split()] for row in lists]


def _basic_chooser(i, I, j, J):
    """Lists of a relabelled Q or R path realising (i, I, j, J), or None."""
    I, J = frozenset(I), frozenset(J)
    for a, A, bb, B in ((i, I, j, J), (j, J, i, I)):
        k = ({"0", "1", "2"} - {a, bb}).pop()
        perm = {"0": a, "1": bb, "2": k}
        if A == {a, k} and B == {bb, k}:
            return _permute(_Q_LISTS, perm), (a, A, bb, B)
        if A == {a} and B == {k}:
            return _permute(_R_LISTS, perm), (a, A, bb, B)
    return None


# compositions used by the NAE tree
_COMPOSED = {
    ("0", frozenset("01"), "1", frozenset("12")): [("0", "0", "1", "2"), ("0", "01", "2", "12")],
    ("0", frozenset("12"), "1", frozenset("02")): [("0", "0", "1", "2"), ("0", "1", "2", "2"),
                                                   ("1", "1", "2", "0"), ("1", "12", "0", "02")],
    ("0", frozenset("02"), "1", frozenset("01")): [("0", "2", "1", "1"), ("2", "02", "1", "01")],
}


def _spec_key(spec):
    i, I, j, J = spec
    return (str(i), frozenset(str(x) for x in I), str(j), frozenset(str(x) for x in J))


def build_chooser(Hf2: SignedGraph, spec) -> Tuple[SignedGraph, Dict[str, List[str]]]:
    """Path q0..qn with lists forming an (i, I, j, J)-chooser from q0 to qn.

    Supports every relabelling of the Q and R paths and the three compositions
    the NAE tree needs.  Returns the path and its lists.
    """
    for v in ("0", "1", "2", "0+", "1+", "2+", "c"):
        if v not in Hf2:
            raise InputError(f"target lacks the F2 vertex {v}")
    key = _spec_key(spec)
    basic = _basic_chooser(*key)
    if basic is not None:
        rows = basic[0]
    elif key in _COMPOSED or _swap(key) in _COMPOSED:
        parts = _COMPOSED.get(key) or _COMPOSED[_swap(key)]
        rows = []
        for p in parts:
            sub = _basic_chooser(p[0], frozenset(p[1]), p[2], frozenset(p[3]))[0]
            rows = rows[:-1] + [sorted(set(rows[-1]) & set(sub[0]))] + sub[1:] if rows else sub
    else:
        raise InputError(f"no chooser construction for {spec}")
    names = [f"q{n}" for n in range(len(rows))]
    P = SignedGraph(names, [(names[n], names[n + 1], BLUE) for n in range(len(names) - 1)])
    return P, dict(zip(names, rows))


def _swap(key):
    i, I, j, J = key
    return (j, J, i, I)


def chooser_contract(Hf2: SignedGraph, P: SignedGraph, lists, spec, oracle=None) -> bool:
    """Check the chooser contract by trying every pair of end images."""
    from .oracle import solve_bruteforce
    oracle = oracle or solve_bruteforce
    key = _spec_key(spec)
    a, b = P.vertices[0], P.vertices[-1]
    allowed = {(key[0], x) for x in key[1]} | {(key[2], x) for x in key[3]}
    for fa in ("0", "1", "2"):
        for fb in ("0", "1", "2"):
            ls = dict(lists)
            if fa not in ls[a] or fb not in ls[b]:
                ok = False
            else:
                ls[a], ls[b] = [fa], [fb]
                ok = oracle(Instance(P, Hf2, ls)) is not None
            if ok != ((fa, fb) in allowed):
                return False
    return True


def build_f2_nae_gadget(f: NaeFormula, Hf2: Optional[SignedGraph] = None) -> Instance:
    """Per clause, three choosers glued at their far ends; variables map to 0 (false) or 1 (true)."""
    H = Hf2 or f2_target()
    b = _Builder(H)
    specs = [("0", "01", "1", "12"), ("0", "12", "1", "02"), ("0", "02", "1", "01")]
    for var in f.variables:
        b.vertex(var, ["0", "1"])
    for ci, clause in enumerate(f.clauses, 1):
        c = f"c{ci}"
        centre = f"{c}.b"
        for n, (var, spec) in enumerate(zip(clause, specs)):
            P, lists = build_chooser(H, spec)
            qs = P.vertices
            rename = {q: f"{c}.P{n}.{q}" for q in qs[1:-1]}
            rename[qs[0]] = var
            rename[qs[-1]] = centre
            for q in qs[1:]:
                if q == qs[-1] and centre in b.G:
                    b.lists[centre] = [h for h in b.lists[centre] if h in lists[q]]
                else:
                    b.vertex(rename[q], lists[q])
            for u, v, kd in P.edge_list():
                b.edge(rename[u], rename[v], kd)
    return b.instance()


# quadruple gadget on an unbalanced cycle-separable target

def hard_cycle_target(k: int) -> SignedGraph:
    """The odd-k chorded cycle with its s-path edge t-s1 turned red (so C is unbalanced)."""
    from .classifier import normal_form_hl
    if k < 5:
        raise InputError("the hard cycle needs k >= 5 (more than six vertices)")
    N = normal_form_hl(k)
    es = [(u, v, RED if {u, v} == {"t", "s1"} else kd) for u, v, kd in N.edge_list()]
    return SignedGraph(N.vertices, es)


def _match_hard_cycle(H: SignedGraph) -> Tuple[int, Dict[str, str]]:
    """Return k and names mapping hard_cycle_target(k) onto H up to switching, else refuse."""
    from .classifier import _cycle_variants, _hamiltonian_cycle
    from .oracle import switching_equivalent
    cyc = None if H.loops else _hamiltonian_cycle(H)
    n = len(H)
    if cyc is None or n < 8 or n % 2:
        raise InputError("target is not an unbalanced cycle-separable graph on more than six vertices")
    N = hard_cycle_target(n - 3)
    for m in _cycle_variants(H, N, cyc, _hamiltonian_cycle(N)):
        R = N.rename(m)
        if set(R.edges) != set(H.edges):
            continue
        if switching_equivalent(H, R) is not None:
            return n - 3, m
    raise InputError("target does not have the shape of the hard cycle-separable case")


def _quad_legs(k: int) -> Dict[str, List[Tuple[str, ...]]]:
    """Lists along the four legs from the leaves to the hub, hub excluded.

    Hub image t_{k-2} (first option): leg a is positive, leg c negative, legs b and d
    cross a bicoloured edge.  Hub image s1 (second option): all four legs are positive.
    """
    t = ["t"] + [f"t{i}" for i in range(1, k)] + ["w"]
    along = [(t[i],) for i in range(1, k + 1)]
    a = along + [("s2", t[k - 1])]
    b = along + [("s2", t[k - 3])]
    head = [("w",), ("s2",), ("s1",), ("t",)]
    c = head + [(("s1" if i % 2 else "s2"), t[i]) for i in range(1, k - 2)]
    d = head + [(("s1",) if i % 2 else ("t",)) for i in range(1, k - 2)]
    return {"a": a, "b": b, "c": c, "d": d}


def build_quadruple_gadget(Hcycle: SignedGraph, f: QuadFormula) -> Instance:
    k, names = _match_hard_cycle(Hcycle)
    N = hard_cycle_target(k)
    b = _Builder(N)
    legs = _quad_legs(k)
    start = {"a": "t", "b": "t", "c": f"t{k - 1}", "d": f"t{k - 1}"}
    front: Dict[str, List[str]] = {}
    back: Dict[str, List[str]] = {}
    for qi, quad in enumerate(f.quadruples, 1):
        c = f"q{qi}"
        hub = b.vertex(f"{c}.h", [f"t{k - 2}", "s1"])
        for role, var in zip("abcd", quad):
            leaf = b.vertex(f"{c}.{role}", [start[role]])
            (front if role in "ab" else back).setdefault(var, []).append(leaf)
            prev = leaf
            for i, lst in enumerate(legs[role], 1):
                cur = b.vertex(f"{c}.{role}{i}", lst)
                b.edge(prev, cur)
                prev = cur
            b.edge(prev, hub)
    b.link(front, "front", ["t1"])
    b.link(back, "back", [f"t{k - 2}"])
    # a blue path along t1..t_{k-2} ties a front occurrence to a back occurrence
    for var in front:
        if var in back:
            prev = front[var][0]
            for i in range(1, k - 1):
                cur = b.vertex(f"{var}.r{i}", [f"t{i}"])
                b.edge(prev, cur)
                prev = cur
            b.edge(prev, back[var][0])
    inst = b.instance()
    lists = {v: [names[h] for h in lst] for v, lst in inst.lists.items()}
    return Instance(inst.G, Hcycle, lists)
