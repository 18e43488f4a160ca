"""Complexity classification of fixed targets, with certified structures or hardness witnesses."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .oracle import switching_equivalent
from .polymorph import DEFAULT_MAJORITY_BOUND, find_conservative_majority
from .sgraph import (
    BI, BLUE, RED, EdgeKind, InputError, Sign, SignedGraph, apply_switching, balancing_potential,
    build_switching_graph,
)

POLYNOMIAL = "Polynomial"
NPCOMPLETE = "NPComplete"
OUT_OF_SCOPE = "OutOfScope"


@dataclass
class Chain:
    """Walks U = u0..uk and D = d0..dk with u0 = d0 and uk = dk.

    stepKinds[i-1] tells which rule justifies the step from (u_i, d_i) to (u_{i+1}, d_{i+1}).
    """

    U: List[str]
    D: List[str]
    stepKinds: List[str] = field(default_factory=list)

    def problems(self, H: SignedGraph) -> List[str]:
        return _chain_problems(H, self.U, self.D, self.stepKinds)

    def validate(self, H: SignedGraph) -> bool:
        return not self.problems(H)

    def __str__(self) -> str:
        return f"U: {' '.join(self.U)} / D: {' '.join(self.D)}"


def _is_edge(H, a, b) -> bool:
    return H.kind(a, b) is not None


def _is_bi(H, a, b) -> bool:
    return H.kind(a, b) is BI


def _is_uni(H, a, b) -> bool:
    k = H.kind(a, b)
    return k is not None and k is not BI


def _step_kind(H, a, b, a2, b2) -> Optional[str]:
    if _is_edge(H, a, a2) and _is_edge(H, b, b2) and not _is_edge(H, b, a2):
        return "edge"
    if _is_bi(H, a, a2) and _is_bi(H, b, b2) and not _is_bi(H, b, a2):
        return "bicolour"
    return None


def _chain_problems(H, U, D, kinds) -> List[str]:
    out = []
    if len(U) != len(D) or len(U) < 3:
        return ["walks must have equal length k+1 with k >= 2"]
    for w in U + D:
        if w not in H:
            return [f"unknown vertex {w}"]
    k = len(U) - 1
    if U[0] != D[0] or U[k] != D[k]:
        out.append("walks must share both ends")
    if not _is_uni(H, U[0], U[1]):
        out.append("u u1 must be unicoloured")
    if not _is_bi(H, D[0], D[1]):
        out.append("u d1 must be bicoloured")
    if not _is_bi(H, U[k - 1], U[k]):
        out.append("u_{k-1} v must be bicoloured")
    if not _is_uni(H, D[k - 1], D[k]):
        out.append("d_{k-1} v must be unicoloured")
    if kinds and len(kinds) != k - 2:
        out.append("stepKinds has the wrong length")
    for i in range(1, k - 1):
        got = _step_kind(H, U[i], D[i], U[i + 1], D[i + 1])
        if got is None:
            out.append(f"step {i} violates both rules")
        elif kinds and kinds[i - 1] != got and _step_kind_holds(H, U, D, i, kinds[i - 1]) is False:
            out.append(f"step {i} is not a {kinds[i - 1]} step")
    return out


def _step_kind_holds(H, U, D, i, kind) -> bool:
    a, b, a2, b2 = U[i], D[i], U[i + 1], D[i + 1]
    if kind == "edge":
        return _is_edge(H, a, a2) and _is_edge(H, b, b2) and not _is_edge(H, b, a2)
    return _is_bi(H, a, a2) and _is_bi(H, b, b2) and not _is_bi(H, b, a2)


def _nbrs_with_self(H, v) -> List[str]:
    """Neighbours in vertex order, v itself included when looped."""
    rank = H.index()
    out = list(H.adj[v])
    if v in H.loops:
        out.append(v)
    out.sort(key=rank.__getitem__)
    return out


def find_chain(H: SignedGraph) -> Optional[Chain]:
    """Shortest chain by breadth-first search over pairs (u_i, d_i); None if H has no chain."""
    vs = H.vertices
    nb = {v: _nbrs_with_self(H, v) for v in vs}
    parent: Dict[tuple, Optional[tuple]] = {}
    origin: Dict[tuple, str] = {}
    queue = deque()
    for u in vs:
        for u1 in nb[u]:
            if not _is_uni(H, u, u1):
                continue
            for d1 in nb[u]:
                if _is_bi(H, u, d1) and (u1, d1) not in parent:
                    parent[(u1, d1)] = None
                    origin[(u1, d1)] = u
                    queue.append((u1, d1))
    while queue:
        state = queue.popleft()
        a, b = state
        for v in nb[a]:
            if _is_bi(H, a, v) and _is_uni(H, b, v):
                return _rebuild(H, state, parent, origin[state], v)
        for a2 in nb[a]:
            for b2 in nb[b]:
                nxt = (a2, b2)
                if nxt in parent or _step_kind(H, a, b, a2, b2) is None:
                    continue
                parent[nxt] = state
                origin[nxt] = origin[state]
                queue.append(nxt)
    return None


def _rebuild(H, last, parent, u, v) -> Chain:
    states = []
    s = last
    while s is not None:
        states.append(s)
        s = parent[s]
    states.reverse()
    U = [u] + [a for a, _ in states] + [v]
    D = [u] + [b for _, b in states] + [v]
    kinds = [_step_kind(H, states[i][0], states[i][1], states[i + 1][0], states[i + 1][1])
             for i in range(len(states) - 1)]
    return Chain(U, D, kinds)


# result types

@dataclass
class PolyStructure:
    """A certified polynomial structure.

    ``switch`` is the switch set of the target that produces the normal form the
    structure refers to; ``swap`` records a global exchange of red and blue
    (used for the reflexive case with red as preferred colour).
    """

    variant: str
    details: Dict = field(default_factory=dict)
    switch: frozenset = frozenset()

    def __getitem__(self, key):
        return self.details[key]

    def get(self, key, default=None):
        return self.details.get(key, default)


@dataclass
class HardnessWitness:
    kind: str
    detail: object = None

    def __str__(self) -> str:
        if self.kind == "Chain":
            return f"chain {self.detail}"
        if self.kind in ("OddCycle", "LongInducedCycle"):
            return f"{self.kind} {' '.join(self.detail)}"
        return f"{self.kind} {self.detail}" if self.detail is not None else self.kind


@dataclass
class Classification:
    verdict: str
    structure: Optional[PolyStructure] = None
    witness: Optional[HardnessWitness] = None
    reason: str = ""

    @property
    def polynomial(self) -> bool:
        return self.verdict == POLYNOMIAL


def _poly(structure: PolyStructure) -> Classification:
    return Classification(POLYNOMIAL, structure=structure)


def _hard(H: SignedGraph, condition: str, location=None, chain: Optional[Chain] = None) -> Classification:
    """NP-complete verdict; prefers a chain witness when one exists."""
    if chain is None:
        chain = find_chain(H)
    if chain is not None:
        return Classification(NPCOMPLETE, witness=HardnessWitness("Chain", chain), reason=condition)
    return Classification(NPCOMPLETE, witness=HardnessWitness("StructureFailure", (condition, location)),
                          reason=condition)


def _out(reason: str) -> Classification:
    return Classification(OUT_OF_SCOPE, reason=reason)


# graph helpers

def _connected(H: SignedGraph, keep) -> bool:
    keep = [v for v in H.vertices if v in keep]
    if not keep:
        return True
    ks = set(keep)
    seen = {keep[0]}
    stack = [keep[0]]
    while stack:
        x = stack.pop()
        for y in H.adj[x]:
            if y in ks and y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(ks)


def _edges_connected(H: SignedGraph, edges) -> bool:
    """Is the subgraph spanned by the given edges (pairs) connected?"""
    edges = list(edges)
    if not edges:
        return True
    adj: Dict[str, set] = {}
    for u, v in edges:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    start = next(iter(adj))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(adj)


def uni_potential(H: SignedGraph) -> Optional[frozenset]:
    """Switch set turning every unicoloured non-loop edge blue, or None if impossible."""
    bare = SignedGraph(H.vertices, H.edge_list())
    pot = balancing_potential(bare)
    if pot is None:
        return None
    return frozenset(v for v, p in pot.items() if p)


def _bipartition(H: SignedGraph) -> Optional[Dict[str, int]]:
    col: Dict[str, int] = {}
    for s in H.vertices:
        if s in col:
            continue
        col[s] = 0
        stack = [s]
        while stack:
            x = stack.pop()
            for y in H.adj[x]:
                if y not in col:
                    col[y] = 1 - col[x]
                    stack.append(y)
                elif col[y] == col[x]:
                    return None
    return col


def find_odd_cycle(H: SignedGraph) -> Optional[List[str]]:
    """An odd cycle of the underlying loopless graph, as a closed vertex list."""
    col: Dict[str, int] = {}
    par: Dict[str, Optional[str]] = {}
    for s in H.vertices:
        if s in col:
            continue
        col[s] = 0
        par[s] = None
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in H.adj[x]:
                if y not in col:
                    col[y] = 1 - col[x]
                    par[y] = x
                    queue.append(y)
                elif col[y] == col[x]:
                    return _close_cycle(par, x, y)
    return None


def _close_cycle(par, x, y) -> List[str]:
    px = [x]
    while par[px[-1]] is not None:
        px.append(par[px[-1]])
    py = [y]
    while par[py[-1]] is not None:
        py.append(par[py[-1]])
    sx = set(px)
    meet = next(v for v in py if v in sx)
    a = px[:px.index(meet) + 1]
    b = py[:py.index(meet)]
    cyc = a + list(reversed(b))
    return cyc + [cyc[0]]


def find_long_induced_cycle(H: SignedGraph, minimum: int = 5) -> Optional[List[str]]:
    """A chordless cycle with at least ``minimum`` vertices, or None.

    Grows chordless paths from each start vertex, keeping the start as the
    smallest index so each cycle is met a bounded number of times.
    """
    rank = H.index()
    vs = H.vertices
    for s in vs:
        rs = rank[s]
        path = [s]
        on = {s}

        def grow():
            last = path[-1]
            for y in H.adj[last]:
                if rank[y] <= rs and y != s:
                    continue
                if y == s:
                    if len(path) >= minimum and len(path) >= 3:
                        return path + [s]
                    continue
                if y in on:
                    continue
                # y may touch only `last` on the path, or also s when closing
                bad = False
                for z in H.adj[y]:
                    if z in on and z != last and z != s:
                        bad = True
                        break
                if bad:
                    continue
                if s in H.adj[y] and len(path) + 1 < minimum and len(path) >= 2:
                    continue
                path.append(y)
                on.add(y)
                got = grow()
                if got:
                    return got
                path.pop()
                on.discard(y)
            return None

        got = grow()
        if got:
            return got
    return None


def is_bi_arc(H: SignedGraph, bound: int = DEFAULT_MAJORITY_BOUND) -> Optional[bool]:
    """Underlying graph (loops kept) admits a conservative majority; None when over bound."""
    plain = SignedGraph(H.vertices, [(u, v, BLUE) for u, v, _ in H.edge_list()],
                        {v: BLUE for v in H.loops})
    if 2 * len(plain) > bound:
        return None
    return find_conservative_majority(build_switching_graph(plain), "conservative", bound) is not None


def _swap_colours(H: SignedGraph) -> SignedGraph:
    return SignedGraph(H.vertices, [(u, v, k.negate()) for u, v, k in H.edge_list()],
                       {v: k.negate() for v, k in H.loops.items()})


# trees: shared helpers

def _tree_path(H: SignedGraph, a, b) -> List[str]:
    par = {a: None}
    queue = deque([a])
    while queue:
        x = queue.popleft()
        if x == b:
            break
        for y in H.adj[x]:
            if y not in par:
                par[y] = x
                queue.append(y)
    out = [b]
    while par[out[-1]] is not None:
        out.append(par[out[-1]])
    return list(reversed(out))


def _hang(H: SignedGraph, spine: Sequence) -> Optional[Dict[str, Tuple[int, Optional[str]]]]:
    """Attach every off-spine vertex to the spine: v -> (spine index, child or None).

    The child is the neighbour of the spine on the way to v (None for children
    themselves). Returns None if some vertex is farther than two steps.
    """
    pos = {v: i for i, v in enumerate(spine)}
    out: Dict[str, Tuple[int, Optional[str]]] = {}
    for i, v in enumerate(spine):
        for x in H.adj[v]:
            if x in pos:
                continue
            out[x] = (i, None)
            for t in H.adj[x]:
                if t == v:
                    continue
                out[t] = (i, x)
    if len(out) + len(spine) != len(H):
        return None
    for t, (i, x) in out.items():
        if x is not None and H.degree(t) != 1:
            return None
    return out


def _leaf(H, v) -> bool:
    return H.degree(v) == 1


def _children(H, spine, i) -> List[str]:
    sp = set(spine)
    return [x for x in H.adj[spine[i]] if x not in sp]


def _vertex_pairs(H: SignedGraph):
    vs = H.vertices
    for i, a in enumerate(vs):
        for b in vs[i:]:
            yield a, b


# irreflexive trees

def _typing_2cat(H, spine, d) -> Optional[Dict[str, Tuple[int, str]]]:
    """Check the good 2-caterpillar conditions for a normalized tree; return child typing."""
    k = len(spine)
    for i in range(k - 1):
        kind = H.kind(spine[i], spine[i + 1])
        if (i + 1 < d) != (kind is BI):
            return None
    types: Dict[str, Tuple[int, str]] = {}
    for i in range(k):
        idx = i + 1
        for x in _children(H, spine, i):
            ex = H.kind(spine[i], x)
            grand = [t for t in H.adj[x] if t != spine[i]]
            if not grand:
                typ = "T1" if ex is BI else "T4"
            elif ex is BI:
                typ = "T2"
            elif all(H.kind(x, t) is not BI for t in grand):
                typ = "T3"
            else:
                return None
            if idx < d and typ == "T3":
                return None
            if idx < d and typ == "T2":
                # edges at non-leaves must be bicoloured; grandchildren are leaves
                pass
            if idx > d and typ not in ("T3", "T4"):
                return None
            types[x] = (idx, typ)
    return types


def recognize_good_2caterpillar(H: SignedGraph) -> Optional[PolyStructure]:
    """Good 2-caterpillar structure for an irreflexive tree, or None."""
    if H.loops or not H.is_tree():
        return None
    S = uni_potential(H)
    Hn = apply_switching(H, S)
    bi_edges = [(u, v) for u, v, k in Hn.edge_list() if k is BI]
    if not _edges_connected(Hn, bi_edges):
        return None
    for a, b in _vertex_pairs(Hn):
        for spine in ([_tree_path(Hn, a, b)] if a == b else [_tree_path(Hn, a, b), _tree_path(Hn, b, a)]):
            if _hang(Hn, spine) is None:
                continue
            for d in range(1, len(spine) + 1):
                types = _typing_2cat(Hn, spine, d)
                if types is not None:
                    return PolyStructure("Good2Caterpillar",
                                         {"spine": spine, "d": d, "subtreeTypes": types}, S)
    return None


def classify_tree_irreflexive(H: SignedGraph) -> Classification:
    if H.loops or not H.is_tree():
        return _out("not an irreflexive tree")
    st = recognize_good_2caterpillar(H)
    if st is not None:
        return _poly(st)
    S = uni_potential(H)
    Hn = apply_switching(H, S)
    bi_edges = [(u, v) for u, v, k in Hn.edge_list() if k is BI]
    if not _edges_connected(Hn, bi_edges):
        return _hard(H, "bicoloured edges disconnected")
    return _hard(H, "no spine satisfies the good 2-caterpillar conditions")


# reflexive trees

def _good_caterpillar_at(H, spine, d, c: Sign, loops_of) -> bool:
    """Good caterpillar conditions for normalized H (unicoloured edges blue).

    ``loops_of(v)`` returns the loop kind, or the marker "any" for a wildcard loop.
    """
    k = len(spine)
    ck = EdgeKind(int(c))

    def loop_is(v, want) -> bool:
        lk = loops_of(v)
        return lk == "any" or lk is want

    for i in range(k - 1):
        kind = H.kind(spine[i], spine[i + 1])
        if (i + 1 < d) != (kind is BI):
            return False
    if not (loop_is(spine[d - 1], BI) or loop_is(spine[d - 1], ck)):
        return False
    for i in range(k):
        idx = i + 1
        v = spine[i]
        kids = _children(H, spine, i)
        if idx < d:
            if not loop_is(v, BI):
                return False
            if any(H.kind(v, x) is not BI for x in kids):
                return False
        elif idx > d:
            if not loop_is(v, ck):
                return False
            for x in kids:
                if H.kind(v, x) is BI or not loop_is(x, ck):
                    return False
        else:
            lv = loops_of(v)
            if lv == "any":
                lv_options = (BI, ck)
            else:
                lv_options = (lv,)
            ok_any = False
            for lv in lv_options:
                good = True
                if lv is BI:
                    for x in kids:
                        if loops_of(x) is BI and H.kind(v, x) is not BI:
                            good = False
                elif lv is ck:
                    for x in kids:
                        if not loop_is(x, ck) or H.kind(v, x) is BI:
                            good = False
                if d < k:
                    for x in kids:
                        if H.kind(v, x) is not BI and not loop_is(x, ck):
                            good = False
                if good:
                    ok_any = True
                    break
            if not ok_any:
                return False
    return True


def _caterpillar_search(Hn: SignedGraph, loops_of):
    """Yield (spine, d, colour) for which the normalized tree is a good caterpillar."""
    for c in (Sign.BLUE, Sign.RED):
        G = Hn if c is Sign.BLUE else _swap_colours(Hn)
        lo = loops_of if c is Sign.BLUE else (lambda v: _neg_loop(loops_of(v)))
        for spine in _caterpillar_spines(G):
            for d in range(1, len(spine) + 1):
                if _good_caterpillar_at(G, spine, d, Sign.BLUE, lo):
                    yield spine, d, c


def _neg_loop(k):
    if k == "any" or k is None:
        return k
    return k.negate()


def recognize_good_caterpillar(H: SignedGraph) -> Optional[PolyStructure]:
    if not H.is_tree() or len(H.loops) != len(H):
        return None
    S = uni_potential(H)
    Hn = apply_switching(H, S)
    bi_edges = [(u, v) for u, v, k in Hn.edge_list() if k is BI]
    if not _edges_connected(Hn, bi_edges):
        return None
    for spine, d, c in _caterpillar_search(Hn, Hn.loops.get):
        return PolyStructure("GoodCaterpillar", {"spine": spine, "d": d, "preferredColour": c}, S)
    return None


def classify_tree_reflexive(H: SignedGraph) -> Classification:
    if not H.is_tree() or len(H.loops) != len(H):
        return _out("not a reflexive tree")
    st = recognize_good_caterpillar(H)
    if st is not None:
        return _poly(st)
    if not any(k is BI for k in H.edges.values()) and not any(k is BI for k in H.loops.values()):
        if len({k for k in H.loops.values()}) > 1:
            return _hard_witness(H, "TwoUnicolouredLoopColoursNoBi")
    return _hard(H, "no spine satisfies the good caterpillar conditions")


def _hard_witness(H, kind, detail=None) -> Classification:
    chain = find_chain(H)
    if chain is not None:
        return Classification(NPCOMPLETE, witness=HardnessWitness("Chain", chain), reason=kind)
    return Classification(NPCOMPLETE, witness=HardnessWitness(kind, detail), reason=kind)


# general trees

def _loop_classes_connected(H: SignedGraph) -> Optional[str]:
    classes = {
        "red": [v for v, k in H.loops.items() if k is RED],
        "blue": [v for v, k in H.loops.items() if k is BLUE],
        "at-least-blue": [v for v, k in H.loops.items() if k.has(Sign.BLUE)],
        "at-least-red": [v for v, k in H.loops.items() if k.has(Sign.RED)],
        "bicoloured": [v for v, k in H.loops.items() if k is BI],
    }
    for name, vs in classes.items():
        if not _connected(H, vs):
            return name
    return None


def recognize_case_a(Hn: SignedGraph) -> Optional[PolyStructure]:
    """Good reflexive caterpillar with loops removed on some leaves (Hn normalized).

    A loopless leaf acts as a wildcard loop, and its blue edge may stand for a
    bicoloured edge of the original caterpillar.
    """
    if len(Hn) > 1 and any(v not in Hn.loops and not _leaf(Hn, v) for v in Hn.vertices):
        return None
    loose = [frozenset((u, v)) for u, v, k in Hn.edge_list()
             if k is not BI and ((u not in Hn.loops) or (v not in Hn.loops))]
    if len(loose) > 12:
        return None
    # spines through looped vertices first: they admit the special min ordering
    for looped_only, c in ((True, Sign.BLUE), (True, Sign.RED), (False, Sign.BLUE), (False, Sign.RED)):
        G = Hn if c is Sign.BLUE else _swap_colours(Hn)
        lo = (lambda v, G=G: G.loops.get(v, "any"))
        for spine in _caterpillar_spines(G):
            if looped_only and any(v not in G.loops for v in spine):
                continue
            for d in range(1, len(spine) + 1):
                lifted = _good_with_loose_edges(G, spine, d, lo, loose)
                if lifted is not None:
                    return PolyStructure("GoodSignedTree", {
                        "case": "A", "spine": spine, "d": d, "preferredColour": c,
                        "loopless": [v for v in Hn.vertices if v not in Hn.loops],
                        "lifted": lifted,
                    })
    return None


def _caterpillar_spines(G: SignedGraph):
    for a, b in _vertex_pairs(G):
        spines = [_tree_path(G, a, b)] if a == b else [_tree_path(G, a, b), _tree_path(G, b, a)]
        for spine in spines:
            sp = set(spine)
            if any(x not in sp and any(y not in sp for y in G.adj[x]) for x in G.vertices):
                continue
            yield spine


def _good_with_loose_edges(G, spine, d, lo, loose) -> Optional[List[frozenset]]:
    """Try every reading of the loose edges; return the edges read as bicoloured."""
    from itertools import product
    for choice in product((False, True), repeat=len(loose)):
        if any(choice):
            T = G.copy()
            for e, up in zip(loose, choice):
                if up:
                    u, v = tuple(e)
                    T.edges[e] = BI
                    T.adj[u][v] = BI
                    T.adj[v][u] = BI
        else:
            T = G
        if _good_caterpillar_at(T, spine, d, Sign.BLUE, lo):
            return [e for e, up in zip(loose, choice) if up]
    return None


def _dfs_order_tree(H, root, spine_set, looped_first=False) -> List[str]:
    rank = H.index()
    out = []
    stack = [(root, None)]
    while stack:
        x, p = stack.pop()
        out.append(x)
        kids = [y for y in H.adj[x] if y != p and y not in spine_set]
        if looped_first:
            kids.sort(key=lambda y: (y not in H.loops, rank[y]))
        else:
            kids.sort(key=rank.__getitem__)
        for y in reversed(kids):
            stack.append((y, x))
    return out


def recognize_case_b(Hn: SignedGraph) -> List[PolyStructure]:
    """All spines under which Hn (normalized, with a bicoloured loop) has the bicoloured
    2-caterpillar shape with optional leaf loops near v1 and blue pendant leaves."""
    biverts = set(Hn.loops[v] is BI and v for v in Hn.loops) - {False}
    for u, v, k in Hn.edge_list():
        if k is BI:
            biverts.update((u, v))
    Tp = [v for v in Hn.vertices if v in biverts]
    L = [v for v in Hn.vertices if v not in biverts]
    out = []
    for x in L:
        if x in Hn.loops or Hn.degree(x) != 1:
            return out
        (y,) = Hn.adj[x]
        if Hn.kind(x, y) is not BLUE or y not in biverts:
            return out
    for u, v, k in Hn.edge_list():
        if u in biverts and v in biverts and k is not BI:
            return out
    D = Hn.induced(Tp)
    if not D.is_tree():
        return out
    looped = [v for v in Hn.loops]
    for v1 in Tp:
        if Hn.loops.get(v1) is not BI:
            continue
        others = [v for v in looped if v != v1]
        if any(v not in Hn.adj[v1] for v in others):
            continue
        nonleaf_looped = [v for v in others if Hn.degree(v) > 1 or any(y != v1 for y in Hn.adj[v])]
        if len(others) > 1 and nonleaf_looped:
            continue
        if any(Hn.loops[v] is not BI and not _leaf(Hn, v) for v in others):
            continue
        for b in Hn.vertices:
            spine = _tree_path(Hn, v1, b)
            if any(v in Hn.loops for v in spine[1:]):
                continue
            if any(v in L for v in spine[1:]) and len(spine) > 1:
                continue
            hang = _hang(Hn, spine)
            if hang is None:
                continue
            ok = True
            for x in L:
                (y,) = Hn.adj[x]
                if y in spine:
                    continue
                if y in Hn.loops or hang.get(y, (0, 0))[1] is not None:
                    ok = False
                    break
            if not ok:
                continue
            out.append(PolyStructure("GoodSignedTree", {
                "case": "B", "spine": spine, "L": L, "Tprime": Tp,
            }))
    return out


def classify_tree_general(H: SignedGraph, bound: int = DEFAULT_MAJORITY_BOUND) -> Classification:
    if not H.is_tree():
        return _out("not a tree")
    if not H.loops:
        return classify_tree_irreflexive(H)
    if len(H.loops) == len(H):
        return classify_tree_reflexive(H)
    S = uni_potential(H)
    Hn = apply_switching(H, S)
    has_bi_edge = any(k is BI for k in Hn.edges.values())
    has_bi_loop = any(k is BI for k in Hn.loops.values())
    uni_loops = {k for k in Hn.loops.values() if k is not BI}
    if not has_bi_edge and not has_bi_loop:
        if len(uni_loops) > 1:
            return _hard_witness(H, "TwoUnicolouredLoopColoursNoBi")
        res = is_bi_arc(Hn, bound)
        if res is None:
            return _out(f"bi-arc test exceeds the bound {bound}")
        if not res:
            return _hard(H, "underlying tree is not bi-arc")
        colour = uni_loops.pop() if uni_loops else BLUE
        return _poly(PolyStructure("NoBicolourBalanced", {"colour": Sign(int(colour))}, S))
    if has_bi_edge and not has_bi_loop:
        return _hard(H, "bicoloured edge and unicoloured loop without a bicoloured loop")
    st = recognize_case_a(Hn)
    if st is not None:
        st.switch = S
        return _poly(st)
    cands = recognize_case_b(Hn)
    if cands:
        st = cands[0]
        st.switch = S
        st.details["candidates"] = [c["spine"] for c in cands]
        return _poly(st)
    # not good: report the first failed condition we can name
    bad = _loop_classes_connected(Hn)
    if bad is not None:
        return _hard_witness(H, "LoopColourClassDisconnected", bad)
    bi_edges = [(u, v) for u, v, k in Hn.edge_list() if k is BI] + [(v, v) for v, k in Hn.loops.items() if k is BI]
    if not _edges_connected(Hn, bi_edges):
        return _hard(H, "bicoloured part disconnected")
    return _hard(H, "neither a trimmed good caterpillar nor a bicoloured bi-arc 2-caterpillar")


# path-separable targets

def _uni_edges(H):
    return [(u, v) for u, v, k in H.edge_list() if k is not BI]


def _hamiltonian_path(H) -> Optional[List[str]]:
    es = _uni_edges(H)
    n = len(H)
    if len(es) != n - 1:
        return None
    deg: Dict[str, List[str]] = {v: [] for v in H.vertices}
    for u, v in es:
        deg[u].append(v)
        deg[v].append(u)
    if any(len(x) > 2 for x in deg.values()):
        return None
    ends = [v for v in H.vertices if len(deg[v]) <= 1]
    if n == 1:
        return list(H.vertices)
    if not ends:
        return None
    path = [ends[0]]
    prev = None
    while len(path) < n:
        nxt = [y for y in deg[path[-1]] if y != prev]
        if not nxt:
            return None
        prev = path[-1]
        path.append(nxt[0])
    return path


def _hamiltonian_cycle(H) -> Optional[List[str]]:
    es = _uni_edges(H)
    n = len(H)
    if len(es) != n or n < 3:
        return None
    deg: Dict[str, List[str]] = {v: [] for v in H.vertices}
    for u, v in es:
        deg[u].append(v)
        deg[v].append(u)
    if any(len(x) != 2 for x in deg.values()):
        return None
    cyc = [H.vertices[0]]
    prev = None
    while True:
        nxt = [y for y in deg[cyc[-1]] if y != prev]
        prev = cyc[-1]
        if nxt[0] == cyc[0]:
            break
        cyc.append(nxt[0])
    return cyc if len(cyc) == n else None


def _segments(path, bi) -> List[Tuple[int, int]]:
    """Maximal segments as (start, end) 0-based indices along the path."""
    n = len(path)
    block = [i for i in range(n - 3) if (i, i + 3) in bi]
    starts = set(block)
    segs = []
    used = set()
    for i in block:
        if i in used:
            continue
        if i - 2 in starts:
            continue
        j = i
        while j + 2 in starts:
            j += 2
        for t in range(i, j + 1, 2):
            used.add(t)
        segs.append((i, j + 3))
    return segs


def _segmented_edges(n, segs, kind, lr_index=None):
    """Bicoloured edges mandated by the segments under the given kind (R, L, LR)."""
    out = set()

    def right(a, b, upto=n):
        for e in range(a, b - 2, 2):
            for o in range(e + 3, upto, 2):
                out.add((e, o))

    def left(a, b, downto=0):
        for e in range(b, a + 2, -2):
            for o in range(e - 3, downto - 1, -2):
                out.add((o, e))

    if kind == "R":
        for a, b in segs:
            right(a, b)
    elif kind == "L":
        for a, b in segs:
            left(a, b)
    else:
        for idx, (a, b) in enumerate(segs):
            if idx < lr_index:
                left(a, b)
            elif idx > lr_index:
                right(a, b)
            else:
                left(a, b)
                right(a, b)
                for e in range(a - 2, -1, -2):
                    for o in range(b + 2, n, 2):
                        out.add((e, o))
    return out


def recognize_segmented(H: SignedGraph) -> Optional[PolyStructure]:
    if H.loops:
        return None
    path0 = _hamiltonian_path(H)
    if path0 is None:
        return None
    S = uni_potential(H)
    if S is None:
        return None
    Hn = apply_switching(H, S)
    for path in (path0, list(reversed(path0))):
        pos = {v: i for i, v in enumerate(path)}
        bi = set()
        for u, v, k in Hn.edge_list():
            if k is BI:
                a, b = sorted((pos[u], pos[v]))
                bi.add((a, b))
        if any(b - a == 1 for a, b in bi):
            return None
        if any((b - a) % 2 == 0 for a, b in bi):
            return None
        segs = _segments(path, bi)
        n = len(path)
        options = [("R", None), ("L", None)] + [("LR", i) for i in range(len(segs))]
        for kind, li in options:
            if _segmented_edges(n, segs, kind, li) == bi:
                return PolyStructure("Segmented", {
                    "kind": kind, "path": path, "segments": [(path[a], path[b]) for a, b in segs],
                    "segmentIndex": segs, "lrSegment": li,
                    "forwardSources": [path[e] for a, b in segs for e in range(a, b - 2, 2)],
                    "backwardSources": [path[o] for a, b in segs for o in range(a + 3, b + 1, 2)],
                }, S)
    return None


def classify_path_separable(H: SignedGraph) -> Classification:
    if H.loops or _hamiltonian_path(H) is None:
        return _out("unicoloured edges do not form a Hamiltonian path")
    if uni_potential(H) is None:
        return _out("unicoloured path cannot be switched blue")
    st = recognize_segmented(H)
    if st is not None:
        return _poly(st)
    return _hard(H, "not switching equivalent to a segmented graph")


# cycle-separable targets

def normal_form_h0() -> SignedGraph:
    return SignedGraph(["t", "s1", "s2", "w"],
                       [("t", "s1", BLUE), ("s1", "s2", BLUE), ("s2", "w", BLUE), ("w", "t", BLUE)])


def normal_form_h1() -> SignedGraph:
    return SignedGraph(["t", "s1", "s2", "w", "t1", "t2"], [
        ("t", "s1", BLUE), ("s1", "s2", BLUE), ("s2", "w", BLUE),
        ("t", "t1", RED), ("t1", "t2", RED), ("t2", "w", RED), ("t", "w", BI)])


def normal_form_hl(ell: int) -> SignedGraph:
    if ell < 3 or ell % 2 == 0:
        raise InputError("the index must be odd and at least 3")
    ts = ["t"] + [f"t{i}" for i in range(1, ell)] + ["w"]
    es = [("t", "s1", BLUE), ("s1", "s2", BLUE), ("s2", "w", BLUE)]
    es += [(ts[i], ts[i + 1], BLUE) for i in range(ell)]
    for i in range(0, ell + 1, 2):
        for j in range(i + 3, ell + 1, 2):
            es.append((ts[i], ts[j], BI))
    return SignedGraph(["t", "s1", "s2", "w"] + ts[1:-1], es)


def _cycle_variants(H: SignedGraph, N: SignedGraph, cyc_h, cyc_n):
    """Relabelings of N onto H along the unicoloured Hamiltonian cycles, by rotation and reflection."""
    n = len(cyc_h)
    for r in range(n):
        for rev in (False, True):
            seq = cyc_n[r:] + cyc_n[:r]
            if rev:
                seq = [seq[0]] + list(reversed(seq[1:]))
            yield dict(zip(seq, cyc_h))


def recognize_cycle(H: SignedGraph) -> Optional[PolyStructure]:
    if H.loops:
        return None
    cyc = _hamiltonian_cycle(H)
    if cyc is None:
        return None
    n = len(cyc)
    forms = []
    if n == 4:
        forms.append(("CycleH0", None, normal_form_h0()))
    if n == 6:
        forms.append(("CycleH1", None, normal_form_h1()))
    if n >= 6 and n % 2 == 0:
        forms.append(("CycleHl", n - 3, normal_form_hl(n - 3)))
    for name, ell, N in forms:
        cyc_n = _hamiltonian_cycle(N)
        for m in _cycle_variants(H, N, cyc, cyc_n):
            R = N.rename(m)
            if {e for e in R.edges} != {e for e in H.edges}:
                continue
            try:
                S = switching_equivalent(H, R)
            except InputError:
                continue
            if S is not None:
                inv = {v: k for k, v in m.items()}
                det = {"names": {k: m[k] for k in N.vertices}, "normal": N, "renamed": R}
                if ell is not None:
                    det["l"] = ell
                return PolyStructure(name, det, S)
    return None


def classify_cycle_separable(H: SignedGraph) -> Classification:
    if H.loops or _hamiltonian_cycle(H) is None:
        return _out("unicoloured edges do not form a Hamiltonian cycle")
    st = recognize_cycle(H)
    if st is not None:
        return _poly(st)
    return _hard(H, "not switching equivalent to a polynomial cycle-separable normal form")


# dispatcher

def classify(H: SignedGraph, bound: int = DEFAULT_MAJORITY_BOUND) -> Classification:
    if len(H) == 0:
        return _out("empty target")
    if len(H.components()) > 1:
        return _out("disconnected target")
    irreflexive = not H.loops
    if irreflexive:
        odd = find_odd_cycle(H)
        if odd is not None:
            return Classification(NPCOMPLETE, witness=HardnessWitness("OddCycle", odd), reason="odd cycle")
        long = find_long_induced_cycle(H)
        if long is not None:
            return Classification(NPCOMPLETE, witness=HardnessWitness("LongInducedCycle", long),
                                  reason="induced cycle longer than four")
    chain = find_chain(H)
    if chain is not None:
        return Classification(NPCOMPLETE, witness=HardnessWitness("Chain", chain), reason="chain")
    if H.is_tree():
        return classify_tree_general(H, bound)
    if irreflexive and _hamiltonian_path(H) is not None and uni_potential(H) is not None:
        return classify_path_separable(H)
    if irreflexive and _hamiltonian_cycle(H) is not None:
        return classify_cycle_separable(H)
    if not any(k is BI for k in H.edges.values()) and not any(k is BI for k in H.loops.values()):
        return _classify_no_bicolour(H, bound)
    return _out("target shape is not covered (not a tree, not path- or cycle-separable)")


def _classify_no_bicolour(H: SignedGraph, bound: int) -> Classification:
    """Balanced (all blue after switching) or anti-balanced (all red) targets only."""
    colours = set(H.loops.values())
    S = uni_potential(H)
    if S is not None and colours <= {BLUE}:
        colour = Sign.BLUE
    else:
        S = uni_potential(_swap_colours(H))
        if S is None or not colours <= {RED}:
            return _hard(H, "neither balanced nor anti-balanced")
        colour = Sign.RED
    res = is_bi_arc(H, bound)
    if res is None:
        return _out(f"bi-arc test exceeds the bound {bound}")
    if not res:
        return _hard(H, "underlying graph is not bi-arc")
    return _poly(PolyStructure("NoBicolourBalanced", {"colour": colour}, S))


__all__ = [
    "Chain", "PolyStructure", "HardnessWitness", "Classification", "POLYNOMIAL", "NPCOMPLETE", "OUT_OF_SCOPE",
    "find_chain", "classify", "classify_tree_irreflexive", "classify_tree_reflexive", "classify_tree_general",
    "classify_path_separable", "classify_cycle_separable", "recognize_good_2caterpillar",
    "recognize_good_caterpillar", "recognize_case_a", "recognize_case_b", "recognize_segmented",
    "recognize_cycle", "normal_form_h0", "normal_form_h1", "normal_form_hl", "find_odd_cycle",
    "find_long_induced_cycle", "is_bi_arc", "uni_potential",
]
