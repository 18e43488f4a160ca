"""Majority polymorphisms of switching graphs: verification and backtracking search."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .consistency import bits
from .sgraph import BI, InputError, Sign, SignedGraph, SwitchingGraph, apply_switching, build_switching_graph

CONSERVATIVE = "conservative"
SEMI = "semi"
DEFAULT_MAJORITY_BOUND = 24


@dataclass
class MajorityTable:
    """Total ternary operation on the vertices of a switching graph."""

    domain: List[str]
    table: Dict[Tuple[str, str, str], str]

    def __call__(self, a, b, c):
        return self.table[(a, b, c)]


class _Dom:
    """Switching graph reduced to index form with colour adjacency masks."""

    def __init__(self, Hp: SwitchingGraph):
        self.names = list(Hp.vertices)
        self.m = len(self.names)
        self.idx = {v: i for i, v in enumerate(self.names)}
        self.twin = [self.idx[Hp.partner[v]] for v in self.names]
        self.adj = {Sign.BLUE: [0] * self.m, Sign.RED: [0] * self.m}
        for colour, edges in ((Sign.BLUE, Hp.base.blue), (Sign.RED, Hp.base.red)):
            for e in edges:
                if len(e) == 1:
                    (a,) = e
                    self.adj[colour][self.idx[a]] |= 1 << self.idx[a]
                else:
                    a, b = e
                    self.adj[colour][self.idx[a]] |= 1 << self.idx[b]
                    self.adj[colour][self.idx[b]] |= 1 << self.idx[a]

    def allowed(self, a, b, c, mode) -> int:
        if a == b or a == c:
            return 1 << a
        if b == c:
            return 1 << b
        m = (1 << a) | (1 << b) | (1 << c)
        if mode == SEMI:
            m |= (1 << self.twin[a]) | (1 << self.twin[b]) | (1 << self.twin[c])
        return m


def verify_majority(Hp: SwitchingGraph, t: MajorityTable, mode: str = CONSERVATIVE):
    """Exhaustive check. Returns (ok, witness) where witness names the failed law."""
    d = _Dom(Hp)
    m = d.m
    names = d.names
    f = [0] * (m ** 3)
    for a in range(m):
        for b in range(m):
            for c in range(m):
                key = (names[a], names[b], names[c])
                if key not in t.table:
                    return False, ("missing", key)
                val = t.table[key]
                if val not in d.idx:
                    return False, ("value outside domain", key, val)
                vi = d.idx[val]
                if not (d.allowed(a, b, c, mode) >> vi) & 1:
                    return False, ("majority or conservativity", key, val)
                f[(a * m + b) * m + c] = vi
    for colour in (Sign.BLUE, Sign.RED):
        adj = d.adj[colour]
        for a in range(m):
            for b in range(m):
                for c in range(m):
                    x = f[(a * m + b) * m + c]
                    for a2 in bits(adj[a]):
                        for b2 in bits(adj[b]):
                            for c2 in bits(adj[c]):
                                y = f[(a2 * m + b2) * m + c2]
                                if not (adj[x] >> y) & 1:
                                    return False, ("edge", colour.name,
                                                   (names[a], names[b], names[c]),
                                                   (names[a2], names[b2], names[c2]))
    return True, None


def find_conservative_majority(Hp: SwitchingGraph, mode: str = CONSERVATIVE,
                               bound: int = DEFAULT_MAJORITY_BOUND) -> Optional[MajorityTable]:
    """Backtracking with arc-consistency propagation over table entries; None is exhaustive."""
    d = _Dom(Hp)
    m = d.m
    if m > bound:
        raise InputError(f"majority search limited to {bound} switching-graph vertices, got {m}")
    if m == 0:
        return MajorityTable([], {})
    mm = m * m
    N = m * mm
    dom = [0] * N
    for a in range(m):
        for b in range(m):
            for c in range(m):
                dom[(a * m + b) * m + c] = d.allowed(a, b, c, mode)
    adjs = (d.adj[Sign.BLUE], d.adj[Sign.RED])
    trail: List[Tuple[int, int]] = []

    def propagate(queue: List[int]) -> bool:
        inq = set(queue)
        while queue:
            t = queue.pop()
            inq.discard(t)
            a, r = divmod(t, mm)
            b, c = divmod(r, m)
            dt = dom[t]
            for adj in adjs:
                support = 0
                for x in bits(dt):
                    support |= adj[x]
                for a2 in bits(adj[a]):
                    for b2 in bits(adj[b]):
                        base = (a2 * m + b2) * m
                        for c2 in bits(adj[c]):
                            s = base + c2
                            ds = dom[s]
                            nd = ds & support
                            if nd != ds:
                                if not nd:
                                    return False
                                trail.append((s, ds))
                                dom[s] = nd
                                if s not in inq:
                                    inq.add(s)
                                    queue.append(s)
        return True

    if not propagate(list(range(N))):
        return None

    def undo(to: int):
        while len(trail) > to:
            s, old = trail.pop()
            dom[s] = old

    # iterative DFS over undecided triples in lexicographic order
    stack: List[Tuple[int, int, int]] = []  # (triple, remaining values, trail mark)

    def next_var(start: int) -> int:
        for t in range(start, N):
            if dom[t] & (dom[t] - 1):
                return t
        return -1

    t = next_var(0)
    if t >= 0:
        stack.append((t, dom[t], len(trail)))
    while stack:
        t, rest, mark = stack.pop()
        undo(mark)
        if not rest:
            continue
        low = rest & -rest
        stack.append((t, rest ^ low, mark))
        trail.append((t, dom[t]))
        dom[t] = low
        if not propagate([t]):
            continue
        nt = next_var(t + 1)
        if nt < 0:
            break
        stack.append((nt, dom[nt], len(trail)))
    else:
        if t >= 0:
            return None
    names = d.names
    table = {}
    for a in range(m):
        for b in range(m):
            for c in range(m):
                v = dom[(a * m + b) * m + c]
                table[(names[a], names[b], names[c])] = names[v.bit_length() - 1]
    return MajorityTable(names, table)


# majority for good signed 2-caterpillars (case B trees)

def _dominates(H, y, x) -> bool:
    """Every blue (red) neighbour of x is a blue (red) neighbour of y; loops count as self-neighbours."""
    for colour in (Sign.BLUE, Sign.RED):
        nx = {u for u, k in H.adj[x].items() if k.has(colour)}
        if x in H.loops and H.loops[x].has(colour):
            nx.add(x)
        ny = {u for u, k in H.adj[y].items() if k.has(colour)}
        if y in H.loops and H.loops[y].has(colour):
            ny.add(y)
        if not nx <= ny:
            return False
    return True


def _tree_choice(Hn, spine, looped_first: bool):
    """The median-like choice f on distinct triples of vertices of the underlying tree."""
    from .classifier import _bipartition, _dfs_order_tree, _hang

    hang = _hang(Hn, spine)
    if hang is None:
        return None
    sp = set(spine)
    root = {v: i for i, v in enumerate(spine, 1)}
    for x, (i, _) in hang.items():
        root[x] = i + 1
    order: List[str] = []
    for i, v in enumerate(spine, 1):
        order += _dfs_order_tree(Hn, v, sp, looped_first=looped_first and i == 1)
    pos = {v: i for i, v in enumerate(order)}
    colour = _bipartition(SignedGraph(Hn.vertices, Hn.edge_list()))
    v1 = spine[0]
    looped = set(Hn.loops)
    looped_nbrs = [u for u in Hn.adj[v1] if u in looped]
    only = looped_nbrs[0] if len(looped_nbrs) == 1 else None
    looped_leaves = {u for u in looped_nbrs if Hn.degree(u) == 1}

    def inside(x, i):
        return root[x] == i and x != spine[i - 1]

    def f(x, y, z):
        trio = (x, y, z)
        if colour[x] == colour[y] == colour[z]:
            m = sorted(root[a] for a in trio)[1]
            in_m = sorted((a for a in trio if root[a] == m), key=pos.__getitem__)
            if len(in_m) == 1:
                return in_m[0]
            second = False
            ins = [a for a in trio if inside(a, m)]
            if m >= 2 and len(ins) == 3:
                second = True
            if m == 1:
                nl = sum(a in looped for a in ins)
                if len(ins) == 3 and nl <= 1:
                    second = True
                if len(ins) == 2 and nl == 1:
                    second = True
                if len(ins) == 2 and nl == 0 and only is not None:
                    third = next(a for a in trio if a not in ins)
                    if sum(only in Hn.adj[a] for a in ins) == 1 and third != v1:
                        second = True
            return in_m[1] if second else in_m[0]
        if v1 in trio and any(a in looped_leaves for a in trio):
            return v1
        for a, b in ((x, y), (x, z), (y, z)):
            if colour[a] == colour[b]:
                return min(a, b, key=pos.__getitem__)
        raise AssertionError("three vertices of a bipartite graph always repeat a colour")

    return f


def _tree_table(Hn, sw: SwitchingGraph, f, L: set, primed_first: bool) -> Optional[Dict]:
    xs = sw.vertices
    o = sw.origin
    uni_loop = {v for v, k in Hn.loops.items() if k is not BI}
    table: Dict[Tuple[str, str, str], str] = {}
    later = []
    for a in xs:
        for b in xs:
            for c in xs:
                trio = (a, b, c)
                if a == b or a == c:
                    table[trio] = a
                    continue
                if b == c:
                    table[trio] = b
                    continue
                xyz = (o[a], o[b], o[c])
                if sum(v in L for v in xyz) >= 2:
                    later.append(trio)
                    continue
                if len(set(xyz)) == 2:
                    rep = next(v for v in xyz if xyz.count(v) == 2)
                    copies = [s for s in trio if o[s] == rep]
                    other = next(s for s in trio if o[s] != rep)
                    if primed_first:
                        val = next((s for s in copies if sw.flipped[s]), copies[0])
                    else:
                        val = copies[0]
                    if (rep in L or rep in uni_loop) and _dominates(Hn, o[other], rep):
                        val = other
                    table[trio] = val
                    continue
                v = f(*xyz)
                j = xyz.index(v)
                if v in L:
                    for i, u in enumerate(xyz):
                        if u != v and _dominates(Hn, u, v):
                            j = i
                            break
                table[trio] = trio[j]
    d = _Dom(sw)
    names = d.names
    for trio in later:
        a, b, c = (d.idx[s] for s in trio)
        for val in trio:
            vi = d.idx[val]
            ok = True
            for colour in (Sign.BLUE, Sign.RED):
                adj = d.adj[colour]
                for a2 in bits(adj[a]):
                    for b2 in bits(adj[b]):
                        for c2 in bits(adj[c]):
                            other = table.get((names[a2], names[b2], names[c2]))
                            if other is not None and not (adj[vi] >> d.idx[other]) & 1:
                                ok = False
                                break
                        if not ok:
                            break
                    if not ok:
                        break
                if not ok:
                    break
            if ok:
                table[trio] = val
                break
        else:
            return None
    return table


def build_tree_majority(H: SignedGraph, structure, bound: int = DEFAULT_MAJORITY_BOUND) -> MajorityTable:
    """Conservative majority of H+ for a case B good signed tree.

    Built on the normalized tree from the median choice on its underlying
    2-caterpillar and carried to H+ by the switching isomorphism. Every
    candidate spine and both readings of the repeated-vertex rule are tried;
    if none verifies, a bounded search takes over.
    """
    if structure is None or structure.variant != "GoodSignedTree" or structure["case"] != "B":
        raise InputError("build_tree_majority needs a certified case B good signed tree")
    S = set(structure.switch)
    Hn = apply_switching(H, S)
    swn = build_switching_graph(Hn)
    sw = build_switching_graph(H)
    phi = {x: (swn.partner[x] if swn.origin[x] in S else x) for x in swn.vertices}
    L = set(structure["L"])
    attempt = 0
    for spine in structure.get("candidates", [structure["spine"]]):
        for looped_first in (True, False):
            f = _tree_choice(Hn, spine, looped_first)
            if f is None:
                continue
            for primed_first in (False, True):
                attempt += 1
                tab = _tree_table(Hn, swn, f, L, primed_first)
                if tab is None:
                    continue
                t = MajorityTable(list(sw.vertices),
                                  {(phi[a], phi[b], phi[c]): phi[v] for (a, b, c), v in tab.items()})
                if verify_majority(sw, t, CONSERVATIVE)[0]:
                    t.origin = "construction"
                    t.attempt = attempt
                    return t
    t = find_conservative_majority(sw, CONSERVATIVE, bound)
    if t is None:
        raise InputError("no conservative majority exists for this target")
    t.origin = "search"
    return t


def twin_image(Hp: SwitchingGraph, t: MajorityTable) -> MajorityTable:
    """Apply the twin involution to arguments and value."""
    p = Hp.partner
    return MajorityTable(list(t.domain), {(p[a], p[b], p[c]): p[v] for (a, b, c), v in t.table.items()})


__all__ = [
    "MajorityTable", "verify_majority", "build_tree_majority", "find_conservative_majority", "twin_image",
    "CONSERVATIVE", "SEMI", "DEFAULT_MAJORITY_BOUND",
]
