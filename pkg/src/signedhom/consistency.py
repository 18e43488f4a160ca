"""Arc and pair consistency over bitset lists, min-ordering checks, and greedy minima."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .sgraph import BI, BLUE, RED, EdgeKind, Instance, Sign, SignedGraph


class TargetIndex:
    """Neighbourhood bitmasks of a target, indexed by target vertex order.

    Loops count as adjacency of a vertex to itself.
    """

    def __init__(self, H: SignedGraph):
        self.H = H
        self.names = H.vertices
        self.idx = {v: i for i, v in enumerate(self.names)}
        n = len(self.names)
        self.full = (1 << n) - 1
        self.any = [0] * n
        self.bi = [0] * n
        self.blue = [0] * n
        self.red = [0] * n
        self.uni = [0] * n
        for u, v, k in H.edge_list():
            a, b = self.idx[u], self.idx[v]
            self._put(a, b, k)
            self._put(b, a, k)
        for v, k in H.loops.items():
            a = self.idx[v]
            self._put(a, a, k)
        self.looped = sum(1 << self.idx[v] for v in H.loops)
        self.biloop = sum(1 << self.idx[v] for v, k in H.loops.items() if k is BI)

    def _put(self, a, b, k):
        bit = 1 << b
        self.any[a] |= bit
        if k.has(Sign.BLUE):
            self.blue[a] |= bit
        if k.has(Sign.RED):
            self.red[a] |= bit
        if k is BI:
            self.bi[a] |= bit
        else:
            self.uni[a] |= bit

    def mask(self, vs: Iterable) -> int:
        m = 0
        for v in vs:
            m |= 1 << self.idx[v]
        return m

    def members(self, mask: int) -> List[str]:
        out = []
        while mask:
            low = mask & -mask
            out.append(self.names[low.bit_length() - 1])
            mask ^= low
        return out


def bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class ListState:
    """Mutable lists L(v) as bitmasks over the target; operations only shrink them."""

    def __init__(self, G: SignedGraph, H: SignedGraph, lists: Mapping[str, Iterable] | None = None,
                 tindex: Optional[TargetIndex] = None):
        self.G = G
        self.H = H
        self.t = tindex or TargetIndex(H)
        self.lists: Dict[str, int] = {}
        for v in G.vertices:
            if lists is not None and v in lists:
                self.lists[v] = self.t.mask(lists[v])
            else:
                self.lists[v] = self.t.full

    @classmethod
    def from_instance(cls, inst: Instance, tindex: Optional[TargetIndex] = None) -> "ListState":
        return cls(inst.G, inst.H, inst.lists, tindex)

    def copy(self) -> "ListState":
        other = ListState.__new__(ListState)
        other.G, other.H, other.t = self.G, self.H, self.t
        other.lists = dict(self.lists)
        return other

    def get(self, v) -> List[str]:
        return self.t.members(self.lists[v])

    def remove(self, v, hs: Iterable) -> None:
        self.lists[v] &= ~self.t.mask(hs)

    def empty(self) -> bool:
        return any(m == 0 for m in self.lists.values())

    def as_dict(self) -> Dict[str, List[str]]:
        return {v: self.get(v) for v in self.G.vertices}


def _revise_all(lists: Dict, arcs: Dict, rows: Callable[[EdgeKind], List[int]]) -> bool:
    """FIFO arc consistency. arcs[v] = list of (w, kind) over directed constraints v->w."""
    queue = deque()
    inq = set()
    for v in lists:
        for w, k in arcs.get(v, ()):
            queue.append((v, w, k))
            inq.add((v, w, k))
    while queue:
        v, w, k = queue.popleft()
        inq.discard((v, w, k))
        rel = rows(k)
        lw = lists[w]
        keep = 0
        for a in bits(lists[v]):
            if rel[a] & lw:
                keep |= 1 << a
        if keep != lists[v]:
            lists[v] = keep
            if not keep:
                return False
            for x, kx in arcs.get(v, ()):
                item = (x, v, kx)
                if item not in inq:
                    queue.append(item)
                    inq.add(item)
    return True


def _arcs(G: SignedGraph, keep: Callable[[EdgeKind], bool]) -> Dict[str, List[tuple]]:
    arcs: Dict[str, List[tuple]] = {v: [] for v in G.vertices}
    for u, v, k in G.edge_list():
        if keep(k):
            arcs[u].append((v, k))
            arcs[v].append((u, k))
    return arcs


def arc_consistency(state: ListState) -> bool:
    """Arc consistency for the underlying graphs. Returns False when a list empties."""
    t = state.t
    for v in state.G.loops:
        state.lists[v] &= t.looped
    if state.empty():
        return False
    return _revise_all(state.lists, _arcs(state.G, lambda k: True), lambda k: t.any)


def bicoloured_arc_consistency(state: ListState) -> bool:
    """Arc consistency over bicoloured input edges, requiring bicoloured support."""
    t = state.t
    for v, k in state.G.loops.items():
        if k is BI:
            state.lists[v] &= t.biloop
    if state.empty():
        return False
    return _revise_all(state.lists, _arcs(state.G, lambda k: k is BI), lambda k: t.bi)


def full_arc_consistency(state: ListState) -> bool:
    """Both passes to a common fixed point."""
    while True:
        before = dict(state.lists)
        if not arc_consistency(state) or not bicoloured_arc_consistency(state):
            return False
        if state.lists == before:
            return True


# pair consistency on generic binary CSPs

class BinaryCSP:
    """Variables with bitmask domains and binary constraints given as row tables.

    cons[(u, v)] = rows where rows[a] is the mask of values of v compatible with u = a.
    """

    def __init__(self, domains: Dict, size: int):
        self.domains = dict(domains)
        self.size = size
        self.cons: Dict[Tuple, List[int]] = {}

    def add(self, u, v, rows: List[int]) -> None:
        if u == v:
            self.domains[u] &= sum(1 << a for a in range(self.size) if (rows[a] >> a) & 1)
            return
        if (u, v) in self.cons:
            old = self.cons[(u, v)]
            rows = [old[a] & rows[a] for a in range(self.size)]
        self.cons[(u, v)] = rows
        inv = [0] * self.size
        for a in range(self.size):
            for b in bits(rows[a]):
                inv[b] |= 1 << a
        self.cons[(v, u)] = inv


def transpose(rows: List[int], size: int) -> List[int]:
    inv = [0] * size
    for a in range(size):
        for b in bits(rows[a]):
            inv[b] |= 1 << a
    return inv


def pair_consistency(csp: BinaryCSP) -> Optional[Dict[Tuple, List[int]]]:
    """(2,3)-consistency. Returns allowed pair tables R[(u,v)][a] for every ordered pair
    of distinct variables, or None when some domain or relation empties.
    Domains in ``csp`` are narrowed in place."""
    vs = list(csp.domains)
    n = csp.size
    dom = dict(csp.domains)
    R: Dict[Tuple, List[int]] = {}
    for u in vs:
        for v in vs:
            if u != v:
                base = csp.cons.get((u, v))
                R[(u, v)] = [((base[a] if base is not None else ~0) & dom[v]) if (dom[u] >> a) & 1 else 0
                             for a in range(n)]
    changed = True
    while changed:
        changed = False
        for u in vs:
            for v in vs:
                if u == v:
                    continue
                ruv = R[(u, v)]
                for w in vs:
                    if w == u or w == v:
                        continue
                    ruw, rwv = R[(u, w)], R[(w, v)]
                    for a in bits(dom[u]):
                        row = ruv[a]
                        if not row:
                            continue
                        reach = 0
                        for c in bits(ruw[a]):
                            reach |= rwv[c]
                        if row & ~reach:
                            ruv[a] = row & reach
                            changed = True
                tr = transpose(ruv, n)
                rvu = R[(v, u)]
                for b in range(n):
                    if rvu[b] & ~tr[b]:
                        rvu[b] &= tr[b]
                        changed = True
        for u in vs:
            for v in vs:
                if u == v:
                    continue
                ruv = R[(u, v)]
                for a in bits(dom[u]):
                    if not ruv[a]:
                        dom[u] &= ~(1 << a)
                        changed = True
            if not dom[u]:
                return None
        for (u, v), rows in R.items():
            for a in range(n):
                if rows[a] and (not (dom[u] >> a) & 1 or rows[a] & ~dom[v]):
                    rows[a] = rows[a] & dom[v] if (dom[u] >> a) & 1 else 0
                    changed = True
    csp.domains = dom
    return R


def pair_consistency_state(state: ListState) -> Optional[Dict[Tuple, List[int]]]:
    """Pair consistency for the underlying-graph list problem of a ListState."""
    t = state.t
    csp = BinaryCSP(dict(state.lists), len(t.names))
    for u, v, k in state.G.edge_list():
        csp.add(u, v, t.bi if k is BI else t.any)
    for v, k in state.G.loops.items():
        csp.add(v, v, t.bi if k is BI else t.any)
    R = pair_consistency(csp)
    if R is None:
        return None
    state.lists.update(csp.domains)
    return R


# orderings

@dataclass
class MinOrdering:
    """One linear order of all target vertices; loops count as edges."""

    order: List[str]
    special: bool = False

    def rank(self) -> Dict[str, int]:
        return {v: i for i, v in enumerate(self.order)}


@dataclass
class BipMinOrdering:
    black: List[str]
    white: List[str]
    special: bool = False

    def rank(self) -> Dict[str, int]:
        r = {v: i for i, v in enumerate(self.black)}
        r.update({v: i for i, v in enumerate(self.white)})
        return r

    def colour(self) -> Dict[str, str]:
        c = {v: "b" for v in self.black}
        c.update({v: "w" for v in self.white})
        return c


def _law_violation(H: SignedGraph, xs: Sequence, ys: Sequence, adj: Callable) -> Optional[tuple]:
    """First (x, x', y, y') with x<x', y<y', xy' and x'y edges but xy not an edge."""
    for i, x in enumerate(xs):
        for x2 in xs[i + 1:]:
            for j, y in enumerate(ys):
                if adj(x, y) or not adj(x2, y):
                    continue
                for y2 in ys[j + 1:]:
                    if adj(x, y2):
                        return (x, x2, y, y2)
    return None


def verify_min_ordering(H: SignedGraph, ord, preferred: Sign = Sign.BLUE,
                        spine: Optional[Sequence] = None) -> Tuple[bool, Optional[tuple]]:
    """Check the min-ordering law and, when flagged special, the special conditions.

    For a MinOrdering with the special flag, ``spine`` lists the vertices whose
    neighbourhoods are constrained (all vertices when omitted).
    Returns (ok, witness).
    """
    adj = lambda a, b: H.kind(a, b) is not None
    if isinstance(ord, BipMinOrdering):
        if sorted(ord.black + ord.white) != sorted(H.vertices):
            return False, ("not a partition of the vertices",)
        for a in ord.black:
            for b in ord.black:
                if adj(a, b):
                    return False, ("edge inside a colour class", a, b)
        for a in ord.white:
            for b in ord.white:
                if adj(a, b):
                    return False, ("edge inside a colour class", a, b)
        w = _law_violation(H, ord.white, ord.black, adj)
        if w is not None:
            return False, ("min law",) + w
        if ord.special:
            rank = ord.rank()
            for v in H.vertices:
                bis = [u for u, k in H.adj[v].items() if k is BI]
                unis = [u for u, k in H.adj[v].items() if k is not BI]
                for a in bis:
                    for b in unis:
                        if rank[a] > rank[b]:
                            return False, ("special", v, a, b)
        return True, None
    if sorted(ord.order) != sorted(H.vertices):
        return False, ("not a permutation of the vertices",)
    w = _law_violation(H, ord.order, ord.order, adj)
    if w is not None:
        return False, ("min law",) + w
    if ord.special:
        rank = ord.rank()
        centres = list(spine) if spine is not None else H.vertices
        skip = set(spine) if spine is not None else set()
        for v in centres:
            nbrs = [x for x in H.adj[v] if x not in skip]
            for x in nbrs:
                for x2 in nbrs:
                    if rank[x] > rank[x2] and _special_prefers(H, v, x, x2, preferred):
                        return False, ("special", v, x, x2)
    return True, None


def _special_key(H: SignedGraph, v, x, preferred: Sign) -> tuple:
    pk = EdgeKind(int(preferred))
    lx = H.loops.get(x)
    loop_rank = None if lx is None else (0 if lx is BI else 1 if lx is pk else 2)
    return (H.kind(v, x) is not BI, loop_rank)


def _special_prefers(H: SignedGraph, v, x, x2, preferred: Sign) -> bool:
    """True if x must precede x2 among the children of v.

    The conditions are read with priority: a bicoloured edge to v beats a
    unicoloured one, and loop colours only decide between children whose
    edges to v have the same kind. Loopless children have no loop constraint.
    """
    ex, lx = _special_key(H, v, x, preferred)
    ex2, lx2 = _special_key(H, v, x2, preferred)
    if ex != ex2:
        return ex < ex2
    if lx is None or lx2 is None:
        return False
    return lx < lx2


def greedy_min_assignment(state: ListState, ord) -> Dict[str, str]:
    rank = ord.rank()
    out = {}
    for v in state.G.vertices:
        out[v] = min(state.get(v), key=rank.__getitem__)
    return out


def is_underlying_hom(G: SignedGraph, H: SignedGraph, f: Mapping) -> bool:
    for u, v, _ in G.edge_list():
        if H.kind(f[u], f[v]) is None:
            return False
    return all(f[v] in H.loops for v in G.loops)


__all__ = [
    "TargetIndex", "ListState", "arc_consistency", "bicoloured_arc_consistency", "full_arc_consistency",
    "BinaryCSP", "pair_consistency", "pair_consistency_state", "MinOrdering", "BipMinOrdering",
    "verify_min_ordering", "greedy_min_assignment", "is_underlying_hom", "bits", "popcount",
]
