"""Brute-force ground truth: list homomorphisms via the switching graph, s-cores, switching equivalence."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional, Sequence

from .sgraph import (
    BI, BLUE, RED, EdgeKind, Homomorphism, InputError, Instance, Sign, SignedGraph,
    apply_switching, build_switching_graph, pair,
)

DEFAULT_CORE_BOUND = 10


class BoundExceeded(InputError):
    pass


def check_homomorphism(inst: Instance, hom: Homomorphism) -> bool:
    """Direct check: switch G by hom.switched, then every sign of every edge/loop must be preserved."""
    G, H = inst.G, inst.H
    f = hom.mapping
    for v in G.vertices:
        if v not in f or f[v] not in inst.lists[v]:
            return False
    Gs = apply_switching(G, hom.switched)
    for u, v, k in Gs.edge_list():
        img = H.kind(f[u], f[v])
        if img is None or not img.covers(k):
            return False
    for v, k in Gs.loops.items():
        img = H.loops.get(f[v])
        if img is None or not img.covers(k):
            return False
    return True


class _PlusSearch:
    """Backtracking edge-coloured homomorphism search into the switching graph with forward checking."""

    def __init__(self, inst: Instance):
        self.inst = inst
        G, H = inst.G, inst.H
        self.sw = build_switching_graph(H)
        xs = self.sw.vertices
        self.xs = xs
        m = len(xs)
        xi = {x: i for i, x in enumerate(xs)}
        nb = {Sign.BLUE: [0] * m, Sign.RED: [0] * m}
        for colour, edges in ((Sign.BLUE, self.sw.base.blue), (Sign.RED, self.sw.base.red)):
            for e in edges:
                if len(e) == 1:
                    (a,) = e
                    nb[colour][xi[a]] |= 1 << xi[a]
                else:
                    a, b = e
                    nb[colour][xi[a]] |= 1 << xi[b]
                    nb[colour][xi[b]] |= 1 << xi[a]
        full = (1 << m) - 1
        self.compat = {}
        for k in EdgeKind:
            row = []
            for i in range(m):
                mask = full
                for s in k.signs:
                    mask &= nb[s][i]
                row.append(mask)
            self.compat[k] = row
        self.gv = G.vertices
        gi = {v: i for i, v in enumerate(self.gv)}
        self.nbrs: List[List[tuple]] = [[] for _ in self.gv]
        for u, v, k in G.edge_list():
            self.nbrs[gi[u]].append((gi[v], k))
            self.nbrs[gi[v]].append((gi[u], k))
        doms = []
        for v in self.gv:
            d = 0
            allowed = set(inst.lists[v])
            for i, x in enumerate(xs):
                if self.sw.origin[x] in allowed:
                    d |= 1 << i
            lk = G.loops.get(v)
            if lk is not None:
                lm = 0
                for i in range(m):
                    if (self.compat[lk][i] >> i) & 1:
                        lm |= 1 << i
                d &= lm
            doms.append(d)
        self.doms = doms

    def run(self, limit: Optional[int] = None, prune_twins: bool = True):
        """Yield assignments (index lists). With prune_twins, the first vertex of each
        component is never mapped to a twin copy (switching a whole component is free)."""
        n = len(self.gv)
        comp_first = set()
        if prune_twins:
            for comp in self.inst.G.components():
                comp_first.add(comp[0])
            gi = {v: i for i, v in enumerate(self.gv)}
            comp_first = {gi[v] for v in comp_first}
        plain = 0
        for i, x in enumerate(self.xs):
            if not self.sw.flipped[x]:
                plain |= 1 << i
        doms = list(self.doms)
        for i in comp_first:
            doms[i] &= plain
        assign = [-1] * n
        found = [0]

        def rec(doms):
            best, bc = -1, None
            for i in range(n):
                if assign[i] == -1:
                    c = bin(doms[i]).count("1")
                    if bc is None or c < bc:
                        best, bc = i, c
                        if c <= 1:
                            break
            if best == -1:
                yield list(assign)
                return
            d = doms[best]
            while d:
                low = d & -d
                d ^= low
                x = low.bit_length() - 1
                new = list(doms)
                new[best] = low
                if not self._propagate(new, [best]):
                    continue
                assign[best] = x
                yield from rec(new)
                assign[best] = -1

        if any(d == 0 for d in doms) or not self._propagate(doms, range(n)):
            return
        yield from rec(doms)

    def _support(self, k, d: int) -> int:
        out = 0
        row = self.compat[k]
        while d:
            low = d & -d
            d ^= low
            out |= row[low.bit_length() - 1]
        return out

    def _propagate(self, doms: List[int], changed) -> bool:
        """Arc consistency in place; False on a wipeout."""
        queue = list(changed)
        queued = set(queue)
        while queue:
            j = queue.pop()
            queued.discard(j)
            for l, k in self.nbrs[j]:
                d = doms[l] & self._support(k, doms[j])
                if d != doms[l]:
                    if not d:
                        return False
                    doms[l] = d
                    if l not in queued:
                        queued.add(l)
                        queue.append(l)
        return True

    def project(self, assign: Sequence[int]) -> Homomorphism:
        mapping = {}
        switched = set()
        for i, v in enumerate(self.gv):
            x = self.xs[assign[i]]
            mapping[v] = self.sw.origin[x]
            if self.sw.flipped[x]:
                switched.add(v)
        return Homomorphism(mapping, frozenset(switched))


def solve_bruteforce(inst: Instance) -> Optional[Homomorphism]:
    search = _PlusSearch(inst)
    for assign in search.run():
        return search.project(assign)
    return None


class _ParityDSU:
    """Union-find over switch bits with parity and an undo log."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.par = [0] * n
        self.size = [1] * n
        self.log: List[tuple] = []

    def find(self, x):
        p = 0
        while self.parent[x] != x:
            p ^= self.par[x]
            x = self.parent[x]
        return x, p

    def union(self, a, b, diff) -> bool:
        ra, pa = self.find(a)
        rb, pb = self.find(b)
        if ra == rb:
            self.log.append(None)
            return (pa ^ pb) == diff
        if self.size[ra] < self.size[rb]:
            ra, rb, pa, pb = rb, ra, pb, pa
        self.parent[rb] = ra
        self.par[rb] = pa ^ pb ^ diff
        self.size[ra] += self.size[rb]
        self.log.append(rb)
        return True

    def undo(self):
        rb = self.log.pop()
        if rb is None:
            return
        ra = self.parent[rb]
        self.size[ra] -= self.size[rb]
        self.parent[rb] = rb
        self.par[rb] = 0

    def assignment(self, n):
        return [self.find(i)[1] for i in range(n)]


def enumerate_homs(inst: Instance, limit: int = 1000) -> List[Homomorphism]:
    """Distinct vertex maps admitting some switch set, in lexicographic order of targets.

    Each map carries the switch set in which every component's root stays
    unswitched; two switch sets for the same map count as one solution.
    """
    if limit < 1:
        raise InputError("limit must be positive")
    G, H = inst.G, inst.H
    gv = G.vertices
    gi = {v: i for i, v in enumerate(gv)}
    n = len(gv)
    back = [[] for _ in gv]  # edges to earlier vertices
    for u, v, k in G.edge_list():
        a, b = sorted((gi[u], gi[v]))
        back[b].append((a, k))
    dsu = _ParityDSU(n)
    out: List[Homomorphism] = []
    f: List[Optional[str]] = [None] * n

    def rec(i):
        if len(out) >= limit:
            return
        if i == n:
            bits = dsu.assignment(n)
            out.append(Homomorphism({gv[j]: f[j] for j in range(n)},
                                    frozenset(gv[j] for j in range(n) if bits[j])))
            return
        v = gv[i]
        lk = G.loops.get(v)
        for h in inst.lists[v]:
            if lk is not None:
                hk = H.loops.get(h)
                if hk is None or not hk.covers(lk):
                    continue
            pushed = 0
            ok = True
            for j, k in back[i]:
                img = H.kind(f[j], h)
                if img is None:
                    ok = False
                    break
                if k is BI:
                    if img is not BI:
                        ok = False
                        break
                    continue
                if img is BI:
                    continue
                pushed += 1
                if not dsu.union(i, j, int(k != img)):
                    ok = False
                    break
            if ok:
                f[i] = h
                rec(i + 1)
                f[i] = None
            for _ in range(pushed):
                dsu.undo()
            if len(out) >= limit:
                return

    rec(0)
    return out


def _has_hom(G: SignedGraph, H: SignedGraph, lists=None) -> bool:
    return solve_bruteforce(Instance(G, H, dict(lists or {}))) is not None


def _endomorphism_maps(H: SignedGraph, limit: int = 10 ** 6) -> List[Dict[str, str]]:
    return [h.mapping for h in enumerate_homs(Instance(H, H, {}), limit)]


@dataclass
class SCoreReport:
    coreVertices: List[str]
    edgeCount: int
    core: SignedGraph


def edge_count(G: SignedGraph) -> int:
    """Edges and loops, a bicoloured one counting as two."""
    return sum(2 if k is BI else 1 for k in list(G.edges.values()) + list(G.loops.values()))


def s_core(H: SignedGraph, bound: int = DEFAULT_CORE_BOUND) -> SCoreReport:
    if len(H) > bound:
        raise BoundExceeded(f"s-core search limited to {bound} vertices, target has {len(H)}")
    vs = H.vertices
    if not vs:
        return SCoreReport([], 0, SignedGraph())
    for size in range(1, len(vs) + 1):
        for W in combinations(vs, size):
            sub = H.induced(W)
            if _has_hom(H, sub):
                return SCoreReport(list(W), edge_count(sub), sub)
    raise AssertionError("H always maps to itself")


def shom_easy(H: SignedGraph, bound: int = DEFAULT_CORE_BOUND) -> bool:
    return s_core(H, bound).edgeCount <= 2


def switching_equivalent(A: SignedGraph, B: SignedGraph) -> Optional[frozenset]:
    """Switch set S with apply_switching(A, S) == B, or None."""
    if set(A.vertices) != set(B.vertices) or set(A.edges) != set(B.edges):
        raise InputError("switching equivalence needs the same underlying graph")
    if A.loops != B.loops:
        return None
    s: Dict[str, int] = {}
    for root in A.vertices:
        if root in s:
            continue
        s[root] = 0
        stack = [root]
        while stack:
            x = stack.pop()
            for y, ka in A.adj[x].items():
                kb = B.adj[x][y]
                if (ka is BI) != (kb is BI):
                    return None
                if ka is BI:
                    continue
                want = s[x] ^ int(ka != kb)
                if y not in s:
                    s[y] = want
                    stack.append(y)
    S = frozenset(v for v, b in s.items() if b)
    return S if apply_switching(A, S) == B else None


__all__ = [
    "check_homomorphism", "solve_bruteforce", "enumerate_homs", "SCoreReport", "s_core",
    "shom_easy", "switching_equivalent", "edge_count", "BoundExceeded",
]
