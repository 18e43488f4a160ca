"""Shared generators and independent brute-force references for the tests."""

from __future__ import annotations

import itertools
import random
from functools import lru_cache
from typing import Dict, List, Optional

from signedhom.sgraph import BI, BLUE, RED, EdgeKind, Instance, SignedGraph, apply_switching

EDGE_KINDS = (None, BLUE, RED, BI)


def _flip(k, a, b, sw):
    if k in (BLUE, RED) and sw[a] != sw[b]:
        return RED if k is BLUE else BLUE
    return k


def _connected(n, prs, ek) -> bool:
    adj = {i: set() for i in range(n)}
    for (a, b), k in zip(prs, ek):
        if k is not None:
            adj[a].add(b)
            adj[b].add(a)
    seen, stack = {0}, [0]
    while stack:
        x = stack.pop()
        for y in adj[x] - seen:
            seen.add(y)
            stack.append(y)
    return len(seen) == n


@lru_cache(maxsize=None)
def _loopless_classes(n: int):
    """(edge kinds, symmetries) per class of connected loopless signed graphs.

    Classes are taken up to isomorphism and switching; symmetries are the
    permutations that map the representative to a switching of itself.
    """
    prs = list(itertools.combinations(range(n), 2))
    perms = list(itertools.permutations(range(n)))
    sws = list(itertools.product((0, 1), repeat=n))
    seen = set()
    out = []
    for ek in itertools.product(EDGE_KINDS, repeat=len(prs)):
        if ek in seen or (n > 1 and not _connected(n, prs, ek)):
            continue
        E = dict(zip(prs, ek))
        stab = set()
        for p in perms:
            inv = [0] * n
            for i, x in enumerate(p):
                inv[x] = i
            for sw in sws:
                img = []
                for a, b in prs:
                    oa, ob = inv[a], inv[b]
                    img.append(_flip(E[(min(oa, ob), max(oa, ob))], a, b, sw))
                img = tuple(img)
                seen.add(img)
                if img == ek:
                    stab.add(p)
        out.append((ek, sorted(stab)))
    return out


def connected_graphs(n: int, loops: bool = True) -> List[SignedGraph]:
    """All connected signed graphs on n vertices up to isomorphism and switching."""
    vs = [f"g{i}" for i in range(n)]
    prs = list(itertools.combinations(range(n), 2))
    out = []
    for ek, stab in _loopless_classes(n):
        edges = [(vs[a], vs[b], k) for (a, b), k in zip(prs, ek) if k is not None]
        if not loops:
            out.append(SignedGraph(vs, edges))
            continue
        seen = set()
        for lp in itertools.product(EDGE_KINDS, repeat=n):
            if lp in seen:
                continue
            for p in stab:
                seen.add(tuple(lp[p[i]] for i in range(n)))
            out.append(SignedGraph(vs, edges, {vs[i]: k for i, k in enumerate(lp) if k is not None}))
    return out


def small_inputs(max_n: int = 4, loops: bool = True) -> List[SignedGraph]:
    return [G for n in range(1, max_n + 1) for G in connected_graphs(n, loops)]


def list_patterns(G: SignedGraph, H: SignedGraph):
    """Full lists, then one vertex restricted to each singleton and each pair."""
    yield {}
    subsets = [[h] for h in H.vertices] + [list(p) for p in itertools.combinations(H.vertices, 2)]
    for v in G.vertices:
        for s in subsets:
            yield {v: s}


def random_instance(rng: random.Random, H: SignedGraph, n: int, pedge=0.4, ploop=0.3, pbi=0.25) -> Instance:
    vs = [f"g{i}" for i in range(n)]
    G = SignedGraph(vs)
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < pedge:
                G.add_edge(vs[i], vs[j], BI if rng.random() < pbi else rng.choice((BLUE, RED)))
        if ploop and rng.random() < ploop:
            G.add_loop(vs[i], BI if rng.random() < pbi else rng.choice((BLUE, RED)))
    lists = {}
    for v in vs:
        if rng.random() < 0.4:
            continue
        lists[v] = rng.sample(H.vertices, rng.randint(1, max(1, len(H) // 2 + 1)))
    return Instance(G, H, lists)


def random_graph(rng: random.Random, n: int, pedge=0.5, ploop=0.3) -> SignedGraph:
    vs = [f"v{i}" for i in range(n)]
    G = SignedGraph(vs)
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < pedge:
                G.add_edge(vs[i], vs[j], rng.choice((BLUE, RED, BI)))
        if rng.random() < ploop:
            G.add_loop(vs[i], rng.choice((BLUE, RED, BI)))
    return G


def random_tree(rng: random.Random, n: int, ploop: float, kinds=(BLUE, RED, BI)) -> SignedGraph:
    vs = [f"a{i}" for i in range(n)]
    G = SignedGraph(vs)
    for i in range(1, n):
        G.add_edge(vs[i], vs[rng.randrange(i)], rng.choice(kinds))
    for v in vs:
        if rng.random() < ploop:
            G.add_loop(v, rng.choice((BLUE, RED, BI)))
    return G


def random_switch(rng: random.Random, H: SignedGraph) -> SignedGraph:
    return apply_switching(H, [v for v in H.vertices if rng.random() < 0.5])


# naive references

def naive_has_hom(inst: Instance) -> bool:
    """Every switch set of G times every list map, checked edge by edge."""
    G, H = inst.G, inst.H
    vs = G.vertices
    edges = G.edge_list()
    for bits in itertools.product((0, 1), repeat=len(vs)):
        sw = dict(zip(vs, bits))
        sig = []
        for u, v, k in edges:
            if sw[u] != sw[v]:
                k = k.negate()
            sig.append((u, v, k))
        for img in itertools.product(*(inst.lists[v] for v in vs)):
            f = dict(zip(vs, img))
            if all(_covers(H.kind(f[u], f[v]), k) for u, v, k in sig) and \
                    all(_covers(H.loops.get(f[v]), k) for v, k in G.loops.items()):
                return True
    return False


def _covers(img: Optional[EdgeKind], k: EdgeKind) -> bool:
    return img is not None and (img is BI or img is k)


def brute_chain(H: SignedGraph, max_k: int) -> Optional[tuple]:
    """Walk pairs (U, D) of length k <= max_k tested against the chain definition directly."""
    vs = H.vertices

    def nb(v):
        out = list(H.adj[v])
        if v in H.loops:
            out.append(v)
        return out

    def edge(a, b):
        return H.kind(a, b) is not None

    def bi(a, b):
        return H.kind(a, b) is BI

    def uni(a, b):
        k = H.kind(a, b)
        return k is not None and k is not BI

    for k in range(2, max_k + 1):
        for u in vs:
            for u1 in nb(u):
                if not uni(u, u1):
                    continue
                for d1 in nb(u):
                    if not bi(u, d1):
                        continue
                    # extend both walks one step at a time
                    stack = [([u, u1], [u, d1])]
                    while stack:
                        U, D = stack.pop()
                        i = len(U) - 1
                        if i == k - 1:
                            for v in nb(U[-1]):
                                if bi(U[-1], v) and uni(D[-1], v):
                                    return U + [v], D + [v]
                            continue
                        for a in nb(U[-1]):
                            for b in nb(D[-1]):
                                rule1 = edge(U[-1], a) and edge(D[-1], b) and not edge(D[-1], a)
                                rule2 = bi(U[-1], a) and bi(D[-1], b) and not bi(D[-1], a)
                                if rule1 or rule2:
                                    stack.append((U + [a], D + [b]))
    return None


def tree_shapes(n: int) -> List[List[tuple]]:
    """Edge lists of all trees on n labelled vertices up to isomorphism (Pruefer codes)."""
    if n == 1:
        return [[]]
    if n == 2:
        return [[(0, 1)]]
    seen, out = set(), []
    for code in itertools.product(range(n), repeat=n - 2):
        es = _pruefer(code, n)
        key = _canon(es, n)
        if key not in seen:
            seen.add(key)
            out.append(es)
    return out


def unicyclic_shapes(n: int) -> List[List[tuple]]:
    seen, out = set(), []
    for es in tree_shapes(n):
        for a, b in itertools.combinations(range(n), 2):
            if (a, b) in es or (b, a) in es:
                continue
            g = es + [(a, b)]
            key = _canon(g, n)
            if key not in seen:
                seen.add(key)
                out.append(g)
    return out


def _pruefer(code, n):
    degree = [1] * n
    for x in code:
        degree[x] += 1
    es = []
    for x in code:
        for leaf in range(n):
            if degree[leaf] == 1:
                es.append((leaf, x))
                degree[leaf] -= 1
                degree[x] -= 1
                break
    u, v = [i for i in range(n) if degree[i] == 1]
    es.append((u, v))
    return es


def _canon(es, n):
    best = None
    for p in itertools.permutations(range(n)):
        key = tuple(sorted(tuple(sorted((p[a], p[b]))) for a, b in es))
        if best is None or key < best:
            best = key
    return best


def layered_chain_length(H: SignedGraph) -> Optional[int]:
    """Smallest k admitting a chain, from the sets of reachable (u_i, d_i) pairs.

    Only |V|^2 pairs exist, so k <= |V|^2 + 2 covers every chain.
    """
    vs = H.vertices
    nb = {v: list(H.adj[v]) + ([v] if v in H.loops else []) for v in vs}
    kind = {(a, b): H.kind(a, b) for a in vs for b in nb[a]}
    edge = set(kind)
    bi = {p for p, k in kind.items() if k is BI}
    uni = edge - bi

    layer = {(u1, d1) for u in vs for u1 in nb[u] for d1 in nb[u] if (u, u1) in uni and (u, d1) in bi}
    seen = set(layer)
    k = 2
    while layer and k <= len(vs) ** 2 + 2:
        for a, b in layer:
            if any((a, v) in bi and (b, v) in uni for v in nb[a]):
                return k
        nxt = set()
        for a, b in layer:
            for a2 in nb[a]:
                for b2 in nb[b]:
                    if ((b, a2) not in edge) or ((a, a2) in bi and (b, b2) in bi and (b, a2) not in bi):
                        nxt.add((a2, b2))
        layer = nxt - seen
        seen |= nxt
        k += 1
    return None
