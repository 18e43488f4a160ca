"""Polynomial list-homomorphism algorithms for the certified target classes, plus a dispatcher.

Every solver works on the normalized target of its structure (the switch set
applied and, for red-preferred caterpillars, colours exchanged on both sides).
Only the vertex map is carried back; the switch set of the original input is
then recovered by potential fitting and the result is checked independently.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Set, Tuple

from .algebra import Gf2System, gf2_solve
from .classifier import (
    NPCOMPLETE, OUT_OF_SCOPE, POLYNOMIAL, Classification, PolyStructure, _swap_colours, classify,
)
from .consistency import (
    BinaryCSP, BipMinOrdering, ListState, MinOrdering, bits, full_arc_consistency,
    greedy_min_assignment, pair_consistency,
)
from .oracle import _PlusSearch, check_homomorphism, solve_bruteforce
from .orderings import normalized_target, order_good_2caterpillar, order_good_caterpillar, order_segmented
from .polymorph import (
    DEFAULT_MAJORITY_BOUND, SEMI, MajorityTable, find_conservative_majority, verify_majority,
)
from .sgraph import (
    BI, BLUE, RED, Homomorphism, InputError, Instance, Sign, SignedGraph, build_switching_graph,
)

DEFAULT_ORACLE_BOUND = 12

# one walk label per (blue parity, red parity)
ODD_ODD, EVEN_EVEN, ODD_EVEN, EVEN_ODD = (1, 1), (0, 0), (1, 0), (0, 1)


class Refused(InputError):
    """The requested method cannot handle this target or instance."""

    def __init__(self, msg: str, classification: Optional[Classification] = None):
        super().__init__(msg)
        self.classification = classification


# switching fit and sign checks

def _constraints(G: SignedGraph, H: SignedGraph, h: Mapping) -> Optional[List[Tuple[str, str, int]]]:
    """Parity constraints s(u)+s(v) = c for the map h, or None if h breaks a switching-invariant rule.

    Switching-invariant rules: underlying adjacency, bicoloured edges onto
    bicoloured edges, loop colours covered.
    """
    out = []
    for u, v, k in G.edge_list():
        img = H.kind(h[u], h[v])
        if img is None or (k is BI and img is not BI):
            return None
        if k is not BI and img is not BI:
            out.append((u, v, int(k != img)))
    for v, k in G.loops.items():
        img = H.loops.get(h[v])
        if img is None or not img.covers(k):
            return None
    return out


def fit_switching(G: SignedGraph, H: SignedGraph, h: Mapping) -> Optional[frozenset]:
    """Switch set X of G with h a homomorphism of G^X to H, or None.

    Spanning-forest potentials over the unicoloured edges with unicoloured
    images; the root of each component stays unswitched.
    """
    cons = _constraints(G, H, h)
    if cons is None:
        return None
    adj: Dict[str, List[Tuple[str, int]]] = {v: [] for v in G.vertices}
    for u, v, c in cons:
        adj[u].append((v, c))
        adj[v].append((u, c))
    pot: Dict[str, int] = {}
    for r in G.vertices:
        if r in pot:
            continue
        pot[r] = 0
        stack = [r]
        while stack:
            x = stack.pop()
            for y, c in adj[x]:
                want = pot[x] ^ c
                if y not in pot:
                    pot[y] = want
                    stack.append(y)
                elif pot[y] != want:
                    return None
    return frozenset(v for v, p in pot.items() if p)


def bad_cycles(G: SignedGraph, H: SignedGraph, h: Mapping) -> List[Tuple[List[str], List[str]]]:
    """One violating fundamental cycle per inconsistent component of G_h.

    G_h is the subgraph of unicoloured input edges whose images are
    unicoloured. Returns (component vertices, cycle vertices) pairs.
    """
    cons = _constraints(G, H, h)
    if cons is None:
        raise InputError("map is not a homomorphism of the underlying graphs")
    adj: Dict[str, List[Tuple[str, int]]] = {v: [] for v in G.vertices}
    for u, v, c in cons:
        adj[u].append((v, c))
        adj[v].append((u, c))
    pot: Dict[str, int] = {}
    par: Dict[str, Optional[str]] = {}
    out = []
    for r in G.vertices:
        if r in pot:
            continue
        pot[r] = 0
        par[r] = None
        comp = [r]
        queue = deque([r])
        clash = None
        while queue:
            x = queue.popleft()
            for y, c in adj[x]:
                want = pot[x] ^ c
                if y not in pot:
                    pot[y] = want
                    par[y] = x
                    comp.append(y)
                    queue.append(y)
                elif pot[y] != want and clash is None:
                    clash = (x, y)
        if clash is not None:
            out.append((comp, _tree_cycle(par, *clash)))
    return out


def _tree_cycle(par, x, y) -> List[str]:
    px = [x]
    while par[px[-1]] is not None:
        px.append(par[px[-1]])
    py = [y]
    while par[py[-1]] is not None:
        py.append(par[py[-1]])
    common = set(px) & set(py)
    a = [v for v in px if v not in common]
    b = [v for v in py if v not in common]
    meet = next(v for v in px if v in common)
    return a + [meet] + list(reversed(b))


def _finish(inst: Instance, h: Optional[Mapping]) -> Optional[Homomorphism]:
    if h is None:
        return None
    X = fit_switching(inst.G, inst.H, h)
    if X is None:
        raise AssertionError("solver produced a map that admits no switching")
    hom = Homomorphism(dict(h), X)
    if not check_homomorphism(inst, hom):
        raise AssertionError("solver produced an invalid homomorphism")
    return hom


# normalization helpers

def _normalized(inst: Instance, structure: PolyStructure) -> Tuple[SignedGraph, SignedGraph]:
    Hn = normalized_target(inst.H, structure)
    G = inst.G
    if structure.get("preferredColour") is Sign.RED:
        G = _swap_colours(G)
    return G, Hn


def _loop_filter(state: ListState) -> bool:
    """Keep only targets whose loop covers the input loop colour (loops never switch)."""
    H = state.H
    for v, k in state.G.loops.items():
        ok = state.t.mask(x for x, lk in H.loops.items() if lk.covers(k))
        state.lists[v] &= ok
    return not state.empty()


def _consistent_state(G, H, lists) -> Optional[ListState]:
    state = ListState(G, H, lists)
    if not _loop_filter(state) or not full_arc_consistency(state):
        return None
    return state


def _bipartition(G: SignedGraph) -> Optional[Dict[str, int]]:
    col: Dict[str, int] = {}
    for s in G.vertices:
        if s in col:
            continue
        col[s] = 0
        stack = [s]
        while stack:
            x = stack.pop()
            for y in G.adj[x]:
                if y not in col:
                    col[y] = 1 - col[x]
                    stack.append(y)
                elif col[y] == col[x]:
                    return None
    return col


def _per_component_bipartite(G: SignedGraph, H: SignedGraph, lists: Mapping, colour_of: Mapping,
                             inner: Callable) -> Optional[Dict[str, str]]:
    """Run ``inner(sub, lists, vcol)`` on each component under both colourings.

    ``colour_of`` gives "b" or "w" for target vertices; vcol gives the same for
    input vertices. A result only counts if it admits a switching.
    """
    if G.loops:
        return None
    col = _bipartition(G)
    if col is None:
        return None
    h: Dict[str, str] = {}
    for comp in G.components():
        sub = G.induced(comp)
        for flip in (0, 1):
            vcol = {v: "b" if col[v] ^ flip == 0 else "w" for v in comp}
            sl = {v: [x for x in lists[v] if colour_of[x] == vcol[v]] for v in comp}
            got = inner(sub, sl, vcol)
            if got is not None and fit_switching(sub, H, got) is not None:
                h.update(got)
                break
        else:
            return None
    return h


def _require(structure: Optional[PolyStructure], variants, what: str):
    if structure is None or structure.variant not in variants:
        raise Refused(f"{what} needs a certified {' or '.join(variants)} structure")


# regions and walk labels

@dataclass
class Region:
    """A connected piece of the input past the pivot, with its boundary points.

    walkParities maps a boundary pair (x, y) to the set of (blue parity, red
    parity) labels of walks from x to y whose inner vertices lie in the region.
    For a region without boundary, ``closed`` holds the labels of closed walks
    at ``interior[0]``. innerEdges tells whether an input edge or loop lies
    inside the region.
    """

    interior: List[str]
    boundary: List[str]
    walkParities: Dict[Tuple[str, str], Set[Tuple[int, int]]] = field(default_factory=dict)
    closed: Set[Tuple[int, int]] = field(default_factory=set)
    innerEdges: bool = False


def _step(k, cb, cr):
    return cb ^ (k is BLUE), cr ^ (k is RED)


def region_walk_parities(G: SignedGraph, interior: Iterable, boundary: Iterable) -> Region:
    """Four-label propagation over (vertex, blue parity, red parity) states.

    Each state is visited once per start, so every edge of the region is
    traversed at most four times. Input loops count as edges from a vertex to
    itself; bicoloured edges carry no sign and are skipped.
    """
    inner = list(interior)
    ins = set(inner)
    bset = set(boundary)
    touching = sorted({y for x in inner for y in G.adj[x] if y in bset and G.adj[x][y] is not BI},
                      key=G.index().__getitem__)

    def spread(starts):
        seen = set(starts)
        queue = deque(starts)
        ends: Dict[str, Set[Tuple[int, int]]] = {}
        while queue:
            u, cb, cr = queue.popleft()
            moves = [(y, k) for y, k in G.adj[u].items() if k is not BI]
            lk = G.loops.get(u)
            if lk is not None and lk is not BI:
                moves.append((u, lk))
            for y, k in moves:
                nb, nr = _step(k, cb, cr)
                if y in ins:
                    if (y, nb, nr) not in seen:
                        seen.add((y, nb, nr))
                        queue.append((y, nb, nr))
                elif y in bset:
                    ends.setdefault(y, set()).add((nb, nr))
        return seen, ends

    reg = Region(inner, touching)
    reg.innerEdges = any(G.adj[x].get(y) is not None for x in inner for y in inner if x != y) or \
        any(x in G.loops for x in inner)
    if not touching:
        root = inner[0]
        seen, _ = spread([(root, 0, 0)])
        reg.closed = {(cb, cr) for (v, cb, cr) in seen if v == root}
        return reg
    for x in touching:
        starts = []
        for y, k in G.adj[x].items():
            if y in ins and k is not BI:
                starts.append((y,) + _step(k, 0, 0))
        _, ends = spread(list(dict.fromkeys(starts)))
        for y, labels in ends.items():
            reg.walkParities.setdefault((x, y), set()).update(labels)
    return reg


def _regions(G: SignedGraph, interior: Iterable, boundary: Iterable) -> List[Region]:
    ins = set(interior)
    out = []
    seen = set()
    for r in G.vertices:
        if r not in ins or r in seen:
            continue
        comp = [r]
        seen.add(r)
        stack = [r]
        while stack:
            x = stack.pop()
            for y in G.adj[x]:
                if y in ins and y not in seen:
                    seen.add(y)
                    comp.append(y)
                    stack.append(y)
        out.append(region_walk_parities(G, comp, boundary))
    return out


def _add_region_equations(sys: Gf2System, reg: Region, z) -> None:
    """s(x)+s(y) = c_r + (c_b+c_r)*z for every label; z = 1 means the region maps onto red."""
    for (x, y), labels in reg.walkParities.items():
        for cb, cr in labels:
            vs = [("s", x), ("s", y)]
            if (cb + cr) % 2:
                vs.append(z)
            sys.add(vs, cr)
    for cb, cr in reg.closed:
        sys.add([z] if (cb + cr) % 2 else [], cr)


# irreflexive trees

def solve_irreflexive_tree(inst: Instance, structure: PolyStructure,
                           ord: Optional[BipMinOrdering] = None) -> Optional[Homomorphism]:
    _require(structure, ("Good2Caterpillar",), "irreflexive tree solver")
    ord = ord or order_good_2caterpillar(inst.H, structure)
    G, H = _normalized(inst, structure)
    spine = structure["spine"]
    d = structure["d"]
    types = structure["subtreeTypes"]
    pos = {v: i for i, v in enumerate(spine, 1)}

    def repair_values(cycle, f) -> Optional[Set[str]]:
        img = {f[c] for c in cycle}
        edges = {frozenset((f[a], f[b])) for a, b in zip(cycle, cycle[1:] + cycle[:1])}
        # star around a T2 child of v_i, i <= d
        for x in img:
            if types.get(x, (0, ""))[1] == "T2" and types[x][0] <= d:
                if all(x in e for e in edges):
                    return img - {x}
        # star of T4 leaves around v_i, i <= d-1
        for v in img:
            if v in pos and pos[v] <= d - 1:
                if all(v in e and all(types.get(y) == (pos[v], "T4") for y in e - {v}) for e in edges):
                    return img - {v}
        return None

    def inner(sub, lists, vcol):
        state = ListState(sub, H, lists)
        limit = len(H) * len(sub)
        rounds = 0
        while True:
            if not full_arc_consistency(state):
                return None
            f = greedy_min_assignment(state, ord)
            bad = bad_cycles(sub, H, f)
            if not bad:
                return f
            for _, cyc in bad:
                drop = repair_values(cyc, f)
                if drop is None:
                    return None
                for c in cyc:
                    state.remove(c, drop)
            rounds += 1
            assert rounds <= limit, "repair rounds exceeded |V(H)|*|V(G)|"

    h = _per_component_bipartite(G, H, inst.lists, ord.colour(), inner)
    return _finish(inst, h)


# reflexive trees and case A trees

def _caterpillar_parts(H: SignedGraph, spine, d):
    """Zone (before the pivot v_d) and the rest, for a normalized caterpillar."""
    sp = set(spine)
    vd = spine[d - 1]
    zone = set(spine[:d - 1])
    for v in spine[:d - 1]:
        zone.update(x for x in H.adj[v] if x not in sp)
    zone.update(x for x in H.adj[vd] if x not in sp and H.kind(vd, x) is BI)
    return zone


def solve_reflexive_tree(inst: Instance, structure: PolyStructure,
                         ord: Optional[MinOrdering] = None) -> Optional[Homomorphism]:
    """Good caterpillars, and case A signed trees (caterpillars with some leaf loops removed)."""
    _require(structure, ("GoodCaterpillar", "GoodSignedTree"), "reflexive tree solver")
    if structure.variant == "GoodSignedTree" and structure["case"] != "A":
        raise Refused("case B trees are solved through their majority polymorphism")
    ord = ord or order_good_caterpillar(inst.H, structure)
    G, H = _normalized(inst, structure)
    spine = structure["spine"]
    d = structure["d"]
    k = len(spine)
    vd = spine[d - 1]
    zone = _caterpillar_parts(H, spine, d)
    state = _consistent_state(G, H, inst.lists)
    if state is None:
        return None
    limit = len(H) * len(G)
    rounds = 0
    while True:
        if not full_arc_consistency(state):
            return None
        f = greedy_min_assignment(state, ord)
        bad = bad_cycles(G, H, f)
        if not bad:
            return _finish(inst, f)
        in_zone = [(comp, cyc) for comp, cyc in bad if f[cyc[0]] in zone]
        if not in_zone:
            if d == k and H.loops.get(vd) is BI:
                return _finish(inst, _pivot_regions(G, H, state, f, spine, d, ord))
            return None
        for _, cyc in in_zone:
            img = {f[c] for c in cyc}
            if len(img) == 1:
                drop = img
            else:
                centre = [v for v in img if v in spine]
                if len(centre) != 1 or any(x in H.loops for x in img - set(centre)):
                    raise AssertionError(f"unexpected negative cycle image {sorted(img)}")
                drop = img - set(centre)
            for c in cyc:
                state.remove(c, drop)
        rounds += 1
        assert rounds <= limit, "repair rounds exceeded |V(H)|*|V(G)|"


def _pivot_regions(G, H, state, f, spine, d, ord) -> Optional[Dict[str, str]]:
    """Last stage when d = k and v_d has a bicoloured loop.

    Boundary points stay at v_d, vertices in the zone keep their minima, and
    each region (component of the vertices sent to unicoloured-edge children
    of v_d) picks the colour of the loop it lands on.
    """
    vd = spine[d - 1]
    sp = set(spine)
    kids = [x for x in H.adj[vd] if x not in sp and H.kind(vd, x) is not BI]
    kidset = set(kids)
    B = [v for v in G.vertices if f[v] == vd]
    inner = [v for v in G.vertices if f[v] in kidset]
    rank = ord.rank()
    sys = Gf2System()
    plan = []
    for i, reg in enumerate(_regions(G, inner, B)):
        z = ("z", i)
        _add_region_equations(sys, reg, z)
        if not reg.innerEdges:
            continue
        common = state.lists[reg.interior[0]]
        for v in reg.interior[1:]:
            common &= state.lists[v]
        choice = {}
        for y in sorted(state.t.members(common), key=rank.__getitem__):
            lk = H.loops.get(y)
            if y in kidset and lk is not None and lk is not BI:
                choice.setdefault(int(lk is RED), y)
        if not choice:
            return None
        if len(choice) == 1:
            (c,) = choice
            sys.fix(z, c)
        plan.append((reg, z, choice))
    sol = gf2_solve(sys)
    if sol is None:
        return None
    h = dict(f)
    for reg, z, choice in plan:
        y = choice[sol.get(z, 0)]
        for v in reg.interior:
            h[v] = y
    return h


# general trees

_MAJORITY_CACHE: Dict[tuple, MajorityTable] = {}


def solve_general_tree(inst: Instance, structure: PolyStructure, bound: int = DEFAULT_MAJORITY_BOUND
                       ) -> Optional[Homomorphism]:
    _require(structure, ("GoodSignedTree",), "general tree solver")
    if structure["case"] == "A":
        return solve_reflexive_tree(inst, structure)
    from .polymorph import build_tree_majority
    key = ("tree", inst.H.canonical())
    t = _MAJORITY_CACHE.get(key)
    if t is None:
        t = build_tree_majority(inst.H, structure, bound=bound)
        _MAJORITY_CACHE[key] = t
    return solve_with_majority(inst, t)


# majority

def solve_with_majority(inst: Instance, t: MajorityTable, verify: bool = True) -> Optional[Homomorphism]:
    """Pair consistency on the switching-graph instance, then greedy extension.

    A majority polymorphism gives strict width two, so any value consistent
    with the pair tables of the already fixed variables extends.
    """
    search = _PlusSearch(inst)
    if set(t.domain) != set(search.xs):
        raise Refused("majority table is not defined on this target's switching graph")
    if verify and not getattr(t, "_verified", False):
        ok, why = verify_majority(search.sw, t, SEMI)
        if not ok:
            raise Refused(f"table is not a majority polymorphism: {why}")
        t._verified = True
    n = len(search.gv)
    if n == 0:
        return Homomorphism({}, frozenset())
    if any(d == 0 for d in search.doms):
        return None
    csp = BinaryCSP({i: search.doms[i] for i in range(n)}, len(search.xs))
    for i, nb in enumerate(search.nbrs):
        for j, k in nb:
            if i < j:
                csp.add(i, j, search.compat[k])
    R = pair_consistency(csp)
    if R is None:
        return None
    assign: List[int] = []
    for i in range(n):
        cand = csp.domains[i]
        for j, a in enumerate(assign):
            cand &= R[(j, i)][a]
        if not cand:
            raise AssertionError("majority extension failed; the table is not a polymorphism")
        assign.append((cand & -cand).bit_length() - 1)
    hom = search.project(assign)
    if not check_homomorphism(inst, hom):
        raise AssertionError("majority solver produced an invalid homomorphism")
    return hom


def _no_bicolour(inst: Instance, structure: PolyStructure, bound: int) -> Optional[Homomorphism]:
    """Targets whose edges and loops all carry one colour after switching.

    Every image then has that colour, so each input component must switch to
    it entirely; what remains is a list homomorphism of the underlying graphs,
    solved with a conservative majority of the underlying target.
    """
    colour = structure["colour"]
    ck = BLUE if colour is Sign.BLUE else RED
    G, H = inst.G, inst.H
    if any(k is BI for k in G.edges.values()) or any(k is not ck for k in G.loops.values()):
        return None
    flat_g = G if colour is Sign.BLUE else _swap_colours(G)
    if fit_switching(flat_g, SignedGraph(["x"], [], {"x": BLUE}), {v: "x" for v in G.vertices}) is None:
        return None
    pG = SignedGraph(G.vertices, [(u, v, BLUE) for u, v, _ in G.edge_list()], {v: BLUE for v in G.loops})
    pH = SignedGraph(H.vertices, [(u, v, BLUE) for u, v, _ in H.edge_list()], {v: BLUE for v in H.loops})
    key = ("plain", pH.canonical())
    t = _MAJORITY_CACHE.get(key)
    if t is None:
        t = find_conservative_majority(build_switching_graph(pH), "conservative", bound)
        if t is None:
            raise Refused("underlying target has no conservative majority")
        _MAJORITY_CACHE[key] = t
    got = solve_with_majority(Instance(pG, pH, inst.lists), t)
    return _finish(inst, None if got is None else got.mapping)


# segmented paths

def solve_segmented(inst: Instance, structure: PolyStructure,
                    ord: Optional[BipMinOrdering] = None) -> Optional[Homomorphism]:
    """Consistency plus minima per colouring; the least map keeps the most bicoloured
    images (bicoloured edges are downward closed), so a failed balance check is final."""
    _require(structure, ("Segmented",), "segmented solver")
    ord = ord or order_segmented(inst.H, structure)
    G, H = _normalized(inst, structure)

    def inner(sub, lists, vcol):
        state = _consistent_state(sub, H, lists)
        if state is None:
            return None
        return greedy_min_assignment(state, ord)

    return _finish(inst, _per_component_bipartite(G, H, inst.lists, ord.colour(), inner))


# cycle-separable targets

def _cycle_colours(nm: Mapping, ell: Optional[int], variant: str) -> Dict[str, str]:
    col = {nm["t"]: "b", nm["s1"]: "w", nm["s2"]: "b", nm["w"]: "w"}
    if variant == "CycleH1":
        col[nm["t1"]] = "w"
        col[nm["t2"]] = "b"
    elif variant == "CycleHl":
        for i in range(1, ell):
            col[nm[f"t{i}"]] = "b" if i % 2 == 0 else "w"
    return col


def solve_cycle(inst: Instance, structure: PolyStructure) -> Optional[Homomorphism]:
    _require(structure, ("CycleH0", "CycleH1", "CycleHl"), "cycle solver")
    G, H = _normalized(inst, structure)
    nm = structure["names"]
    variant = structure.variant
    ell = structure.get("l")
    colour = _cycle_colours(nm, ell, variant)
    if variant == "CycleH0":
        ord = BipMinOrdering([x for x in H.vertices if colour[x] == "b"],
                             [x for x in H.vertices if colour[x] == "w"])

        def inner(sub, lists, vcol):
            state = _consistent_state(sub, H, lists)
            return None if state is None else greedy_min_assignment(state, ord)
    elif variant == "CycleHl":
        def inner(sub, lists, vcol):
            return _cycle_hl(sub, H, lists, vcol, nm, ell)
    else:
        def inner(sub, lists, vcol):
            return _cycle_h1(sub, H, lists, vcol, nm)
    return _finish(inst, _per_component_bipartite(G, H, inst.lists, colour, inner))


def _fix_boundary(state: ListState, vcol, t, w) -> Dict[str, str]:
    """Vertices that can go to t (black) or w (white) go there: t and w dominate their class."""
    B = {}
    for v in state.G.vertices:
        lst = state.get(v)
        top = t if vcol[v] == "b" else w
        if top in lst:
            B[v] = top
    return B


def _cycle_hl(G, H, lists, vcol, nm, ell) -> Optional[Dict[str, str]]:
    state = _consistent_state(G, H, lists)
    if state is None:
        return None
    t, w = nm["t"], nm["w"]
    tpath = [t] + [nm[f"t{i}"] for i in range(1, ell)] + [w]
    index = {x: i for i, x in enumerate(tpath)}
    tside = set(tpath[1:-1])
    h = _fix_boundary(state, vcol, t, w)
    rest = [v for v in G.vertices if v not in h]
    for K in G.induced(rest).components():
        around = {y for x in K for y in G.adj[x] if y in h}
        sub = G.induced(list(K) + sorted(around, key=G.index().__getitem__))
        sl = {v: [x for x in state.get(v) if x in tside] for v in K}
        sl.update({b: [h[b]] for b in around})
        st = _consistent_state(sub, H, sl)
        if st is not None:
            for v in K:
                pick = min if vcol[v] == "b" else max
                h[v] = pick(st.get(v), key=index.__getitem__)
            continue
        for v in K:
            want = nm["s2"] if vcol[v] == "b" else nm["s1"]
            if want not in state.get(v):
                return None
            h[v] = want
    return h


def _cycle_h1(G, H, lists, vcol, nm) -> Optional[Dict[str, str]]:
    state = _consistent_state(G, H, lists)
    if state is None:
        return None
    t, w = nm["t"], nm["w"]
    side = {0: {"w": nm["s1"], "b": nm["s2"]}, 1: {"w": nm["t1"], "b": nm["t2"]}}
    h = _fix_boundary(state, vcol, t, w)
    rest = [v for v in G.vertices if v not in h]
    sys = Gf2System()
    plan = []
    for i, reg in enumerate(_regions(G, rest, list(h))):
        z = ("z", i)
        _add_region_equations(sys, reg, z)
        avail = [c for c in (0, 1) if all(side[c][vcol[v]] in state.get(v) for v in reg.interior)]
        if not avail:
            return None
        if len(avail) == 1:
            sys.fix(z, avail[0])
        plan.append((reg, z))
    sol = gf2_solve(sys)
    if sol is None:
        return None
    for reg, z in plan:
        c = sol.get(z, 0)
        for v in reg.interior:
            h[v] = side[c][vcol[v]]
    return h


# dispatcher

@dataclass
class SolveResult:
    hom: Optional[Homomorphism]
    method: str
    classification: Optional[Classification] = None


_CLASSIFY_CACHE: Dict[tuple, Classification] = {}


def classify_cached(H: SignedGraph, bound: int = DEFAULT_MAJORITY_BOUND) -> Classification:
    key = (H.canonical(), bound)
    c = _CLASSIFY_CACHE.get(key)
    if c is None:
        c = classify(H, bound)
        _CLASSIFY_CACHE[key] = c
    return c


_METHOD = {
    "Good2Caterpillar": "irreflexive-tree",
    "GoodCaterpillar": "reflexive-tree",
    "GoodSignedTree": "general-tree",
    "Segmented": "segmented",
    "CycleH0": "cycle", "CycleH1": "cycle", "CycleHl": "cycle",
    "NoBicolourBalanced": "majority",
}


def solve_polynomial(inst: Instance, structure: PolyStructure,
                     bound: int = DEFAULT_MAJORITY_BOUND) -> Optional[Homomorphism]:
    v = structure.variant
    if v == "Good2Caterpillar":
        return solve_irreflexive_tree(inst, structure)
    if v == "GoodCaterpillar":
        return solve_reflexive_tree(inst, structure)
    if v == "GoodSignedTree":
        return solve_general_tree(inst, structure, bound)
    if v == "Segmented":
        return solve_segmented(inst, structure)
    if v.startswith("Cycle"):
        return solve_cycle(inst, structure)
    if v == "NoBicolourBalanced":
        return _no_bicolour(inst, structure, bound)
    raise Refused(f"no solver for structure {v}")


def solve(inst: Instance, method: str = "auto", oracle_bound: int = DEFAULT_ORACLE_BOUND,
          majority_bound: int = DEFAULT_MAJORITY_BOUND) -> SolveResult:
    """Classify the target and run the matching algorithm.

    method: "auto" (certified solver, else the oracle within bounds), "poly",
    "oracle" or "majority" (search a conservative majority of H+ and use it).
    """
    if method not in ("auto", "poly", "oracle", "majority"):
        raise InputError(f"unknown method {method}")
    if method == "oracle":
        return SolveResult(_oracle(inst, oracle_bound, None), "oracle")
    if method == "majority":
        sw = build_switching_graph(inst.H)
        key = ("plus", inst.H.canonical())
        t = _MAJORITY_CACHE.get(key)
        if t is None:
            if len(sw.vertices) > majority_bound:
                raise Refused(f"majority search limited to {majority_bound} switching-graph vertices")
            t = find_conservative_majority(sw, SEMI, majority_bound)
            if t is None:
                raise Refused("the switching graph has no semi-conservative majority")
            _MAJORITY_CACHE[key] = t
        return SolveResult(solve_with_majority(inst, t), "majority")
    c = classify_cached(inst.H, majority_bound)
    if c.verdict == POLYNOMIAL:
        hom = solve_polynomial(inst, c.structure, majority_bound)
        return SolveResult(hom, _METHOD[c.structure.variant], c)
    if method == "poly":
        raise Refused(f"target is {c.verdict}: {c.reason}", c)
    return SolveResult(_oracle(inst, oracle_bound, c), "oracle", c)


def _oracle(inst: Instance, bound: int, c: Optional[Classification]) -> Optional[Homomorphism]:
    if len(inst.G) > bound:
        verdict = c.verdict if c is not None else "unclassified"
        raise Refused(f"{verdict} target: brute force limited to {bound} input vertices, got {len(inst.G)}", c)
    return solve_bruteforce(inst)


__all__ = [
    "Region", "SolveResult", "Refused", "fit_switching", "bad_cycles", "region_walk_parities",
    "solve_irreflexive_tree", "solve_reflexive_tree", "solve_general_tree", "solve_with_majority",
    "solve_segmented", "solve_cycle", "solve_polynomial", "solve", "classify_cached",
    "DEFAULT_ORACLE_BOUND",
]
