"""Special (bipartite) min orderings for the certified polynomial target classes.

All constructions work on the normalized target (the structure's switch set
applied), which has the same underlying graph and the same bicoloured edges
as the original, so the orderings are valid for both.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from .classifier import PolyStructure, _swap_colours, uni_potential
from .consistency import BipMinOrdering, MinOrdering
from .sgraph import BI, InputError, Sign, SignedGraph, apply_switching


def normalized_target(H: SignedGraph, structure: PolyStructure) -> SignedGraph:
    """Target after the structure's switch set, with colours swapped when red is preferred."""
    Hn = apply_switching(H, structure.switch)
    if structure.get("preferredColour") is Sign.RED:
        Hn = _swap_colours(Hn)
        Hn = apply_switching(Hn, uni_potential(Hn) or ())
    return Hn


def _require(structure: PolyStructure, *variants):
    if structure is None or structure.variant not in variants:
        raise InputError(f"ordering needs a certified {' or '.join(variants)} structure")


def order_good_2caterpillar(H: SignedGraph, structure: PolyStructure) -> BipMinOrdering:
    _require(structure, "Good2Caterpillar")
    Hn = normalized_target(H, structure)
    spine = structure["spine"]
    types = structure["subtreeTypes"]
    k = len(spine)
    rank = Hn.index()
    tier = {"T1": 0, "T2": 1, "T3": 2}
    key: Dict[str, tuple] = {}
    colour: Dict[str, str] = {}
    for i, v in enumerate(spine, 1):
        key[v] = (i, 0)
        colour[v] = "w" if i % 2 else "b"
    kids_of: Dict[int, List[str]] = {i: [] for i in range(1, k + 1)}
    for x, (i, typ) in types.items():
        kids_of[i].append(x)
    for i in range(1, k + 1):
        v = spine[i - 1]
        kids = sorted(kids_of[i], key=lambda x: (tier.get(types[x][1], 3), rank[x]))
        for pos, x in enumerate(kids):
            typ = types[x][1]
            colour[x] = "b" if i % 2 else "w"
            if typ == "T4":
                key[x] = (i + 1, 1, rank[x])
            else:
                key[x] = (i - 1, 3, pos)
            grand = [t for t in Hn.adj[x] if t != v]
            grand.sort(key=lambda t: (Hn.kind(x, t) is not BI, rank[t]))
            for gpos, t in enumerate(grand):
                colour[t] = colour[v]
                key[t] = (i, 2, pos, gpos)
    white = sorted((v for v in Hn.vertices if colour[v] == "w"), key=key.__getitem__)
    black = sorted((v for v in Hn.vertices if colour[v] == "b"), key=key.__getitem__)
    return BipMinOrdering(black, white, special=True)


def caterpillar_tiers(Hn: SignedGraph, spine: Sequence, d: int, loopless_late: bool = False) -> List[str]:
    """The reflexive special order for a normalized good caterpillar (preferred colour blue).

    Loopless leaves (trimmed caterpillars) sit with the bicoloured children when
    joined by a bicoloured edge; with ``loopless_late`` a loopless unicoloured
    neighbour of v_i (i < d) is placed right after v_{i+1}.
    """
    rank = Hn.index()
    sp = set(spine)
    out: List[str] = []
    late: Dict[int, List[str]] = {}
    for i, v in enumerate(spine, 1):
        kids = [x for x in Hn.adj[v] if x not in sp]

        def tier(x):
            lx = Hn.loops.get(x)
            e = Hn.kind(v, x)
            if lx is None:
                return 1 if e is BI else 7
            if e is BI:
                if lx is BI:
                    return 0
                return 2 if lx.has(Sign.BLUE) else 3
            return 4 if lx is BI else 5 if lx.has(Sign.BLUE) else 6

        out.append(v)
        out.extend(late.pop(i, []))
        ordered = sorted(kids, key=lambda x: (tier(x), rank[x]))
        for x in ordered:
            if loopless_late and i < d and x not in Hn.loops and Hn.kind(v, x) is not BI:
                late.setdefault(i + 1, []).append(x)
            else:
                out.append(x)
    for rest in late.values():
        out.extend(rest)
    return out


def order_good_caterpillar(H: SignedGraph, structure: PolyStructure) -> MinOrdering:
    _require(structure, "GoodCaterpillar", "GoodSignedTree")
    if structure.variant == "GoodSignedTree" and structure["case"] != "A":
        raise InputError("only case A trees have a special min ordering construction")
    Hn = normalized_target(H, structure)
    order = caterpillar_tiers(Hn, structure["spine"], structure["d"],
                              loopless_late=structure.variant == "GoodSignedTree")
    return MinOrdering(order, special=True)


def _lr_parts(path, struct) -> Tuple[List[str], List[str]]:
    n = len(path)
    R = set(struct["forwardSources"])
    L = set(struct["backwardSources"])
    seg = struct["segmentIndex"][struct["lrSegment"]]
    a = seg[0]
    U = list(range(0, a + 2))
    V = list(range(a + 2, n))
    white_par = a % 2
    whites: List[int] = []
    blacks: List[int] = []
    wU = [i for i in U if i % 2 == white_par]
    wV = [i for i in V if i % 2 == white_par]
    bU = [i for i in U if i % 2 != white_par]
    bV = [i for i in V if i % 2 != white_par]
    inL = lambda i: path[i] in L
    inR = lambda i: path[i] in R
    whites += sorted([i for i in wU if inL(i)], reverse=True)
    whites += [i for i in wU if not inL(i)]
    whites += [i for i in wV if inR(i)]
    whites += sorted([i for i in wV if not inR(i)], reverse=True)
    blacks += [i for i in bV if inR(i)]
    blacks += sorted([i for i in bV if not inR(i)], reverse=True)
    blacks += sorted([i for i in bU if inL(i)], reverse=True)
    blacks += [i for i in bU if not inL(i)]
    return [path[i] for i in whites], [path[i] for i in blacks]


def _right_parts(path, sources) -> Tuple[List[str], List[str]]:
    S = set(sources)
    classes = []
    for par in (0, 1):
        idx = [i for i in range(len(path)) if i % 2 == par]
        first = [path[i] for i in idx if path[i] in S]
        rest = [path[i] for i in reversed(idx) if path[i] not in S]
        classes.append(first + rest)
    return classes[0], classes[1]


def order_segmented(H: SignedGraph, structure: PolyStructure) -> BipMinOrdering:
    _require(structure, "Segmented")
    path = structure["path"]
    kind = structure["kind"]
    if kind == "R":
        c0, c1 = _right_parts(path, structure["forwardSources"])
    elif kind == "L":
        c0, c1 = _right_parts(list(reversed(path)), structure["backwardSources"])
        if len(path) % 2 == 0:
            c0, c1 = c1, c0
    else:
        c0, c1 = _lr_parts(path, structure)
        if path.index(c0[0]) % 2:
            c0, c1 = c1, c0
    # class 0 holds even path positions (first vertex)
    if c0 and path.index(c0[0]) % 2 == 1:
        c0, c1 = c1, c0
    return BipMinOrdering(black=c1, white=c0, special=True)


def bicoloured_downward_closed(H: SignedGraph, ord: BipMinOrdering) -> Optional[tuple]:
    """First violation of: xy bicoloured, u <= x, v <= y, uv an edge  =>  uv bicoloured."""
    rank = ord.rank()
    colour = ord.colour()
    bis = [(u, v) for u, v, k in H.edge_list() if k is BI]
    for x, y in bis:
        if colour[x] != "w":
            x, y = y, x
        for u, v, k in H.edge_list():
            if colour[u] != "w":
                u, v = v, u
            if k is not BI and rank[u] <= rank[x] and rank[v] <= rank[y]:
                return (x, y, u, v)
    return None


__all__ = [
    "order_good_2caterpillar", "order_good_caterpillar", "order_segmented", "normalized_target",
    "caterpillar_tiers", "bicoloured_downward_closed",
]
