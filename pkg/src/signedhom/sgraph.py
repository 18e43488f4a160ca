"""Signed graphs: signs, switching, walk signs, colour parts and the switching graph."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple


class InputError(ValueError):
    """Raised for malformed graphs, lists or walks."""


class ParseError(InputError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


class Sign(enum.IntEnum):
    BLUE = 1
    RED = 2

    def negate(self) -> "Sign":
        return Sign.RED if self is Sign.BLUE else Sign.BLUE

    @property
    def symbol(self) -> str:
        return "+" if self is Sign.BLUE else "-"


class EdgeKind(enum.IntEnum):
    """Set of signs carried by an edge or loop, stored as a bitmask of Sign values."""

    BLUE = 1
    RED = 2
    BI = 3

    @property
    def signs(self) -> FrozenSet[Sign]:
        return frozenset(s for s in Sign if self & s)

    @property
    def bicoloured(self) -> bool:
        return self is EdgeKind.BI

    def has(self, sign: Sign) -> bool:
        return bool(self & sign)

    def negate(self) -> "EdgeKind":
        if self is EdgeKind.BI:
            return self
        return EdgeKind.RED if self is EdgeKind.BLUE else EdgeKind.BLUE

    def covers(self, other: "EdgeKind") -> bool:
        """True if every sign of ``other`` is also a sign of ``self``."""
        return (self & other) == other

    @property
    def symbol(self) -> str:
        return {1: "+", 2: "-", 3: "+-"}[int(self)]

    @classmethod
    def parse(cls, text: str) -> "EdgeKind":
        try:
            return _KIND_SYMBOLS[text]
        except KeyError:
            raise InputError(f"unknown edge kind {text!r}") from None


_KIND_SYMBOLS = {"+": EdgeKind.BLUE, "-": EdgeKind.RED, "+-": EdgeKind.BI, "-+": EdgeKind.BI}

BLUE, RED, BI = EdgeKind.BLUE, EdgeKind.RED, EdgeKind.BI


def pair(u, v) -> FrozenSet:
    return frozenset((u, v))


class SignedGraph:
    """Vertices with at most one EdgeKind per vertex pair and per loop.

    Treated as immutable once built; the mutating helpers are only used
    while constructing a graph.
    """

    def __init__(self, vertices: Iterable = (), edges: Iterable = (), loops: Mapping | Iterable = ()):
        self._vertices: Dict[str, None] = {}
        self.edges: Dict[FrozenSet, EdgeKind] = {}
        self.loops: Dict[str, EdgeKind] = {}
        self.adj: Dict[str, Dict[str, EdgeKind]] = {}
        for v in vertices:
            self.add_vertex(v)
        for u, v, k in edges:
            self.add_edge(u, v, k)
        items = loops.items() if isinstance(loops, Mapping) else loops
        for v, k in items:
            self.add_loop(v, k)

    # construction
    def add_vertex(self, v) -> None:
        if v not in self._vertices:
            self._vertices[v] = None
            self.adj[v] = {}

    def add_edge(self, u, v, kind) -> None:
        if u == v:
            raise InputError(f"edge {u} {v} is a loop; use add_loop")
        kind = EdgeKind(kind)
        self.add_vertex(u)
        self.add_vertex(v)
        self.edges[pair(u, v)] = kind
        self.adj[u][v] = kind
        self.adj[v][u] = kind

    def add_loop(self, v, kind) -> None:
        self.add_vertex(v)
        self.loops[v] = EdgeKind(kind)

    # queries
    @property
    def vertices(self) -> List[str]:
        return list(self._vertices)

    def __contains__(self, v) -> bool:
        return v in self._vertices

    def __len__(self) -> int:
        return len(self._vertices)

    def index(self) -> Dict[str, int]:
        return {v: i for i, v in enumerate(self._vertices)}

    def kind(self, u, v) -> Optional[EdgeKind]:
        """EdgeKind between u and v (the loop when u == v), or None."""
        if u == v:
            return self.loops.get(u)
        return self.adj.get(u, {}).get(v)

    def neighbours(self, v) -> List[str]:
        return list(self.adj[v])

    def degree(self, v) -> int:
        return len(self.adj[v])

    def edge_list(self) -> List[Tuple[str, str, EdgeKind]]:
        order = self.index()
        out = []
        for e, k in self.edges.items():
            u, v = sorted(e, key=order.__getitem__)
            out.append((u, v, k))
        out.sort(key=lambda t: (order[t[0]], order[t[1]]))
        return out

    def copy(self) -> "SignedGraph":
        return SignedGraph(self.vertices, self.edge_list(), dict(self.loops))

    def induced(self, keep: Iterable) -> "SignedGraph":
        keep = set(keep)
        vs = [v for v in self._vertices if v in keep]
        es = [(u, v, k) for u, v, k in self.edge_list() if u in keep and v in keep]
        ls = {v: k for v, k in self.loops.items() if v in keep}
        return SignedGraph(vs, es, ls)

    def rename(self, mapping: Mapping) -> "SignedGraph":
        return SignedGraph(
            [mapping[v] for v in self._vertices],
            [(mapping[u], mapping[v], k) for u, v, k in self.edge_list()],
            {mapping[v]: k for v, k in self.loops.items()},
        )

    def components(self) -> List[List[str]]:
        seen = set()
        comps = []
        for s in self._vertices:
            if s in seen:
                continue
            seen.add(s)
            comp = [s]
            stack = [s]
            while stack:
                x = stack.pop()
                for y in self.adj[x]:
                    if y not in seen:
                        seen.add(y)
                        comp.append(y)
                        stack.append(y)
            comps.append(comp)
        return comps

    def is_tree(self) -> bool:
        return len(self) > 0 and len(self.edges) == len(self) - 1 and len(self.components()) == 1

    def canonical(self) -> tuple:
        return (tuple(self._vertices), tuple(self.edge_list()), tuple(sorted(self.loops.items(), key=lambda t: self.index()[t[0]])))

    def __eq__(self, other) -> bool:
        if not isinstance(other, SignedGraph):
            return NotImplemented
        return (set(self._vertices) == set(other._vertices)
                and self.edges == other.edges and self.loops == other.loops)

    def __hash__(self):
        return hash((frozenset(self._vertices), frozenset(self.edges.items()), frozenset(self.loops.items())))

    def __repr__(self) -> str:
        es = " ".join(f"{u}{v}{k.symbol}" for u, v, k in self.edge_list())
        ls = " ".join(f"{v}@{k.symbol}" for v, k in self.loops.items())
        return f"SignedGraph({len(self)}v: {es} {ls})".replace("  ", " ")


@dataclass
class Instance:
    """A list-homomorphism instance: input G, target H, and lists L(v) for v in G."""

    G: SignedGraph
    H: SignedGraph
    lists: Dict[str, List[str]] = field(default_factory=dict)

    def __post_init__(self):
        hv = self.H.vertices
        full = {}
        for v in self.G.vertices:
            lst = self.lists.get(v)
            if lst is None:
                full[v] = list(hv)
            else:
                for h in lst:
                    if h not in self.H:
                        raise InputError(f"list of {v} names unknown target vertex {h}")
                full[v] = [h for h in hv if h in set(lst)]
        for v in self.lists:
            if v not in self.G:
                raise InputError(f"list given for unknown vertex {v}")
        self.lists = full


@dataclass(frozen=True)
class Homomorphism:
    mapping: Dict[str, str]
    switched: FrozenSet[str] = frozenset()


# switching and walks

def apply_switching(G: SignedGraph, S: Iterable) -> SignedGraph:
    S = set(S)
    for v in S:
        if v not in G:
            raise InputError(f"switch set names unknown vertex {v}")
    es = []
    for u, v, k in G.edge_list():
        if (u in S) != (v in S):
            k = k.negate()
        es.append((u, v, k))
    return SignedGraph(G.vertices, es, dict(G.loops))


def closed_walk_sign(G: SignedGraph, walk: Sequence) -> Optional[Sign]:
    """Sign of a closed walk of unicoloured edges, or None if it uses a bicoloured edge."""
    if len(walk) < 2 or walk[0] != walk[-1]:
        raise InputError("closed walk must have at least one step and end where it starts")
    red = 0
    undefined = False
    for a, b in zip(walk, walk[1:]):
        k = G.kind(a, b)
        if k is None:
            raise InputError(f"{a} and {b} are not adjacent")
        if k is BI:
            undefined = True
        elif k is RED:
            red += 1
    if undefined:
        return None
    return Sign.RED if red % 2 else Sign.BLUE


def balancing_potential(G: SignedGraph) -> Optional[Dict[str, int]]:
    """0/1 potential p with p(u)+p(v) = [uv red] on every unicoloured edge, or None.

    Switching the vertices with potential 1 makes every unicoloured edge blue.
    Unicoloured loops must be blue.
    """
    if any(k is RED for k in G.loops.values()):
        return None
    pot: Dict[str, int] = {}
    for s in G.vertices:
        if s in pot:
            continue
        pot[s] = 0
        stack = [s]
        while stack:
            x = stack.pop()
            for y, k in G.adj[x].items():
                if k is BI:
                    continue
                want = pot[x] ^ (k is RED)
                if y not in pot:
                    pot[y] = want
                    stack.append(y)
                elif pot[y] != want:
                    return None
    return pot


def is_uni_balanced(G: SignedGraph) -> bool:
    return balancing_potential(G) is not None


def blue_part(G: SignedGraph) -> SignedGraph:
    """Underlying graph of the edges and loops containing blue; all vertices kept."""
    return SignedGraph(
        G.vertices,
        [(u, v, BLUE) for u, v, k in G.edge_list() if k.has(Sign.BLUE)],
        {v: BLUE for v, k in G.loops.items() if k.has(Sign.BLUE)},
    )


def red_part(G: SignedGraph) -> SignedGraph:
    return SignedGraph(
        G.vertices,
        [(u, v, RED) for u, v, k in G.edge_list() if k.has(Sign.RED)],
        {v: RED for v, k in G.loops.items() if k.has(Sign.RED)},
    )


def bicoloured_part(G: SignedGraph) -> SignedGraph:
    """Bicoloured edges and loops together with their endpoints only."""
    es = [(u, v, BI) for u, v, k in G.edge_list() if k is BI]
    ls = {v: BI for v, k in G.loops.items() if k is BI}
    keep = set(ls)
    for u, v, _ in es:
        keep.update((u, v))
    return SignedGraph([v for v in G.vertices if v in keep], es, ls)


# switching graph

@dataclass
class EdgeColouredGraph:
    """Plain two-coloured graph; edges are frozensets (size 1 for loops)."""

    vertices: List[str]
    blue: set
    red: set

    def has(self, colour: Sign, u, v) -> bool:
        return pair(u, v) in (self.blue if colour is Sign.BLUE else self.red)


def twin_name(v: str) -> str:
    return f"{v}'"


@dataclass
class SwitchingGraph:
    base: EdgeColouredGraph
    partner: Dict[str, str]
    origin: Dict[str, str]
    flipped: Dict[str, bool]

    @property
    def vertices(self) -> List[str]:
        return self.base.vertices

    def as_signed(self) -> SignedGraph:
        """The same edge sets viewed as a signed graph (for reuse of graph helpers)."""
        g = SignedGraph(self.base.vertices)
        kinds: Dict[FrozenSet, int] = {}
        for e in self.base.blue:
            kinds[e] = kinds.get(e, 0) | BLUE
        for e in self.base.red:
            kinds[e] = kinds.get(e, 0) | RED
        for e, k in kinds.items():
            if len(e) == 1:
                (v,) = e
                g.add_loop(v, k)
            else:
                u, v = e
                g.add_edge(u, v, k)
        return g


def build_switching_graph(H: SignedGraph) -> SwitchingGraph:
    verts: List[str] = []
    partner: Dict[str, str] = {}
    origin: Dict[str, str] = {}
    flipped: Dict[str, bool] = {}
    taken = set(H.vertices)
    for v in H.vertices:
        t = twin_name(v)
        while t in taken:
            t = twin_name(t)
        taken.add(t)
        verts.extend((v, t))
        partner[v], partner[t] = t, v
        origin[v] = origin[t] = v
        flipped[v], flipped[t] = False, True
    blue: set = set()
    red: set = set()

    def put(kind: EdgeKind, a, b):
        if kind.has(Sign.BLUE):
            blue.add(pair(a, b))
        if kind.has(Sign.RED):
            red.add(pair(a, b))

    items = [(u, v, k) for u, v, k in H.edge_list()] + [(v, v, k) for v, k in H.loops.items()]
    for u, v, k in items:
        u2, v2 = partner[u], partner[v]
        put(k, u, v)
        put(k, u2, v2)
        put(k.negate(), u, v2)
        put(k.negate(), u2, v)
    return SwitchingGraph(EdgeColouredGraph(verts, blue, red), partner, origin, flipped)


def plus_lists(sw: SwitchingGraph, lists: Mapping[str, Iterable]) -> Dict[str, List[str]]:
    """Lists L+ on the switching graph: each listed vertex together with its twin."""
    out = {}
    for v, lst in lists.items():
        s = set(lst)
        out[v] = [x for x in sw.vertices if sw.origin[x] in s]
    return out


# text formats

def parse_graph(text: str) -> SignedGraph:
    g = SignedGraph()
    header = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if not header:
            if parts != ["sg", "1"]:
                raise ParseError(lineno, "expected header 'sg 1'")
            header = True
            continue
        cmd = parts[0]
        try:
            if cmd == "vertex" and len(parts) == 2:
                g.add_vertex(parts[1])
            elif cmd == "edge" and len(parts) == 4:
                u, v = parts[1], parts[2]
                if u == v:
                    raise ParseError(lineno, "edge endpoints must differ; use 'loop'")
                if pair(u, v) in g.edges:
                    raise ParseError(lineno, f"duplicate edge {u} {v}")
                g.add_edge(u, v, EdgeKind.parse(parts[3]))
            elif cmd == "loop" and len(parts) == 3:
                if parts[1] in g.loops:
                    raise ParseError(lineno, f"duplicate loop at {parts[1]}")
                g.add_loop(parts[1], EdgeKind.parse(parts[2]))
            else:
                raise ParseError(lineno, f"malformed line {raw.strip()!r}")
        except ParseError:
            raise
        except InputError as exc:
            raise ParseError(lineno, str(exc)) from None
    if not header:
        raise ParseError(1, "empty graph file")
    return g


def serialize_graph(G: SignedGraph) -> str:
    lines = ["sg 1"]
    lines += [f"vertex {v}" for v in G.vertices]
    lines += [f"edge {u} {v} {k.symbol}" for u, v, k in G.edge_list()]
    lines += [f"loop {v} {G.loops[v].symbol}" for v in G.vertices if v in G.loops]
    return "\n".join(lines) + "\n"


def parse_lists(text: str, G: SignedGraph, H: SignedGraph) -> Dict[str, List[str]]:
    lists: Dict[str, List[str]] = {}
    header = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if not header:
            if parts != ["lists", "1"]:
                raise ParseError(lineno, "expected header 'lists 1'")
            header = True
            continue
        if parts[0] != "map" or len(parts) < 3 or parts[2] != ":":
            raise ParseError(lineno, f"malformed line {raw.strip()!r}")
        v = parts[1]
        if v not in G:
            raise ParseError(lineno, f"unknown input vertex {v}")
        if v in lists:
            raise ParseError(lineno, f"duplicate list for {v}")
        for h in parts[3:]:
            if h not in H:
                raise ParseError(lineno, f"unknown target vertex {h}")
        lists[v] = parts[3:]
    if not header:
        raise ParseError(1, "empty lists file")
    for v in G.vertices:
        lists.setdefault(v, H.vertices)
    return lists


def serialize_lists(lists: Mapping[str, Sequence]) -> str:
    lines = ["lists 1"]
    lines += [f"map {v} : {' '.join(lst)}" for v, lst in lists.items()]
    return "\n".join(lines) + "\n"


def format_homomorphism(G: SignedGraph, hom: Optional[Homomorphism]) -> str:
    if hom is None:
        return "NONE\n"
    lines = []
    for v in G.vertices:
        tail = " switched" if v in hom.switched else ""
        lines.append(f"map {v} -> {hom.mapping[v]}{tail}")
    return "\n".join(lines) + "\n"


def parse_homomorphism(text: str) -> Optional[Homomorphism]:
    mapping = {}
    switched = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line == "NONE":
            return None
        parts = line.split()
        if parts[0] != "map" or len(parts) not in (4, 5) or parts[2] != "->":
            raise ParseError(lineno, f"malformed line {line!r}")
        mapping[parts[1]] = parts[3]
        if len(parts) == 5:
            if parts[4] != "switched":
                raise ParseError(lineno, f"malformed line {line!r}")
            switched.add(parts[1])
    return Homomorphism(mapping, frozenset(switched))


# small constructors used throughout

def path_graph(kinds: Sequence, prefix: str = "v", loops: Optional[Mapping[int, EdgeKind]] = None) -> SignedGraph:
    """Path v1..vn whose i-th edge has kinds[i-1]; loops keyed by 1-based index."""
    n = len(kinds) + 1
    g = SignedGraph([f"{prefix}{i}" for i in range(1, n + 1)])
    for i, k in enumerate(kinds, 1):
        g.add_edge(f"{prefix}{i}", f"{prefix}{i + 1}", k)
    for i, k in (loops or {}).items():
        g.add_loop(f"{prefix}{i}", k)
    return g


def cycle_graph(kinds: Sequence, prefix: str = "v") -> SignedGraph:
    n = len(kinds)
    g = SignedGraph([f"{prefix}{i}" for i in range(1, n + 1)])
    for i, k in enumerate(kinds, 1):
        g.add_edge(f"{prefix}{i}", f"{prefix}{i % n + 1}", k)
    return g
