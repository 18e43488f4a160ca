"""GF(2) linear systems and 2-SAT."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple


@dataclass
class Gf2System:
    """Equations XOR(vars) = const over declared variables."""

    variables: List[Hashable] = field(default_factory=list)
    equations: List[Tuple[frozenset, int]] = field(default_factory=list)

    def __post_init__(self):
        self._index = {v: i for i, v in enumerate(self.variables)}
        for vs, _ in self.equations:
            for v in vs:
                self._declare(v)

    def _declare(self, v):
        if v not in self._index:
            self._index[v] = len(self.variables)
            self.variables.append(v)

    def add(self, vs: Iterable, const: int) -> None:
        """Add XOR of vs = const; a variable listed twice cancels."""
        s: set = set()
        for v in vs:
            self._declare(v)
            s ^= {v}
        self.equations.append((frozenset(s), const & 1))

    def equal(self, x, y, const: int = 0) -> None:
        """x = y + const."""
        self.add([x, y], const)

    def fix(self, x, value: int) -> None:
        self.add([x], value)


def gf2_solve(sys: Gf2System) -> Optional[Dict[Hashable, int]]:
    """Gaussian elimination over int bitsets; free variables are set to 0."""
    n = len(sys.variables)
    idx = sys._index
    pivots: Dict[int, int] = {}  # pivot column -> row (bit n holds the constant)
    for vs, c in sys.equations:
        row = c << n
        for v in vs:
            row ^= 1 << idx[v]
        for col, prow in pivots.items():
            if (row >> col) & 1:
                row ^= prow
        low = row & ((1 << n) - 1)
        if low == 0:
            if row:
                return None
            continue
        col = (low & -low).bit_length() - 1
        for k in pivots:
            if (pivots[k] >> col) & 1:
                pivots[k] ^= row
        pivots[col] = row
    value = [0] * n
    for col, row in pivots.items():
        # other bits in a reduced row are free columns, all 0
        value[col] = (row >> n) & 1
    return {v: value[i] for i, v in enumerate(sys.variables)}


Literal = Tuple[Hashable, bool]


@dataclass
class TwoSatInstance:
    """Clauses are pairs of literals (var, polarity); polarity True means the positive literal."""

    variables: List[Hashable] = field(default_factory=list)
    clauses: List[Tuple[Literal, Literal]] = field(default_factory=list)

    def __post_init__(self):
        self._seen = set(self.variables)
        for a, b in self.clauses:
            self._declare(a[0])
            self._declare(b[0])

    def _declare(self, v):
        if v not in self._seen:
            self._seen.add(v)
            self.variables.append(v)

    def add(self, a: Literal, b: Literal) -> None:
        self._declare(a[0])
        self._declare(b[0])
        self.clauses.append((a, b))

    def implies(self, a: Literal, b: Literal) -> None:
        self.add((a[0], not a[1]), b)

    def unit(self, a: Literal) -> None:
        self.add(a, a)


def two_sat_solve(inst: TwoSatInstance) -> Optional[Dict[Hashable, bool]]:
    """Implication graph plus iterative Tarjan SCC."""
    idx = {v: i for i, v in enumerate(inst.variables)}
    n = len(idx)
    N = 2 * n

    def node(lit: Literal) -> int:
        return 2 * idx[lit[0]] + (0 if lit[1] else 1)

    graph: List[List[int]] = [[] for _ in range(N)]
    for a, b in inst.clauses:
        na, nb = node(a), node(b)
        graph[na ^ 1].append(nb)
        graph[nb ^ 1].append(na)

    index = [-1] * N
    low = [0] * N
    onstack = [False] * N
    comp = [-1] * N
    stack: List[int] = []
    counter = 0
    ncomp = 0
    for root in range(N):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        onstack[root] = True
        while work:
            v, i = work[-1]
            if i < len(graph[v]):
                work[-1] = (v, i + 1)
                w = graph[v][i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    onstack[w] = True
                    work.append((w, 0))
                elif onstack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    onstack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
    out: Dict[Hashable, bool] = {}
    for v, i in idx.items():
        if comp[2 * i] == comp[2 * i + 1]:
            return None
        # Tarjan numbers components in reverse topological order
        out[v] = comp[2 * i] < comp[2 * i + 1]
    return out


def gf2_check(sys: Gf2System, assignment: Dict[Hashable, int]) -> bool:
    return all(sum(assignment[v] for v in vs) % 2 == c for vs, c in sys.equations)


def two_sat_check(inst: TwoSatInstance, assignment: Dict[Hashable, bool]) -> bool:
    return all(assignment[a[0]] == a[1] or assignment[b[0]] == b[1] for a, b in inst.clauses)


__all__ = ["Gf2System", "gf2_solve", "gf2_check", "TwoSatInstance", "two_sat_solve", "two_sat_check"]
