"""Finite simple graphs with an exact, precomputed metric.

Vertices are string names. The declaration order of the vertices is the
total order used for every deterministic tie-break in the package, so paths
are compared lexicographically by vertex *index*, not by name.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from .errors import Budget, BudgetError, InputError, InvariantError, StructuralError

PathSeq = tuple  # tuple of vertex names; length = number of edges = len(p) - 1

DEFAULT_CAP = 100_000


class SimpleGraph:
    """Immutable undirected graph without loops or parallel edges."""

    def __init__(self, vertices: Iterable[str], edges: Iterable[tuple[str, str]]):
        verts = []
        index = {}
        for v in vertices:
            v = str(v)
            if v in index:
                raise InputError(f"duplicate vertex {v!r}")
            index[v] = len(verts)
            verts.append(v)
        nbrs: list[set[int]] = [set() for _ in verts]
        edge_set = set()
        for a, b in edges:
            a, b = str(a), str(b)
            for u in (a, b):
                if u not in index:
                    raise InputError(f"edge ({a}, {b}) uses unknown vertex {u!r}")
            if a == b:
                raise InputError(f"self-loop at {a!r}")
            key = frozenset((a, b))
            if key in edge_set:
                raise InputError(f"parallel edge ({a}, {b})")
            edge_set.add(key)
            nbrs[index[a]].add(index[b])
            nbrs[index[b]].add(index[a])
        self.vertices: tuple[str, ...] = tuple(verts)
        self.index: dict[str, int] = index
        self._nbr_idx = tuple(tuple(sorted(s)) for s in nbrs)
        self._nbrs = {v: tuple(verts[j] for j in self._nbr_idx[i]) for i, v in enumerate(verts)}
        self.edges = frozenset(edge_set)
        self._dist = self._all_pairs()
        self.connected = all(d >= 0 for row in self._dist for d in row)

    def _all_pairs(self):
        n = len(self.vertices)
        table = []
        for s in range(n):
            row = [-1] * n
            row[s] = 0
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for w in self._nbr_idx[u]:
                    if row[w] < 0:
                        row[w] = row[u] + 1
                        queue.append(w)
            table.append(tuple(row))
        return tuple(table)

    def __len__(self):
        return len(self.vertices)

    def __contains__(self, v):
        return v in self.index

    def __eq__(self, other):
        return (
            isinstance(other, SimpleGraph)
            and self.vertices == other.vertices
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.vertices, self.edges))

    def __repr__(self):
        return f"SimpleGraph({len(self.vertices)} vertices, {len(self.edges)} edges)"

    def neighbors(self, v: str) -> tuple[str, ...]:
        self.check_vertex(v)
        return self._nbrs[v]

    def adjacent(self, a: str, b: str) -> bool:
        return frozenset((a, b)) in self.edges

    def check_vertex(self, v):
        if v not in self.index:
            raise InputError(f"unknown vertex {v!r}")

    def require_connected(self):
        if not self.connected:
            raise StructuralError("graph is disconnected; metric operations need a connected graph")

    def dist(self, a: str, b: str) -> int:
        """Unchecked distance lookup for hot loops (graph assumed connected)."""
        return self._dist[self.index[a]][self.index[b]]

    def key(self, v: str) -> int:
        return self.index[v]

    def path_key(self, p) -> tuple[int, ...]:
        return tuple(self.index[v] for v in p)

    def diameter(self) -> int:
        self.require_connected()
        return max(max(row) for row in self._dist)

    def ball(self, center: str, radius: int) -> list[str]:
        i = self.index[center]
        return [v for j, v in enumerate(self.vertices) if 0 <= self._dist[i][j] <= radius]

    def is_path(self, p) -> bool:
        if len(p) == 0:
            return False
        if any(v not in self.index for v in p):
            return False
        return all(self.adjacent(p[i], p[i + 1]) for i in range(len(p) - 1))

    def on_some_geodesic(self, a: str, b: str) -> list[str]:
        """Vertices w with d(a, w) + d(w, b) = d(a, b), in vertex order."""
        ia, ib = self.index[a], self.index[b]
        dab = self._dist[ia][ib]
        ra, rb = self._dist[ia], self._dist[ib]
        return [v for j, v in enumerate(self.vertices) if ra[j] + rb[j] == dab]


def distance(g: SimpleGraph, a: str, b: str) -> int:
    g.check_vertex(a)
    g.check_vertex(b)
    g.require_connected()
    return g.dist(a, b)


def path_length(p) -> int:
    return len(p) - 1


def is_geodesic(g: SimpleGraph, p) -> bool:
    return g.is_path(p) and g.dist(p[0], p[-1]) == len(p) - 1


def all_geodesics(g: SimpleGraph, a: str, b: str, cap: int = DEFAULT_CAP) -> tuple[PathSeq, ...]:
    """Every geodesic from ``a`` to ``b``, lexicographic by vertex order.

    Raises BudgetError when there are more than ``cap`` geodesics; the
    output is never silently truncated.
    """
    g.check_vertex(a)
    g.check_vertex(b)
    g.require_connected()
    if cap <= 0:
        raise InputError(f"cap must be positive, got {cap}")
    out: list[PathSeq] = []
    stack = [a]

    def extend(u):
        if u == b:
            out.append(tuple(stack))
            if len(out) > cap:
                raise BudgetError(
                    f"more than {cap} geodesics between {a} and {b}", partial=tuple(out[:cap])
                )
            return
        du = g.dist(u, b)
        for w in g.neighbors(u):
            if g.dist(w, b) == du - 1:
                stack.append(w)
                extend(w)
                stack.pop()

    extend(a)
    return tuple(out)


@dataclass(frozen=True)
class GraphAutomorphism:
    forward: Mapping[str, str]
    inverse_map: Mapping[str, str] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        fwd = dict(self.forward)
        inv = {w: v for v, w in fwd.items()}
        if len(inv) != len(fwd):
            raise InputError("automorphism is not injective")
        object.__setattr__(self, "forward", fwd)
        object.__setattr__(self, "inverse_map", inv)

    def __call__(self, v: str) -> str:
        return self.forward[v]

    def __hash__(self):
        return hash(tuple(sorted(self.forward.items())))

    @classmethod
    def identity(cls, g: SimpleGraph) -> "GraphAutomorphism":
        return cls({v: v for v in g.vertices})

    def inverse(self) -> "GraphAutomorphism":
        return GraphAutomorphism(self.inverse_map)

    def compose(self, other: "GraphAutomorphism") -> "GraphAutomorphism":
        """``self ∘ other``: apply ``other`` first."""
        return GraphAutomorphism({v: self.forward[other.forward[v]] for v in other.forward})

    def is_identity(self) -> bool:
        return all(v == w for v, w in self.forward.items())

    def apply_set(self, vs):
        return frozenset(self.forward[v] for v in vs)

    def apply_path(self, p):
        return tuple(self.forward[v] for v in p)

    def validate(self, g: SimpleGraph):
        if set(self.forward) != set(g.vertices) or set(self.inverse_map) != set(g.vertices):
            raise InputError("automorphism is not a bijection of the vertex set")
        for e in g.edges:
            a, b = tuple(e)
            if not g.adjacent(self.forward[a], self.forward[b]):
                raise InputError(f"automorphism does not preserve edge ({a}, {b})")
            if not g.adjacent(self.inverse_map[a], self.inverse_map[b]):
                raise InputError(f"automorphism inverse does not preserve edge ({a}, {b})")
        return self


def automorphisms(g: SimpleGraph) -> list[GraphAutomorphism]:
    """All automorphisms of ``g``, via networkx's VF2 matcher."""
    import networkx as nx
    from networkx.algorithms.isomorphism import GraphMatcher

    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(tuple(e) for e in g.edges)
    out = [GraphAutomorphism(dict(m)) for m in GraphMatcher(h, h).isomorphisms_iter()]
    out.sort(key=lambda s: tuple(g.index[s(v)] for v in g.vertices))
    return out


class PreferredGeodesicFamily:
    """A nonempty finite set of geodesics for every pair of vertices.

    Stand-in for tight geodesics. The default provider returns *all*
    geodesics. ``overrides`` replaces the set for chosen ordered pairs
    (the reverse pair gets the reversed paths when ``reversal_closed``).
    The flags are claims; :func:`verify_family_axioms` measures them.
    """

    def __init__(
        self,
        g: SimpleGraph,
        provider: Callable[[str, str], Iterable[PathSeq]] | None = None,
        overrides: Mapping[tuple[str, str], Iterable[PathSeq]] | None = None,
        subpath_closed: bool = True,
        reversal_closed: bool = True,
        cap: int = DEFAULT_CAP,
    ):
        g.require_connected()
        self.graph = g
        self.cap = cap
        self._provider = provider
        self._overrides = {}
        for (a, b), paths in (overrides or {}).items():
            self._overrides[(a, b)] = tuple(tuple(p) for p in paths)
        self.subpath_closed = subpath_closed
        self.reversal_closed = reversal_closed
        self.is_default = provider is None and not self._overrides
        self._cache: dict[tuple[str, str], tuple[PathSeq, ...]] = {}
        self._sets: dict[tuple[str, str], frozenset] = {}

    def _raw(self, a, b):
        if (a, b) in self._overrides:
            return self._overrides[(a, b)]
        if self.reversal_closed and (b, a) in self._overrides:
            return tuple(tuple(reversed(p)) for p in self._overrides[(b, a)])
        if self._provider is not None:
            return tuple(tuple(p) for p in self._provider(a, b))
        return all_geodesics(self.graph, a, b, self.cap)

    def paths(self, a: str, b: str) -> tuple[PathSeq, ...]:
        key = (a, b)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        g = self.graph
        g.check_vertex(a)
        g.check_vertex(b)
        raw = self._raw(a, b)
        if not raw:
            raise InvariantError(f"preferred family is empty for ({a}, {b})")
        for p in raw:
            if p[0] != a or p[-1] != b or not is_geodesic(g, p):
                raise InvariantError(f"preferred path {p} is not a geodesic from {a} to {b}")
        out = tuple(sorted(set(raw), key=g.path_key))
        self._cache[key] = out
        return out

    def first(self, a: str, b: str) -> PathSeq:
        """The deterministic representative used wherever a single [a, b] is needed."""
        return self.paths(a, b)[0]

    def contains(self, p) -> bool:
        p = tuple(p)
        key = (p[0], p[-1])
        s = self._sets.get(key)
        if s is None:
            s = frozenset(self.paths(*key))
            self._sets[key] = s
        return p in s

    def vertices_between(self, a: str, b: str) -> frozenset:
        return frozenset(v for p in self.paths(a, b) for v in p)

    def is_invariant_under(self, sigma: GraphAutomorphism) -> bool:
        if self.is_default:
            return True
        for a in self.graph.vertices:
            for b in self.graph.vertices:
                moved = {sigma.apply_path(p) for p in self.paths(a, b)}
                if moved != set(self.paths(sigma(a), sigma(b))):
                    return False
        return True


@dataclass(frozen=True)
class AxiomReport:
    L: int
    epsilon: int
    K0: int
    K1: int
    k1: int
    r: int
    subpath_closed: bool
    reversal_closed: bool
    violation: str = ""

    def lines(self):
        return [
            f"axioms L={self.L} epsilon={self.epsilon}",
            f"K0 {self.K0}",
            f"K1 {self.K1} k1={self.k1} r={self.r}",
            f"subpath_closure {'pass' if self.subpath_closed else 'fail'}",
            f"reversal_closure {'pass' if self.reversal_closed else 'fail'}",
        ] + ([f"violation {self.violation}"] if self.violation else [])


def verify_family_axioms(
    fam: PreferredGeodesicFamily,
    g: SimpleGraph,
    L: int,
    epsilon: int = 0,
    k1: int = 0,
    r: int | None = None,
) -> AxiomReport:
    """Measure the finiteness constants of ``fam`` and check its closure flags.

    K0 is the largest number of preferred-geodesic vertices between a and b
    lying within L + 2ε of a vertex c on a preferred [a, b]. K1 is the
    analogous count for endpoints moved by at most ``r`` (default 2ε) and
    radius 2ε, over c at least r + k1 from both ends.
    """
    if r is None:
        r = 2 * epsilon
    verts = g.vertices
    between = {(a, b): fam.vertices_between(a, b) for a in verts for b in verts}
    K0 = 0
    K1 = 0
    for a in verts:
        for b in verts:
            U = between[(a, b)]
            for c in U:
                near = sum(1 for u in U if g.dist(u, c) <= L + 2 * epsilon)
                K0 = max(K0, near)
                if g.dist(a, c) >= r + k1 and g.dist(b, c) >= r + k1:
                    hits = set()
                    for a2 in g.ball(a, r):
                        for b2 in g.ball(b, r):
                            hits.update(u for u in between[(a2, b2)] if g.dist(u, c) <= 2 * epsilon)
                    K1 = max(K1, len(hits))
    sub_ok = True
    rev_ok = True
    violation = ""
    for a in verts:
        for b in verts:
            for p in fam.paths(a, b):
                if rev_ok and not fam.contains(tuple(reversed(p))):
                    rev_ok = False
                    violation = violation or f"reverse of {' '.join(p)} missing"
                if not sub_ok:
                    continue
                for i in range(len(p)):
                    for j in range(i, len(p)):
                        if not fam.contains(p[i : j + 1]):
                            sub_ok = False
                            violation = violation or (
                                f"subpath {' '.join(p[i:j + 1])} of {' '.join(p)} missing"
                            )
                            break
                    if not sub_ok:
                        break
    return AxiomReport(L, epsilon, K0, K1, k1, r, sub_ok, rev_ok, violation)


def farthest_from_geodesics(g: SimpleGraph, a: str, b: str) -> dict[str, int]:
    """For every vertex w, the maximum over geodesics γ from a to b of d(w, γ).

    Computed by a max-min recursion on the geodesic DAG, so no geodesic is
    listed explicitly. Results are memoized on the (immutable) graph.
    """
    far = _farthest(g, g.index[a], g.index[b])
    return {v: far[i] for i, v in enumerate(g.vertices)}


def _farthest(g: SimpleGraph, u: int, v: int) -> list[int]:
    cache = g.__dict__.setdefault("_far_cache", {})
    key = (u, v) if u <= v else (v, u)
    hit = cache.get(key)
    if hit is not None:
        return hit
    u, v = key
    D = g._dist
    nbr = g._nbr_idx
    n = len(g.vertices)
    duv = D[u][v]
    layers: list[list[int]] = [[] for _ in range(duv + 1)]
    for x in range(n):
        if D[u][x] + D[x][v] == duv:
            layers[D[u][x]].append(x)
    far = []
    for w in range(n):
        Dw = D[w]
        best = {x: Dw[x] for x in layers[duv]}
        for k in range(duv - 1, -1, -1):
            nxt = {}
            for x in layers[k]:
                m = max(best[y] for y in nbr[x] if y in best and D[u][y] == k + 1)
                nxt[x] = min(Dw[x], m)
            best = nxt
        far.append(best[u])
    cache[key] = far
    return far


def slim_delta(g: SimpleGraph, budget: int = 10_000_000) -> int:
    """Least δ making every geodesic triangle δ-slim, over all geodesic choices.

    For a side [a, b] and a vertex w on it, the worst choice of the other two
    sides is max over geodesics [b, c] of d(w, [b, c]) (and likewise for
    [a, c]); the two choices are independent, so the worst triangle value at
    w is the min of the two maxima.
    """
    g.require_connected()
    n = len(g)
    D = g._dist
    steps = Budget(budget, "slim_delta")
    delta = 0
    for a in range(n):
        for b in range(a, n):
            for c in range(b, n):
                try:
                    steps.tick()
                except BudgetError as exc:
                    raise BudgetError(
                        f"slim_delta budget exhausted; lower bound {delta}", partial=delta
                    ) from exc
                for (x, y, z) in ((a, b, c), (b, c, a), (a, c, b)):
                    # side [x, y]; the other two sides are [y, z] and [x, z]
                    f1 = _farthest(g, y, z)
                    f2 = _farthest(g, x, z)
                    dxy = D[x][y]
                    for w in range(n):
                        if D[x][w] + D[w][y] == dxy:
                            val = min(f1[w], f2[w])
                            if val > delta:
                                delta = val
    return delta


# ---------------------------------------------------------------- file formats


def parse_graph(text: str, source: str = "<graph>") -> SimpleGraph:
    verts: list[str] = []
    edges: list[tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "v" and len(parts) == 2:
            verts.append(parts[1])
        elif parts[0] == "e" and len(parts) == 3:
            edges.append((parts[1], parts[2]))
        else:
            raise InputError(f"{source}:{lineno}: cannot parse {raw!r}")
    try:
        return SimpleGraph(verts, edges)
    except InputError as exc:
        raise InputError(f"{source}: {exc}") from exc


def serialize_graph(g: SimpleGraph) -> str:
    lines = [f"v {v}" for v in g.vertices]
    edges = sorted((tuple(sorted(e, key=g.key)) for e in g.edges), key=g.path_key)
    lines += [f"e {a} {b}" for a, b in edges]
    return "\n".join(lines) + "\n"


def parse_automorphism(text: str, g: SimpleGraph, source: str = "<automorphism>") -> GraphAutomorphism:
    fwd = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] != "map" or len(parts) != 3:
            raise InputError(f"{source}:{lineno}: cannot parse {raw!r}")
        a, b = parts[1], parts[2]
        for v in (a, b):
            if v not in g:
                raise InputError(f"{source}:{lineno}: unknown vertex {v!r}")
        if a in fwd:
            raise InputError(f"{source}:{lineno}: vertex {a!r} mapped twice")
        fwd[a] = b
    try:
        return GraphAutomorphism(fwd).validate(g)
    except InputError as exc:
        raise InputError(f"{source}: {exc}") from exc


def serialize_automorphism(sigma: GraphAutomorphism, g: SimpleGraph) -> str:
    return "".join(f"map {v} {sigma(v)}\n" for v in g.vertices)
