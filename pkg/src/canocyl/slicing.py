"""The Diff cocycle on a cylinder and what is built from it: slices, triangle decompositions and the good-l search."""

from __future__ import annotations

from dataclasses import dataclass, field

from .constants import ConstantProfile, MeasuredBounds, l_candidates, psi
from .cylinders import CylinderSet, cylinder
from .errors import Budget, BudgetError, InputError, InvariantError
from .graph import GraphAutomorphism, PreferredGeodesicFamily, SimpleGraph


@dataclass(frozen=True)
class NeighborSets:
    left: frozenset
    right: frozenset
    anchor: tuple[str, str]
    center: str


@dataclass(frozen=True)
class Slice:
    members: frozenset
    anchor: tuple[str, str]
    rank: int


def _need_member(cyl: CylinderSet, v: str):
    if v not in cyl.members:
        raise InputError(f"{v} is not in the cylinder of ({cyl.x}, {cyl.y})")


def neighbor_sets(g: SimpleGraph, a: str, x: str, cyl: CylinderSet, profile: ConstantProfile) -> NeighborSets:
    _need_member(cyl, x)
    thr = profile.neighbor_threshold
    ax = g.dist(a, x)
    left, right = set(), set()
    for v in cyl.members:
        if g.dist(x, v) <= thr:
            continue
        av = g.dist(a, v)
        if ax < av:
            right.add(v)
        elif ax > av:
            left.add(v)
    return NeighborSets(frozenset(left), frozenset(right), (cyl.x, cyl.y), x)


def _diff_sets(nx_: NeighborSets, ny: NeighborSets) -> int:
    return (
        len(nx_.left - ny.left)
        - len(ny.left - nx_.left)
        + len(ny.right - nx_.right)
        - len(nx_.right - ny.right)
    )


def diff(g: SimpleGraph, a: str, b: str, x: str, y: str, cyl: CylinderSet, profile: ConstantProfile) -> int:
    """#(N_L(x)\\N_L(y)) - #(N_L(y)\\N_L(x)) + #(N_R(y)\\N_R(x)) - #(N_R(x)\\N_R(y))."""
    if (cyl.x, cyl.y) != (a, b):
        raise InputError(f"cylinder is for ({cyl.x}, {cyl.y}), not ({a}, {b})")
    return _diff_sets(neighbor_sets(g, a, x, cyl, profile), neighbor_sets(g, a, y, cyl, profile))


def slice_partition(g: SimpleGraph, cyl: CylinderSet, profile: ConstantProfile) -> list[Slice]:
    """Diff-classes of the cylinder, ranked from the x-side.

    S < S' iff Diff(u, v) < 0 for u in S, v in S', so sorting classes by
    Diff(., x) ascending gives the order. Every pair is then rechecked
    against the order, which catches a cylinder computed under another
    profile or anchor.
    """
    a = cyl.x
    members = sorted(cyl.members, key=g.key)
    ns = {v: neighbor_sets(g, a, v, cyl, profile) for v in members}
    ref = ns[a] if a in ns else ns[members[0]]
    level = {v: _diff_sets(ns[v], ref) for v in members}
    for u in members:
        for v in members:
            if _diff_sets(ns[u], ns[v]) != level[u] - level[v]:
                raise InvariantError(f"Diff cocycle fails on ({u}, {v}) in the cylinder of ({cyl.x}, {cyl.y})")
    classes: dict[int, list[str]] = {}
    for v in members:
        classes.setdefault(level[v], []).append(v)
    return [
        Slice(frozenset(classes[k]), (cyl.x, cyl.y), rank)
        for rank, k in enumerate(sorted(classes))
    ]


def slice_diameter(g: SimpleGraph, s: Slice) -> int:
    return max(g.dist(u, v) for u in s.members for v in s.members)


def consecutive_slice_gap(g: SimpleGraph, slices: list[Slice]) -> int:
    if len(slices) < 2:
        raise InputError("consecutive_slice_gap needs at least two slices")
    return max(
        g.dist(u, v)
        for s, t in zip(slices, slices[1:])
        for u in s.members
        for v in t.members
    )


def slice_lines(g: SimpleGraph, slices: list[Slice]) -> list[str]:
    return [f"slice {s.rank} : {' '.join(sorted(s.members, key=g.key))}" for s in slices]


def gromov_product(g: SimpleGraph, x: str, y: str, z: str) -> int:
    """(y.z)_x, rounded down."""
    return (g.dist(x, y) + g.dist(x, z) - g.dist(y, z)) // 2


# -------------------------------------------------------------- good l


@dataclass(frozen=True)
class Inclusion:
    triangle: tuple[str, str, str]
    corner: str
    source: tuple[str, str]
    target: tuple[str, str]
    radius: int
    passed: bool
    missing: tuple[str, ...] = ()

    def describe(self) -> str:
        x, y, z = self.triangle
        s = (
            f"triangle ({x},{y},{z}) corner {self.corner} R={self.radius}: "
            f"Cyl{self.source} in Cyl{self.target} {'pass' if self.passed else 'fail'}"
        )
        if self.missing:
            s += f" missing {' '.join(self.missing)}"
        return s


@dataclass
class GoodL:
    l: int | None  # noqa: E741
    audits: list[Inclusion] = field(default_factory=list)
    failures: dict[int, str] = field(default_factory=dict)
    n: int = 0
    psi_n: int = 0
    offset: int = 0
    triangles: list[tuple[str, str, str]] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.l is not None

    def lines(self) -> list[str]:
        out = [f"goodl n={self.n} psi={self.psi_n} offset={self.offset} triangles={len(self.triangles)}"]
        out += [f"fail l={k} : {v}" for k, v in self.failures.items()]
        if self.found:
            out.append(f"l = {self.l}")
            out += [f"check {a.describe()}" for a in self.audits]
        else:
            out.append("l = none")
        return out


def triangles_of(F: list[GraphAutomorphism], p: str) -> list[tuple[str, str, str]]:
    """(p, αp, γ⁻¹p) = (p, αp, αβp) over α, β, γ in F ∪ F⁻¹ with αβγ = 1.

    Products compose as maps: (αβ)(v) = α(β(v)).
    """
    letters: list[GraphAutomorphism] = []
    for f in F:
        for h in (f, f.inverse()):
            if h not in letters:
                letters.append(h)
    out = []
    for al in letters:
        for be in letters:
            ab = al.compose(be)
            if ab.inverse() not in letters:
                continue
            t = (p, al(p), ab(p))
            if t not in out:
                out.append(t)
    return out


def _ball_part(g, members, center, radius):
    return frozenset(v for v in members if g.dist(center, v) <= radius)


def _inclusions(g, tri, cyls, offset):
    x, y, z = tri
    out = []
    for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
        R = gromov_product(g, a, b, c) - offset
        A = _ball_part(g, cyls[(a, b)].members, a, R)
        B = _ball_part(g, cyls[(a, c)].members, a, R)
        for src, tgt, S, T in (((a, b), (a, c), A, B), ((a, c), (a, b), B, A)):
            miss = tuple(sorted(S - T, key=g.key))
            out.append(Inclusion(tri, a, src, tgt, R, not miss, miss))
    return out


def good_l_search(
    F: list[GraphAutomorphism],
    p: str,
    fam: PreferredGeodesicFamily,
    profile: ConstantProfile,
    bounds: MeasuredBounds,
    offset: int | None = None,
    candidates: list[int] | None = None,
    budget: int | None = None,
) -> GoodL:
    """Least candidate l for which all ball-restricted cylinder equalities hold.

    ``offset`` defaults to 5(13μ + ψ(n)); a smaller one makes the balls
    large enough to matter on small graphs. Failure is reported, not raised.
    """
    g = fam.graph
    g.check_vertex(p)
    if not F:
        raise InputError("F must be nonempty")
    for f in F:
        f.validate(g)
    n = (2 * len(F)) ** 3
    psi_n = psi(n, bounds.kappa_mu, profile.epsilon)
    if offset is None:
        offset = 5 * (13 * profile.mu + psi_n)
    if candidates is None:
        candidates = l_candidates(profile, psi_n)
    tris = triangles_of(F, p)
    steps = Budget(budget or profile.budget, "good_l_search")
    res = GoodL(None, n=n, psi_n=psi_n, offset=offset, triangles=tris)
    for l in candidates:  # noqa: E741
        audits = []
        try:
            for tri in tris:
                cyls = {}
                for u in tri:
                    for v in tri:
                        if u != v or tri.count(u) > 1:
                            steps.tick()
                            cyls[(u, v)] = cylinder(u, v, l, fam, profile, budget=profile.budget)
                audits += _inclusions(g, tri, cyls, offset)
        except BudgetError as exc:
            raise BudgetError(f"good_l_search budget exhausted at l={l}", partial=res) from exc
        bad = next((a for a in audits if not a.passed), None)
        if bad is None:
            res.l = l
            res.audits = audits
            return res
        res.failures[l] = bad.describe()
    return res


# -------------------------------------------------------------- triangles


@dataclass
class TriangleDecomposition:
    triangle: tuple[str, str, str]
    l: int  # noqa: E741
    shared_S: list[frozenset]
    shared_T: list[frozenset]
    shared_V: list[frozenset]
    holes: dict[str, list[frozenset]]
    hole_bound: int
    agreement_checks: list[tuple[str, int, bool]] = field(default_factory=list)

    def lines(self, g: SimpleGraph) -> list[str]:
        x, y, z = self.triangle
        k, m, p = len(self.shared_S), len(self.shared_T), len(self.shared_V)
        S = [f"S{i}" for i in range(1, k + 1)]
        T = [f"T{i}" for i in range(1, m + 1)]
        V = [f"V{i}" for i in range(1, p + 1)]
        out = [f"triangle {x} {y} {z} l={self.l} hole_bound={self.hole_bound}"]
        out.append(f"row {x} {y} : {' '.join(S + ['H' + z] + T[::-1])}")
        out.append(f"row {x} {z} : {' '.join(S + ['H' + y] + V[::-1])}")
        out.append(f"row {y} {z} : {' '.join(T + ['H' + x] + V[::-1])}")
        fmt = lambda s: " ".join(sorted(s, key=g.key))  # noqa: E731
        for tag, seq in (("S", self.shared_S), ("T", self.shared_T), ("V", self.shared_V)):
            out += [f"{tag}{i} : {fmt(s)}" for i, s in enumerate(seq, 1)]
        for v in (x, y, z):
            h = self.holes[v]
            out.append(f"H{v} size={len(h)} : " + " | ".join(fmt(s) for s in h))
        out += [f"agreement corner {c} radius {r} {'pass' if ok else 'fail'}" for c, r, ok in self.agreement_checks]
        return out


def _common_prefix(g, A, B, corner, gp2):
    """Longest common prefix of slice lists A, B whose slices lie strictly inside
    the Gromov ball at ``corner`` (2 d(corner, v) < gp2)."""
    out = []
    for s, t in zip(A, B):
        if s != t or any(2 * g.dist(corner, v) >= gp2 for v in s):
            break
        out.append(s)
    return out


def _agreement_radius(g, A, B, a):
    """Largest R with A ∩ B_R(a) = B ∩ B_R(a); -1 if they differ already at a."""
    top = max(g.dist(a, v) for v in A | B)
    R = -1
    for r in range(top + 1):
        if _ball_part(g, A, a, r) != _ball_part(g, B, a, r):
            break
        R = r
    return R


def _slice_agreement(g, a, cab, cac, slices_ab, slices_ac, thr):
    R = _agreement_radius(g, cab.members, cac.members, a)
    inner = R - 2 * thr
    targets = {s.members for s in slices_ac}
    ok = all(
        s.members in targets
        for s in slices_ab
        if all(g.dist(a, v) <= inner for v in s.members)
    )
    return a, R, ok


def triangle_decomposition(
    x: str,
    y: str,
    z: str,
    l: int,  # noqa: E741
    fam: PreferredGeodesicFamily,
    profile: ConstantProfile,
    psi_n: int,
) -> TriangleDecomposition:
    """Shared slice prefixes and holes of the three cylinders of a triangle.

    S is the common prefix of Cyl(x,y) and Cyl(x,z) read from x, T that of
    Cyl(y,x) and Cyl(y,z) read from y, V that of Cyl(z,x) and Cyl(z,y) read
    from z. A shared slice must lie strictly inside the Gromov ball of its
    corner, which keeps S, T, V pairwise disjoint. Each hole is what is left
    in the middle of a row.
    """
    g = fam.graph
    bound = 10 * psi_n
    if x == y == z:
        return TriangleDecomposition((x, y, z), l, [], [], [], {x: [], y: [], z: []}, bound)
    thr = profile.neighbor_threshold
    cyl = {
        (u, v): cylinder(u, v, l, fam, profile)
        for u, v in ((x, y), (x, z), (y, z), (y, x), (z, x), (z, y))
    }
    sl = {k: slice_partition(g, c, profile) for k, c in cyl.items()}
    sets = {k: [s.members for s in v] for k, v in sl.items()}
    xy, xz, yz = sets[(x, y)], sets[(x, z)], sets[(y, z)]
    dxy, dxz, dyz = g.dist(x, y), g.dist(x, z), g.dist(y, z)
    S = _common_prefix(g, xy, xz, x, dxy + dxz - dyz)
    T = _common_prefix(g, xy[::-1], yz, y, dxy + dyz - dxz)
    V = _common_prefix(g, xz[::-1], yz[::-1], z, dxz + dyz - dxy)
    k, m, p = len(S), len(T), len(V)
    holes = {
        z: xy[k : len(xy) - m],
        y: xz[k : len(xz) - p],
        x: yz[m : len(yz) - p],
    }
    checks = [
        _slice_agreement(g, x, cyl[(x, y)], cyl[(x, z)], sl[(x, y)], sl[(x, z)], thr),
        _slice_agreement(g, y, cyl[(y, x)], cyl[(y, z)], sl[(y, x)], sl[(y, z)], thr),
        _slice_agreement(g, z, cyl[(z, x)], cyl[(z, y)], sl[(z, x)], sl[(z, y)], thr),
    ]
    out = TriangleDecomposition((x, y, z), l, S, T, V, holes, bound, checks)
    big = {v: len(h) for v, h in holes.items() if len(h) > bound}
    if big:
        raise InvariantError(f"holes exceed 10*psi(n)={bound}: {big}", obj=out)
    return out
