"""Coarse piecewise preferred geodesics (cptg), l-cylinders and L-channels.

A cptg here is a vertex path from x to y with a subdivision
``c1 <= d1 <= c2 <= ... <= dn`` of its index range such that

* the path is a ν-local (λ/2)-quasi-geodesic and a λ-quasi-geodesic,
* each piece ``[ci, di]`` is a μ-local preferred geodesic (pieces no longer
  than μ must be preferred geodesics outright),
* interior pieces (2 <= i <= n-1) have length >= l,
* bridges ``[di, c(i+1)]`` have length <= ε,
* the whole path lies within 2ε of one preferred geodesic [x, y].

The global λ-quasi-geodesic clause is what makes the search finite: such a
path is simple and has length at most λ·d(x, y).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .constants import ConstantProfile
from .errors import Budget, BudgetError, InputError, InvariantError
from .graph import PreferredGeodesicFamily, SimpleGraph


def _lambda_ratio(lam) -> tuple[int, int]:
    q = Fraction(lam)
    if q <= 0:
        raise InputError(f"quasi-geodesic constant must be positive, got {lam}")
    return q.numerator, q.denominator


def is_quasi_geodesic(g: SimpleGraph, p, lam) -> bool:
    """True iff |i-j|/λ <= d(p_i, p_j) <= λ|i-j| for all index pairs."""
    return _quasi_pairs(g, p, lam, window=None)


def is_local_quasi_geodesic(g: SimpleGraph, p, nu: int, lam) -> bool:
    """True iff every subpath of length at most ν is a λ-quasi-geodesic."""
    if nu < 0:
        raise InputError("nu must be >= 0")
    return _quasi_pairs(g, p, lam, window=nu)


def _quasi_pairs(g, p, lam, window):
    num, den = _lambda_ratio(lam)
    if not g.is_path(p):
        return False
    D = g._dist
    ix = [g.index[v] for v in p]
    n = len(ix)
    for j in range(n):
        lo = 0 if window is None else max(0, j - window)
        row = D[ix[j]]
        for i in range(lo, j):
            d = row[ix[i]]
            if (j - i) * den > num * d or d * den > num * (j - i):
                return False
    return True


@dataclass(frozen=True)
class Subdivision:
    breakpoints: tuple[int, ...]

    def __post_init__(self):
        bp = tuple(int(b) for b in self.breakpoints)
        object.__setattr__(self, "breakpoints", bp)
        if len(bp) < 2 or len(bp) % 2:
            raise InputError(f"subdivision needs an even number >= 2 of breakpoints, got {bp}")
        if any(bp[i] > bp[i + 1] for i in range(len(bp) - 1)):
            raise InputError(f"subdivision breakpoints must be nondecreasing: {bp}")

    @classmethod
    def trivial(cls, length: int) -> "Subdivision":
        return cls((0, length))

    @property
    def pieces(self) -> list[tuple[int, int]]:
        bp = self.breakpoints
        return [(bp[i], bp[i + 1]) for i in range(0, len(bp), 2)]

    @property
    def bridges(self) -> list[tuple[int, int]]:
        bp = self.breakpoints
        return [(bp[i], bp[i + 1]) for i in range(1, len(bp) - 1, 2)]


@dataclass(frozen=True)
class CoarsePiecewiseGeodesic:
    path: tuple[str, ...]
    subdivision: Subdivision
    l: int  # noqa: E741

    def __post_init__(self):
        object.__setattr__(self, "path", tuple(self.path))
        bp = self.subdivision.breakpoints
        if bp[0] != 0 or bp[-1] != len(self.path) - 1:
            raise InputError(
                f"subdivision {bp} does not span the path of length {len(self.path) - 1}"
            )

    @property
    def length(self) -> int:
        return len(self.path) - 1

    def describe(self) -> str:
        return f"{' '.join(self.path)} | subdivision: {' '.join(map(str, self.subdivision.breakpoints))}"


@dataclass
class ValidationReport:
    clauses: dict[str, bool] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.clauses.values())

    @property
    def failures(self) -> list[str]:
        return [k for k, v in self.clauses.items() if not v]

    def lines(self):
        return [f"{k} {'pass' if v else 'fail'}" for k, v in self.clauses.items()] + [
            f"note {n}" for n in self.notes
        ]


def _piece_preferred(fam: PreferredGeodesicFamily, p, c: int, d: int, mu: int) -> bool:
    if d - c <= mu:
        return fam.contains(p[c : d + 1])
    return all(fam.contains(p[i : i + mu + 1]) for i in range(c, d - mu + 1))


def _within_of_preferred(fam, g, p, radius) -> tuple[str, ...] | None:
    """First preferred geodesic [p0, pN] whose radius-neighborhood contains p."""
    D = g._dist
    ix = [g.index[v] for v in p]
    for gamma in fam.paths(p[0], p[-1]):
        gi = [g.index[v] for v in gamma]
        if all(min(D[u][w] for w in gi) <= radius for u in ix):
            return gamma
    return None


def validate_cptg(
    c: CoarsePiecewiseGeodesic, fam: PreferredGeodesicFamily, profile: ConstantProfile
) -> ValidationReport:
    g = fam.graph
    p = c.path
    rep = ValidationReport()
    walk = g.is_path(p)
    rep.clauses["walk"] = walk
    if not walk:
        rep.notes.append("consecutive vertices are not adjacent")
        return rep
    lam = profile.lam
    rep.clauses["local_quasi_geodesic"] = is_local_quasi_geodesic(g, p, profile.nu, Fraction(lam, 2))
    rep.clauses["quasi_geodesic"] = is_quasi_geodesic(g, p, lam)
    pieces = c.subdivision.pieces
    bad = [(a, b) for a, b in pieces if not _piece_preferred(fam, p, a, b, profile.mu)]
    rep.clauses["pieces_preferred"] = not bad
    if bad:
        rep.notes.append(f"pieces not mu-local preferred: {bad}")
    short = [(a, b) for k, (a, b) in enumerate(pieces) if 0 < k < len(pieces) - 1 and b - a < c.l]
    rep.clauses["interior_length"] = not short
    if short:
        rep.notes.append(f"interior pieces shorter than l={c.l}: {short}")
    long_b = [(a, b) for a, b in c.subdivision.bridges if b - a > profile.epsilon]
    rep.clauses["bridge_length"] = not long_b
    if long_b:
        rep.notes.append(f"bridges longer than epsilon={profile.epsilon}: {long_b}")
    rep.clauses["neighborhood"] = _within_of_preferred(fam, g, p, 2 * profile.epsilon) is not None
    return rep


@dataclass(frozen=True)
class LChannel:
    core: tuple[str, ...]
    ambient: tuple[str, ...]
    anchor: tuple[str, str]


@dataclass(frozen=True)
class CylinderSet:
    x: str
    y: str
    l: int  # noqa: E741
    members: frozenset
    witnesses: dict = field(compare=False, hash=False, repr=False)

    def sorted_members(self, g: SimpleGraph) -> list[str]:
        return sorted(self.members, key=g.key)

    def lines(self, g: SimpleGraph) -> list[str]:
        out = [f"cyl {self.x} {self.y} l={self.l}"]
        ms = self.sorted_members(g)
        out += [f"m {v}" for v in ms]
        out += [f"witness {v} : {self.witnesses[v].describe()}" for v in ms if v in self.witnesses]
        return out


def _cache(fam):
    return fam.__dict__.setdefault("_cylinder_cache", {})


def cylinder(
    x: str,
    y: str,
    l: int,  # noqa: E741
    fam: PreferredGeodesicFamily,
    profile: ConstantProfile,
    budget: int | None = None,
) -> CylinderSet:
    """Exact l-cylinder of (x, y) by bounded search.

    Candidate paths are grown depth-first inside the closed 2ε-neighborhood
    of the preferred geodesics [x, y], pruned by the two quasi-geodesic
    clauses; for each complete path a dynamic program over the subdivision
    decides which positions lie deep enough on a usable piece.
    """
    g = fam.graph
    g.check_vertex(x)
    g.check_vertex(y)
    if profile.mu <= 0 or l <= 0:
        raise InputError(f"degenerate profile for cylinders (mu={profile.mu}, l={l})")
    key = (x, y, l, profile.lam, profile.epsilon, profile.mu, profile.nu)
    cache = _cache(fam)
    if key in cache:
        return cache[key]
    if x == y:
        w = CoarsePiecewiseGeodesic((x,), Subdivision.trivial(0), l)
        out = CylinderSet(x, y, l, frozenset([x]), {x: w})
        cache[key] = out
        return out

    D = g._dist
    idx = g.index
    eps = profile.epsilon
    num, den = _lambda_ratio(profile.lam)
    hnum, hden = _lambda_ratio(Fraction(profile.lam, 2))
    nu = profile.nu
    ix_y = idx[y]
    max_len = (num * D[idx[x]][ix_y]) // den

    geodesics = fam.paths(x, y)
    gamma_ix = [[idx[v] for v in gm] for gm in geodesics]
    near = [[min(D[u][w] for w in gi) for u in range(len(g))] for gi in gamma_ix]
    region = {u for u in range(len(g)) if any(nr[u] <= 2 * eps for nr in near)}

    steps = Budget(budget or profile.budget, f"cylinder({x},{y})")
    members: dict[str, CoarsePiecewiseGeodesic] = {}
    path = [idx[x]]
    on_path = {idx[x]}

    def admissible(w):
        k = len(path)
        row = D[w]
        for i in range(k - 1, -1, -1):
            gap = k - i
            d = row[path[i]]
            if gap * den > num * d or d * den > num * gap:
                return False
            if gap <= nu and (gap * hden > hnum * d or d * hden > hnum * gap):
                return False
        return True

    def dfs():
        steps.tick()
        last = path[-1]
        if last == ix_y:
            _harvest(tuple(g.vertices[i] for i in path))
            return
        if len(path) - 1 >= max_len:
            return
        for w in g._nbr_idx[last]:
            if w in on_path or w not in region:
                continue
            # remaining distance must fit in the length cap
            if len(path) + D[w][ix_y] > max_len:
                continue
            if not admissible(w):
                continue
            path.append(w)
            on_path.add(w)
            dfs()
            on_path.discard(w)
            path.pop()

    def _harvest(p):
        pi = [idx[v] for v in p]
        if not any(all(nr[u] <= 2 * eps for u in pi) for nr in near):
            return
        for t, piece, sub in _member_positions(fam, g, p, profile, l):
            v = p[t]
            if v not in members:
                members[v] = CoarsePiecewiseGeodesic(p, sub, l)

    try:
        dfs()
    except BudgetError as exc:
        raise BudgetError(
            f"cylinder({x},{y}) budget exhausted; {len(members)} members certified",
            partial=frozenset(members),
        ) from exc
    out = CylinderSet(x, y, l, frozenset(members), members)
    cache[key] = out
    return out


def _member_positions(fam, g, p, profile, l):  # noqa: E741
    """Yield (t, piece, subdivision) for every cylinder position of path ``p``.

    ``piece`` is the usable piece containing t; ``subdivision`` is one valid
    subdivision having that piece.
    """
    N = len(p) - 1
    eps = profile.epsilon
    mu = profile.mu
    seg = [[False] * (N + 1) for _ in range(N + 1)]
    for c in range(N + 1):
        for d in range(c, N + 1):
            seg[c][d] = _piece_preferred(fam, p, c, d, mu)

    # start_from[c]: (c', d') such that a valid prefix ends with piece [c', d'] then a bridge to c
    start_ok = [False] * (N + 1)
    start_from: list[tuple[int, int] | None] = [None] * (N + 1)
    start_ok[0] = True
    for c in range(1, N + 1):
        for d in range(max(0, c - eps), c + 1):
            for c2 in range(0, d + 1):
                if c2 == c:
                    continue
                if start_ok[c2] and seg[c2][d] and (c2 == 0 or d - c2 >= l):
                    start_ok[c] = True
                    start_from[c] = (c2, d)
                    break
            if start_ok[c]:
                break
    end_ok = [False] * (N + 1)
    end_to: list[tuple[int, int] | None] = [None] * (N + 1)
    end_ok[N] = True
    for d in range(N - 1, -1, -1):
        for c in range(d, min(N, d + eps) + 1):
            for d2 in range(N, c - 1, -1):
                if d2 == d:
                    continue
                if end_ok[d2] and seg[c][d2] and (d2 == N or d2 - c >= l):
                    end_ok[d] = True
                    end_to[d] = (c, d2)
                    break
            if end_ok[d]:
                break

    def prefix(c):
        out = []
        while c != 0:
            c2, d = start_from[c]
            out = [c2, d] + out
            c = c2
        return out

    def suffix(d):
        out = []
        while d != N:
            c, d2 = end_to[d]
            out += [c, d2]
            d = d2
        return out

    D = g._dist
    idx = g.index
    seen = set()
    for c in range(N + 1):
        if not start_ok[c]:
            continue
        for d in range(c, N + 1):
            if not (seg[c][d] and end_ok[d] and (c == 0 or d == N or d - c >= l)):
                continue
            sub = None
            for t in range(c, d + 1):
                if t in seen:
                    continue
                v = idx[p[t]]
                if c != 0 and D[idx[p[c]]][v] < l:
                    continue
                if d != N and D[idx[p[d]]][v] < l:
                    continue
                seen.add(t)
                if sub is None:
                    sub = Subdivision(tuple(prefix(c) + [c, d] + suffix(d)))
                yield t, (c, d), sub


def channels(
    a: str,
    b: str,
    L: int,
    fam: PreferredGeodesicFamily,
    profile: ConstantProfile,
    budget: int | None = None,
) -> tuple[LChannel, ...]:
    """All L-channels of (a, b), keyed by their core, in core order."""
    g = fam.graph
    g.check_vertex(a)
    g.check_vertex(b)
    if L < 1:
        raise InputError("L must be >= 1")
    if g.dist(a, b) > 3 * L:
        raise InputError(f"channels need d(a,b) <= 3L, got d={g.dist(a, b)} and L={L}")
    steps = Budget(budget or profile.budget, f"channels({a},{b})")
    r = 2 * profile.epsilon
    found: dict[tuple, tuple] = {}
    for a2 in g.ball(a, r):
        for b2 in g.ball(b, r):
            if g.dist(a2, b2) != 3 * L:
                continue
            for amb in fam.paths(a2, b2):
                steps.tick()
                core = amb[L : 2 * L + 1]
                prev = found.get(core)
                if prev is None or g.path_key(amb) < g.path_key(prev):
                    found[core] = amb
    return tuple(
        LChannel(core, found[core], (a, b)) for core in sorted(found, key=g.path_key)
    )


@dataclass(frozen=True)
class KappaMeasurement:
    L: int
    value: int
    method: str  # "exhaustive" or "sampled"
    pairs: int
    argmax: tuple[str, str] | None


def measure_kappa(
    fam: PreferredGeodesicFamily,
    profile: ConstantProfile,
    L: int,
    seed: int = 0,
    sample: int = 200,
    exhaustive_limit: int = 40,
) -> KappaMeasurement:
    """Largest number of L-channels over pairs at distance <= 3L.

    Exhaustive over all pairs on graphs up to ``exhaustive_limit`` vertices,
    otherwise over a seeded sample of ``sample`` pairs.
    """
    g = fam.graph
    pairs = [(a, b) for a in g.vertices for b in g.vertices if g.dist(a, b) <= 3 * L]
    method = "exhaustive"
    if len(g) > exhaustive_limit:
        rng = random.Random(seed)
        pairs = rng.sample(pairs, min(sample, len(pairs)))
        method = "sampled"
    best, arg = 0, None
    for a, b in pairs:
        k = len(channels(a, b, L, fam, profile))
        if k > best:
            best, arg = k, (a, b)
    return KappaMeasurement(L, best, method, len(pairs), arg)


def measure_bounds(fam: PreferredGeodesicFamily, profile: ConstantProfile, n: int, seed: int = 0):
    """κ(μ), K0(μ), K1 measured on the family's graph, packed with ψ(n).

    κ is floored at 1: a measured count of zero channels still needs a
    positive bound for the ψ-based candidate list to be nonempty.
    """
    from .constants import MeasuredBounds
    from .graph import verify_family_axioms

    kap = measure_kappa(fam, profile, profile.mu, seed=seed)
    ax = verify_family_axioms(fam, fam.graph, profile.mu, profile.epsilon)
    return MeasuredBounds.build(max(1, kap.value), n, profile.epsilon, ax.K0, ax.K1, ax.k1)


# ------------------------------------------------------------------ rerouting


def _closest_on(g, target, path, lo=0, hi=None):
    """Index in ``path[lo:hi+1]`` of the first vertex closest to ``target``."""
    hi = len(path) - 1 if hi is None else hi
    best = min(range(lo, hi + 1), key=lambda i: (g.dist(path[i], target), i))
    return best


def reroute_interior(
    c: CoarsePiecewiseGeodesic,
    t: int,
    fam: PreferredGeodesicFamily,
    profile: ConstantProfile,
) -> CoarsePiecewiseGeodesic:
    """Reroute ``c`` onto a preferred geodesic [f(a), f(b)] from a point of the piece holding t.

    With s = f(t), s'' the first point of the preferred geodesic closest to s
    and s' = f(t') the first point of the piece closest to s'', the result is
    f[a, t'] * [s', s''] * [s'', f(b)].
    """
    g = fam.graph
    p = c.path
    if not 0 <= t < len(p):
        raise InputError(f"index {t} outside the path")
    piece = next(((a, b) for a, b in c.subdivision.pieces if a <= t <= b), None)
    if piece is None:
        raise InputError(f"index {t} lies on a bridge, not on a piece")
    ci, di = piece
    need = c.l + 2 * profile.epsilon
    if t - ci < need:
        raise InputError(
            f"length of f[c,t] is {t - ci}, needs at least l + 2*epsilon = {need}"
        )
    gamma = fam.first(p[0], p[-1])
    j2 = _closest_on(g, p[t], gamma)
    s2 = gamma[j2]
    t1 = _closest_on(g, s2, p, ci, di)
    bridge = fam.first(p[t1], s2)
    new = tuple(p[: t1 + 1]) + tuple(bridge[1:]) + tuple(gamma[j2 + 1 :])
    bp = list(c.subdivision.breakpoints)
    k = c.subdivision.pieces.index(piece)
    head = bp[: 2 * k + 1]
    tail = [t1, t1 + len(bridge) - 1, len(new) - 1]
    return CoarsePiecewiseGeodesic(new, Subdivision(tuple(head + tail)), c.l)


def reroute_to_new_endpoint(
    c: CoarsePiecewiseGeodesic,
    z: str,
    fam: PreferredGeodesicFamily,
    profile: ConstantProfile,
) -> CoarsePiecewiseGeodesic:
    """A cptg from f(a) to z agreeing with ``c`` up to the start of its last piece.

    A preferred geodesic h = [f(a), z] passing within δ of f(b) is required.
    The new path leaves the last piece at the first index t' for which
    f[a, t'] * [f(t'), h(j)] * h[j, z] (h(j) closest to f(t')) is a valid cptg.
    """
    g = fam.graph
    g.check_vertex(z)
    p = c.path
    N = len(p) - 1
    cn = c.subdivision.breakpoints[-2]
    need = c.l + 2 * profile.mu
    if N - cn < need:
        raise InputError(f"last piece has length {N - cn}, needs at least l + 2*mu = {need}")
    h = next(
        (hh for hh in fam.paths(p[0], z) if min(g.dist(p[N], v) for v in hh) <= profile.delta),
        None,
    )
    if h is None:
        raise InputError(
            f"no preferred geodesic [{p[0]},{z}] passes within delta={profile.delta} of {p[N]}"
        )
    head = list(c.subdivision.breakpoints[:-1])
    pieces = len(c.subdivision.pieces)
    for t1 in range(cn, N + 1):
        if pieces > 1 and t1 - cn < c.l:
            continue
        j = _closest_on(g, p[t1], h)
        bridge = fam.first(p[t1], h[j])
        new = tuple(p[: t1 + 1]) + tuple(bridge[1:]) + tuple(h[j + 1 :])
        if len(set(new)) != len(new):
            continue
        cand = CoarsePiecewiseGeodesic(
            new, Subdivision(tuple(head + [t1, t1 + len(bridge) - 1, len(new) - 1])), c.l
        )
        if validate_cptg(cand, fam, profile).ok:
            return cand
    raise InvariantError(f"no rerouting of the cptg to {z} validates", obj=c)
