"""Independent brute-force routes used to cross-check the library.

Nothing here imports the search code under test: paths come from networkx,
clauses are re-stated from their definitions, subdivisions are enumerated
naively.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import networkx as nx


def nx_graph(g):
    G = nx.Graph()
    G.add_nodes_from(g.vertices)
    G.add_edges_from(tuple(e) for e in g.edges)
    return G


def dist_table(G):
    return dict(nx.all_pairs_shortest_path_length(G))


def quasi_ok(D, p, lam, window=None):
    lam = Fraction(lam)
    for i, j in combinations(range(len(p)), 2):
        if window is not None and j - i > window:
            continue
        d = D[p[i]][p[j]]
        if not (Fraction(j - i) / lam <= d <= lam * (j - i)):
            return False
    return True


def locally_geodesic(D, p, c, d, mu):
    """Every subpath of p[c..d] of length <= mu is a geodesic."""
    for i in range(c, d + 1):
        for j in range(i, min(d, i + mu) + 1):
            if D[p[i]][p[j]] != j - i:
                return False
    return True


def subdivisions(p, D, prof, l):  # noqa: E741
    """All valid breakpoint tuples of p, enumerated naively."""
    N = len(p) - 1
    eps, mu = prof.epsilon, prof.mu
    out = []

    def rec(c, acc):
        for d in range(c, N + 1):
            if not locally_geodesic(D, p, c, d, mu):
                continue
            if d == N:
                out.append(tuple(acc + [c, d]))
                continue
            if c > 0 and d - c < l:  # interior piece too short
                continue
            for c2 in range(d, min(N, d + eps) + 1):
                if c2 == c:
                    continue
                rec(c2, acc + [c, d])

    rec(0, [])
    return out


def brute_cylinder(g, x, y, l, prof):  # noqa: E741
    """Cyl_l(x, y) straight from the definition, for the all-geodesics family."""
    G = nx_graph(g)
    D = dist_table(G)
    if x == y:
        return {x}
    geos = list(nx.all_shortest_paths(G, x, y))
    lam = prof.lam
    cutoff = int(Fraction(lam) * D[x][y])
    members = set()
    for p in nx.all_simple_paths(G, x, y, cutoff=cutoff):
        if not quasi_ok(D, p, lam):
            continue
        if not quasi_ok(D, p, Fraction(lam, 2), window=prof.nu):
            continue
        if not any(all(min(D[u][w] for w in gm) <= 2 * prof.epsilon for u in p) for gm in geos):
            continue
        N = len(p) - 1
        for bp in subdivisions(p, D, prof, l):
            for i in range(0, len(bp), 2):
                c, d = bp[i], bp[i + 1]
                for t in range(c, d + 1):
                    v = p[t]
                    if c != 0 and D[p[c]][v] < l:
                        continue
                    if d != N and D[p[d]][v] < l:
                        continue
                    members.add(v)
    return members


def brute_diff(D, a, cyl, thr, x, y):
    def nl(u):
        return {v for v in cyl if D[a][u] > D[a][v] and D[u][v] > thr}

    def nr(u):
        return {v for v in cyl if D[a][u] < D[a][v] and D[u][v] > thr}

    return len(nl(x) - nl(y)) - len(nl(y) - nl(x)) + len(nr(y) - nr(x)) - len(nr(x) - nr(y))


def brute_slices(D, a, cyl, thr):
    """Slices as Diff-zero classes, ordered by pairwise comparison (bubble insertion)."""
    classes = []
    for v in sorted(cyl):
        for cl in classes:
            if brute_diff(D, a, cyl, thr, v, cl[0]) == 0:
                cl.append(v)
                break
        else:
            classes.append([v])
    ordered = []
    for cl in classes:
        k = 0
        while k < len(ordered) and brute_diff(D, a, cyl, thr, ordered[k][0], cl[0]) < 0:
            k += 1
        ordered.insert(k, cl)
    return [frozenset(c) for c in ordered]


def brute_slim_delta(g):
    """max over geodesic triangles and side points of the distance to the other two sides."""
    G = nx_graph(g)
    D = dist_table(G)
    V = list(g.vertices)
    geo = {(a, b): [tuple(p) for p in nx.all_shortest_paths(G, a, b)] for a in V for b in V}
    best = 0
    for a in V:
        for b in V:
            for c in V:
                for ab in geo[(a, b)]:
                    for w in ab:
                        # worst choice of the other two sides, each independently
                        far_bc = max(min(D[w][u] for u in s) for s in geo[(b, c)])
                        far_ac = max(min(D[w][u] for u in s) for s in geo[(a, c)])
                        best = max(best, min(far_bc, far_ac))
    return best
