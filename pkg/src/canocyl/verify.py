"""Invariant suite behind the ``verify`` command.

Every check is deterministic given the seed; the report is a list of
``check <name> pass|fail <detail>`` lines.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .constants import experiment_profile, l_candidates, psi, theory_profile
from .cylinders import cylinder, validate_cptg
from .errors import CanocylError
from .fixtures import cycle_graph, grid_graph, path_graph, random_tree, reflection, tripod
from .graph import PreferredGeodesicFamily, SimpleGraph, automorphisms, slim_delta
from .slicing import (
    _diff_sets,
    consecutive_slice_gap,
    neighbor_sets,
    slice_diameter,
    slice_partition,
    triangle_decomposition,
)


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        return f"check {self.name} {'pass' if self.ok else 'fail'}" + (f" {self.detail}" if self.detail else "")


def _profile_for(g):
    d = slim_delta(g)
    return experiment_profile(delta=d, neighbor_threshold=max(1, d))


def graph_checks(name: str, g: SimpleGraph, rng: random.Random, pairs: int = 6) -> list[Check]:
    out = []
    fam = PreferredGeodesicFamily(g)
    pr = _profile_for(g)
    verts = g.vertices
    chosen = sorted({tuple(rng.sample(verts, 2)) for _ in range(pairs)}, key=lambda p: (g.key(p[0]), g.key(p[1])))
    cocycle = sym = witnesses = bounds = True
    worst = ""
    for a, b in chosen:
        c = cylinder(a, b, pr.l, fam, pr)
        if cylinder(b, a, pr.l, fam, pr).members != c.members:
            sym = False
            worst = worst or f"symmetry ({a},{b})"
        for w in c.witnesses.values():
            if not validate_cptg(w, fam, pr).ok:
                witnesses = False
                worst = worst or f"witness ({a},{b})"
        ns = {v: neighbor_sets(g, a, v, c, pr) for v in c.members}
        ms = sorted(c.members, key=g.key)
        for x in ms:
            for y in ms:
                dxy = _diff_sets(ns[x], ns[y])
                for z in ms:
                    if _diff_sets(ns[x], ns[z]) != dxy + _diff_sets(ns[y], ns[z]):
                        cocycle = False
                        worst = worst or f"cocycle ({a},{b})"
        sl = slice_partition(g, c, pr)
        if any(slice_diameter(g, s) > pr.slice_diameter_bound for s in sl):
            bounds = False
            worst = worst or f"slice diameter ({a},{b})"
        if len(sl) > 1 and consecutive_slice_gap(g, sl) > pr.slice_gap_bound:
            bounds = False
            worst = worst or f"slice gap ({a},{b})"
    out.append(Check(f"{name}.cylinder_symmetry", sym, f"pairs={len(chosen)}"))
    out.append(Check(f"{name}.witnesses_valid", witnesses))
    out.append(Check(f"{name}.diff_cocycle", cocycle))
    out.append(Check(f"{name}.slice_bounds", bounds, worst if not bounds else ""))
    return out


def equivariance_checks(name: str, g: SimpleGraph, limit: int = 12) -> list[Check]:
    fam = PreferredGeodesicFamily(g)
    pr = _profile_for(g)
    ok = True
    auts = automorphisms(g)[:limit]
    verts = g.vertices
    for s in auts:
        for a in verts[: min(4, len(verts))]:
            for b in verts:
                c = cylinder(a, b, pr.l, fam, pr)
                if s.apply_set(c.members) != cylinder(s(a), s(b), pr.l, fam, pr).members:
                    ok = False
    return [Check(f"{name}.equivariance", ok, f"automorphisms={len(auts)}")]


def formula_checks(rng: random.Random) -> list[Check]:
    ok = True
    for _ in range(10):
        d, e = rng.randint(0, 5), rng.randint(1, 5)
        p = theory_profile(d, e)
        lam = 1000 * d
        ok &= p.lam == lam and p.mu == (100 * e + lam**2) * 40 * lam
        ok &= p.nu == 40 * lam * (e + 100 * lam * d) and p.neighbor_threshold == 100 * d
        n, k = rng.randint(0, 50), rng.randint(1, 5)
        ok &= psi(n, k, e) == 24 * (n + 1) * k * (2 * e + 1) * e
        q = experiment_profile(epsilon=e, mu=rng.randint(1, 9))
        pn = psi(n, k, e)
        ok &= l_candidates(q, pn) == [10 * q.mu + 2 * i * e for i in range(1, pn // (2 * e) + 1)]
    return [Check("constants.formulas", bool(ok))]


def tripod_check() -> list[Check]:
    t = tripod(5)
    fam = PreferredGeodesicFamily(t)
    pr = experiment_profile(neighbor_threshold=1)
    d = triangle_decomposition("l0_5", "l1_5", "l2_5", 2, fam, pr, 10)
    legs_ok = all(
        [set(s) for s in seq] == [{f"l{i}_{k}"} for k in range(5, 0, -1)]
        for i, seq in enumerate((d.shared_S, d.shared_T, d.shared_V))
    )
    holes_ok = all(h == [frozenset({"o"})] for h in d.holes.values())
    return [Check("tripod.decomposition", legs_ok and holes_ok)]


def tracks_check() -> list[Check]:
    from .tracks import parse_presentation, run_tracks, trivial_action

    g = cycle_graph(6)
    pres = parse_presentation("gen a b c\nrel a b c^-1\nrel b a c^-1\n")
    res = run_tracks(pres, trivial_action(g, pres, "v0"), PreferredGeodesicFamily(g), experiment_profile(delta=1))
    shape = len(res.Xprime.white) == 1 and len(res.Xprime.black) == 1
    h1 = res.report.h1_input == res.report.h1_output
    bounds = all(ok for _, _, ok in res.bound_checks().values())
    return [
        Check("tracks.torus_xprime", shape, f"white={len(res.Xprime.white)} black={len(res.Xprime.black)}"),
        Check("tracks.torus_h1", h1, f"dim={res.report.h1_output}"),
        Check("tracks.torus_bounds", bounds),
    ]


def run_verify(seed: int = 0, extra: SimpleGraph | None = None) -> list[Check]:
    rng = random.Random(seed)
    fixtures = [
        ("path7", path_graph(7)),
        ("c6", cycle_graph(6)),
        ("c9", cycle_graph(9)),
        ("grid4", grid_graph(4, 4)),
        ("tree", random_tree(15, seed)),
        ("tripod", tripod(3)),
    ]
    if extra is not None:
        fixtures.append(("input", extra))
    out: list[Check] = []
    for name, g in fixtures:
        try:
            out += graph_checks(name, g, rng)
        except CanocylError as exc:
            out.append(Check(f"{name}.graph_checks", False, str(exc)))
    deltas = {"c6": 1, "grid4": 3, "path7": 0}
    for name, g in fixtures:
        if name in deltas:
            d = slim_delta(g)
            out.append(Check(f"{name}.slim_delta", d == deltas[name], f"value={d}"))
    out += equivariance_checks("c6", cycle_graph(6))
    p5 = path_graph(5)
    fam = PreferredGeodesicFamily(p5)
    pr = experiment_profile(neighbor_threshold=0)
    s = reflection(5)
    ok = s.apply_set(cylinder("v0", "v3", 2, fam, pr).members) == cylinder("v4", "v1", 2, fam, pr).members
    out.append(Check("path5.reflection", ok))
    out += formula_checks(rng)
    out += tripod_check()
    out += tracks_check()
    return out
