"""The end-to-end track pipeline and its text report, including generator displacements."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..constants import ConstantProfile, MeasuredBounds, d0_bound, psi
from ..errors import Budget, BudgetError, InputError, InvariantError
from ..graph import PreferredGeodesicFamily
from ..slicing import GoodL, good_l_search
from .assembly import (
    Assembly,
    DCReport,
    GraphOfGroups,
    Presentation,
    _key,
    assemble,
    bfs_tree,
    build_presentation,
    dc_reports,
    graph_of_groups,
    midpoint_graph,
    prune,
    tree_path_word,
)
from .complex import TrackGraph, VanKampen2Complex, build_complex, build_tracks, mark_edges
from .presentation import (
    GroupAction,
    TriangularPresentation,
    Word,
    h1_mod2,
    inverse,
    reduce_word,
    word_text,
)


@dataclass
class BlueCheck:
    word: Word
    orbit: tuple[str, ...]
    finite: bool
    diameter: int
    bound: int

    @property
    def confined(self) -> bool:
        return self.finite and self.diameter <= self.bound

    def line(self) -> str:
        verdict = "budget-exhausted" if not self.finite else ("YES" if self.confined else "NO")
        return (
            f"blue {word_text(self.word)} orbit {len(self.orbit)} diameter {self.diameter} "
            f"bound {self.bound} confined {verdict}"
        )


def blue_triviality_check(act: GroupAction, word: Word, bound: int, budget: int = 100_000) -> BlueCheck:
    """Orbit of the basepoint under the cyclic group generated by φ(word).

    ``bound`` is the slice diameter bound the orbit should stay within. This
    is orbit evidence only; nothing is concluded about the group element.
    """
    g = act.graph
    a = act.element(word)
    p = act.basepoint
    orbit = [p]
    steps = Budget(budget, "blue orbit")
    v = a(p)
    try:
        while v != p:
            steps.tick()
            orbit.append(v)
            v = a(v)
    except BudgetError:
        return BlueCheck(tuple(word), tuple(orbit), False, -1, bound)
    diam = max(g.dist(u, w) for u in orbit for w in orbit)
    return BlueCheck(tuple(word), tuple(orbit), True, diam, bound)


@dataclass
class GeneratorEntry:
    name: str
    kind: str
    piece: tuple
    element: Word
    displacement: int
    bound: int

    @property
    def within(self) -> bool:
        return self.displacement <= self.bound


@dataclass
class GeneratorReport:
    entries: list[GeneratorEntry]
    relators: list[Word]
    d0: int
    stable_bound: int
    diam_xprime: int
    h1_input: int
    h1_output: int
    h1_blue_killed: int
    degenerate: bool = False

    @property
    def max_relator_length(self) -> int:
        return max((len(r) for r in self.relators), default=0)


@dataclass
class TracksResult:
    presentation: TriangularPresentation
    complex: VanKampen2Complex
    l: int  # noqa: E741
    goodl: GoodL | None
    tracks: TrackGraph
    assembly: Assembly
    output: Presentation
    X: GraphOfGroups
    Xprime: GraphOfGroups
    dc: list[DCReport]
    report: GeneratorReport
    blue_checks: list[BlueCheck]
    psi_T: int
    psi_n: int
    counts: dict = field(default_factory=dict)

    @property
    def N0(self) -> int:
        return self.tracks.red_edge_count

    def bound_checks(self) -> dict[str, tuple[int, int, bool]]:
        """name -> (measured, bound, ok)."""
        T = len(self.complex.triangles)
        n0 = self.N0
        out = {}

        def put(name, value, bound):
            out[name] = (value, bound, value <= bound)

        put("N0", n0, T * 30 * self.psi_T)
        put("dc_red_edges", sum(d.red_edges for d in self.dc), 2 * n0)
        put("xprime_white", len(self.Xprime.white), T)
        put("xprime_black", len(self.Xprime.black), 2 * n0)
        put("attaching_word", max((max(a[1], a[2]) for a in self.output.attaching), default=0), 2 * n0)
        nonsurj = 0
        kept = {e[0] for e in self.Xprime.edges}
        for d in self.dc:
            for fc, (_, kind) in zip(d.components, d.images):
                if fc in kept and kind != "surjective":
                    nonsurj += 1
        put("nonsurjective_black_edges", nonsurj, self.report.h1_input)
        red_at = [len(t.spokes) for t in self.tracks.triangles]
        put("red_per_triangle", max(red_at, default=0), 30 * self.psi_T)
        return out


def _phi_tilde(tg: TrackGraph, act: GroupAction):
    """Image in the model graph of the canonical lift of each node of Z."""
    p = act.basepoint
    cache = {}

    def mark_point(gen, k):
        return tg.marks[gen].points[k]

    def occ_point(t, i):
        bp = t.points[i]
        tri = t.triangle
        if bp.kind == "corner":
            return act.element(tri.corners[bp.side])(p)
        _, gen, k = tg.global_mark(t, i)
        return act.element(tri.side_base(bp.side))(mark_point(gen, k))

    by_index = {t.triangle.index: t for t in tg.triangles}

    def phi(node):
        if node in cache:
            return cache[node]
        kind = node[0]
        if kind == "O":
            v = p
        elif kind == "mark":
            v = mark_point(node[1], node[2])
        elif kind == "seg":
            gen, j = node[1], node[2]
            v = mark_point(gen, min(j, tg.marks[gen].count - 1))
        elif kind == "red":
            t = by_index[node[1]]
            v = occ_point(t, t.spokes[0])
        elif kind == "face":
            t = by_index[node[1]]
            cyc = t.faces[node[2]]
            first = next(u for u, _ in cyc if u != "R")
            v = occ_point(t, first)
        else:
            raise InvariantError(f"unknown node {node}")
        cache[node] = v
        return v

    return phi


def displacement_report(
    res_asm: Assembly,
    out: Presentation,
    Xp: GraphOfGroups,
    act: GroupAction,
    profile: ConstantProfile,
    pres: TriangularPresentation,
    psi_T: int,
) -> GeneratorReport:
    g = act.graph
    tg = res_asm.tracks
    phi = _phi_tilde(tg, act)
    T = len(pres.relators)
    d0 = d0_bound(profile, T, psi_T)
    diam = Xp.diameter() if Xp.white else 0
    stable_bound = diam * (d0 + 10 * profile.neighbor_threshold)

    # global spanning tree of Z, rooted at the root of white piece 0
    tree_edges = []
    nodes = []
    for (parent, root), piece in zip(out.white_trees, res_asm.white):
        nodes += piece.nodes
        tree_edges += [v[0] for v in parent.values() if v is not None]
    for (parent, root), piece in zip(out.black_trees, res_asm.black):
        nodes += piece.nodes
        tree_edges += [v[0] for v in parent.values() if v is not None]
    for fc in res_asm.frontier:
        if ("X", fc.index) in out.x_tree:
            tree_edges.append(res_asm.vertical[out.frontier_root[fc.index]])
    base = out.white_trees[0][1]
    _, gparent = bfs_tree(nodes, tree_edges, base)

    def disp(elem, at):
        v = phi(at)
        return g.dist(v, act.element(elem)(v))

    entries = []
    for gd in out.generators:
        e = gd["edge"]
        kind = gd["kind"]
        if kind == "stable":
            elem = reduce_word(tree_path_word(gparent, e.tail) + inverse(tree_path_word(gparent, e.head)))
            entries.append(GeneratorEntry(gd["name"], kind, gd["piece"], elem, disp(elem, base), stable_bound))
            continue
        side, idx = gd["piece"]
        parent, root = (out.white_trees if side == "W" else out.black_trees)[idx]
        elem = reduce_word(
            tree_path_word(parent, e.tail) + tuple(e.h) + inverse(tree_path_word(parent, e.head))
        )
        entries.append(GeneratorEntry(gd["name"], kind, gd["piece"], elem, disp(elem, root), d0))

    names = [gd["name"] for gd in out.generators]
    blue = [(gd["name"], 1) for gd in out.generators if gd["kind"] == "blue"]
    return GeneratorReport(
        entries,
        out.relators,
        d0,
        stable_bound,
        diam,
        h1_mod2(pres.generators, pres.relators),
        h1_mod2(names, out.relators),
        h1_mod2(names, out.relators + [(b,) for b in blue]),
        degenerate=not Xp.white,
    )


def run_tracks(
    pres: TriangularPresentation,
    act: GroupAction,
    fam: PreferredGeodesicFamily,
    profile: ConstantProfile,
    l: int | None = None,  # noqa: E741
    kappa: int = 1,
    offset: int | None = None,
) -> TracksResult:
    """Full pipeline: complex, marks, tracks, pieces, X, X', presentation, displacement."""
    act.check(pres)
    g = fam.graph
    if act.graph is not g and act.graph != g:
        raise InputError("action and family live on different graphs")
    for name, a in act.images.items():
        if not fam.is_invariant_under(a):
            raise InputError(f"preferred family is not invariant under the image of {name}")
    cx = build_complex(pres)
    F = []
    for name in pres.generators:
        a = act.images[name]
        if a not in F:
            F.append(a)
    n = (2 * len(F)) ** 3
    psi_n = psi(n, kappa, profile.epsilon)
    T = len(cx.triangles)
    psi_T = psi(T, kappa, profile.epsilon)
    goodl = None
    if l is None:
        bounds = MeasuredBounds.build(kappa, n, profile.epsilon)
        goodl = good_l_search(F, act.basepoint, fam, profile, bounds, offset=offset)
        if not goodl.found:
            raise InvariantError("no good l among the candidates", obj=goodl)
        l = goodl.l  # noqa: E741
    marks = mark_edges(cx, act, l, fam, profile)
    tg = build_tracks(cx, marks, act, l, fam, profile, psi_n)
    asm = assemble(tg)
    out = build_presentation(asm)
    X = graph_of_groups(asm, out)
    Xp = prune(X)
    dc = dc_reports(asm, out)
    for b in range(len(asm.black)):
        midpoint_graph(asm, b)
    rep = displacement_report(asm, out, Xp, act, profile, pres, psi_T)
    blue_checks = [
        blue_triviality_check(act, e.element, profile.slice_diameter_bound)
        for e in rep.entries
        if e.kind == "blue"
    ]
    if rep.h1_input != rep.h1_output:
        raise InvariantError(
            f"emitted presentation has H1 dimension {rep.h1_output}, input has {rep.h1_input}"
        )
    return TracksResult(
        pres, cx, l, goodl, tg, asm, out, X, Xp, dc, rep, blue_checks, psi_T, psi_n
    )


def tracks_lines(res: TracksResult) -> list[str]:
    g = res.assembly.tracks
    out = ["MARKS", f"l {res.l}"]
    for name, me in g.marks.items():
        out.append(f"edge {name} marks {me.count} : {' '.join(me.points)}")
    out.append("TRACKS")
    out.append(f"blue_edges {g.blue_edge_count} red_edges {g.red_edge_count}")
    for t in g.triangles:
        out.append(
            f"triangle {t.triangle.index} ({word_text(t.triangle.relator)}) sides {' '.join(map(str, t.side_len))} "
            f"blue {len(t.chords)} red {len(t.spokes)} faces {len(t.faces)}"
        )
    out.append("COMPONENTS")
    for i, w in enumerate(res.assembly.white):
        colors = {e.color for e in w.edges}
        flag = "mixed" if "red" in colors else "blue"
        out.append(f"white W{i} nodes {len(w.nodes)} edges {len(w.edges)} b1 {w.b1} {flag}")
    for i, b in enumerate(res.assembly.black):
        out.append(f"black B{i} nodes {len(b.nodes)} edges {len(b.edges)} b1 {b.b1}")
    out.append("DC")
    for d in res.dc:
        imgs = " ".join(f"F{fc}:{r}/{d.h1_dim}:{k}" for fc, (r, k) in zip(d.components, d.images))
        out.append(f"dc B{d.black} components {len(d.components)} red_edges {d.red_edges} images {imgs}")
    out.append("X")
    out += res.X.lines("x")
    out.append("XPRIME")
    out += res.Xprime.lines("xprime")
    out.append("GENERATORS")
    rep = res.report
    for e in rep.entries:
        out.append(f"{e.name} {e.kind} {e.piece[0]}{e.piece[1]} element {word_text(e.element)}")
    out += [c.line() for c in res.blue_checks]
    out.append("RELATORS")
    out += [f"rel {word_text(r)}" for r in rep.relators]
    out.append(
        f"h1_mod2 input {rep.h1_input} output {rep.h1_output} blue_killed {rep.h1_blue_killed}"
    )
    out.append("DISPLACEMENT")
    out.append(f"D0 {rep.d0} diam_xprime {rep.diam_xprime} stable_bound {rep.stable_bound}")
    for e in rep.entries:
        out.append(f"{e.name} displacement {e.displacement} bound {e.bound} {'ok' if e.within else 'over'}")
    out.append(
        f"counts generators {len(rep.entries)} relators {len(rep.relators)} "
        f"max_relator_length {rep.max_relator_length}"
    )
    for name, (v, b, ok) in res.bound_checks().items():
        out.append(f"bound {name} {v} <= {b} {'pass' if ok else 'fail'}")
    if rep.degenerate:
        out.append("degenerate xprime empty")
    return out
