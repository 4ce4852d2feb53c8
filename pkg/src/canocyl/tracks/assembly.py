"""Complement pieces, frontier graphs, the graph of groups X and its pruned form X'.

The complex is rebuilt as a graph of spaces Z:

* white pieces: the track components, as graphs on marks and red points;
* black pieces: for each complement component C a graph Γ_C whose nodes
  are faces, edge segments and the vertex O, joined by incidence; the disk
  at each face corner is collapsed by deleting one incidence edge;
* the frontier between a track component and a complement component: one
  vertex per (mark, adjacent segment) and per (red point, face), one edge per
  side of each track edge; each frontier edge spans a square in Z.

π1(Z) is the presented group. Choosing spanning trees inside every piece
and a tree T' of X, then eliminating the vertical edges of each frontier
component along its own tree, leaves exactly the vertex generators, the
stable letters, and one relator f_c(s) t f_C(s)^-1 t^-1 per frontier loop.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field

from ..errors import InputError, InvariantError
from .complex import TrackGraph, TriangleTracks
from .presentation import Word, inverse, rank_mod2, reduce_word

# --------------------------------------------------------------- small graphs


class UnionFind:
    def __init__(self):
        self.parent = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        self.add(x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if _key(rb) < _key(ra):
                ra, rb = rb, ra
            self.parent[rb] = ra

    def groups(self):
        out = defaultdict(list)
        for x in self.parent:
            out[self.find(x)].append(x)
        return sorted((sorted(v, key=_key) for v in out.values()), key=lambda v: _key(v[0]))


def _key(x):
    """Total order on the tuple ids used here (mixed str/int fields)."""
    if isinstance(x, tuple):
        return tuple(_key(y) for y in x)
    return (0, x, "") if isinstance(x, int) else (1, 0, str(x))


@dataclass
class Edge:
    id: tuple
    tail: tuple
    head: tuple
    color: str  # blue, red, black, vertical
    h: Word = ()  # lift label: head lift = tail lift translated by h


@dataclass
class PieceGraph:
    """A multigraph with oriented, labelled edges."""

    nodes: list
    edges: list[Edge]

    def adjacency(self):
        adj = defaultdict(list)
        for e in self.edges:
            adj[e.tail].append((e, 1, e.head))
            if e.head != e.tail:
                adj[e.head].append((e, -1, e.tail))
            else:
                adj[e.tail].append((e, -1, e.tail))
        return adj

    @property
    def b1(self) -> int:
        comps = UnionFind()
        for v in self.nodes:
            comps.add(v)
        for e in self.edges:
            comps.union(e.tail, e.head)
        return len(self.edges) - len(self.nodes) + len(comps.groups())


def bfs_tree(nodes, edges, root, prefer=None):
    """Spanning tree by BFS from root; ``prefer`` edges are tried first at each node.

    Returns (tree edge ids, parent map node -> (edge, sign, parent)).
    """
    adj = defaultdict(list)
    for e in edges:
        adj[e.tail].append((e, 1, e.head))
        adj[e.head].append((e, -1, e.tail))
    for v in adj:
        adj[v].sort(key=lambda t: (0 if prefer and prefer(t[0]) else 1, _key(t[0].id), t[1]))
    parent = {root: None}
    tree = set()
    dq = deque([root])
    while dq:
        u = dq.popleft()
        for e, s, w in adj[u]:
            if w not in parent:
                parent[w] = (e, s, u)
                tree.add(e.id)
                dq.append(w)
    if len(parent) != len(nodes):
        raise InputError("graph is not connected")
    return tree, parent


def tree_path_word(parent, node):
    """Product of h labels along the tree path root -> node."""
    out: list = []
    while parent[node] is not None:
        e, s, u = parent[node]
        out = list(e.h if s == 1 else inverse(e.h)) + out
        node = u
    return reduce_word(out)


def tree_edge_path(parent, node):
    """(edge, sign) steps along the tree path root -> node."""
    out = []
    while parent[node] is not None:
        e, s, u = parent[node]
        out.append((e, s))
        node = u
    return out[::-1]


# --------------------------------------------------------------- generators


@dataclass
class GeneratorChoice:
    tree: set
    blue: list[Edge]
    red: list[Edge]
    parent: dict
    root: tuple


def select_generators(piece: PieceGraph) -> GeneratorChoice:
    """Spanning tree = a maximal blue forest completed by red edges.

    Blue edges outside it give blue generators, red edges outside it give red
    generators; together they number b1 of the piece.
    """
    if not piece.nodes:
        raise InputError("empty graph")
    uf = UnionFind()
    for v in piece.nodes:
        uf.add(v)
    tree = set()
    for color in ("blue", "red"):
        for e in sorted((e for e in piece.edges if e.color == color), key=lambda e: _key(e.id)):
            if uf.find(e.tail) != uf.find(e.head):
                uf.union(e.tail, e.head)
                tree.add(e.id)
    if len(uf.groups()) != 1:
        raise InputError("select_generators needs a connected graph")
    root = min(piece.nodes, key=_key)
    tedges = [e for e in piece.edges if e.id in tree]
    _, parent = bfs_tree(piece.nodes, tedges, root)
    blue = [e for e in piece.edges if e.id not in tree and e.color == "blue"]
    red = [e for e in piece.edges if e.id not in tree and e.color != "blue"]
    return GeneratorChoice(tree, blue, red, parent, root)


# --------------------------------------------------------------- the total space


@dataclass
class FrontierComponent:
    index: int
    white: int
    black: int
    vertices: list
    copies: list[Edge]  # frontier edges; tail/head are frontier vertices

    @property
    def red_copies(self) -> int:
        return sum(1 for c in self.copies if c.color == "red")


@dataclass
class Assembly:
    tracks: TrackGraph
    white: list[PieceGraph]
    black: list[PieceGraph]
    frontier: list[FrontierComponent]
    white_of: dict
    black_of: dict
    collapsed: dict  # removed incidence edge id -> replacement steps
    face_shapes: dict
    vertical: dict = field(default_factory=dict)  # frontier vertex -> Edge
    squares: dict = field(default_factory=dict)  # copy id -> list of (Edge, sign)
    copy_edge: dict = field(default_factory=dict)  # copy id -> underlying track Edge

    def expand(self, e, s):
        rep = self.collapsed.get(e.id)
        if rep is None:
            return [(e, s)]
        return rep if s == 1 else [(x, -y) for x, y in reversed(rep)]


def _face_id(t: TriangleTracks, f: int):
    return ("face", t.triangle.index, f)


def assemble(tg: TrackGraph) -> Assembly:
    """Build the pieces, the frontier and the squares of Z."""
    marks = tg.marks
    track_edges: list[Edge] = []
    collapsed = {}
    copies: list[Edge] = []
    squares_raw = {}
    face_shapes = {}
    occ_edge = {}
    end_edge = {}

    for g, me in marks.items():
        m = me.count
        end_edge[("seg", g, 0)] = Edge(("end", g, 0), ("seg", g, 0), ("O",), "black", ())
        end_edge[("seg", g, m)] = Edge(("end", g, m), ("seg", g, m), ("O",), "black", ((g, 1),))

    for t in tg.triangles:
        tri = t.triangle
        ti = tri.index
        base = [tri.side_base(s) for s in range(3)]
        red = ("red", ti)

        def side_of(i):
            return t.points[i].side

        def node_of(i):
            return red if i == "R" else tg.global_mark(t, i)

        tedge = {}
        for a, b in t.chords:
            e = Edge(
                ("chord", ti, a, b),
                tg.global_mark(t, a),
                tg.global_mark(t, b),
                "blue",
                reduce_word(inverse(base[side_of(a)]) + base[side_of(b)]),
            )
            track_edges.append(e)
            tedge[(a, b)] = (e, 1)
            tedge[(b, a)] = (e, -1)
        for a in t.spokes:
            e = Edge(("spoke", ti, a), red, tg.global_mark(t, a), "red", base[side_of(a)])
            track_edges.append(e)
            tedge[("R", a)] = (e, 1)
            tedge[(a, "R")] = (e, -1)

        B = len(t.points)
        for f, cyc in enumerate(t.faces):
            fid = _face_id(t, f)
            bsegs = [u for u, v in cyc if u != "R" and v != "R" and v == (u + 1) % B]
            blue = sum(1 for u, v in cyc if (u, v) in tedge and tedge[(u, v)][0].color == "blue")
            redn = sum(1 for u, v in cyc if (u, v) in tedge and tedge[(u, v)][0].color == "red")
            if not bsegs:
                raise InvariantError(f"face {fid} touches no edge segment")
            face_shapes[fid] = (len(bsegs), blue, redn)
            for i in bsegs:
                side, _ = t.segment_place(i)
                e = Edge(("occ", ti, f, i), fid, tg.global_segment(t, i), "black", base[side])
                occ_edge[(ti, i)] = e
        # corner disks: drop the incidence of the segment leaving each corner
        for f, cyc in enumerate(t.faces):
            fid = _face_id(t, f)
            for c in range(3):
                cp = t.corner_point(c)
                if (cp, (cp + 1) % B) not in cyc:
                    continue
                before = occ_edge[(ti, (cp - 1) % B)]
                after = occ_edge[(ti, cp)]
                collapsed[after.id] = [
                    (before, 1),
                    (end_edge[before.head], 1),
                    (end_edge[after.head], -1),
                ]
        for f, cyc in enumerate(t.faces):
            fid = _face_id(t, f)
            for u, v in cyc:
                if (u, v) not in tedge:
                    continue
                e, s = tedge[(u, v)]
                tail = ("fr", ti, f) if u == "R" else ("fm", node_of(u), tg.global_segment(t, (u - 1) % B))
                head = ("fr", ti, f) if v == "R" else ("fm", node_of(v), tg.global_segment(t, v))
                cid = ("copy", ti, f, u, v)
                copies.append(Edge(cid, tail, head, e.color, ()))
                # C-side path from head node back to tail node through the face
                path = []
                if v != "R":
                    path.append((occ_edge[(ti, v)], -1))
                if u != "R":
                    path.append((occ_edge[(ti, (u - 1) % B)], 1))
                squares_raw[cid] = (e, s, path)

    black_edges = [e for e in occ_edge.values() if e.id not in collapsed]
    black_edges += list(end_edge.values())

    # white components
    uf = UnionFind()
    for e in track_edges:
        uf.union(e.tail, e.head)
    for g, me in marks.items():
        for k in range(me.count):
            uf.add(("mark", g, k))
    wgroups = uf.groups()
    white_of = {v: i for i, grp in enumerate(wgroups) for v in grp}
    white = [PieceGraph(grp, []) for grp in wgroups]
    for e in sorted(track_edges, key=lambda e: _key(e.id)):
        white[white_of[e.tail]].edges.append(e)

    # black components
    ub = UnionFind()
    ub.add(("O",))
    for t in tg.triangles:
        for f in range(len(t.faces)):
            ub.add(_face_id(t, f))
    for g, me in marks.items():
        for j in range(me.count + 1):
            ub.add(("seg", g, j))
    for e in black_edges:
        ub.union(e.tail, e.head)
    bgroups = ub.groups()
    black_of = {v: i for i, grp in enumerate(bgroups) for v in grp}
    black = [PieceGraph(grp, []) for grp in bgroups]
    for e in sorted(black_edges, key=lambda e: _key(e.id)):
        black[black_of[e.tail]].edges.append(e)

    # frontier components
    fu = UnionFind()
    for c in copies:
        fu.union(c.tail, c.head)
    fgroups = fu.groups()
    fidx = {v: i for i, grp in enumerate(fgroups) for v in grp}
    frontier = []
    for i, grp in enumerate(fgroups):
        w = {white_of[_white_node(v)] for v in grp}
        b = {black_of[_black_node(v)] for v in grp}
        if len(w) != 1 or len(b) != 1:
            raise InvariantError(f"frontier component {i} touches several pieces", obj=grp)
        frontier.append(FrontierComponent(i, w.pop(), b.pop(), grp, []))
    for c in sorted(copies, key=lambda c: _key(c.id)):
        frontier[fidx[c.tail]].copies.append(c)

    asm = Assembly(tg, white, black, frontier, white_of, black_of, collapsed, face_shapes)
    for fc in frontier:
        for v in fc.vertices:
            asm.vertical[v] = Edge(("vert",) + v, _white_node(v), _black_node(v), "vertical", ())
    for c in copies:
        e, s, path = squares_raw[c.id]
        steps = [(e, s), (asm.vertical[c.head], 1)]
        for be, bs in path:
            steps += asm.expand(be, bs)
        steps.append((asm.vertical[c.tail], -1))
        asm.squares[c.id] = steps
        asm.copy_edge[c.id] = (e, s)
    return asm


def _white_node(fv):
    return fv[1] if fv[0] == "fm" else ("red", fv[1])


def _black_node(fv):
    return fv[2] if fv[0] == "fm" else ("face", fv[1], fv[2])


# --------------------------------------------------------------- boundary graphs


@dataclass
class DCReport:
    black: int
    components: list[int]
    red_edges: int
    h1_dim: int
    images: list[tuple[int, str]]  # (rank of image, classification) per component


def classify_image(vectors: list[list[int]], dim: int) -> tuple[int, str]:
    """Rank of the span of mod-2 vectors in a space of dimension ``dim`` and its type."""
    r = rank_mod2(vectors, dim) if vectors else 0
    if r == dim:
        return r, "surjective"
    if r == dim - 1:
        return r, "index-2"
    return r, "other"


@dataclass
class Presentation:
    generators: list[dict]
    relators: list[Word]
    attaching: list[tuple[int, int, int]]  # (frontier component, |f_c(s)|, |f_C(s)|)
    images: dict  # frontier component -> (mod-2 vectors in H1(C), dim)
    white_trees: list = field(default_factory=list)  # (parent, root) per white piece
    black_trees: list = field(default_factory=list)
    x_tree: set = field(default_factory=set)
    frontier_root: dict = field(default_factory=dict)


def build_presentation(asm: Assembly) -> Presentation:
    """Exact presentation of π1(Z) from white, black and vertical data."""
    gens: list[dict] = []
    sym = {}  # edge id -> generator name

    def new_gen(kind, edge, piece, word_elem=None):
        prefix = {"red": "r", "blue": "u", "black": "k", "stable": "t"}[kind]
        n = sum(1 for x in gens if x["kind"] == kind) + 1
        name = f"{prefix}{n}"
        gens.append({"name": name, "kind": kind, "edge": edge, "piece": piece})
        sym[edge.id] = name
        return name

    white_choice = []
    for i, w in enumerate(asm.white):
        ch = select_generators(w)
        white_choice.append(ch)
        for e in sorted(ch.red, key=lambda e: _key(e.id)):
            new_gen("red", e, ("W", i))
        for e in sorted(ch.blue, key=lambda e: _key(e.id)):
            new_gen("blue", e, ("W", i))
    black_choice = []
    for i, b in enumerate(asm.black):
        root = ("O",) if ("O",) in b.nodes else min(b.nodes, key=_key)
        tree, parent = bfs_tree(b.nodes, b.edges, root)
        black_choice.append((tree, parent, root))
        for e in b.edges:
            if e.id not in tree:
                new_gen("black", e, ("B", i))

    # tree T' of X and stable letters
    xt_edges = [
        Edge(("X", fc.index), ("W", fc.white), ("B", fc.black), "x") for fc in asm.frontier
    ]
    xnodes = [("W", i) for i in range(len(asm.white))] + [("B", i) for i in range(len(asm.black))]
    xtree, xparent = bfs_tree(xnodes, xt_edges, ("W", 0))
    fc_root = {fc.index: min(fc.vertices, key=_key) for fc in asm.frontier}
    for fc in asm.frontier:
        if ("X", fc.index) not in xtree:
            new_gen("stable", asm.vertical[fc_root[fc.index]], ("X", fc.index))

    white_tree = {eid for ch in white_choice for eid in ch.tree}
    black_tree = {eid for tr, _, _ in black_choice for eid in tr}
    subst: dict = {}

    def word_of(steps):
        out = []
        for e, s in steps:
            if e.id in white_tree or e.id in black_tree:
                continue
            if e.id in subst:
                w = subst[e.id]
                out += w if s == 1 else inverse(w)
            elif e.color == "vertical" and e.id not in sym:
                out.append(("?" + repr(e.id), s))
            elif e.id in sym:
                out.append((sym[e.id], s))
            else:
                raise InvariantError(f"edge {e.id} has no generator")
        return reduce_word(out)

    for fc in asm.frontier:
        root = fc_root[fc.index]
        rv = asm.vertical[root]
        subst[rv.id] = () if ("X", fc.index) in xtree else ((sym[rv.id], 1),)

    relators: list[Word] = []
    attaching = []
    images = {}
    for fc in asm.frontier:
        root = fc_root[fc.index]
        ftree, fparent = bfs_tree(fc.vertices, fc.copies, root)
        order = list(fparent)  # BFS discovery order
        for v in order:
            if fparent[v] is None:
                continue
            c, s, u = fparent[v]
            w = word_of(asm.squares[c.id])
            vid = asm.vertical[v].id
            marker = "?" + repr(vid)
            pos = [k for k, (g, _) in enumerate(w) if g == marker]
            if len(pos) != 1:
                raise InvariantError(f"square of {c.id} does not isolate its vertical edge")
            k = pos[0]
            A, e_v, Bw = w[:k], w[k][1], w[k + 1 :]
            val = reduce_word(inverse(A) + inverse(Bw)) if e_v == 1 else reduce_word(Bw + A)
            subst[vid] = val
        tr_w = black_choice[fc.black][0]
        b_nodes = asm.black[fc.black]
        nontree_b = [e for e in b_nodes.edges if e.id not in tr_w]
        bcol = {e.id: i for i, e in enumerate(nontree_b)}
        vecs = []
        for c in fc.copies:
            if c.id in ftree:
                continue
            w = word_of(asm.squares[c.id])
            if any(g.startswith("?") for g, _ in w):
                raise InvariantError("unresolved vertical edge in a relator")
            relators.append(w)
            # projections of the frontier loop onto both sides
            loop = _frontier_loop(fparent, c)
            wsteps, bsteps = [], []
            for cc, ss in loop:
                e, s = asm.copy_edge[cc.id]
                wsteps.append((e, s * ss))
                bsteps += _c_side(asm, cc, ss)
            attaching.append((fc.index, len(word_of(wsteps)), len(word_of(bsteps))))
            vec = [0] * len(nontree_b)
            for e, _ in bsteps:
                if e.id in bcol:
                    vec[bcol[e.id]] ^= 1
            vecs.append(vec)
        images[fc.index] = (vecs, len(nontree_b))
    return Presentation(
        gens,
        relators,
        attaching,
        images,
        [(ch.parent, ch.root) for ch in white_choice],
        [(parent, root) for _, parent, root in black_choice],
        xtree,
        fc_root,
    )


def _frontier_loop(parent, c):
    """The fundamental cycle of non-tree copy c: tree path to its tail, c, back from its head."""
    up = [(e, s) for e, s in tree_edge_path(parent, c.tail)]
    down = [(e, s) for e, s in tree_edge_path(parent, c.head)]
    return up + [(c, 1)] + [(e, -s) for e, s in reversed(down)]


def _c_side(asm, copy, sign):
    """Black-side path of a frontier edge, from its tail node to its head node."""
    steps = asm.squares[copy.id]
    inner = steps[2:-1]  # head -> tail
    fwd = [(e, -s) for e, s in reversed(inner)]
    return fwd if sign == 1 else inner


def dc_reports(asm: Assembly, pres: Presentation) -> list[DCReport]:
    out = []
    for i, b in enumerate(asm.black):
        fcs = [fc for fc in asm.frontier if fc.black == i]
        imgs = []
        dim = b.b1
        for fc in fcs:
            vecs, _ = pres.images[fc.index]
            imgs.append(classify_image(vecs, dim))
        out.append(
            DCReport(i, [fc.index for fc in fcs], sum(fc.red_copies for fc in fcs), dim, imgs)
        )
    return out


def midpoint_graph(asm: Assembly, black: int) -> tuple[PieceGraph, int]:
    """The graph Γ_C onto which complement component C retracts, with its b1."""
    for fid, (segs, blue, red) in asm.face_shapes.items():
        if asm.black_of[fid] == black and segs + blue + red < 2:
            raise InvariantError(f"face {fid} has an unexpected shape {(segs, blue, red)}")
    g = asm.black[black]
    return g, g.b1


# --------------------------------------------------------------- X and X'


@dataclass
class GraphOfGroups:
    white: list[int]
    black: list[int]
    edges: list[tuple[int, int, int]]  # (frontier index, white, black)
    red_gens: dict
    blue_gens: dict
    black_gens: dict
    red_edges: dict  # frontier index -> red copies

    def adjacency(self):
        adj = defaultdict(set)
        for _, w, b in self.edges:
            adj[("W", w)].add(("B", b))
            adj[("B", b)].add(("W", w))
        return adj

    def nodes(self):
        return [("W", w) for w in self.white] + [("B", b) for b in self.black]

    def diameter(self) -> int:
        adj = self.adjacency()
        best = 0
        for s in self.nodes():
            dist = {s: 0}
            dq = deque([s])
            while dq:
                u = dq.popleft()
                for w in sorted(adj[u], key=_key):
                    if w not in dist:
                        dist[w] = dist[u] + 1
                        dq.append(w)
            best = max(best, max(dist.values()))
        return best

    def lines(self, tag: str) -> list[str]:
        out = [f"{tag} white {len(self.white)} black {len(self.black)} edges {len(self.edges)}"]
        out += [
            f"white W{w} red {self.red_gens.get(w, 0)} blue {self.blue_gens.get(w, 0)}"
            for w in self.white
        ]
        out += [f"black B{b} gens {self.black_gens.get(b, 0)}" for b in self.black]
        out += [f"edge F{i} W{w} B{b} red_copies {self.red_edges[i]}" for i, w, b in self.edges]
        return out


def graph_of_groups(asm: Assembly, pres: Presentation) -> GraphOfGroups:
    red = defaultdict(int)
    blue = defaultdict(int)
    blk = defaultdict(int)
    for gdef in pres.generators:
        kind, piece = gdef["kind"], gdef["piece"]
        if kind == "red":
            red[piece[1]] += 1
        elif kind == "blue":
            blue[piece[1]] += 1
        elif kind == "black":
            blk[piece[1]] += 1
    return GraphOfGroups(
        list(range(len(asm.white))),
        list(range(len(asm.black))),
        [(fc.index, fc.white, fc.black) for fc in asm.frontier],
        dict(red),
        dict(blue),
        dict(blk),
        {fc.index: fc.red_copies for fc in asm.frontier},
    )


def prune(X: GraphOfGroups) -> GraphOfGroups:
    """X': drop white vertices without red generators, then trivial sides of
    separating edges without red copies, then components without white vertices."""
    white = [w for w in X.white if X.red_gens.get(w, 0) > 0]
    black = list(X.black)
    edges = [e for e in X.edges if e[1] in white]

    def has_red(nodes):
        return any(n[0] == "W" and X.red_gens.get(n[1], 0) > 0 for n in nodes)

    changed = True
    while changed:
        changed = False
        for e in sorted(edges):
            if X.red_edges[e[0]] > 0:
                continue
            rest = [f for f in edges if f != e]
            side_w = _component(("W", e[1]), rest)
            if ("B", e[2]) in side_w:
                continue  # not separating
            side_b = _component(("B", e[2]), rest)
            for side in (side_w, side_b):
                if not has_red(side):
                    white = [w for w in white if ("W", w) not in side]
                    black = [b for b in black if ("B", b) not in side]
                    edges = [f for f in rest if ("W", f[1]) not in side and ("B", f[2]) not in side]
                    changed = True
                    break
            if changed:
                break
    keep = set()
    for w in white:
        keep |= _component(("W", w), edges)
    white = [w for w in white if ("W", w) in keep]
    black = [b for b in black if ("B", b) in keep]
    edges = [e for e in edges if ("W", e[1]) in keep]
    return GraphOfGroups(
        white, black, edges, X.red_gens, X.blue_gens, X.black_gens, X.red_edges
    )


def _component(start, edges):
    adj = defaultdict(set)
    for _, w, b in edges:
        adj[("W", w)].add(("B", b))
        adj[("B", b)].add(("W", w))
    seen = {start}
    dq = deque([start])
    while dq:
        u = dq.popleft()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                dq.append(w)
    return seen
