"""Van Kampen complex and marked points, plus the blue and red tracks inside each triangle.

Everything lives in the quotient complex. It has one vertex O, one edge per
generator and one triangle per relator. Triangle t with relator s0 s1 s2 has
corners P0 = 1, P1 = s0, P2 = s0 s1 in the universal cover; side i runs from
P_i to P_(i+1) along the edge of its generator, forwards for a positive
letter and backwards for an inverse one.

Within a triangle the boundary points are listed counterclockwise:
corner 0, side-0 marks, corner 1, side-1 marks, corner 2, side-2 marks.
Boundary segment i joins boundary point i to point i+1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..constants import ConstantProfile
from ..cylinders import cylinder
from ..errors import InputError, InvariantError
from ..graph import PreferredGeodesicFamily
from ..slicing import TriangleDecomposition, slice_partition, triangle_decomposition
from .presentation import GroupAction, TriangularPresentation, Word, inverse, reduce_word


@dataclass(frozen=True)
class Triangle:
    index: int
    relator: Word

    @property
    def corners(self) -> tuple[Word, Word, Word]:
        r = self.relator
        return ((), r[:1], r[:2])

    def side_base(self, i: int) -> Word:
        """Translate of the generator edge carrying side i."""
        g, e = self.relator[i]
        pre = self.relator[:i]
        return pre if e == 1 else reduce_word(pre + ((g, -1),))


@dataclass(frozen=True)
class VanKampen2Complex:
    presentation: TriangularPresentation
    triangles: tuple[Triangle, ...]

    @property
    def generators(self):
        return self.presentation.generators

    @property
    def euler_characteristic(self) -> int:
        return 1 - len(self.generators) + len(self.triangles)


def build_complex(pres: TriangularPresentation) -> VanKampen2Complex:
    return VanKampen2Complex(pres, tuple(Triangle(i, r) for i, r in enumerate(pres.relators)))


@dataclass(frozen=True)
class MarkedEdge:
    generator: str
    slices: tuple[frozenset, ...]
    points: tuple[str, ...]  # image of each mark: least vertex of its slice

    @property
    def count(self) -> int:
        return len(self.slices)


def mark_edges(
    cx: VanKampen2Complex,
    act: GroupAction,
    l: int,  # noqa: E741
    fam: PreferredGeodesicFamily,
    profile: ConstantProfile,
) -> dict[str, MarkedEdge]:
    """One mark per slice of Cyl_l(p, φ(e)p), in slice order from p."""
    l = getattr(l, "l", l)  # noqa: E741
    if l is None:
        raise InputError("no good l available")
    g = fam.graph
    p = act.basepoint
    out = {}
    for e in cx.generators:
        cyl = cylinder(p, act.images[e](p), l, fam, profile)
        sl = slice_partition(g, cyl, profile)
        slices = tuple(s.members for s in sl)
        out[e] = MarkedEdge(e, slices, tuple(min(s, key=g.key) for s in slices))
    return out


# ------------------------------------------------------------------ tracks


@dataclass(frozen=True)
class BoundaryPoint:
    kind: str  # "corner" or "mark"
    side: int
    pos: int  # corner number, or mark position along the side


@dataclass
class TriangleTracks:
    triangle: Triangle
    points: list[BoundaryPoint]
    side_len: tuple[int, int, int]
    chords: list[tuple[int, int]]  # pairs of boundary indices, blue
    spokes: list[int]  # boundary indices joined to the red point
    faces: list[list[tuple]] = field(default_factory=list)  # inner faces as dart cycles
    decomposition: TriangleDecomposition | None = None

    @property
    def has_red(self) -> bool:
        return bool(self.spokes)

    def side_point(self, side: int, pos: int) -> int:
        return sum(self.side_len[:side]) + side + 1 + pos

    def corner_point(self, c: int) -> int:
        return sum(self.side_len[:c]) + c

    def segment_place(self, i: int) -> tuple[int, int]:
        """(side, position along the side) of boundary segment i."""
        bp = self.points[i]
        if bp.kind == "corner":
            return bp.side, 0
        return bp.side, bp.pos + 1


@dataclass
class TrackGraph:
    complex: VanKampen2Complex
    marks: dict[str, MarkedEdge]
    triangles: list[TriangleTracks]

    @property
    def red_edge_count(self) -> int:
        return sum(len(t.spokes) for t in self.triangles)

    @property
    def blue_edge_count(self) -> int:
        return sum(len(t.chords) for t in self.triangles)

    def global_mark(self, t: TriangleTracks, i: int) -> tuple:
        bp = t.points[i]
        gen, e = t.triangle.relator[bp.side]
        m = self.marks[gen].count
        return ("mark", gen, bp.pos if e == 1 else m - 1 - bp.pos)

    def global_segment(self, t: TriangleTracks, i: int) -> tuple:
        side, q = t.segment_place(i)
        gen, e = t.triangle.relator[side]
        m = self.marks[gen].count
        return ("seg", gen, q if e == 1 else m - q)


def _side_slices(act, tri, side, marks, g):
    """Slices along a side, in order from its start, transported from the generator edge."""
    gen, e = tri.relator[side]
    base = act.element(tri.side_base(side))
    sl = [base.apply_set(s) for s in marks[gen].slices]
    return sl if e == 1 else sl[::-1]


def build_tracks(
    cx: VanKampen2Complex,
    marks: dict[str, MarkedEdge],
    act: GroupAction,
    l: int,  # noqa: E741
    fam: PreferredGeodesicFamily,
    profile: ConstantProfile,
    psi_n: int,
) -> TrackGraph:
    """Blue chords for shared slices, a red point for the leftover marks, faces per triangle."""
    l = getattr(l, "l", l)  # noqa: E741
    g = fam.graph
    p = act.basepoint
    out = []
    for tri in cx.triangles:
        x, y, z = (act.element(c)(p) for c in tri.corners)
        dec = triangle_decomposition(x, y, z, l, fam, profile, psi_n)
        sides = [_side_slices(act, tri, s, marks, g) for s in range(3)]
        direct = [
            [s.members for s in slice_partition(g, cylinder(u, v, l, fam, profile), profile)]
            for u, v in ((x, y), (y, z), (z, x))
        ]
        for s in range(3):
            if sides[s] != direct[s]:
                raise InvariantError(
                    f"triangle {tri.index} side {s}: transported slices differ from the cylinder's slices",
                    obj=(sides[s], direct[s]),
                )
        n0, n1, n2 = (len(s) for s in sides)
        k, m, q = len(dec.shared_S), len(dec.shared_T), len(dec.shared_V)
        if k + m > n0 or m + q > n1 or q + k > n2:
            raise InvariantError(f"triangle {tri.index}: shared slices overlap", obj=dec)
        for i in range(k):
            if sides[0][i] != dec.shared_S[i] or sides[2][n2 - 1 - i] != dec.shared_S[i]:
                raise InvariantError(f"triangle {tri.index}: S slice {i + 1} does not match its sides")
        for i in range(m):
            if sides[0][n0 - 1 - i] != dec.shared_T[i] or sides[1][i] != dec.shared_T[i]:
                raise InvariantError(f"triangle {tri.index}: T slice {i + 1} does not match its sides")
        for i in range(q):
            if sides[2][i] != dec.shared_V[i] or sides[1][n1 - 1 - i] != dec.shared_V[i]:
                raise InvariantError(f"triangle {tri.index}: V slice {i + 1} does not match its sides")

        pts = []
        for c, n in enumerate((n0, n1, n2)):
            pts.append(BoundaryPoint("corner", c, c))
            pts += [BoundaryPoint("mark", c, j) for j in range(n)]
        tt = TriangleTracks(tri, pts, (n0, n1, n2), [], [], decomposition=dec)
        sp = tt.side_point
        tt.chords += [(sp(0, i), sp(2, n2 - 1 - i)) for i in range(k)]
        tt.chords += [(sp(0, n0 - 1 - i), sp(1, i)) for i in range(m)]
        tt.chords += [(sp(1, n1 - 1 - i), sp(2, i)) for i in range(q)]
        tt.spokes = (
            [sp(0, j) for j in range(k, n0 - m)]
            + [sp(1, j) for j in range(m, n1 - q)]
            + [sp(2, j) for j in range(q, n2 - k)]
        )
        tt.faces = trace_faces(len(pts), tt.chords, tt.spokes)
        out.append(tt)
    return TrackGraph(cx, marks, out)


def trace_faces(B: int, chords, spokes) -> list[list[tuple]]:
    """Inner faces of a disk with B boundary points, chords and a star at "R".

    Rotations are counterclockwise: at boundary point i the neighbours are
    (i+1, track partner, i-1); at R the spokes in boundary order. Faces are
    traced with the face on the left of each dart; the outer face (the one
    holding the dart 1 -> 0) is dropped. Euler's formula is checked.
    """
    partner = {}
    for a, b in chords:
        partner[a] = b
        partner[b] = a
    for a in spokes:
        if a in partner:
            raise InvariantError(f"boundary point {a} has two track edges")
        partner[a] = "R"
    rot = {}
    for i in range(B):
        r = [(i + 1) % B]
        if i in partner:
            r.append(partner[i])
        r.append((i - 1) % B)
        rot[i] = r
    if spokes:
        rot["R"] = sorted(spokes)
    if B == 2 and not partner:
        rot = {0: [1], 1: [0]}

    def nxt(u, v):
        r = rot[v]
        return v, r[(r.index(u) - 1) % len(r)]

    darts = {(u, v) for u in rot for v in rot[u]}
    faces = []
    seen = set()
    for d in sorted(darts, key=lambda d: (str(d[0]), str(d[1]))):
        if d in seen:
            continue
        cyc = []
        cur = d
        while cur not in seen:
            seen.add(cur)
            cyc.append(cur)
            cur = nxt(*cur)
        faces.append(cyc)
    V = len(rot)
    E = len(darts) // 2
    if V - E + len(faces) != 2:
        raise InvariantError(f"track embedding is not planar: V={V} E={E} F={len(faces)}")
    outer = (1 % B, 0)
    return [f for f in faces if outer not in f]
