"""Triangular presentations and group actions on model graphs, with word helpers and mod-2 homology."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InputError
from ..graph import GraphAutomorphism, SimpleGraph

Letter = tuple[str, int]
Word = tuple[Letter, ...]


def inverse(w: Word) -> Word:
    return tuple((g, -e) for g, e in reversed(w))


def reduce_word(w) -> Word:
    out: list[Letter] = []
    for g, e in w:
        if out and out[-1] == (g, -e):
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def word_text(w: Word) -> str:
    if not w:
        return "1"
    return " ".join(g if e == 1 else f"{g}^-1" for g, e in w)


def parse_letter(tok: str, where: str) -> Letter:
    if tok.endswith("^-1"):
        return tok[:-3], -1
    if "^" in tok:
        raise InputError(f"{where}: only ^-1 exponents are allowed, got {tok!r}")
    return tok, 1


@dataclass(frozen=True)
class TriangularPresentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    def __post_init__(self):
        if len(set(self.generators)) != len(self.generators):
            raise InputError("duplicate generator names")
        gens = set(self.generators)
        for k, r in enumerate(self.relators):
            if len(r) != 3:
                raise InputError(
                    f"relator {k + 1} ({word_text(r)}) has length {len(r)}; only triangular "
                    "presentations are accepted (eliminate shorter relators beforehand)"
                )
            for g, _ in r:
                if g not in gens:
                    raise InputError(f"relator {k + 1} uses unknown generator {g!r}")
            for i in range(3):
                (g, e), (h, f) = r[i], r[(i + 1) % 3]
                if g == h and e == -f:
                    raise InputError(f"relator {k + 1} ({word_text(r)}) is not cyclically reduced")

    def text(self) -> str:
        lines = ["gen " + " ".join(self.generators)]
        lines += ["rel " + word_text(r) for r in self.relators]
        return "\n".join(lines) + "\n"


def parse_presentation(text: str, source: str = "<presentation>") -> TriangularPresentation:
    gens: list[str] | None = None
    rels: list[Word] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        where = f"{source}:{lineno}"
        if head == "gen":
            if gens is not None:
                raise InputError(f"{where}: second 'gen' line")
            gens = rest
        elif head == "rel":
            if gens is None:
                raise InputError(f"{where}: 'rel' before 'gen'")
            w = tuple(parse_letter(t, where) for t in rest)
            for g, _ in w:
                if g not in gens:
                    raise InputError(f"{where}: unknown generator {g!r}")
            if len(w) != 3:
                raise InputError(
                    f"{where}: relator has length {len(w)}; only triangular presentations "
                    "are accepted (eliminate shorter relators beforehand)"
                )
            rels.append(w)
        else:
            raise InputError(f"{where}: expected 'gen' or 'rel', got {head!r}")
    if gens is None:
        raise InputError(f"{source}: no 'gen' line")
    try:
        return TriangularPresentation(tuple(gens), tuple(rels))
    except InputError as exc:
        raise InputError(f"{source}: {exc}") from exc


@dataclass(frozen=True)
class GroupAction:
    graph: SimpleGraph
    images: dict
    basepoint: str

    def element(self, w) -> GraphAutomorphism:
        """φ(w) with (uv)(x) = u(v(x))."""
        out = GraphAutomorphism.identity(self.graph)
        for g, e in w:
            a = self.images[g]
            out = out.compose(a if e == 1 else a.inverse())
        return out

    def check(self, pres: TriangularPresentation):
        missing = [g for g in pres.generators if g not in self.images]
        if missing:
            raise InputError(f"action gives no image for generators {missing}")
        for a in self.images.values():
            a.validate(self.graph)
        self.graph.check_vertex(self.basepoint)
        for k, r in enumerate(pres.relators):
            if not self.element(r).is_identity():
                raise InputError(f"relator {k + 1} ({word_text(r)}) does not act trivially")


def parse_action(text: str, g: SimpleGraph, source: str = "<action>") -> GroupAction:
    images: dict[str, GraphAutomorphism] = {}
    base = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{source}:{lineno}"
        toks = line.split()
        if toks[0] == "basepoint" and len(toks) == 2:
            if toks[1] not in g:
                raise InputError(f"{where}: unknown vertex {toks[1]!r}")
            base = toks[1]
        elif toks[0] == "gen" and len(toks) >= 4 and toks[2] == "->" and toks[3] == "perm:":
            name, targets = toks[1], toks[4:]
            if len(targets) != len(g):
                raise InputError(f"{where}: expected {len(g)} images, got {len(targets)}")
            for t in targets:
                if t not in g:
                    raise InputError(f"{where}: unknown vertex {t!r}")
            a = GraphAutomorphism(dict(zip(g.vertices, targets)))
            try:
                a.validate(g)
            except InputError as exc:
                raise InputError(f"{where}: {exc}") from exc
            images[name] = a
        else:
            raise InputError(f"{where}: cannot parse {raw!r}")
    if base is None:
        raise InputError(f"{source}: missing 'basepoint' line")
    return GroupAction(g, images, base)


def serialize_action(act: GroupAction) -> str:
    lines = [
        f"gen {name} -> perm: " + " ".join(a(v) for v in act.graph.vertices)
        for name, a in act.images.items()
    ]
    lines.append(f"basepoint {act.basepoint}")
    return "\n".join(lines) + "\n"


def trivial_action(g: SimpleGraph, pres: TriangularPresentation, basepoint: str) -> GroupAction:
    ident = GraphAutomorphism.identity(g)
    return GroupAction(g, {x: ident for x in pres.generators}, basepoint)


def rank_mod2(rows: list[list[int]], ncols: int) -> int:
    if not rows or ncols == 0:
        return 0
    m = np.array(rows, dtype=np.uint8) % 2
    rank = 0
    for col in range(ncols):
        piv = np.nonzero(m[rank:, col])[0]
        if piv.size == 0:
            continue
        p = rank + piv[0]
        if p != rank:
            m[[rank, p]] = m[[p, rank]]
        hits = np.nonzero(m[:, col])[0]
        for r in hits:
            if r != rank:
                m[r] ^= m[rank]
        rank += 1
        if rank == m.shape[0]:
            break
    return rank


def h1_mod2(generators, relators) -> int:
    """dim H1(⟨generators | relators⟩; Z/2) = #generators - rank of the exponent-sum matrix."""
    col = {g: i for i, g in enumerate(generators)}
    rows = []
    for r in relators:
        row = [0] * len(col)
        for g, _ in r:
            row[col[g]] ^= 1
        rows.append(row)
    return len(col) - rank_mod2(rows, len(col))
