"""Small model graphs used by the tests, the ``verify`` suite and the examples."""

from __future__ import annotations

import random

from .graph import GraphAutomorphism, SimpleGraph


def path_graph(n: int, prefix: str = "v") -> SimpleGraph:
    """Path v0 - v1 - ... - v{n-1}."""
    vs = [f"{prefix}{i}" for i in range(n)]
    return SimpleGraph(vs, zip(vs, vs[1:]))


def cycle_graph(n: int, prefix: str = "v") -> SimpleGraph:
    vs = [f"{prefix}{i}" for i in range(n)]
    return SimpleGraph(vs, [(vs[i], vs[(i + 1) % n]) for i in range(n)])


def grid_graph(rows: int, cols: int) -> SimpleGraph:
    name = lambda r, c: f"g{r}_{c}"  # noqa: E731
    vs = [name(r, c) for r in range(rows) for c in range(cols)]
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((name(r, c), name(r, c + 1)))
            if r + 1 < rows:
                edges.append((name(r, c), name(r + 1, c)))
    return SimpleGraph(vs, edges)


def random_tree(n: int, seed: int) -> SimpleGraph:
    """Uniform random recursive tree on t0..t{n-1}."""
    rng = random.Random(seed)
    vs = [f"t{i}" for i in range(n)]
    edges = [(vs[rng.randrange(i)], vs[i]) for i in range(1, n)]
    return SimpleGraph(vs, edges)


def spider(legs: int, length: int) -> SimpleGraph:
    """A center ``o`` with ``legs`` paths of ``length`` edges; leaf of leg i is ``l{i}_{length}``."""
    vs = ["o"] + [f"l{i}_{k}" for i in range(legs) for k in range(1, length + 1)]
    edges = []
    for i in range(legs):
        prev = "o"
        for k in range(1, length + 1):
            edges.append((prev, f"l{i}_{k}"))
            prev = f"l{i}_{k}"
    return SimpleGraph(vs, edges)


def tripod(length: int = 5) -> SimpleGraph:
    return spider(3, length)


def rotation(g: SimpleGraph, n: int, k: int, prefix: str = "v") -> GraphAutomorphism:
    """Rotation by ``k`` steps of :func:`cycle_graph` ``(n)``."""
    return GraphAutomorphism({f"{prefix}{i}": f"{prefix}{(i + k) % n}" for i in range(n)})


def reflection(n: int, prefix: str = "v") -> GraphAutomorphism:
    """i -> n-1-i; an automorphism of both the path and the cycle on n vertices."""
    return GraphAutomorphism({f"{prefix}{i}": f"{prefix}{n - 1 - i}" for i in range(n)})


def leg_rotation(legs: int, length: int, step: int = 1) -> GraphAutomorphism:
    fwd = {"o": "o"}
    for i in range(legs):
        for k in range(1, length + 1):
            fwd[f"l{i}_{k}"] = f"l{(i + step) % legs}_{k}"
    return GraphAutomorphism(fwd)


def leg_swap(legs: int, length: int, i: int, j: int) -> GraphAutomorphism:
    fwd = {"o": "o"}
    perm = list(range(legs))
    perm[i], perm[j] = j, i
    for a in range(legs):
        for k in range(1, length + 1):
            fwd[f"l{a}_{k}"] = f"l{perm[a]}_{k}"
    return GraphAutomorphism(fwd)
