"""Command line front end.

Every report starts with a header that serializes the run configuration,
so identical inputs give byte-identical output. Exit status: 0 success,
1 input error, 2 budget exhausted, 3 invariant violated.
"""

from __future__ import annotations

import dataclasses
import os
import sys
from pathlib import Path

import click

from .constants import DEFAULT_BUDGET, ConstantProfile, experiment_profile, parse_profile
from .errors import CanocylError, InputError
from .graph import PreferredGeodesicFamily, parse_graph, slim_delta, verify_family_axioms

BUDGET_ENV = "CANOCYL_BUDGET"


def _read(path: str | None, what: str) -> tuple[str, str]:
    if path is None:
        raise InputError(f"--{what} is required for this command")
    try:
        return Path(path).read_text(), path
    except OSError as exc:
        raise InputError(f"cannot read {what} file {path}: {exc.strerror}") from None


class Run:
    def __init__(self, ctx: click.Context, command: str, args: dict):
        o = ctx.obj
        self.opts = o
        self.command = command
        self.args = args
        self.graph = None
        self.profile = None
        if o["graph"]:
            text, src = _read(o["graph"], "graph")
            self.graph = parse_graph(text, src)

    def need_graph(self):
        if self.graph is None:
            _read(None, "graph")
        return self.graph

    def need_profile(self) -> ConstantProfile:
        if self.profile is None:
            if self.opts["profile"]:
                text, src = _read(self.opts["profile"], "profile")
                prof = parse_profile(text, src)
            else:
                prof = experiment_profile()
            budget = self.opts["budget"]
            if budget is None and os.environ.get(BUDGET_ENV):
                try:
                    budget = int(os.environ[BUDGET_ENV])
                except ValueError:
                    raise InputError(f"{BUDGET_ENV} must be an integer") from None
            if budget is not None:
                prof = dataclasses.replace(prof, budget=budget)
            self.profile = prof
        return self.profile

    def header(self) -> list[str]:
        o = self.opts
        out = ["# canocyl report", f"# command {self.command}"]
        for k, v in self.args.items():
            out.append(f"# arg {k} {v}")
        for k in ("graph", "profile", "presentation", "action"):
            out.append(f"# {k} {o[k] if o[k] else '-'}")
        out.append(f"# seed {o['seed']}")
        if self.profile is not None:
            out += ["# profile " + line for line in self.profile.to_text().splitlines()]
        return out


def _emit(run: Run, body: list[str]):
    text = "\n".join(run.header() + body) + "\n"
    out = run.opts["out"]
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


def _guard(fn):
    def wrapper(*a, **kw):
        try:
            return fn(*a, **kw)
        except CanocylError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(exc.exit_code)

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@click.group()
@click.option("--graph", type=str, default=None, help="graph file (v/e lines)")
@click.option("--profile", type=str, default=None, help="constant profile file")
@click.option("--presentation", type=str, default=None, help="triangular presentation file")
@click.option("--action", type=str, default=None, help="action file (generator permutations)")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--budget", type=int, default=None, help=f"search budget (default: ${BUDGET_ENV} or {DEFAULT_BUDGET})")
@click.option("--out", type=str, default=None, help="write the report here instead of stdout")
@click.pass_context
def main(ctx, graph, profile, presentation, action, seed, budget, out):
    """Cylinders, slices and track decompositions on model hyperbolic graphs."""
    ctx.obj = dict(
        graph=graph, profile=profile, presentation=presentation, action=action,
        seed=seed, budget=budget, out=out,
    )


@main.command()
@click.pass_context
@_guard
def delta(ctx):
    """Slim-triangle constant of the graph, plus the preferred family's axiom report."""
    run = Run(ctx, "delta", {})
    g = run.need_graph()
    d = slim_delta(g, budget=run.opts["budget"] or int(os.environ.get(BUDGET_ENV, 0) or 10_000_000))
    body = [f"delta {d}"]
    if run.opts["profile"]:
        pr = run.need_profile()
        body += verify_family_axioms(PreferredGeodesicFamily(g), g, pr.mu, pr.epsilon).lines()
    _emit(run, body)


def _cyl(run, x, y, l):  # noqa: E741
    from .cylinders import cylinder

    g = run.need_graph()
    pr = run.need_profile()
    fam = PreferredGeodesicFamily(g)
    return g, pr, fam, cylinder(x, y, pr.l if l is None else l, fam, pr)


@main.command("cylinder")
@click.argument("x")
@click.argument("y")
@click.option("--l", "l_", type=int, default=None, help="cylinder depth (default: profile l)")
@click.pass_context
@_guard
def cylinder_cmd(ctx, x, y, l_):
    """Members of Cyl_l(x, y) with one witness each."""
    run = Run(ctx, "cylinder", {"x": x, "y": y, "l": l_})
    g, _, _, c = _cyl(run, x, y, l_)
    _emit(run, c.lines(g))


@main.command()
@click.argument("x")
@click.argument("y")
@click.option("--l", "l_", type=int, default=None)
@click.pass_context
@_guard
def slices(ctx, x, y, l_):
    """Ordered slice partition of Cyl_l(x, y)."""
    from .slicing import consecutive_slice_gap, slice_diameter, slice_lines, slice_partition

    run = Run(ctx, "slices", {"x": x, "y": y, "l": l_})
    g, pr, _, c = _cyl(run, x, y, l_)
    sl = slice_partition(g, c, pr)
    body = slice_lines(g, sl)
    body.append(f"max_diameter {max(slice_diameter(g, s) for s in sl)} bound {pr.slice_diameter_bound}")
    if len(sl) > 1:
        body.append(f"max_gap {consecutive_slice_gap(g, sl)} bound {pr.slice_gap_bound}")
    _emit(run, body)


@main.command("channels")
@click.argument("a")
@click.argument("b")
@click.argument("L", type=int)
@click.pass_context
@_guard
def channels_cmd(ctx, a, b, l):  # noqa: E741
    """L-channels of (a, b) and the measured κ(L)."""
    from .cylinders import channels, measure_kappa

    run = Run(ctx, "channels", {"a": a, "b": b, "L": l})
    g = run.need_graph()
    pr = run.need_profile()
    fam = PreferredGeodesicFamily(g)
    chs = channels(a, b, l, fam, pr)
    body = [f"channels {a} {b} L={l} count {len(chs)}"]
    body += [f"core {' '.join(c.core)} | ambient {' '.join(c.ambient)}" for c in chs]
    k = measure_kappa(fam, pr, l, seed=run.opts["seed"])
    body.append(f"kappa {k.value} method {k.method} pairs {k.pairs}")
    _emit(run, body)


def _action(run):
    from .tracks import parse_action

    text, src = _read(run.opts["action"], "action")
    return parse_action(text, run.need_graph(), src)


@main.command()
@click.option("--offset", type=int, default=None, help="override 5(13μ+ψ(n))")
@click.pass_context
@_guard
def goodl(ctx, offset):
    """Least good l for the action's generator images."""
    from .cylinders import measure_bounds
    from .slicing import good_l_search

    run = Run(ctx, "goodl", {"offset": offset})
    g = run.need_graph()
    pr = run.need_profile()
    act = _action(run)
    fam = PreferredGeodesicFamily(g)
    F = []
    for a in act.images.values():
        if a not in F:
            F.append(a)
    n = (2 * len(F)) ** 3
    bounds = measure_bounds(fam, pr, n, seed=run.opts["seed"])
    res = good_l_search(F, act.basepoint, fam, pr, bounds, offset=offset)
    _emit(run, [f"kappa_mu {bounds.kappa_mu}"] + res.lines())


@main.command()
@click.argument("x")
@click.argument("y")
@click.argument("z")
@click.option("--l", "l_", type=int, default=None)
@click.option("--n", "n_", type=int, default=8, show_default=True, help="n in ψ(n)")
@click.option("--kappa", type=int, default=1, show_default=True)
@click.pass_context
@_guard
def triangle(ctx, x, y, z, l_, n_, kappa):
    """Slice decomposition of the triangle (x, y, z)."""
    from .constants import psi
    from .slicing import triangle_decomposition

    run = Run(ctx, "triangle", {"x": x, "y": y, "z": z, "l": l_, "n": n_, "kappa": kappa})
    g = run.need_graph()
    pr = run.need_profile()
    d = triangle_decomposition(
        x, y, z, pr.l if l_ is None else l_, PreferredGeodesicFamily(g), pr, psi(n_, kappa, pr.epsilon)
    )
    _emit(run, d.lines(g))


@main.command()
@click.option("--l", "l_", type=int, default=None, help="skip the good-l search")
@click.option("--kappa", type=int, default=1, show_default=True)
@click.option("--offset", type=int, default=None)
@click.pass_context
@_guard
def tracks(ctx, l_, kappa, offset):
    """Full track pipeline: marks, tracks, X, X', presentation, displacement."""
    from .tracks import parse_presentation, run_tracks, tracks_lines

    run = Run(ctx, "tracks", {"l": l_, "kappa": kappa, "offset": offset})
    g = run.need_graph()
    pr = run.need_profile()
    text, src = _read(run.opts["presentation"], "presentation")
    pres = parse_presentation(text, src)
    act = _action(run)
    res = run_tracks(pres, act, PreferredGeodesicFamily(g), pr, l=l_, kappa=kappa, offset=offset)
    _emit(run, tracks_lines(res))


@main.command()
@click.pass_context
@_guard
def verify(ctx):
    """Run the invariant suite (plus graph checks on --graph if given); nonzero exit on failure."""
    from .verify import run_verify

    run = Run(ctx, "verify", {})
    checks = run_verify(run.opts["seed"], run.graph)
    body = [c.line() for c in checks]
    bad = sum(not c.ok for c in checks)
    body.append(f"summary {len(checks) - bad} passed {bad} failed")
    _emit(run, body)
    if bad:
        sys.exit(3)


if __name__ == "__main__":
    main()
