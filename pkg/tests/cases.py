"""Pipeline fixtures shared by the tracks and acceptance tests."""

from canocyl.constants import experiment_profile
from canocyl.fixtures import cycle_graph, path_graph, reflection, rotation
from canocyl.graph import GraphAutomorphism, PreferredGeodesicFamily
from canocyl.tracks import parse_presentation, run_tracks, trivial_action
from canocyl.tracks.presentation import GroupAction

TORUS = "gen a b c\nrel a b c^-1\nrel b a c^-1\n"
Z2_FREE_Z2 = "gen a b c d e f\nrel a b c^-1\nrel b a c^-1\nrel d e f^-1\nrel e d f^-1\n"
KLEIN = "gen a b c\nrel a a c^-1\nrel b b c^-1\n"
FREE = "gen a b c\nrel a b c\n"


def _trivial(text, g, prof):
    pres = parse_presentation(text)
    return pres, trivial_action(g, pres, "v0"), PreferredGeodesicFamily(g), prof


def _rotated():
    g = cycle_graph(8)
    rho, rho2 = rotation(g, 8, 1), rotation(g, 8, 2)
    pres = parse_presentation(TORUS)
    act = GroupAction(g, {"a": rho, "b": rho, "c": rho2}, "v0")
    return pres, act, PreferredGeodesicFamily(g), experiment_profile(neighbor_threshold=0)


def _reflected():
    g = path_graph(5)
    s = reflection(5)
    pres = parse_presentation(TORUS)
    act = GroupAction(g, {"a": s, "b": s, "c": GraphAutomorphism.identity(g)}, "v0")
    return pres, act, PreferredGeodesicFamily(g), experiment_profile(neighbor_threshold=1)


CASES = {
    "torus": lambda: _trivial(TORUS, cycle_graph(6), experiment_profile(delta=1)),
    "torus_rotation": _rotated,
    "z2_free_z2": lambda: _trivial(Z2_FREE_Z2, cycle_graph(6), experiment_profile(delta=1)),
    "klein": lambda: _trivial(KLEIN, cycle_graph(6), experiment_profile(delta=1)),
    "free": lambda: _trivial(FREE, cycle_graph(6), experiment_profile(delta=1)),
    "reflection": _reflected,
}


def run_case(name, **kw):
    pres, act, fam, prof = CASES[name]()
    return run_tracks(pres, act, fam, prof, **kw)
