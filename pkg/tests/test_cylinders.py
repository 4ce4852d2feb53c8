import pytest

from canocyl.constants import experiment_profile
from canocyl.cylinders import (
    CoarsePiecewiseGeodesic,
    Subdivision,
    channels,
    cylinder,
    is_local_quasi_geodesic,
    is_quasi_geodesic,
    measure_kappa,
    reroute_interior,
    reroute_to_new_endpoint,
    validate_cptg,
)
from canocyl.errors import BudgetError, InputError
from canocyl.fixtures import cycle_graph, grid_graph, path_graph, random_tree
from canocyl.graph import PreferredGeodesicFamily
from oracles import brute_cylinder

PROFILES = [
    experiment_profile(),
    experiment_profile(epsilon=0, mu=1, l=1),
    experiment_profile(lam=3, mu=3, nu=3, l=3),
    experiment_profile(epsilon=2, mu=3, nu=6, l=2),
]


@pytest.mark.parametrize("prof", PROFILES, ids=["default", "eps0", "lam3", "eps2"])
@pytest.mark.parametrize(
    "g", [cycle_graph(8), grid_graph(3, 4), random_tree(14, 2), path_graph(6)], ids=["c8", "grid34", "tree", "path"]
)
def test_cylinder_matches_brute_force(g, prof):
    fam = PreferredGeodesicFamily(g)
    for x in g.vertices:
        for y in g.vertices:
            assert cylinder(x, y, prof.l, fam, prof).members == brute_cylinder(g, x, y, prof.l, prof), (x, y)


def test_cylinder_strictly_smaller_than_graph():
    g = cycle_graph(12)
    prof = experiment_profile()
    c = cylinder("v0", "v3", 2, PreferredGeodesicFamily(g), prof)
    assert c.members == frozenset({"v0", "v1", "v2", "v3"})


def test_witnesses_validate():
    g = grid_graph(4, 4)
    prof = experiment_profile(delta=3, neighbor_threshold=3)
    fam = PreferredGeodesicFamily(g)
    c = cylinder("g0_0", "g3_3", 2, fam, prof)
    assert set(c.witnesses) == set(c.members)
    for v, w in c.witnesses.items():
        assert v in w.path
        assert validate_cptg(w, fam, prof).ok


def test_cylinder_singleton_and_cache():
    g = cycle_graph(6)
    fam = PreferredGeodesicFamily(g)
    prof = experiment_profile()
    assert cylinder("v2", "v2", 2, fam, prof).members == {"v2"}
    assert cylinder("v0", "v3", 2, fam, prof) is cylinder("v0", "v3", 2, fam, prof)


def test_quasi_geodesic_predicates():
    g = cycle_graph(8)
    assert is_quasi_geodesic(g, ("v0", "v1", "v2"), 1)
    # a 5-step detour between points at distance 3
    p = ("v0", "v7", "v6", "v5", "v4", "v3")
    assert not is_quasi_geodesic(g, p, 1)
    assert is_quasi_geodesic(g, p, 2)
    assert is_local_quasi_geodesic(g, p, 2, 1)


def test_validate_reports_each_clause():
    g = cycle_graph(10)
    fam = PreferredGeodesicFamily(g)
    prof = experiment_profile()
    ok = CoarsePiecewiseGeodesic(("v0", "v1", "v2", "v3"), Subdivision.trivial(3), 2)
    assert validate_cptg(ok, fam, prof).ok

    hop = CoarsePiecewiseGeodesic(("v0", "v2"), Subdivision.trivial(1), 2)
    assert validate_cptg(hop, fam, prof).failures == ["walk"]

    # three pieces with a short interior piece (length 1 < l = 2)
    p = ("v0", "v1", "v2", "v3", "v4", "v5")
    short = CoarsePiecewiseGeodesic(p, Subdivision((0, 2, 2, 3, 3, 5)), 2)
    assert validate_cptg(short, fam, prof).failures == ["interior_length"]

    long_bridge = CoarsePiecewiseGeodesic(p, Subdivision((0, 1, 3, 5)), 2)
    assert validate_cptg(long_bridge, fam, prof).failures == ["bridge_length"]

    far = tuple(f"v{i}" for i in (0, 9, 8, 7, 6, 5, 4, 3))
    rep = validate_cptg(CoarsePiecewiseGeodesic(far, Subdivision.trivial(7), 2), fam, prof)
    assert "quasi_geodesic" in rep.failures and "neighborhood" in rep.failures


def test_validate_respects_family():
    g = cycle_graph(6)
    fam = PreferredGeodesicFamily(g, overrides={("v0", "v3"): [("v0", "v1", "v2", "v3")]})
    prof = experiment_profile(mu=3, nu=6)
    up = CoarsePiecewiseGeodesic(("v0", "v1", "v2", "v3"), Subdivision.trivial(3), 3)
    down = CoarsePiecewiseGeodesic(("v0", "v5", "v4", "v3"), Subdivision.trivial(3), 3)
    assert validate_cptg(up, fam, prof).ok
    assert "pieces_preferred" in validate_cptg(down, fam, prof).failures
    assert cylinder("v0", "v3", 3, fam, prof).members == {"v0", "v1", "v2", "v3"}


def test_subdivision_errors():
    with pytest.raises(InputError):
        Subdivision((0, 2, 3))
    with pytest.raises(InputError):
        Subdivision((0, 3, 2, 4))
    with pytest.raises(InputError):
        CoarsePiecewiseGeodesic(("a", "b"), Subdivision((0, 3)), 1)


def test_cylinder_input_errors():
    g = cycle_graph(6)
    fam = PreferredGeodesicFamily(g)
    with pytest.raises(InputError):
        cylinder("v0", "nope", 2, fam, experiment_profile())
    with pytest.raises(InputError):
        cylinder("v0", "v3", 0, fam, experiment_profile())


def test_cylinder_budget_partial():
    g = grid_graph(5, 5)
    fam = PreferredGeodesicFamily(g)
    with pytest.raises(BudgetError) as ei:
        cylinder("g0_0", "g4_4", 2, fam, experiment_profile(delta=4, neighbor_threshold=4), budget=30)
    assert isinstance(ei.value.partial, frozenset)
    assert ei.value.exit_code == 2


def test_channels_on_a_path():
    g = path_graph(10)
    fam = PreferredGeodesicFamily(g)
    prof = experiment_profile(epsilon=0)
    chs = channels("v0", "v9", 3, fam, prof)
    assert [c.core for c in chs] == [("v3", "v4", "v5", "v6")]
    assert chs[0].ambient == tuple(f"v{i}" for i in range(10))


def test_channels_on_a_cycle():
    g = cycle_graph(12)
    fam = PreferredGeodesicFamily(g)
    chs = channels("v0", "v6", 2, fam, experiment_profile(epsilon=0))
    assert len(chs) == 2
    with pytest.raises(InputError):
        channels("v0", "v6", 1, fam, experiment_profile())


def test_measure_kappa_path():
    g = path_graph(8)
    k = measure_kappa(PreferredGeodesicFamily(g), experiment_profile(epsilon=0), 2)
    assert k.value == 1 and k.method == "exhaustive"


def test_reroute_interior():
    g = cycle_graph(14)
    fam = PreferredGeodesicFamily(g)
    prof = experiment_profile(mu=2, nu=4)
    p = tuple(f"v{i}" for i in range(7))
    c = CoarsePiecewiseGeodesic(p, Subdivision.trivial(6), 2)
    r = reroute_interior(c, 5, fam, prof)
    assert r.path[0] == "v0" and r.path[-1] == "v6"
    assert validate_cptg(r, fam, prof).ok
    with pytest.raises(InputError):
        reroute_interior(c, 2, fam, prof)


def test_reroute_to_new_endpoint():
    g = path_graph(12)
    fam = PreferredGeodesicFamily(g)
    prof = experiment_profile(mu=2, nu=4)
    p = tuple(f"v{i}" for i in range(9))
    c = CoarsePiecewiseGeodesic(p, Subdivision.trivial(8), 2)
    r = reroute_to_new_endpoint(c, "v11", fam, prof)
    assert r.path[-1] == "v11" and r.path[:9] == p
    assert validate_cptg(r, fam, prof).ok
    short = CoarsePiecewiseGeodesic(p[:4], Subdivision.trivial(3), 2)
    with pytest.raises(InputError):
        reroute_to_new_endpoint(short, "v11", fam, prof)
