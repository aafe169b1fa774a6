import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gogrd.distortion import (
    classify_growth,
    crossing_distortion_curve,
    disto_curve,
    fiber_growth_curve,
    reduced_paths,
    seemingly_distortion_scan,
    separation_scan,
    tight_dynamics_scan,
    witness_curve,
)
from gogrd.errors import TooFewSamples
from gogrd.groups import BaumslagSolitar, FreeAbelian, FreeByCyclic, FreeGroup
from gogrd.scenarios import load_graph
from gogrd.subgroups import LatticeOracle, StallingsOracle, cyclic_oracle

BS2 = BaumslagSolitar(2)
F2 = FreeGroup(["a", "b"])
Z2 = FreeAbelian(2, ["a", "b"])
G5_IMAGES = {"x1": "x1 x2^2 x3^3", "x2": "x2 x3^4", "x3": "x3"}


@pytest.mark.parametrize(
    "fn,label",
    [
        (lambda n: 7.0, "bounded"),
        (lambda n: 3 * n, "polynomial"),
        (lambda n: n**2 + n, "polynomial"),
        (lambda n: 2.0**n, "at-least-exponential"),
        (lambda n: 1.5**n + n, "at-least-exponential"),
    ],
)
def test_classify_synthetic(fn, label):
    assert classify_growth([(n, fn(n)) for n in range(1, 13)]).label == label


def test_classify_degree():
    cls = classify_growth([(n, n**3) for n in range(1, 13)])
    assert abs(cls.degree - 3) < 0.5


@given(st.floats(0.01, 1000), st.sampled_from([1, 2, 3]), st.booleans())
def test_classify_is_scale_invariant(c, k, exponential):
    pts = [(n, (2.0**n if exponential else float(n**k))) for n in range(1, 13)]
    scaled = [(n, c * v) for n, v in pts]
    assert classify_growth(scaled).label == classify_growth(pts).label


def test_classify_needs_samples():
    with pytest.raises(TooFewSamples):
        classify_growth([(1, 1), (2, 2)])


def test_bs_disto_lower_bound():
    curve = disto_curve(BS2, cyclic_oracle(BS2, BS2.parse("x")), 10)
    by_n = {p.n: p for p in curve.samples}
    # x^16 = t^3 x^2 t^-3 has length 8
    assert by_n[8].radius >= 16
    assert by_n[9].disto >= 16 / 9
    assert curve.classification.label == "at-least-exponential"
    assert all(row["ok"] for row in curve.cross_check)


def test_undistorted_line():
    curve = disto_curve(Z2, LatticeOracle(Z2, [(1, 0)]), 10)
    assert all(p.disto == 1.0 for p in curve.samples)
    assert curve.classification.label == "bounded"


def test_free_factor_undistorted():
    curve = disto_curve(F2, StallingsOracle(F2, [F2.parse("a")]), 8)
    assert all(p.radius == p.n for p in curve.samples)


def test_disto_truncates_on_budget():
    curve = disto_curve(F2, StallingsOracle(F2, [F2.parse("a")]), 9, budget=500)
    assert curve.truncated and curve.reached < 9


def test_witness_curve_running_max():
    assert witness_curve([(3, 5), (1, 2), (5, 4)]) == [(1, 2), (2, 2), (3, 5), (4, 5), (5, 5)]


def _alpha_power_length(n):
    """Letter counts of alpha^n(x1) by iterating the substitution on counts."""
    counts = {"x1": 1, "x2": 0, "x3": 0}
    for _ in range(n):
        nxt = {"x1": 0, "x2": 0, "x3": 0}
        for letter, c in counts.items():
            for tok in G5_IMAGES[letter].split():
                name, _, exp = tok.partition("^")
                nxt[name] += c * int(exp or 1)
        counts = nxt
    return sum(counts.values())


def test_fiber_growth_quadratic():
    group = FreeByCyclic(["x1", "x2", "x3"], G5_IMAGES)
    points, witnesses, cls = fiber_growth_curve(group, "x1", 8)
    for n, (x, v) in enumerate(points):
        assert x == 2 * n + 1
        assert v == _alpha_power_length(n) == 4 * n * n + n + 1
    assert witnesses[2] == "t^2 x1 t^-2"
    assert cls.label == "polynomial" and abs(cls.degree - 2) < 0.5


def test_crossing_distortion_oneedge():
    graph = load_graph("oneedge")
    curve = crossing_distortion_curve(graph, ("e", 1), 10)
    # frozen from an exhaustive ball scan
    assert [p.radius for p in curve.samples] == [1, 2, 3, 4, 6, 8, 12, 16, 24, 32]
    assert curve.classification.label == "at-least-exponential"


def test_reduced_paths_no_backtracking():
    graph = load_graph("g1-bs12")
    paths = reduced_paths(graph, "v", 3)
    assert len(paths) == 2
    assert all(p[i + 1] != (p[i][0], -p[i][1]) for p in paths for i in range(2))


@pytest.mark.parametrize("sid", ["g0", "g1-bs12", "seemexp"])
def test_seemingly_trivial_path_ratio_is_one(sid):
    pts = seemingly_distortion_scan(load_graph(sid), 1, sample_budget=10)
    assert pts[0].n == 0 and pts[0].worst == 1.0
    assert all(p.worst > 0 for p in pts)


def test_tight_dynamics_rejects_loops():
    with pytest.raises(ValueError):
        tight_dynamics_scan(load_graph("g1-bs12"), ("e", 1), (0,))


def test_tight_dynamics_constant_at_least_one():
    graph = load_graph("g3-sol-amalgam")
    w = graph.terminus(("e", 1))
    rep = tight_dynamics_scan(graph, ("e", 1), graph.group_at(w).parse("s"), sample_budget=20, radius=3)
    assert all(c >= 1.0 for c in rep.constants.values())
    assert len(rep.samples) + rep.auto_satisfied + rep.discarded <= 20


def test_separation_free_factors():
    h_i = StallingsOracle(F2, [F2.parse("a")])
    h_j = StallingsOracle(F2, [F2.parse("b")])
    us = [F2.identity, F2.parse("a b"), F2.parse("b a")]
    rep = separation_scan(F2, h_i, h_j, us, 5)
    n, c = rep.best()
    assert c != math.inf and c >= 1.0
    assert rep.constants[n] == c
    assert len(rep.pairs) == 3


def test_separation_excludes_same_family():
    h = LatticeOracle(Z2, [(1, 0)])
    rep = separation_scan(Z2, h, h, [(0, 0), (3, 0), (0, 1)], 4, same_family=True)
    assert rep.excluded == 2
    assert len(rep.pairs) == 1
