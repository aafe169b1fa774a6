import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gogrd.errors import SupportOutsideDomain
from gogrd.freeproduct import FreeProduct, build_normal_sets, hat_lift, magic_pair
from gogrd.rd import SupportedFunction, l2_norm_sq, random_function
from gogrd.scenarios import load_graph

from .strategies import loops, sequences, words

GRAPHS = ["g0", "g1-bs12", "oneedge"]


@pytest.fixture(scope="module")
def normal_sets():
    return {sid: build_normal_sets(load_graph(sid), 3) for sid in GRAPHS}


@pytest.mark.parametrize("sid", GRAPHS)
def test_free_product_axioms(sid):
    fp = FreeProduct(load_graph(sid))

    @given(words(fp, 6), words(fp, 6), words(fp, 6))
    def check(a, b, c):
        assert fp.mul(fp.mul(a, b), c) == fp.mul(a, fp.mul(b, c))
        assert fp.mul(a, fp.inv(a)) == fp.identity
        assert fp.check(a) == a

    check()


@pytest.mark.parametrize("sid", GRAPHS)
def test_projection_is_a_homomorphism(sid):
    graph = load_graph(sid)
    fp = FreeProduct(graph)

    @settings(max_examples=40)
    @given(loops(graph, 4, 2), loops(graph, 4, 2))
    def check(s, t):
        a, b = fp.from_sequence(s), fp.from_sequence(t)
        assert fp.project(a) == graph.pi1_element(s)
        assert fp.project(fp.mul(a, b)) == graph.pi1_multiply(graph.pi1_element(s), graph.pi1_element(t))

    check()


@pytest.mark.parametrize("sid", GRAPHS)
def test_from_sequence_length_is_gamma_length(sid):
    graph = load_graph(sid)
    fp = FreeProduct(graph)

    @given(sequences(graph, 4, 3))
    def check(s):
        # edge syllables only cancel across a trivial label, which reduction removes
        assert fp.length(fp.from_sequence(s)) <= graph.gamma_length(s)
        r = graph.reduce(s)
        assert fp.length(fp.from_sequence(r)) == graph.gamma_length(r)

    check()


@pytest.mark.parametrize("sid", GRAPHS)
def test_normal_sets_are_sections(sid, normal_sets):
    ns = normal_sets[sid]
    fp = ns.free_product
    assert len(set(ns.gamma_set.values())) == len(ns)
    for g in ns.domain:
        hat = ns.hat(g)
        assert fp.project(hat) == g
        assert ns.hat_lengths[g] >= ns.lengths[g]


@pytest.mark.parametrize("sid", GRAPHS)
def test_consequence_curve_dominates_radius(sid, normal_sets):
    curve = normal_sets[sid].consequence_curve()
    assert [r for r, _ in curve] == list(range(4))
    assert all(v >= r for r, v in curve)


def test_hat_outside_domain():
    ns = build_normal_sets(load_graph("g1-bs12"), 1)
    far = load_graph("g1-bs12").pi1_element(load_graph("g1-bs12").parse_path("x^5"))
    with pytest.raises(SupportOutsideDomain):
        ns.hat(far)


def test_hat_lift_preserves_norm(normal_sets):
    ns = normal_sets["g0"]
    rng = random.Random(3)
    f = random_function(ns.pi1, ns.domain[:20], rng)
    assert l2_norm_sq(hat_lift(ns, f)) == l2_norm_sq(f)


@pytest.mark.parametrize("sid", GRAPHS)
@pytest.mark.parametrize("rational", [False, True])
def test_magic_pair_is_exact(sid, rational, normal_sets):
    ns = normal_sets[sid]
    small = [g for g in ns.domain if ns.lengths[g] <= 1]
    rng = random.Random(f"{sid}:{rational}")
    for _ in range(5):
        f = random_function(ns.pi1, small, rng, rational=rational)
        g = random_function(ns.pi1, small, rng, rational=rational)
        result = magic_pair(ns, f, g)
        assert result.exact
        assert result.FG_norm_sq == result.fg_norm_sq


def test_magic_pair_needs_covering_radius():
    ns = build_normal_sets(load_graph("g0"), 1)
    ring = [g for g in ns.domain if ns.lengths[g] == 1]
    f = SupportedFunction.indicator(ns.pi1, ring)
    with pytest.raises(SupportOutsideDomain):
        magic_pair(ns, f, f)


@given(st.integers(1, 4))
def test_magic_pair_deltas(k):
    ns = build_normal_sets(load_graph("g1-bs12"), 2)
    graph = ns.graph
    x = graph.pi1_element(graph.parse_path("x"))
    f = SupportedFunction.delta(ns.pi1, x, k)
    result = magic_pair(ns, f, f)
    assert result.exact and result.fg_norm_sq == k**4
