import copy
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gogrd.errors import BudgetExceeded, ConfigParse, NotWellDefined
from gogrd.gog import GraphOfGroups, GSequence, Pi1Group, validate
from gogrd.groups import BaumslagSolitar, ball_enumerate
from gogrd.scenarios import get_scenario, graph_scenarios, load_graph

from .strategies import loops, sequences

BS2 = BaumslagSolitar(2)
SMALL = ["g0", "g1-bs12", "g2-formanek-procesi", "oneedge", "seemexp"]


def _to_bs(graph, s):
    """Loop in the HNN graph of BS(1,2) as a word in x, t (the edge is t)."""
    tokens = [f"x^{s.labels[0][0]}"]
    for e, g in zip(s.edges, s.labels[1:]):
        tokens.append("t" if e[1] > 0 else "t^-1")
        tokens.append(f"x^{g[0]}")
    return BS2.parse(" ".join(tokens))


@pytest.mark.parametrize("sid", graph_scenarios())
def test_bundled_graphs_validate(sid):
    assert validate(get_scenario(sid)["graph"]) == []


@pytest.mark.parametrize("sid", SMALL)
def test_reduction_is_confluent(sid):
    graph = load_graph(sid)

    @given(sequences(graph, 5, 2), st.integers(0, 10**6))
    def check(s, seed):
        left = graph.reduce(s)
        rand = graph.reduce(s, order="random", rng=random.Random(seed))
        assert graph.is_reduced(left) and graph.is_reduced(rand)
        assert left.edge_length == rand.edge_length
        assert graph.pi1_equal_paths(left, rand)
        assert graph.reduce(left) == left
        assert graph.canonical(left) == graph.canonical(rand) == graph.canonical(s)

    check()


@pytest.mark.parametrize("sid", SMALL)
def test_pi1_group_axioms(sid):
    graph = load_graph(sid)
    group = Pi1Group(graph)

    @settings(max_examples=30)
    @given(loops(graph, 4, 2), loops(graph, 4, 2), loops(graph, 4, 2))
    def check(a, b, c):
        a, b, c = graph.pi1_element(a), graph.pi1_element(b), graph.pi1_element(c)
        assert group.mul(group.mul(a, b), c) == group.mul(a, group.mul(b, c))
        assert group.mul(a, group.inv(a)) == group.identity
        assert group.mul(group.identity, a) == a

    check()


def test_pi1_length_matches_baumslag_solitar():
    graph = load_graph("g1-bs12")
    spheres = graph.pi1_ball(5)
    table = ball_enumerate(BS2, 5)
    assert [len(s) for s in spheres] == [len(s) for s in table.spheres]
    for r, sphere in enumerate(spheres):
        for s in sphere:
            assert table.lengths[_to_bs(graph, s)] == r


@given(st.integers(-20, 20), st.integers(0, 3))
def test_pi1_length_at_most_gamma_length(k, n):
    graph = load_graph("g1-bs12")
    s = graph.parse_path(f"e^{n} x^{k} e^-{n}") if n else graph.parse_path(f"x^{k}")
    lg = graph.pi1_word_length(s, cutoff=16)
    assert lg is not None and lg <= graph.gamma_length(s)
    assert lg == BS2.word_length(_to_bs(graph, s))


def test_gamma_length_counts_first_label():
    graph = load_graph("g0")
    s = graph.parse_path("x1 e x2^2")
    assert graph.gamma_length(s) == 1 + 1 + 2


def test_crossing_not_well_defined_index():
    graph = load_graph("g1-bs12")
    e, ebar = ("e", 1), ("e", -1)
    x = graph.group_at("v")
    # c_e halves even powers of x; c_ebar doubles
    assert graph.crossing_path([e, e], x.parse("x^4")) == x.parse("x")
    assert graph.crossing_path([ebar] * 3, x.parse("x^3")) == x.parse("x^24")
    with pytest.raises(NotWellDefined) as info:
        graph.crossing_path([e, e, e, e], x.parse("x^4"))
    assert info.value.index == 3
    assert graph.is_maximal([e, e], x.parse("x^4"), e)
    assert not graph.is_maximal([e], x.parse("x^4"), e)


def test_local_tree_is_a_tree():
    graph = load_graph("g1-bs12")
    tree = graph.local_tree(2, rep_cutoff=2)
    assert tree.is_tree()
    # valence 3 in the Bass-Serre tree of BS(1,2): two cosets one way, one the other
    assert len(tree.children(tree.root)) == 3


def test_pi1_ball_budget_partial():
    graph = GraphOfGroups.from_config(get_scenario("g0")["graph"])
    with pytest.raises(BudgetExceeded) as info:
        graph.pi1_ball(6, budget=200)
    partial = info.value.partial
    assert len(partial) == info.value.reached + 1
    assert graph.pi1_ball(2)[:2] == partial[:2]


def test_config_round_trip():
    graph = load_graph("g0")
    again = GraphOfGroups.from_config(copy.deepcopy(graph.to_config()))
    assert again.to_config() == graph.to_config()
    assert [len(s) for s in again.pi1_ball(2)] == [len(s) for s in graph.pi1_ball(2)]


def test_validate_reports_oracle_mismatch():
    cfg = get_scenario("g0")["graph"]
    cfg["edges"][0]["backend_bar"] = {"kind": "factor"}
    cfg["edges"][0]["iota_bar"] = {"a1": "x1", "a2": "x2"}
    cfg["edges"][0]["iota"] = {"a1": "x1", "a2": "x2"}
    assert validate(cfg) == []
    cfg["edges"][0]["backend"] = {"kind": "bounded", "cutoff": 0}
    codes = {d.code for d in validate(cfg)}
    assert codes == {"EmbeddingOracleMismatch"}


@pytest.mark.parametrize(
    "mutate,code",
    [
        (lambda c: c["edges"][0].update(target="nowhere"), "GraphIllFormed"),
        (lambda c: c["edges"][0]["iota"].pop("a2"), "GraphIllFormed"),
        (lambda c: c["edges"][0]["iota"].update(a3="x1"), "GraphIllFormed"),
        (lambda c: c["edges"][0].pop("backend"), "ConfigParse"),
        (lambda c: c["edges"][0]["iota"].update(a1="zz"), "ConfigParse"),
        (lambda c: c.update(vertices={}), "GraphIllFormed"),
    ],
)
def test_validate_injected_faults(mutate, code):
    cfg = get_scenario("g0")["graph"]
    mutate(cfg)
    diags = validate(cfg)
    assert code in {d.code for d in diags}
    with pytest.raises(ConfigParse):
        GraphOfGroups.from_config(cfg)


def test_sequence_shape_checked():
    with pytest.raises(ValueError):
        GSequence("v", (), ())
    graph = load_graph("g1-bs12")
    with pytest.raises(ValueError):
        graph.check_sequence(GSequence("w", ((0,),)))


@pytest.mark.parametrize("n", [4, 5, 6])
def test_conjugation_identity_depends_on_generators(n):
    from gogrd.scenarios import SEEMEXP_REDUNDANT

    k = 2 ** (n - 2)
    word = f"e y3 e^-1 x3 x1^{k} x3^-1 e y3^-1 e^-1"
    plain = load_graph("seemexp")
    redundant = GraphOfGroups.from_config(SEEMEXP_REDUNDANT)
    assert plain.gamma_length(plain.parse_path(word), cutoff=200) == k + 8
    # with x2 = x3 x1 x3^-1 a generator the middle label costs k, not k + 2
    assert redundant.gamma_length(redundant.parse_path(word), cutoff=200) == k + 6
    assert redundant.pi1_equal(redundant.parse_path(word), redundant.parse_path(f"x1^{2 ** n}"))
