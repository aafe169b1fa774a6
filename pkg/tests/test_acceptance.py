"""Acceptance criteria 1-11, each printing one PASS/FAIL line."""

import json
import os
import random
import subprocess
import sys
import time
from fractions import Fraction


from gogrd import report as rep
from gogrd.anosov import AnosovMap, min_iterate_window, shortening_violations
from gogrd.distortion import classify_growth, disto_curve, fiber_growth_curve
from gogrd.freeproduct import build_normal_sets, hat_lift, magic_pair
from gogrd.gog import GSequence, Pi1Group
from gogrd.groups import BaumslagSolitar, FreeAbelian, FreeByCyclic, FreeGroup, SemidirectZ2Z, ball_enumerate, cached_ball
from gogrd.rd import SupportedFunction, amenable_lower_bound, l2_norm_sq, random_function, rd_ratio_curve
from gogrd.scenarios import graph_scenarios, load_graph, scenario_ids
from gogrd.subgroups import FiberOracle, StallingsOracle, brute_force_subgroup, cyclic_oracle

from .conftest import ACCEPTANCE


def _verdict(k, ok, elapsed, limit, detail):
    in_time = elapsed < limit
    line = f"criterion {k:>2}: {'PASS' if ok and in_time else 'FAIL'} ({elapsed:.1f}s < {limit}s: {in_time}) {detail}"
    ACCEPTANCE[k] = line
    print(line)
    assert ok, line
    assert in_time, line


def test_criterion_01_exact_length_identity():
    t0 = time.perf_counter()
    graph = load_graph("seemexp")
    rows = []
    for n in (4, 5, 6):
        k = 2 ** (n - 2)
        lhs_seq = graph.parse_path(f"e y3 e^-1 x3 x1^{k} x3^-1 e y3^-1 e^-1")
        target = graph.parse_path(f"x1^{2 ** n}")
        lhs = graph.gamma_length(lhs_seq, cutoff=2**n + 64)
        rhs = Fraction(graph.gamma_length(target, cutoff=2**n + 64), 4) + 8
        # four edges, y3 twice and x3 x1^k x3^-1: k + 8
        rows.append(lhs == rhs == k + 8 and graph.pi1_equal(lhs_seq, target))
    _verdict(1, all(rows), time.perf_counter() - t0, 10, f"n=4,5,6 identity and pi1_equal: {rows}")


def test_criterion_02_bs_distortion():
    t0 = time.perf_counter()
    bs = BaumslagSolitar(2)
    x = bs.parse("x")
    table = ball_enumerate(bs, 11)
    # frozen from an affine-map BFS independent of the package
    expected = [1, 2, 4, 6, 8, 10]
    lengths = [table.lengths[bs.power(x, 2**n)] for n in range(6)]
    bounded = all(lengths[n] <= 2 * n + 1 for n in range(6))
    curve = disto_curve(bs, cyclic_oracle(bs, x), 13)
    label = curve.classification.label
    ok = lengths == expected and bounded and label == "at-least-exponential"
    _verdict(2, ok, time.perf_counter() - t0, 120, f"L(x^2^n)={lengths}, disto {label}")


def test_criterion_03_sol_fiber():
    t0 = time.perf_counter()
    sol = SemidirectZ2Z([[2, 1], [1, 1]])
    oracle = FiberOracle(sol, [sol.parse("e1"), sol.parse("e2")], FreeAbelian(2))
    witnesses = []
    for n in range(1, 7):
        g = sol.parse(f"t^{n} e1 t^-{n}")
        lh = sum(abs(c) for c in oracle.preimage(g))
        lg = sol.word_length(g, cutoff=2 * n + 1)
        witnesses.append((2 * n + 1, lh, lg is not None))
    curve = disto_curve(sol, oracle, 13)
    label = curve.classification.label
    wit_label = classify_growth([(x, v) for x, v, _ in witnesses]).label
    ok = all(w[2] for w in witnesses) and label == "at-least-exponential" and wit_label == label
    _verdict(3, ok, time.perf_counter() - t0, 120, f"witness L_H={[w[1] for w in witnesses]}, disto {label}")


def test_criterion_04_polynomial_fiber():
    t0 = time.perf_counter()
    group = FreeByCyclic(["x1", "x2", "x3"], {"x1": "x1 x2^2 x3^3", "x2": "x2 x3^4", "x3": "x3"})
    points, _, cls = fiber_growth_curve(group, "x1", 12)
    ok = cls.label == "polynomial" and 1.5 <= cls.degree <= 2.5
    _verdict(4, ok, time.perf_counter() - t0, 60, f"{cls.label} degree {cls.degree:.3f}")


def test_criterion_05_anosov():
    t0 = time.perf_counter()
    phi = AnosovMap([[2, 1], [1, 1]])
    rng = random.Random("criterion-5")
    worst = 0.0
    for _ in range(100):
        g = (0, 0)
        while g == (0, 0):
            g = (rng.randint(-100, 100), rng.randint(-100, 100))
        worst = max(worst, abs(phi.slope(phi.apply(g)) / (phi.lam**2 * phi.slope(g)) - 1))
    # the equivalence exactly as stated: |phi g| < |g|  <=>  sl(g) < lambda
    stated = len(shortening_violations(phi, 50, threshold=phi.lam))
    corrected = len(shortening_violations(phi, 50))
    growth_ok = True
    for gamma in [(1, 0), (0, 1), (1, 1), (3, -5), (8, 5)]:
        w = min_iterate_window(phi, gamma, 12)
        growth_ok &= w.strict_outside and all(abs(v / phi.lam - 1) <= 0.05 for v in w.growth.values())
    ok = worst <= 1e-9 and stated == 0 and growth_ok
    detail = (
        f"slope rel err {worst:.1e}; stated equivalence violations {stated} "
        f"(threshold 1/lambda: {corrected}); windows and growth ok: {growth_ok}"
    )
    _verdict(5, ok, time.perf_counter() - t0, 30, detail)


def test_criterion_06_magic_exactness():
    t0 = time.perf_counter()
    results = {}
    for sid in ("g0", "g1-bs12"):
        ns = build_normal_sets(load_graph(sid), 4)
        support = [g for g, k in ns.lengths.items() if k <= 2]
        rng = random.Random(f"criterion-6:{sid}")
        exact = 0
        for _ in range(50):
            f = random_function(ns.pi1, support, rng, density=0.5, rational=True)
            g = random_function(ns.pi1, support, rng, density=0.5, rational=True)
            exact += magic_pair(ns, f, g).exact
        results[sid] = exact
    ok = all(v == 50 for v in results.values())
    _verdict(6, ok, time.perf_counter() - t0, 120, f"exact pairs {results}")


def test_criterion_07_hat_isometry():
    t0 = time.perf_counter()
    bad = []
    for sid in graph_scenarios():
        ns = build_normal_sets(load_graph(sid), 3)
        for r in range(4):
            f = SupportedFunction.indicator(ns.pi1, [g for g, k in ns.lengths.items() if k <= r])
            if l2_norm_sq(hat_lift(ns, f)) != l2_norm_sq(f):
                bad.append((sid, r))
    _verdict(7, not bad, time.perf_counter() - t0, 60, f"{len(graph_scenarios())} scenarios, failures {bad}")


def test_criterion_08_haagerup():
    t0 = time.perf_counter()
    curve = rd_ratio_curve(FreeGroup(["a", "b"]), 4, "random-nonneg", samples=16, seed=0)
    pairs = sum(p.samples for p in curve.points)
    worst = {p.r: round(p.ratio, 4) for p in curve.points}
    ok = pairs >= 1000 and all(p.ratio <= p.r + 1 for p in curve.points)
    _verdict(8, ok, time.perf_counter() - t0, 180, f"{pairs} pairs, worst ratio by r {worst}")


def test_criterion_09_rd_obstruction():
    t0 = time.perf_counter()
    z = FreeAbelian(1)
    fractions = []
    for r in range(1, 6):
        _, value = amenable_lower_bound(z, r, 8 * r)
        fractions.append(value / len(cached_ball(z, r).ball(r)))
    bs = BaumslagSolitar(2)
    x = bs.parse("x")
    oracle = cyclic_oracle(bs, x)

    def f_support(k):
        return [g for g in cached_ball(bs, k).ball(k) if oracle.contains(g)]

    def g_support(k, _big):
        # Foelner sets of <x>: intervals 8 times wider than supp f
        top = max(abs(g[0]) for g in f_support(k))
        return [bs.power(x, j) for j in range(-8 * top, 8 * top + 1)]

    curve = rd_ratio_curve(bs, 8, "folner-indicator", samples=4, f_support=f_support, g_support=g_support)
    label = curve.classification.label
    ok = min(fractions) >= 0.9 and label == "at-least-exponential"
    _verdict(9, ok, time.perf_counter() - t0, 300, f"min fraction Z {min(fractions):.4f}, BS Foelner RD {label}")


def _random_sequence(graph, rng, max_edges=6):
    vertex = graph.base
    labels, edges = [], []

    def word(v):
        group = graph.group_at(v)
        gens = [g for _, g in group.symmetric_generators()]
        return group.product(rng.choice(gens) for _ in range(rng.randint(0, 2)))

    labels.append(word(vertex))
    for _ in range(rng.randint(0, max_edges)):
        e = rng.choice(graph.edges_from(vertex))
        edges.append(e)
        vertex = graph.terminus(e)
        # bias towards backtracking so reductions actually fire
        if rng.random() < 0.5 and edges and len(edges) < max_edges:
            back = (e[0], -e[1])
            data = graph.edges[e[0]]
            h = data.group.product(rng.choice([g for _, g in data.group.symmetric_generators()]) for _ in range(2))
            labels.append(graph.iota(e, h))
            edges.append(back)
            vertex = graph.terminus(back)
        labels.append(word(vertex))
    return GSequence(graph.base, tuple(labels), tuple(edges))


def test_criterion_10_calculus_soundness():
    t0 = time.perf_counter()
    failures = []
    reductions = 0
    for sid in graph_scenarios():
        graph = load_graph(sid)
        rng = random.Random(f"criterion-10:{sid}")
        for _ in range(200):
            s = _random_sequence(graph, rng)
            left = graph.reduce(s)
            rand = graph.reduce(s, order="random", rng=rng)
            reductions += s.edge_length - left.edge_length
            if left.edges != rand.edges:
                failures.append((sid, "confluence"))
            if not graph.pi1_equal_paths(left, rand) or graph.reduce(left) != left:
                failures.append((sid, "idempotence"))
        if graph.has_canonical_forms:
            pi1 = Pi1Group(graph)
            loops = []
            while len(loops) < 30:
                s = _random_sequence(graph, rng, 4)
                if graph.end(s) == graph.base:
                    loops.append(graph.pi1_element(s))
            for a, b, c in zip(loops, loops[1:], loops[2:]):
                if pi1.mul(pi1.mul(a, b), c) != pi1.mul(a, pi1.mul(b, c)) or pi1.mul(a, pi1.inv(a)) != pi1.identity:
                    failures.append((sid, "axioms"))
    f2 = FreeGroup(["a", "b"])
    ball = ball_enumerate(f2, 6).ball(6)
    for gens in (["a^2", "b"], ["a b", "b a^-1"], ["a b a^-1", "b^2 a"]):
        images = [f2.parse(w) for w in gens]
        oracle = StallingsOracle(f2, images)
        brute = brute_force_subgroup(f2, images, 8)
        if not all(oracle.contains(g) for g in brute):
            failures.append((gens, "stallings-member"))
        for g in ball:
            pre = oracle.preimage(g) if oracle.contains(g) else None
            if (pre is not None and len(pre) <= 8) != (g in brute):
                failures.append((gens, "stallings-brute"))
    detail = f"{len(graph_scenarios())} scenarios x 200 sequences ({reductions} cancelled edges), failures {failures[:5]}"
    _verdict(10, not failures, time.perf_counter() - t0, 180, detail)


def test_criterion_11_determinism(tmp_path):
    t0 = time.perf_counter()
    differ = []
    for sid in scenario_ids():
        procs = []
        for i, hashseed in enumerate(("1", "2")):
            env = dict(os.environ, PYTHONHASHSEED=hashseed)
            cmd = [sys.executable, "-m", "gogrd.cli", "run", sid, "--format", "json", "--out-dir", str(tmp_path / str(i))]
            procs.append(subprocess.Popen(cmd, env=env, stdout=subprocess.DEVNULL, stderr=subprocess.PIPE))
        codes = [p.wait() for p in procs]
        texts = [rep.strip_timestamp((tmp_path / str(i) / f"{sid}.json").read_text()) for i in range(2)]
        if codes != [0, 0] or texts[0] != texts[1]:
            differ.append(sid)
        assert json.loads(texts[0])["scenario"] == sid
    elapsed = time.perf_counter() - t0
    _verdict(11, not differ, elapsed, 600, f"{len(scenario_ids())} scenarios, differing {differ}")
