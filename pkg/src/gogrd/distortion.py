"""Empirical distortion measurements and a growth classifier.

Everything here is a finite scan: classifications come with witnesses and
are evidence, not proofs.  ``Disto(n)`` is reported as
``max{L_H(h) : h in H, L_G(h) <= n} / n``; the diameter of ``H cap B_G(n)``
in the metric of ``H`` is reported alongside it.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field

from .errors import BudgetExceeded, NoSamplesFound, NotWellDefined, TooFewSamples
from .gog import edge_label, reverse
from .groups import DEFAULT_BUDGET, FreeAbelian, cached_ball
from .subgroups import nearest_in_coset

# ----------------------------------------------------------------------
# growth classification


@dataclass
class Classification:
    label: str
    degree: float = None
    loglog_slope: float = None
    semilog_slope: float = None
    loglog_sse: float = None
    semilog_sse: float = None

    def to_dict(self):
        out = {"label": self.label}
        for key in ("degree", "loglog_slope", "semilog_slope", "loglog_sse", "semilog_sse"):
            value = getattr(self, key)
            if value is not None:
                out[key] = round(value, 6)
        return out

    def __str__(self):
        if self.label == "polynomial":
            return f"polynomial({self.degree:.2f} +- 0.5)"
        return self.label


def _fit(xs, ys):
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    if sxx == 0:
        return 0.0, my, 0.0
    slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx
    icpt = my - slope * mx
    sse = sum((y - (slope * x + icpt)) ** 2 for x, y in zip(xs, ys))
    return slope, icpt, sse


MIN_SAMPLES = 5
SLOPE_WINDOW = 0.5
PLATEAU = 0.05


def classify_growth(samples):
    """Classify ``[(n, value), ...]`` as bounded / polynomial / exponential.

    Both fits use the second half of the points (the asymptotic regime):
    ``log v`` against ``log n`` and against ``n``.  Polynomial needs the
    log-log fit to win and its slope to agree with the full-range slope
    within ``SLOPE_WINDOW``; exponential needs the semilog fit to win with
    positive slope.
    """
    pts = sorted((float(n), float(v)) for n, v in samples if n > 0 and v > 0)
    if len(pts) < MIN_SAMPLES:
        raise TooFewSamples(f"need at least {MIN_SAMPLES} positive samples, got {len(pts)}")
    tail = pts[len(pts) // 2 :]
    if len(tail) < 3:
        tail = pts[-3:]
    vals = [v for _, v in tail]
    if max(vals) - min(vals) <= PLATEAU * max(vals):
        return Classification("bounded", degree=0.0)
    lx = [math.log(n) for n, _ in tail]
    nx = [n for n, _ in tail]
    ly = [math.log(v) for _, v in tail]
    s_ll, _, e_ll = _fit(lx, ly)
    s_sl, _, e_sl = _fit(nx, ly)
    s_all, _, _ = _fit([math.log(n) for n, _ in pts], [math.log(v) for _, v in pts])
    common = dict(loglog_slope=s_ll, semilog_slope=s_sl, loglog_sse=e_ll, semilog_sse=e_sl)
    # a tiny tolerance keeps exact power laws from being misread through
    # floating-point noise in both residuals
    if e_ll <= e_sl + 1e-12:
        if abs(s_ll - s_all) <= SLOPE_WINDOW and s_ll > 0:
            return Classification("polynomial", degree=s_ll, **common)
        if s_ll <= 0:
            return Classification("bounded", degree=0.0, **common)
        return Classification("inconclusive", **common)
    if s_sl > 0:
        return Classification("at-least-exponential", **common)
    return Classification("inconclusive", **common)


# ----------------------------------------------------------------------
# Disto curves


@dataclass
class DistoPoint:
    n: int
    radius: int
    disto: float
    diameter: int
    size: int
    witness: object
    diameter_witness: tuple
    d_ratio: float

    def to_dict(self, fmt=repr):
        return {
            "n": self.n,
            "max_length": self.radius,
            "disto": self.disto,
            "diameter": self.diameter,
            "size": self.size,
            "witness": fmt(self.witness),
            "diameter_witness": [fmt(x) for x in self.diameter_witness] if self.diameter_witness else None,
            "D": self.d_ratio,
        }


@dataclass
class DistortionCurve:
    samples: list = field(default_factory=list)
    classification: Classification = None
    truncated: bool = False
    reached: int = None
    cross_check: list = field(default_factory=list)

    def values(self):
        return [(p.n, p.disto) for p in self.samples]

    def to_dict(self, fmt=repr):
        return {
            "points": [p.to_dict(fmt) for p in self.samples],
            "classification": self.classification.to_dict() if self.classification else None,
            "truncated": self.truncated,
            "reached": self.reached,
            "cross_check_2D_ge_disto_half": self.cross_check,
        }


def subgroup_length(oracle, g):
    """``L_H(g)`` in the edge group's basis, via the oracle preimage."""
    eg = oracle.edge_group
    h = oracle.preimage(g)
    if isinstance(eg, FreeAbelian):
        return sum(abs(c) for c in h)
    return eg.word_length(h, cutoff=10**9)


def _diameter(oracle, members):
    """Diameter of ``members`` in the subgroup metric, with a witness pair."""
    eg = oracle.edge_group
    if not members:
        return 0, ()
    pre = [(oracle.preimage(g), g) for g in members]
    if isinstance(eg, FreeAbelian):
        # L1 diameter = max over sign vectors of (max s.v - min s.v)
        best = (0, ())
        for signs in itertools.product((1, -1), repeat=eg.rank):
            if signs[0] < 0:
                continue
            proj = [(sum(s * c for s, c in zip(signs, h)), g) for h, g in pre]
            hi, lo = max(proj), min(proj)
            if hi[0] - lo[0] > best[0]:
                best = (hi[0] - lo[0], (lo[1], hi[1]))
        return best
    best = (0, ())
    for (h1, g1), (h2, g2) in itertools.combinations(pre, 2):
        d = eg.word_length(eg.mul(eg.inv(h1), h2), cutoff=10**9)
        if d > best[0]:
            best = (d, (g1, g2))
    return best


def disto_curve(group, oracle, n_max, budget=DEFAULT_BUDGET, classify=True):
    """Exact distortion data of ``H`` (the oracle's subgroup) in ``group``."""
    curve = DistortionCurve()
    try:
        table = cached_ball(group, n_max, budget)
        reached = n_max
    except BudgetExceeded as exc:
        table, reached = exc.partial, exc.reached
        curve.truncated = True
    curve.reached = reached
    members = []
    radius, witness = 0, group.identity
    d_best = 0.0
    diam_by_n = {}
    for n in range(reached + 1):
        for g in table.spheres[n]:
            if oracle.contains(g):
                members.append(g)
                lh = subgroup_length(oracle, g)
                if lh > radius:
                    radius, witness = lh, g
                if n:
                    d_best = max(d_best, lh / n)
        diam, pair = _diameter(oracle, members)
        diam_by_n[n] = diam
        if n == 0:
            continue
        curve.samples.append(DistoPoint(n, radius, radius / n, diam, len(members), witness, pair, d_best))
    # 2 D(n) >= diam(H cap B(n/2)) / (n/2), D the smallest nondecreasing bound
    for p in curve.samples:
        half = p.n // 2
        if half >= 1:
            curve.cross_check.append(
                {"n": p.n, "2D": 2 * p.d_ratio, "disto_half": diam_by_n[half] / half, "ok": 2 * p.d_ratio >= diam_by_n[half] / half - 1e-12}
            )
    if classify and len(curve.samples) >= MIN_SAMPLES:
        curve.classification = classify_growth(curve.values())
    return curve


def witness_curve(points):
    """Running-max curve from explicit ``(length bound, L_H)`` witnesses.

    Each point says some ``h`` with ``L_H(h) = value`` has ``L_G(h) <= n``;
    the result lower-bounds ``Disto(n) * n`` at every integer ``n``.
    """
    if not points:
        return []
    out = []
    best = 0
    pts = sorted(points)
    i = 0
    for n in range(1, int(pts[-1][0]) + 1):
        while i < len(pts) and pts[i][0] <= n:
            best = max(best, pts[i][1])
            i += 1
        if best:
            out.append((n, best))
    return out


def fiber_growth_curve(group, letter, n_max):
    """``(2n + 1, |alpha^n(x)|)`` for ``n <= n_max`` in ``F x|_alpha Z``.

    ``t^n x t^-n = alpha^n(x)`` has ambient length at most ``2n + 1`` and
    fiber length ``|alpha^n(x)|``, so each point is a distortion witness.
    """
    gens = dict(group.generators)
    x, t = gens[letter], gens[group.t_name]
    t_inv = group.inv(t)
    points, witnesses = [], []
    g = x
    for n in range(n_max + 1):
        points.append((2 * n + 1, len(g[0])))
        witnesses.append(f"{group.t_name}^{n} {letter} {group.t_name}^{-n}")
        g = group.mul(group.mul(t, g), t_inv)
    cls = classify_growth(points) if len(points) >= MIN_SAMPLES else None
    return points, witnesses, cls


def crossing_distortion_curve(graph, edge, n_max, budget=DEFAULT_BUDGET, cutoff=10**6):
    """``(n, max{L_i(e)(c_Ebar(g)) : g in iota_E(G_e), L_t(e)(g) <= n})``.

    Measures how much the crossing ``c_E`` compresses lengths: elements
    of the edge image at ``t(E)`` are pulled back to ``i(E)``.
    """
    src, dst = graph.origin(edge), graph.terminus(edge)
    gd = graph.group_at(dst)
    oracle = graph.oracle(edge)
    curve = DistortionCurve()
    try:
        table = cached_ball(gd, n_max, budget)
        reached = n_max
    except BudgetExceeded as exc:
        table, reached = exc.partial, exc.reached
        curve.truncated = True
    curve.reached = reached
    best, witness = 0, gd.identity
    for n in range(reached + 1):
        for g in table.spheres[n]:
            if not oracle.contains(g):
                continue
            a = graph.crossing(reverse(edge), g)
            la = graph.vertex_length(src, a, cutoff)
            if la is not None and la > best:
                best, witness = la, g
        if n:
            curve.samples.append(DistoPoint(n, best, best / n, best, 0, witness, (), best / n))
    if len(curve.samples) >= MIN_SAMPLES:
        curve.classification = classify_growth([(p.n, p.radius) for p in curve.samples])
    return curve


# ----------------------------------------------------------------------
# seemingly polynomial distortion


def reduced_paths(graph, start, length):
    """Reduced edge paths (no immediate backtracking) of the given length."""
    paths = [()]
    for _ in range(length):
        nxt = []
        for p in paths:
            v = graph.terminus(p[-1]) if p else start
            for e in graph.edges_from(v):
                if p and e == reverse(p[-1]):
                    continue
                nxt.append(p + (e,))
        paths = nxt
    return paths


@dataclass
class SeeminglyPoint:
    n: int
    worst: float
    samples: int
    witness: dict = None

    def to_dict(self):
        return {"n": self.n, "worst_ratio": self.worst, "samples": self.samples, "witness": self.witness}


def _edge_image_samples(graph, edge, rng, count, max_len):
    """Elements of ``iota_edge(G_e)`` from random edge-group words."""
    data = graph.edges[edge[0]]
    eg = data.group
    gens = [g for _, g in eg.symmetric_generators()]
    out = []
    for _ in range(count):
        h = eg.identity
        for _ in range(rng.randint(1, max_len)):
            h = eg.mul(h, rng.choice(gens))
        out.append(graph.iota(edge, h))
    return out


def seemingly_distortion_scan(graph, path_len_max, sample_budget=30, seed=0, max_word=6, cutoff=40):
    """Worst ``L(g) / L_Gamma(p h p^-1)`` over reduced paths ``p`` of each length.

    Samples are images of random edge-group words pushed along ``p`` by the
    crossing maps (the only ``g`` with ``[p h p^-1]`` in ``G_v``), plus
    vertex-ball elements for ``n = 0``.
    """
    rng = random.Random(seed)
    points = []
    for n in range(path_len_max + 1):
        worst, count, witness = None, 0, None
        for v in graph.vertices:
            group = graph.group_at(v)
            for p in reduced_paths(graph, v, n):
                if n == 0:
                    pool = [g for g in cached_ball(group, 2).ball(2) if g != group.identity]
                else:
                    pool = _edge_image_samples(graph, reverse(p[0]), rng, sample_budget, max_word)
                for g in pool:
                    try:
                        h = graph.crossing_path(list(p), g)
                    except NotWellDefined:
                        continue
                    lg = graph.vertex_length(v, g, cutoff)
                    lh = graph.vertex_length(graph.terminus(p[-1]) if p else v, h, cutoff)
                    if lg is None or lh is None or lg == 0:
                        continue
                    ratio = lg / (2 * n + lh)
                    count += 1
                    if worst is None or ratio > worst:
                        worst = ratio
                        witness = {
                            "vertex": v,
                            "path": [edge_label(e) for e in p],
                            "g": group.format(g),
                            "h": graph.group_at(graph.terminus(p[-1]) if p else v).format(h),
                            "L_g": lg,
                            "L_php": 2 * n + lh,
                        }
        if count:
            points.append(SeeminglyPoint(n, worst, count, witness))
        elif n == 0:
            raise NoSamplesFound("no samples for the trivial path")
    if not points:
        raise NoSamplesFound("no (g, p, h) triples found")
    return points


# ----------------------------------------------------------------------
# tight dynamics


@dataclass
class TightSample:
    a: object
    b: object
    lhs: int
    diff: int
    l_ba: int
    maximal_at: str

    def to_dict(self, fmt=repr):
        return {"a": fmt(self.a), "b": fmt(self.b), "lhs": self.lhs, "diff": self.diff, "L_ba": self.l_ba, "maximal_at": self.maximal_at}


@dataclass
class TightDynamicsReport:
    edge: tuple
    next_edge: tuple
    coset: object
    samples: list = field(default_factory=list)
    auto_satisfied: int = 0
    discarded: int = 0
    constants: dict = field(default_factory=dict)

    def c_emp(self, k=0):
        return self.constants.get(k)

    def to_dict(self, fmt=repr):
        return {
            "edge": edge_label(self.edge),
            "next_edge": edge_label(self.next_edge),
            "coset": fmt(self.coset),
            "samples": len(self.samples),
            "auto_satisfied": self.auto_satisfied,
            "discarded": self.discarded,
            "C_emp_by_K": {str(k): (None if c == math.inf else c) for k, c in sorted(self.constants.items())},
        }


def tight_dynamics_scan(graph, edge, coset_element, sample_budget=30, radius=5, near_radius=6, seed=0, cutoff=24):
    """Tight-dynamics check for ``e`` followed by the lift of ``f`` through ``h``.

    ``edge`` is the oriented edge ``e``; the next tree edge leaves
    ``t(e)`` along ``f`` at the coset ``h * iota_fbar(G_f)`` with
    ``h = coset_element``.  ``a, b`` run over structured elements of
    ``iota_ebar(G_e)`` inside the ball of ``radius``.
    """
    v, w = graph.origin(edge), graph.terminus(edge)
    if v == w:
        raise ValueError("tight dynamics scans are restricted to non-loop edges")
    nxt = reverse(edge)
    gw = graph.group_at(w)
    gv = graph.group_at(v)
    back = graph.oracle(reverse(edge))
    fbar_oracle = graph.oracle(edge)  # image of iota_e in G_w, the coset base of the next edge
    rng = random.Random(seed)
    pool = [g for g in cached_ball(gv, radius).ball(radius) if back.contains(g)]
    pool.sort(key=lambda g: (gv.word_length(g, cutoff), repr(g)))
    report = TightDynamicsReport(edge, nxt, coset_element)
    pairs = set()
    while len(pairs) < sample_budget and len(pairs) < len(pool) ** 2:
        pairs.add((rng.randrange(len(pool)), rng.randrange(len(pool))))
    for i, j in sorted(pairs):
        a, b = pool[i], pool[j]
        ca, cb = graph.crossing(edge, a), graph.crossing(edge, b)
        in_a = fbar_oracle.contains(gw.mul(gw.inv(coset_element), ca))
        in_b = fbar_oracle.contains(gw.mul(gw.inv(coset_element), cb))
        if in_a and in_b:
            report.discarded += 1
            continue
        maximal = "both" if not (in_a or in_b) else ("a" if not in_a else "b")
        af, da = nearest_in_coset(fbar_oracle, ca, coset_element, near_radius)
        bf, db = nearest_in_coset(fbar_oracle, cb, coset_element, near_radius)
        if af is None or bf is None:
            report.discarded += 1
            continue
        l_ba = gv.word_length(gv.mul(gv.inv(b), a), cutoff)
        l_f = gw.word_length(gw.mul(gw.inv(bf), af), cutoff)
        if l_ba is None or l_f is None:
            report.discarded += 1
            continue
        diff = l_ba - l_f
        if diff <= 0:
            report.auto_satisfied += 1
            continue
        report.samples.append(TightSample(a, b, da + db, diff, l_ba, maximal))
    ks = sorted({s.l_ba for s in report.samples} | {0})
    for k in ks:
        relevant = [s for s in report.samples if s.l_ba >= k]
        if not relevant:
            report.constants[k] = 1.0
            continue
        c = max((math.inf if s.lhs == 0 else s.diff / s.lhs) for s in relevant)
        report.constants[k] = max(1.0, c)
    return report


# ----------------------------------------------------------------------
# linear separation


@dataclass
class SeparationReport:
    pairs: list = field(default_factory=list)
    constants: dict = field(default_factory=dict)
    excluded: int = 0

    def best(self):
        """The fitting pair with the smallest ``C`` (earliest ``N`` on ties)."""
        finite = [(c, n) for n, c in sorted(self.constants.items()) if c != math.inf]
        if not finite:
            return None, math.inf
        c, n = min(finite)
        return n, c

    def to_dict(self):
        n, c = self.best()
        return {
            "pairs": self.pairs,
            "excluded": self.excluded,
            "C_emp_by_N": {str(k): (None if v == math.inf else v) for k, v in sorted(self.constants.items())},
            "best": {"N": n, "C": None if c == math.inf else c},
        }


def separation_scan(group, h_i, h_j, u_samples, radius, same_family=False, budget=DEFAULT_BUDGET):
    """Linear-separation evidence for ``H_i`` and ``u H_j``.

    ``L = d(H_i, u H_j)`` is minimized over ``gamma in H_i cap B(radius)``
    (a windowed minimum); every such ``gamma`` with ``L(gamma) >= N + L``
    must satisfy ``d(gamma, u H_j) >= L(gamma) / C``.
    """
    table = cached_ball(group, radius, budget)
    members = [g for g in table.ball(radius) if h_i.contains(g)]
    report = SeparationReport()
    rows = []
    for u in u_samples:
        if same_family and h_i.contains(u):
            report.excluded += 1
            continue
        search = 2 * radius + group.word_length(u, 64)
        dists = []
        for g in members:
            _, d = nearest_in_coset(h_j, g, u, search)
            # beyond the search radius only a lower bound is known, which
            # can only overstate the constant
            dists.append((table.lengths[g], search + 1 if d is None else d, g))
        finite = [d for _, d, _ in dists]
        big_l = min(finite)
        for lg, d, g in dists:
            rows.append((lg, big_l, d))
        report.pairs.append({"u": group.format(u), "L": big_l, "samples": len(dists)})
    for n_emp in range(radius + 1):
        relevant = [(lg, d) for lg, big_l, d in rows if lg >= n_emp + big_l and lg > 0]
        if not relevant:
            continue
        c = max((math.inf if not d else lg / d) for lg, d in relevant)
        report.constants[n_emp] = max(1.0, c)
    return report


__all__ = [
    "Classification",
    "classify_growth",
    "disto_curve",
    "DistortionCurve",
    "subgroup_length",
    "witness_curve",
    "fiber_growth_curve",
    "crossing_distortion_curve",
    "reduced_paths",
    "seemingly_distortion_scan",
    "tight_dynamics_scan",
    "TightDynamicsReport",
    "separation_scan",
    "SeparationReport",
]
