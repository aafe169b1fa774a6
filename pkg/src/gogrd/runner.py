"""Scenario runner: executes a scenario's experiment list into a report.

A report is a plain mapping (JSON-ready) plus a list of curves, each a
list of ``(x, value, witness)`` rows.  Every experiment runs under the
scenario seed, so a fixed seed gives an identical report.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import anosov as an
from .distortion import (
    classify_growth,
    crossing_distortion_curve,
    disto_curve,
    fiber_growth_curve,
    seemingly_distortion_scan,
    separation_scan,
    tight_dynamics_scan,
    witness_curve,
)
from .errors import BudgetExceeded, ConfigParse, GogError, NoSamplesFound
from .freeproduct import build_normal_sets, hat_lift, magic_pair
from .gog import GraphOfGroups, validate
from .groups import DEFAULT_BUDGET, FreeAbelian, SemidirectZ2Z, cached_ball, element_budget, from_config
from .rd import SupportedFunction, amenable_lower_bound, l2_norm_sq, random_function, rd_ratio_curve
from .scenarios import get_scenario
from .subgroups import FiberOracle, cyclic_oracle

SCHEMA_VERSION = 1


@dataclass
class Curve:
    name: str
    rows: list = field(default_factory=list)


@dataclass
class RunResult:
    report: dict
    curves: list

    @property
    def partial(self):
        return self.report["status"] != "complete"


class Context:
    """Lazily built objects shared by the experiments of one run."""

    def __init__(self, cfg, seed, samples, budget):
        self.cfg = cfg
        self.seed = seed
        self.samples = samples
        self.budget = budget
        self._graph = None
        self._group = None
        self._normal_sets = None

    @property
    def graph(self):
        if self._graph is None:
            if "graph" not in self.cfg:
                raise ConfigParse(f"scenario {self.cfg.get('id')!r} has no graph section")
            self._graph = GraphOfGroups.from_config(self.cfg["graph"], name=self.cfg.get("id"))
        return self._graph

    @property
    def group(self):
        if self._group is None:
            if "group" not in self.cfg:
                raise ConfigParse(f"scenario {self.cfg.get('id')!r} has no group section")
            self._group = from_config(self.cfg["group"])
        return self._group

    def rng(self, name):
        # one independent stream per experiment keeps reports stable when
        # experiments are added or reordered
        return random.Random(f"{self.seed}:{name}")

    def normal_sets(self, radius):
        if self._normal_sets is None or self._normal_sets.radius < radius:
            self._normal_sets = build_normal_sets(self.graph, radius, self.budget)
        return self._normal_sets

    def subgroup(self, words, group=None):
        group = group or self.group
        images = [group.parse(w) for w in words]
        if len(images) == 1:
            return cyclic_oracle(group, images[0], FreeAbelian(1))
        if isinstance(group, SemidirectZ2Z):
            return FiberOracle(group, images, FreeAbelian(len(images)))
        if hasattr(group, "fiber_group"):
            return FiberOracle(group, images)
        from .subgroups import make_oracle

        backend = "lattice" if isinstance(group, FreeAbelian) else "stallings"
        return make_oracle(backend, group, images)


def _num(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float) and (math.isinf(x) or math.isnan(x)):
        return None
    return x


# ----------------------------------------------------------------------
# experiments: each returns (section, curves)


def exp_pi1(ctx, r, params):
    status = "complete"
    try:
        spheres = ctx.graph.pi1_ball(r, ctx.budget)
    except BudgetExceeded as exc:
        spheres, status = exc.partial, "partial"
    sizes = [len(s) for s in spheres]
    balls = [sum(sizes[: k + 1]) for k in range(len(sizes))]
    rows = [(k, b, "") for k, b in enumerate(balls)]
    return {"sphere_sizes": sizes, "ball_sizes": balls, "status": status}, [Curve("pi1_ball", rows)]


def exp_seemingly(ctx, r, params):
    try:
        pts = seemingly_distortion_scan(ctx.graph, r, sample_budget=ctx.samples, seed=ctx.seed)
    except NoSamplesFound as exc:
        return {"points": [], "note": str(exc)}, []
    worst = max(p.worst for p in pts)
    rows = [(p.n, p.worst, p.witness and " ".join(p.witness["path"])) for p in pts]
    return {"points": [p.to_dict() for p in pts], "max_ratio": worst}, [Curve("seemingly", rows)]


def exp_magic(ctx, r, params):
    ns = ctx.normal_sets(2 * r)
    pi1 = ns.pi1
    support = [g for g, k in ns.lengths.items() if k <= r]
    rng = ctx.rng("magic")
    exact = 0
    trials = []
    for _ in range(ctx.samples):
        f = random_function(pi1, support, rng, density=0.5, rational=True)
        g = random_function(pi1, support, rng, density=0.5, rational=True)
        res = magic_pair(ns, f, g)
        exact += res.exact
        trials.append(res.to_dict())
    return {
        "support_radius": r,
        "normal_set_radius": 2 * r,
        "normal_set_size": len(ns),
        "trials": len(trials),
        "exact": exact,
        "all_exact": exact == len(trials),
        "examples": trials[:3],
    }, []


def exp_hat(ctx, r, params):
    ns = ctx.normal_sets(r)
    rows = []
    out = []
    for k in range(r + 1):
        ball = [g for g, length in ns.lengths.items() if length <= k]
        f = SupportedFunction.indicator(ns.pi1, ball)
        F = hat_lift(ns, f)
        equal = l2_norm_sq(f) == l2_norm_sq(F)
        out.append({"r": k, "f_norm_sq": l2_norm_sq(f), "hat_norm_sq": l2_norm_sq(F), "equal": equal})
        rows.append((k, l2_norm_sq(F), ""))
    return {"balls": out, "isometric": all(x["equal"] for x in out)}, [Curve("hat_norms", rows)]


def exp_consequence(ctx, r, params):
    ns = ctx.normal_sets(r)
    curve = ns.consequence_curve()
    monotone = all(a[1] <= b[1] for a, b in zip(curve, curve[1:]))
    section = {"points": [list(p) for p in curve], "nondecreasing": monotone}
    pts = [(x, v) for x, v in curve if x > 0]
    if len(pts) >= 5:
        section["classification"] = classify_growth(pts).to_dict()
    return section, [Curve("consequence", [(x, v, "") for x, v in curve])]


def exp_disto(ctx, r, params):
    if "group" not in ctx.cfg:
        return _disto_witness(ctx, r)
    group = ctx.group
    oracle = ctx.subgroup(ctx.cfg["subgroup"])
    curve = disto_curve(group, oracle, r, ctx.budget)
    section = curve.to_dict(group.format)
    rows = [(p.n, p.disto, group.format(p.witness)) for p in curve.samples]
    if curve.truncated:
        section["status"] = "partial"
    return section, [Curve("disto", rows)]


def _disto_witness(ctx, r):
    """Disto from conjugation witnesses ``W_k = c^k x c^-k = x^(base^(shift k))``."""
    spec = ctx.cfg["witness"]
    graph = ctx.graph
    conj, letter = spec["conjugator"], spec["element"]
    step = spec["base"] ** spec["shift"]
    witnesses = []
    for k in range(r + 1):
        word = " ".join([conj] * k + [letter] + [_inverse_word(conj)] * k)
        seq = graph.parse_path(word)
        target = graph.parse_path(f"{letter}^{step ** k}")
        if not graph.pi1_equal(seq, target):
            raise AssertionError(f"witness {word!r} does not represent {letter}^{step ** k}")
        witnesses.append((graph.gamma_length(seq), step**k, word))
    points = witness_curve([(n, v) for n, v, _ in witnesses])
    section = {
        "witnesses": [{"L_Gamma": n, "L_H": v, "word": w} for n, v, w in witnesses],
        "curve": [list(p) for p in points],
    }
    if len(witnesses) >= 5:
        section["classification"] = classify_growth([(n, v) for n, v, _ in witnesses]).to_dict()
    rows = [(n, v, w) for n, v, w in witnesses]
    return section, [Curve("disto_witness", rows)]


def _inverse_word(word):
    out = []
    for token in reversed(word.split()):
        name, _, exp = token.partition("^")
        e = -int(exp) if exp else -1
        out.append(name if e == 1 else f"{name}^{e}")
    return " ".join(out)


def exp_tree(ctx, r, params):
    tree = ctx.graph.local_tree(r, rep_cutoff=params.get("rep_cutoff", 2))
    depth_counts = {}
    for node in tree.nodes.values():
        depth_counts[node["depth"]] = depth_counts.get(node["depth"], 0) + 1
    return {
        "nodes": len(tree),
        "edges": len(tree.edges),
        "is_tree": tree.is_tree(),
        "by_depth": [depth_counts.get(d, 0) for d in range(r + 1)],
    }, []


def exp_tight(ctx, r, params):
    graph = ctx.graph
    edge = (params.get("edge", "e"), 1)
    w = graph.terminus(edge)
    coset = graph.group_at(w).parse(params.get("coset", "1"))
    by_radius = []
    for rad in range(max(1, r - 2), r + 1):
        rep = tight_dynamics_scan(graph, edge, coset, sample_budget=ctx.samples, radius=rad, seed=ctx.seed)
        d = rep.to_dict(graph.group_at(w).format)
        finite = [c for c in rep.constants.values() if c != math.inf]
        d["radius"] = rad
        d["C_emp"] = max(finite) if finite else None
        by_radius.append(d)
    values = [d["C_emp"] for d in by_radius]
    return {"by_radius": by_radius, "finite": all(v is not None for v in values)}, [
        Curve("tight", [(d["radius"], d["C_emp"], "") for d in by_radius])
    ]


def exp_fiber_growth(ctx, r, params):
    group = ctx.group
    points, witnesses, cls = fiber_growth_curve(group, params.get("letter", "x1"), r)
    section = {"points": [list(p) for p in points], "classification": cls.to_dict() if cls else None}
    return section, [Curve("fiber_growth", [(x, v, w) for (x, v), w in zip(points, witnesses)])]


def exp_crossing(ctx, r, params):
    graph = ctx.graph
    edge = (params.get("edge", "e"), 1)
    curve = crossing_distortion_curve(graph, edge, r, ctx.budget)
    fmt = graph.group_at(graph.terminus(edge)).format
    section = {
        "points": [[p.n, p.radius] for p in curve.samples],
        "witnesses": [fmt(p.witness) for p in curve.samples],
        "classification": curve.classification.to_dict() if curve.classification else None,
        "truncated": curve.truncated,
    }
    if curve.truncated:
        section["status"] = "partial"
    return section, [Curve("crossing", [(p.n, p.radius, fmt(p.witness)) for p in curve.samples])]


def exp_identity(ctx, r, params):
    """``L_Gamma(c x^(2^(n-2)) c^-1) = L_Gamma(x^(2^n)) / 4 + 8`` and equality in pi_1."""
    spec = ctx.cfg["witness"]
    graph = ctx.graph
    conj, letter = spec["conjugator"], spec["element"]
    rows, out = [], []
    for n in range(params.get("n_min", 4), r + 1):
        word = f"{conj} {letter}^{2 ** (n - 2)} {_inverse_word(conj)}"
        lhs_seq = graph.parse_path(word)
        target = graph.parse_path(f"{letter}^{2 ** n}")
        lhs = graph.gamma_length(lhs_seq, cutoff=2**n + 64)
        full = graph.gamma_length(target, cutoff=2**n + 64)
        rhs = Fraction(full, 4) + 8
        same = graph.pi1_equal(lhs_seq, target)
        out.append({"n": n, "L_conjugated": lhs, "L_power": full, "rhs": _num(rhs), "holds": lhs == rhs, "pi1_equal": same})
        rows.append((n, lhs, word if n < 6 else f"{conj} {letter}^{2 ** (n - 2)} ..."))
    return {"identity": out, "all_hold": all(x["holds"] and x["pi1_equal"] for x in out)}, [Curve("identity", rows)]


def exp_anosov(ctx, r, params):
    group = ctx.group
    phi = an.AnosovMap(group.matrix)
    rng = ctx.rng("anosov")
    worst = 0.0
    for _ in range(ctx.samples if r else 0):
        g = (0, 0)
        while g == (0, 0):
            g = (rng.randint(-100, 100), rng.randint(-100, 100))
        s0 = phi.slope(g)
        s1 = phi.slope(phi.apply(g))
        worst = max(worst, abs(s1 / (phi.lam**2 * s0) - 1))
    bound = params.get("bound", 50) if r else 0
    stated = an.shortening_violations(phi, bound, threshold=phi.lam)
    corrected = an.shortening_violations(phi, bound)
    corrected_inv = an.shortening_violations(phi, bound, inverse=True)
    windows, meridians = [], []
    for gamma, eta in zip(params.get("gammas", []), params.get("eta", [])):
        gamma, eta = tuple(gamma), tuple(eta)
        if r:
            rep = an.min_iterate_window(phi, gamma, r)
            d = rep.to_dict()
            d["growth_within_5pct"] = all(abs(x / phi.lam - 1) <= 0.05 for x in rep.growth.values())
            d["no_power_fixed"] = an.has_no_power_fixed(phi, gamma)
            windows.append(d)
            mer = an.meridian_constant(phi, gamma, eta, r, rep.m_gamma + 2)
            meridians.append({"gamma": list(gamma), "eta": list(eta), "C_emp": _num(mer.c_emp), "contracting": len(mer.rows)})
    return {
        "matrix": [list(row) for row in phi.matrix],
        "lambda": phi.lam,
        "slope_relation_max_rel_error": worst,
        "equivalence_bound": bound,
        "equivalence_violations_stated": len(stated),
        "equivalence_violations_corrected": len(corrected),
        "inverse_equivalence_violations_corrected": len(corrected_inv),
        "windows": windows,
        "meridians": meridians,
    }, [Curve("anosov_windows", [(tuple(w["gamma"]), w["M_gamma"], "") for w in windows])]


def exp_separation(ctx, r, params):
    group = ctx.group
    h_i = ctx.subgroup(params["h_i"])
    h_j = ctx.subgroup(params["h_j"])
    rng = ctx.rng("separation")
    u_radius = params.get("u_radius", 2)
    pool = sorted(cached_ball(group, u_radius, ctx.budget).ball(u_radius), key=repr)
    us = [group.identity] + [pool[rng.randrange(len(pool))] for _ in range(min(ctx.samples, len(pool)))]
    us = list(dict.fromkeys(us))
    rep = separation_scan(group, h_i, h_j, us, r, same_family=params["h_i"] == params["h_j"], budget=ctx.budget)
    d = rep.to_dict()
    return d, [Curve("separation", [(n, _num(c), "") for n, c in sorted(rep.constants.items())])]


def exp_rd(ctx, r, params):
    group = ctx.group if "group" in ctx.cfg else None
    strategy = params.get("strategy", "random-nonneg")
    kwargs = {}
    if params.get("restrict") == "subgroup":
        oracle = ctx.subgroup(ctx.cfg["subgroup"])
        factor = params.get("folner_factor", 8)
        z = oracle.images[0]

        def f_support(k):
            return [g for g in cached_ball(group, k, ctx.budget).ball(k) if oracle.contains(g)]

        def g_support(k, _big):
            top = max(abs(oracle.preimage(g)[0]) for g in f_support(k))
            return [group.power(z, j) for j in range(-factor * top, factor * top + 1)]

        kwargs = {"f_support": f_support, "g_support": g_support}
    elif strategy == "folner-indicator":
        factor = params.get("folner_factor", 4)
        kwargs = {"folner_radius": lambda k: factor * k}
    curve = rd_ratio_curve(group, r, strategy, samples=ctx.samples, seed=ctx.seed, budget=ctx.budget, **kwargs)
    d = curve.to_dict()
    d["pairs"] = sum(p.samples for p in curve.points)
    d["within_haagerup"] = all(p.ratio <= p.r + 1 for p in curve.points)
    return d, [Curve("rd", [(p.r, p.ratio, p.f_kind) for p in curve.points])]


def exp_amenable(ctx, r, params):
    factor = params.get("folner_factor", 8)
    out, rows = [], []
    for rank in (1, 2):
        h = FreeAbelian(rank)
        for k in range(1, r + 1):
            sq, value = amenable_lower_bound(h, k, factor * k, ctx.budget)
            size = len(cached_ball(h, k).ball(k))
            out.append({"rank": rank, "r": k, "R": factor * k, "bound": value, "bound_sq": str(sq), "ball": size, "fraction": value / size})
            rows.append((f"Z{rank}:{k}", value, size))
    return {"points": out, "min_fraction_Z": min((x["fraction"] for x in out if x["rank"] == 1), default=None)}, [
        Curve("amenable", rows)
    ]


EXPERIMENTS = {
    "pi1": exp_pi1,
    "seemingly": exp_seemingly,
    "magic": exp_magic,
    "hat": exp_hat,
    "consequence": exp_consequence,
    "disto": exp_disto,
    "tree": exp_tree,
    "tight": exp_tight,
    "fiber-growth": exp_fiber_growth,
    "crossing": exp_crossing,
    "identity": exp_identity,
    "anosov": exp_anosov,
    "separation": exp_separation,
    "rd": exp_rd,
    "amenable": exp_amenable,
}


def _experiment_entries(cfg):
    out = []
    for entry in cfg.get("experiments", []):
        if isinstance(entry, str):
            entry = {"name": entry}
        if entry.get("name") not in EXPERIMENTS:
            raise ConfigParse(f"experiments: unknown experiment {entry.get('name')!r}")
        out.append(entry)
    return out


def run_scenario(scenario, radius=None, samples=None, seed=None, budget=None, only=None):
    """Run a scenario (id or configuration mapping).

    ``radius`` overrides every experiment radius; ``budget`` caps stored
    elements in every enumeration.  Budget exhaustion marks the experiment
    and the report ``partial`` and keeps what was computed.
    """
    cfg = get_scenario(scenario) if isinstance(scenario, str) else scenario
    budgets = cfg.get("budgets", {})
    if radius is not None and radius < 0:
        raise ValueError("radius must be nonnegative")
    if samples is not None and samples < 1:
        raise ValueError("samples must be positive")
    seed = budgets.get("seed", 0) if seed is None else seed
    samples = budgets.get("samples", 10) if samples is None else samples
    budget = budgets.get("elements", DEFAULT_BUDGET) if budget is None else budget
    if "graph" in cfg:
        diags = validate(cfg["graph"])
        if diags:
            raise ConfigParse("; ".join(str(d) for d in diags))
    ctx = Context(cfg, seed, samples, budget)
    sections, curves = {}, []
    status = "complete"
    with element_budget(budget):
        for entry in _experiment_entries(cfg):
            name = entry["name"]
            if only and name not in only:
                continue
            params = {k: v for k, v in entry.items() if k not in ("name", "radius")}
            r = radius if radius is not None else entry.get("radius", budgets.get("radius", 4))
            try:
                section, found = EXPERIMENTS[name](ctx, r, params)
                section.setdefault("status", "complete")
            except BudgetExceeded as exc:
                section, found = {"status": "partial", "reached": exc.reached, "error": str(exc)}, []
            section["radius"] = r
            if section["status"] != "complete":
                status = "partial"
            sections[name] = section
            for c in found:
                c.name = f"{name}.{c.name}" if not c.name.startswith(name) else c.name
                curves.append(c)
    report = {
        "schema_version": SCHEMA_VERSION,
        "scenario": cfg.get("id", "custom"),
        "description": cfg.get("description", ""),
        "seed": seed,
        "samples": samples,
        "budget_elements": budget,
        "radius_override": radius,
        "status": status,
        "experiments": sections,
    }
    return RunResult(report, curves)


__all__ = ["run_scenario", "RunResult", "Curve", "EXPERIMENTS", "SCHEMA_VERSION", "GogError"]
