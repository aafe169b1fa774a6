"""The free product ``G_Gamma = *G_v * F_E``, normal sets and the hat lift.

A free-product element is a tuple of syllables ``(factor, value)`` with
``factor = ("v", vertex)`` carrying a nontrivial vertex-group element or
``factor = ("e", edge)`` carrying a nonzero integer power; consecutive
syllables never share a factor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import SupportOutsideDomain
from .gog import Pi1Group
from .groups import DEFAULT_BUDGET, Group
from .rd import SupportedFunction, convolve, l2_norm_sq


class FreeProduct(Group):
    """``G_Gamma`` for a graph of groups (one infinite cyclic factor per edge)."""

    kind = "free_product"

    def __init__(self, graph):
        super().__init__()
        self.graph = graph
        self.identity = ()
        gens = []
        for v, g in graph.vertex_groups.items():
            for name, h in g.generators:
                gens.append((f"{v}.{name}", ((("v", v), h),)))
        for e in graph.edges:
            gens.append((e, ((("e", e), 1),)))
        self.generators = tuple(gens)

    def __repr__(self):
        return f"FreeProduct({self.graph.name or 'graph'})"

    def __eq__(self, other):
        return isinstance(other, FreeProduct) and other.graph is self.graph

    def __hash__(self):
        return hash(("free_product", id(self.graph)))

    def _factor_mul(self, factor, x, y):
        if factor[0] == "e":
            return x + y
        return self.graph.vertex_groups[factor[1]].mul(x, y)

    def _is_trivial(self, factor, x):
        if factor[0] == "e":
            return x == 0
        return x == self.graph.vertex_groups[factor[1]].identity

    def mul(self, a, b):
        a = list(a)
        i = 0
        # only the junction can merge; a cancelled syllable exposes the next pair
        while a and i < len(b) and a[-1][0] == b[i][0]:
            factor = a[-1][0]
            merged = self._factor_mul(factor, a[-1][1], b[i][1])
            a.pop()
            i += 1
            if not self._is_trivial(factor, merged):
                a.append((factor, merged))
                break
        return tuple(a) + tuple(b[i:])

    def inv(self, a):
        out = []
        for factor, x in reversed(a):
            out.append((factor, -x if factor[0] == "e" else self.graph.vertex_groups[factor[1]].inv(x)))
        return tuple(out)

    def check(self, a):
        prev = None
        for factor, x in a:
            if factor == prev or self._is_trivial(factor, x):
                raise ValueError("not in free-product normal form")
            prev = factor
        return a

    def length(self, a, cutoff=64):
        """``L_Gamma``: vertex word lengths plus absolute edge powers."""
        total = 0
        for factor, x in a:
            if factor[0] == "e":
                total += abs(x)
            else:
                total += self.graph.vertex_length(factor[1], x, cutoff)
        return total

    def word_length(self, g, cutoff=64, budget=DEFAULT_BUDGET):
        value = self.length(g, cutoff)
        return value if value <= cutoff else None

    def format(self, a):
        parts = []
        for factor, x in a:
            if factor[0] == "e":
                parts.append(factor[1] if x == 1 else f"{factor[1]}^{x}")
            else:
                parts.append(f"[{self.graph.vertex_groups[factor[1]].format(x)}]_{factor[1]}")
        return " ".join(parts) or "1"

    def from_sequence(self, s):
        """Image of a G-sequence: ``g_0 e_1^{+-1} g_1 ...``."""
        out = ()
        vertex = s.start
        out = self.mul(out, self._vertex_syllable(vertex, s.labels[0]))
        for e, g in zip(s.edges, s.labels[1:]):
            out = self.mul(out, ((("e", e[0]), e[1]),))
            vertex = self.graph.terminus(e)
            out = self.mul(out, self._vertex_syllable(vertex, g))
        return out

    def _vertex_syllable(self, vertex, g):
        if g == self.graph.vertex_groups[vertex].identity:
            return ()
        return ((("v", vertex), g),)

    def project(self, a, start=None):
        """The pi_1 (groupoid) element read off a free-product word from ``start``."""
        graph = self.graph
        vertex = graph.base if start is None else start
        labels = [graph.vertex_groups[vertex].identity]
        edges = []
        for factor, x in a:
            if factor[0] == "v":
                if factor[1] != vertex:
                    raise ValueError(f"syllable at {factor[1]!r} read at vertex {vertex!r}")
                labels[-1] = graph.vertex_groups[vertex].mul(labels[-1], x)
                continue
            sign = 1 if x > 0 else -1
            for _ in range(abs(x)):
                e = (factor[1], sign)
                if graph.origin(e) != vertex:
                    raise ValueError(f"edge {factor[1]} does not leave {vertex!r}")
                edges.append(e)
                vertex = graph.terminus(e)
                labels.append(graph.vertex_groups[vertex].identity)
        from .gog import GSequence

        seq = GSequence(graph.base if start is None else start, tuple(labels), tuple(edges))
        return graph.canonical(seq) if graph.has_canonical_forms else graph.reduce(seq)


def multiply(fp, a, b):
    return fp.mul(fp.check(a), fp.check(b))


# ----------------------------------------------------------------------
# normal sets


@dataclass
class NormalSets:
    """Normal G- and Gamma-sets on a ball of ``pi_1``.

    ``g_set[g]`` is the breadth-first geodesic loop (tie-break: generator
    declaration order), ``gamma_set[g]`` the free-product element of its
    left-to-right reduction.
    """

    graph: object
    pi1: Pi1Group
    free_product: FreeProduct
    radius: int
    g_set: dict = field(default_factory=dict)
    gamma_set: dict = field(default_factory=dict)
    lengths: dict = field(default_factory=dict)
    hat_lengths: dict = field(default_factory=dict)
    preimage: dict = field(default_factory=dict)

    @property
    def domain(self):
        return list(self.g_set)

    def __len__(self):
        return len(self.g_set)

    def hat(self, g):
        try:
            return self.gamma_set[g]
        except KeyError:
            raise SupportOutsideDomain(f"{self.graph.format(g)} is outside the normal-set domain") from None

    def consequence_curve(self):
        """``max{L_Gamma(g_hat) : L_G(g) = r}`` for each radius ``r``."""
        best = {}
        for g, r in self.lengths.items():
            best[r] = max(best.get(r, 0), self.hat_lengths[g])
        out, running = [], 0
        for r in sorted(best):
            running = max(running, best[r])
            out.append((r, best[r]))
        return out


def build_normal_sets(graph, radius, budget=DEFAULT_BUDGET):
    pi1 = Pi1Group(graph)
    fp = FreeProduct(graph)
    ns = NormalSets(graph, pi1, fp, radius)
    spheres = graph.pi1_ball(radius, budget)
    explorer = graph.explorer
    for r, sphere in enumerate(spheres):
        for g in sphere:
            tilde = explorer.geodesic(g)
            hat = fp.from_sequence(graph.reduce(tilde))
            if hat in ns.preimage:
                raise AssertionError("normal Gamma-set is not injective")
            ns.g_set[g] = tilde
            ns.gamma_set[g] = hat
            ns.preimage[hat] = g
            ns.lengths[g] = r
            ns.hat_lengths[g] = fp.length(hat)
    return ns


def hat_lift(ns, f):
    """``f_hat(g_hat) = f(g)``; zero off the normal Gamma-set."""
    values = {}
    for g, c in f.values.items():
        values[ns.hat(g)] = c
    return SupportedFunction(ns.free_product, values)


# ----------------------------------------------------------------------
# norm-preserving pairs


@dataclass
class MagicResult:
    F: SupportedFunction
    G: dict
    f_norm_sq: Fraction
    F_norm_sq: Fraction
    g_norm_sq: Fraction
    G_norm_sq: dict
    fg_norm_sq: Fraction
    FG_norm_sq: Fraction
    global_G_norm_sq: Fraction

    @property
    def exact(self):
        return (
            self.f_norm_sq == self.F_norm_sq
            and all(v == self.g_norm_sq for v in self.G_norm_sq.values())
            and self.fg_norm_sq == self.FG_norm_sq
        )

    def to_dict(self):
        return {
            "f_norm_sq": str(self.f_norm_sq),
            "F_norm_sq": str(self.F_norm_sq),
            "g_norm_sq": str(self.g_norm_sq),
            "G_norm_sq_all_equal": all(v == self.g_norm_sq for v in self.G_norm_sq.values()),
            "fg_norm_sq": str(self.fg_norm_sq),
            "FG_norm_sq": str(self.FG_norm_sq),
            "global_G_norm_sq": str(self.global_G_norm_sq),
            "exact": self.exact,
        }


def magic_pair(ns, f, g):
    """Free-product functions with ``||F*G|| = ||f*g||`` and equal norms.

    ``F = f_hat``.  For each ``u`` in ``supp(f*g)`` a function ``G_u`` puts
    ``g(v^-1 u)`` at ``v_hat^-1 u_hat`` for ``v`` in ``supp f`` and the
    remaining values of ``g`` at ``w_hat``; distinct points project to
    distinct elements of ``pi_1``, so ``||G_u|| = ||g||``.  The identity is
    ``sum_u (F*G_u)(u_hat)^2 = ||f*g||^2``, with the left side evaluated by
    free-product arithmetic.
    """
    pi1, fp = ns.pi1, ns.free_product
    for h in list(f.values) + list(g.values):
        ns.hat(h)
    fg = convolve(f, g)
    for u in fg.values:
        if u not in ns.gamma_set:
            raise SupportOutsideDomain("normal sets must cover supp(f) supp(g); enlarge the radius")
    F = hat_lift(ns, f)
    inv_hat = {v: fp.inv(ns.hat(v)) for v in f.values}
    inv_pi = {v: pi1.inv(v) for v in f.values}
    total = Fraction(0)
    g_norms = {}
    global_g = {}
    Gs = {}
    for u in sorted(fg.values, key=repr):
        u_hat = ns.hat(u)
        placed = {}
        used = set()
        for v in f.values:
            w = pi1.mul(inv_pi[v], u)
            if w in g.values:
                point = fp.mul(inv_hat[v], u_hat)
                placed[point] = g(w)
                global_g[point] = g(w)
                used.add(w)
        for w, c in g.values.items():
            if w not in used:
                point = ns.hat(w)
                if point in placed:
                    raise AssertionError("G_u placement is not injective")
                placed[point] = c
        G_u = SupportedFunction(fp, placed)
        Gs[u] = G_u
        g_norms[u] = Fraction(l2_norm_sq(G_u))
        value = sum(F(x) * G_u(fp.mul(fp.inv(x), u_hat)) for x in F.values)
        total += Fraction(value) ** 2
    return MagicResult(
        F=F,
        G=Gs,
        f_norm_sq=Fraction(l2_norm_sq(f)),
        F_norm_sq=Fraction(l2_norm_sq(F)),
        g_norm_sq=Fraction(l2_norm_sq(g)),
        G_norm_sq=g_norms,
        fg_norm_sq=Fraction(l2_norm_sq(fg)),
        FG_norm_sq=total,
        global_G_norm_sq=Fraction(sum(c * c for c in global_g.values())),
    )


__all__ = [
    "FreeProduct",
    "NormalSets",
    "build_normal_sets",
    "hat_lift",
    "magic_pair",
    "MagicResult",
    "multiply",
]
