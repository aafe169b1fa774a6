"""Graphs of groups: G-sequences, reduction, crossing maps and pi_1 arithmetic.

Conventions.  An oriented edge is a pair ``(name, sign)``; ``(e, +1)`` runs
from ``source`` to ``target`` and ``(e, -1)`` is its reverse.  The embedding
``iota_E`` of an oriented edge lands in the vertex group of its terminus, so
a subsequence ``(g, E, iota_E(h), Ebar, g')`` reduces to
``g * iota_Ebar(h) * g'`` and the crossing map is
``c_E = iota_E o iota_Ebar^-1``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import (
    BudgetExceeded,
    ConfigParse,
    NotInSubgroup,
    NotWellDefined,
    OracleUnknown,
)
from .groups import DEFAULT_BUDGET, FreeAbelian, Group, cached_ball, effective_budget, from_config, parse_tokens
from .subgroups import apply_hom, make_oracle


def reverse(edge):
    return (edge[0], -edge[1])


def edge_label(edge):
    return edge[0] if edge[1] > 0 else edge[0] + "^-1"


@dataclass(frozen=True)
class GSequence:
    """``(g_0, E_1, g_1, ..., E_k, g_k)`` starting at vertex ``start``."""

    start: str
    labels: tuple
    edges: tuple = ()

    def __post_init__(self):
        if len(self.labels) != len(self.edges) + 1:
            raise ValueError("a G-sequence has one more label than edges")

    @property
    def edge_length(self):
        return len(self.edges)

    def items(self):
        out = [self.labels[0]]
        for e, g in zip(self.edges, self.labels[1:]):
            out.extend([e, g])
        return out


@dataclass(frozen=True)
class EdgeData:
    name: str
    source: str
    target: str
    group: Group
    images: tuple
    images_bar: tuple
    oracle: object
    oracle_bar: object
    words: dict
    words_bar: dict


@dataclass
class Diagnostic:
    code: str
    field: str
    message: str

    def __str__(self):
        return f"{self.code} at {self.field}: {self.message}"


class GraphOfGroups:
    """A finite graph of groups with membership oracles on every edge image."""

    def __init__(self, vertices, edges, name=None):
        self.name = name
        self.vertex_groups = dict(vertices)
        self.vertices = list(self.vertex_groups)
        if not self.vertices:
            raise ConfigParse("a graph of groups needs at least one vertex")
        self.base = self.vertices[0]
        self.edges = {}
        for e in edges:
            self.edges[e.name] = e
        self.oriented_edges = [(n, s) for n in self.edges for s in (1, -1)]
        self._length_cache = {}
        self._explorer = None

    # -- structure -----------------------------------------------------
    def origin(self, edge):
        data = self.edges[edge[0]]
        return data.source if edge[1] > 0 else data.target

    def terminus(self, edge):
        data = self.edges[edge[0]]
        return data.target if edge[1] > 0 else data.source

    def oracle(self, edge):
        """Oracle for ``iota_E(G_e)`` inside the terminus of ``edge``."""
        data = self.edges[edge[0]]
        return data.oracle if edge[1] > 0 else data.oracle_bar

    def iota(self, edge, h):
        data = self.edges[edge[0]]
        images = data.images if edge[1] > 0 else data.images_bar
        return apply_hom(data.group, images, self.vertex_groups[self.terminus(edge)], h)

    def edges_from(self, vertex):
        return [e for e in self.oriented_edges if self.origin(e) == vertex]

    def end(self, s):
        return self.terminus(s.edges[-1]) if s.edges else s.start

    def group_at(self, vertex):
        return self.vertex_groups[vertex]

    def _member(self, edge, g):
        """Preimage under ``iota_edge`` or None; OracleUnknown when undecided."""
        o = self.oracle(edge)
        inside = o.contains(g)
        if inside is None:
            raise OracleUnknown(f"membership of {g!r} in the image of {edge_label(edge)} is unknown")
        if not inside:
            return None
        return o.preimage(g)

    @property
    def has_canonical_forms(self):
        return all(self.oracle(e).has_coset_reps for e in self.oriented_edges)

    # -- construction helpers ---------------------------------------------
    def check_sequence(self, s):
        vertex = s.start
        if vertex not in self.vertex_groups:
            raise ValueError(f"unknown vertex {vertex!r}")
        self.vertex_groups[vertex].check(s.labels[0])
        for e, g in zip(s.edges, s.labels[1:]):
            if e[0] not in self.edges:
                raise ValueError(f"unknown edge {e[0]!r}")
            if self.origin(e) != vertex:
                raise ValueError(f"edge {edge_label(e)} does not start at {vertex!r}")
            vertex = self.terminus(e)
            self.vertex_groups[vertex].check(g)
        return s

    def identity(self, vertex=None):
        vertex = self.base if vertex is None else vertex
        return GSequence(vertex, (self.vertex_groups[vertex].identity,))

    def edge_sequence(self, e):
        src, dst = self.vertex_groups[self.origin(e)], self.vertex_groups[self.terminus(e)]
        return GSequence(self.origin(e), (src.identity, dst.identity), (e,))

    def vertex_element(self, g, vertex=None):
        vertex = self.base if vertex is None else vertex
        return GSequence(vertex, (self.vertex_groups[vertex].check(g),))

    def parse_path(self, word, start=None):
        """Parse ``"e y3 e^-1 x3"``: edge names cross edges, other tokens are
        generators (or aliases) of the current vertex group."""
        vertex = self.base if start is None else start
        labels = [self.vertex_groups[vertex].identity]
        edges = []
        for name, exp in parse_tokens(word):
            if name in self.edges:
                sign = 1 if exp > 0 else -1
                for _ in range(abs(exp)):
                    e = (name, sign)
                    if self.origin(e) != vertex:
                        raise ValueError(f"edge {edge_label(e)} does not start at {vertex!r}")
                    vertex = self.terminus(e)
                    edges.append(e)
                    labels.append(self.vertex_groups[vertex].identity)
            else:
                group = self.vertex_groups[vertex]
                names = group.named_elements()
                if name not in names:
                    raise ValueError(f"{name!r} is neither an edge nor a generator at {vertex!r}")
                labels[-1] = group.mul(labels[-1], group.power(names[name], exp))
        first = start if start is not None else self.base
        return GSequence(first, tuple(labels), tuple(edges))

    def format(self, s):
        parts = [self.vertex_groups[s.start].format(s.labels[0])]
        vertex = s.start
        for e, g in zip(s.edges, s.labels[1:]):
            vertex = self.terminus(e)
            parts.append(edge_label(e))
            parts.append(self.vertex_groups[vertex].format(g))
        return "(" + ", ".join(parts) + ")"

    # -- sequence algebra ------------------------------------------------
    def concat(self, s, t):
        if self.end(s) != t.start:
            raise ValueError("sequences are not composable")
        group = self.vertex_groups[t.start]
        labels = s.labels[:-1] + (group.mul(s.labels[-1], t.labels[0]),) + t.labels[1:]
        return GSequence(s.start, labels, s.edges + t.edges)

    def inverse(self, s):
        vertices = self.vertex_path(s)
        labels = tuple(
            self.vertex_groups[v].inv(g) for v, g in zip(reversed(vertices), reversed(s.labels))
        )
        edges = tuple(reverse(e) for e in reversed(s.edges))
        return GSequence(self.end(s), labels, edges)

    def vertex_path(self, s):
        out = [s.start]
        for e in s.edges:
            out.append(self.terminus(e))
        return out

    # -- reduction -------------------------------------------------------
    def reducible_positions(self, s):
        """Indices j where ``(g_j, E_j+1, g_j+1, E_j+2, g_j+2)`` is a pattern."""
        out = []
        for j in range(len(s.edges) - 1):
            e, f = s.edges[j], s.edges[j + 1]
            if f == reverse(e) and self._member(e, s.labels[j + 1]) is not None:
                out.append(j)
        return out

    def _reduce_at(self, s, j):
        e = s.edges[j]
        h = self._member(e, s.labels[j + 1])
        group = self.vertex_groups[self.origin(e)]
        middle = self.iota(reverse(e), h)
        merged = group.mul(group.mul(s.labels[j], middle), s.labels[j + 2])
        labels = s.labels[:j] + (merged,) + s.labels[j + 3 :]
        return GSequence(s.start, labels, s.edges[:j] + s.edges[j + 2 :])

    def reduce(self, s, order="left", rng=None):
        """Apply reductions until none applies.

        ``order="left"`` rescans from just before the last substitution;
        ``order="random"`` picks uniformly among the available patterns.
        """
        if order == "left":
            j = 0
            while j < len(s.edges) - 1:
                e, f = s.edges[j], s.edges[j + 1]
                if f == reverse(e) and self._member(e, s.labels[j + 1]) is not None:
                    s = self._reduce_at(s, j)
                    j = max(j - 1, 0)
                else:
                    j += 1
            return s
        if order == "random":
            rng = rng or random.Random(0)
            while True:
                spots = self.reducible_positions(s)
                if not spots:
                    return s
                s = self._reduce_at(s, rng.choice(spots))
        raise ValueError(f"unknown reduction order {order!r}")

    def is_reduced(self, s):
        return not self.reducible_positions(s)

    # -- normal forms ----------------------------------------------------
    def canonical(self, s):
        """Unique representative of the class of ``s`` (paths rel endpoints).

        Reduces, then pushes each label into a fixed left-coset
        representative of the edge image at the following edge.
        """
        s = self.reduce(s)
        labels = list(s.labels)
        for j, e in enumerate(s.edges):
            back = reverse(e)
            group = self.vertex_groups[self.origin(e)]
            rep = self.oracle(back).coset_rep(labels[j])
            if rep is None:
                raise OracleUnknown(f"no coset representatives for {edge_label(back)}")
            h = self.oracle(back).preimage(group.mul(group.inv(rep), labels[j]))
            labels[j] = rep
            nxt = self.vertex_groups[self.terminus(e)]
            labels[j + 1] = nxt.mul(self.iota(e, h), labels[j + 1])
        return GSequence(s.start, tuple(labels), s.edges)

    def _push_edge(self, s, e):
        """Canonical form of ``s . E`` given canonical ``s``."""
        w = self.end(s)
        if s.edges and s.edges[-1] == reverse(e):
            # pattern (g_{k-1}, Ebar, g_k, E, 1)
            h = self._member(reverse(e), s.labels[-1])
            if h is not None:
                group = self.vertex_groups[self.terminus(e)]
                merged = group.mul(s.labels[-2], self.iota(e, h))
                return GSequence(s.start, s.labels[:-2] + (merged,), s.edges[:-1])
        back = reverse(e)
        group = self.vertex_groups[w]
        rep = self.oracle(back).coset_rep(s.labels[-1])
        h = self.oracle(back).preimage(group.mul(group.inv(rep), s.labels[-1]))
        return GSequence(s.start, s.labels[:-1] + (rep, self.iota(e, h)), s.edges + (e,))

    def _push_label(self, s, g):
        group = self.vertex_groups[self.end(s)]
        return GSequence(s.start, s.labels[:-1] + (group.mul(s.labels[-1], g),), s.edges)

    # -- pi_1 ------------------------------------------------------------
    def pi1_element(self, s):
        self.check_sequence(s)
        if s.start != self.end(s):
            raise ValueError("a pi_1 element must be a loop")
        return self.canonical(s) if self.has_canonical_forms else self.reduce(s)

    def pi1_multiply(self, a, b):
        if a.start != b.start:
            raise ValueError("loops have different base vertices")
        return self.pi1_element(self.concat(a, b))

    def pi1_inverse(self, a):
        return self.pi1_element(self.inverse(a))

    def pi1_equal(self, a, b):
        if a.start != b.start:
            raise ValueError("loops have different base vertices")
        return self.pi1_equal_paths(a, b)

    def pi1_equal_paths(self, s, t):
        """Whether two paths with common endpoints are equal in the groupoid."""
        r = self.reduce(self.concat(s, self.inverse(t)))
        return not r.edges and r.labels[0] == self.vertex_groups[r.start].identity

    def vertex_length(self, vertex, g, cutoff=64):
        key = (vertex, g)
        hit = self._length_cache.get(key)
        if hit is None or (hit < 0 and -hit - 1 < cutoff):
            value = self.vertex_groups[vertex].word_length(g, cutoff)
            hit = value if value is not None else -(cutoff + 1)
            self._length_cache[key] = hit
        return hit if hit >= 0 and hit <= cutoff else None

    def gamma_length(self, s, cutoff=64):
        """``L_Gamma(s) = k + sum_j L(g_j)``, including ``g_0``."""
        total = len(s.edges)
        for v, g in zip(self.vertex_path(s), s.labels):
            length = self.vertex_length(v, g, cutoff)
            if length is None:
                raise BudgetExceeded(f"vertex length at {v!r} exceeds cutoff {cutoff}")
            total += length
        return total

    @property
    def explorer(self):
        if self._explorer is None:
            self._explorer = GroupoidBall(self)
        return self._explorer

    def pi1_word_length(self, g, cutoff=16, budget=DEFAULT_BUDGET):
        """Exact ``L_G`` by breadth-first search in the fundamental groupoid."""
        if cutoff < 0:
            raise ValueError("cutoff must be nonnegative")
        return self.explorer.length(self.pi1_element(g), cutoff, budget)

    def pi1_ball(self, radius, budget=DEFAULT_BUDGET):
        """Loops at the base vertex with ``L_G <= radius``, by sphere."""
        return self.explorer.loop_spheres(radius, budget)

    # -- crossing maps ---------------------------------------------------
    def crossing(self, edge, a):
        """``c_E(a)``, or None when ``a`` is not in the image of ``iota_Ebar``."""
        h = self._member(reverse(edge), a)
        if h is None:
            return None
        return self.iota(edge, h)

    def crossing_path(self, path, a):
        """Follow consecutive crossings; NotWellDefined names the failing edge (1-based)."""
        for i, e in enumerate(path):
            if i and self.origin(e) != self.terminus(path[i - 1]):
                raise ValueError("not an edge path")
            b = self.crossing(e, a)
            if b is None:
                raise NotWellDefined(f"crossing {edge_label(e)} is undefined", i + 1)
            a = b
        return a

    def well_defined(self, path, a):
        try:
            self.crossing_path(path, a)
        except NotWellDefined:
            return False
        return True

    def is_maximal(self, path, a, edge):
        """``path`` is well defined at ``a`` but ``path . edge`` is not."""
        return self.well_defined(path, a) and not self.well_defined(list(path) + [edge], a)

    # -- local Bass-Serre tree -----------------------------------------------
    def local_tree(self, depth, rep_cutoff=6, base=None):
        """Fragment of the Bass-Serre tree around the vertex ``base G_v``.

        Tree vertices are canonical paths with the last label dropped; the
        children along ``E`` are indexed by coset representatives of the
        image of ``iota_Ebar`` found within ``rep_cutoff``.
        """
        if not self.has_canonical_forms:
            raise OracleUnknown("local_tree needs coset representatives on every edge")
        root = base if base is not None else self.identity()
        root_key = _descriptor(self.canonical(root))
        nodes = {root_key: {"depth": 0, "vertex": self.end(root), "parent": None}}
        tree_edges = []
        frontier = [(root_key, self.canonical(root))]
        for d in range(depth):
            nxt = []
            for key, path in frontier:
                w = self.end(path)
                ball = cached_ball(self.vertex_groups[w], rep_cutoff).ball(rep_cutoff)
                for e in self.edges_from(w):
                    for h in ball:
                        child = self._push_edge(self._push_label(path, h), e)
                        ck = _descriptor(child)
                        if ck == nodes[key]["parent"]:
                            continue
                        if ck in nodes:
                            if nodes[ck]["parent"] != key:
                                nodes[ck]["extra_parents"] = nodes[ck].get("extra_parents", 0) + 1
                            continue
                        nodes[ck] = {"depth": d + 1, "vertex": self.terminus(e), "parent": key}
                        tree_edges.append((key, ck, e))
                        nxt.append((ck, child))
            frontier = nxt
        return LocalTree(root_key, nodes, tree_edges)

    # -- configuration ---------------------------------------------------
    @classmethod
    def from_config(cls, cfg, name=None):
        diags = []
        graph = _build(cfg, diags, name)
        errors = [d for d in diags if d.code != "warning"]
        if graph is None or errors:
            raise ConfigParse("; ".join(str(d) for d in errors or diags))
        return graph

    def to_config(self):
        return {
            "vertices": {v: g.to_config() for v, g in self.vertex_groups.items()},
            "edges": [
                {
                    "name": e.name,
                    "source": e.source,
                    "target": e.target,
                    "group": e.group.to_config(),
                    "iota": dict(e.words),
                    "iota_bar": dict(e.words_bar),
                    "backend": e.oracle.backend_tag,
                    "backend_bar": e.oracle_bar.backend_tag,
                }
                for e in self.edges.values()
            ],
        }


def _descriptor(path):
    return (path.start, path.labels[:-1], path.edges)


@dataclass
class LocalTree:
    root: tuple
    nodes: dict
    edges: list

    def children(self, key):
        return [c for p, c, _ in self.edges if p == key]

    def is_tree(self):
        """Acyclic and connected: no node reached twice, |E| = |V| - 1."""
        if any(n.get("extra_parents") for n in self.nodes.values()):
            return False
        return len(self.edges) == len(self.nodes) - 1

    def __len__(self):
        return len(self.nodes)


class GroupoidBall:
    """Breadth-first ball of the fundamental groupoid from the base vertex.

    States are canonical paths starting at the base; a step multiplies the
    last label by a vertex generator or appends an edge, so the distance is
    exactly ``L_G`` of the path.
    """

    def __init__(self, graph):
        self.graph = graph
        self.canonical = graph.has_canonical_forms
        start = graph.canonical(graph.identity()) if self.canonical else graph.identity()
        self.dist = {start: 0}
        self.parent = {start: None}
        self.spheres = [[start]]
        self._fallback = {}
        if not self.canonical:
            self._fallback[(start.edges, graph.end(start))] = [start]
        self.steps = {
            v: [("g", name, h) for name, h in g.symmetric_generators()] + [("e", e, None) for e in graph.edges_from(v)]
            for v, g in graph.vertex_groups.items()
        }

    @property
    def radius(self):
        return len(self.spheres) - 1

    def _apply(self, s, step):
        kind, what, h = step
        if kind == "g":
            return self.graph._push_label(s, h)
        if self.canonical:
            return self.graph._push_edge(s, what)
        return self.graph.reduce(self.graph.concat(s, self.graph.edge_sequence(what)))

    def _lookup(self, s):
        if self.canonical:
            return s if s in self.dist else None
        bucket = self._fallback.get((s.edges, self.graph.end(s)), [])
        for t in bucket:
            if self.graph.pi1_equal_paths(s, t):
                return t
        return None

    def grow(self, radius, budget=DEFAULT_BUDGET):
        budget = effective_budget(budget)
        total = 0
        for r, sphere in enumerate(self.spheres[: radius + 1]):
            total += len(sphere)
            if total > budget:
                raise BudgetExceeded(
                    f"groupoid ball of radius {r} exceeds budget of {budget} elements",
                    partial=self._loops(r - 1),
                    reached=r - 1,
                )
        while self.radius < radius:
            r = self.radius + 1
            nxt = []
            for s in self.spheres[-1]:
                for step in self.steps[self.graph.end(s)]:
                    y = self._apply(s, step)
                    if self._lookup(y) is None:
                        self.dist[y] = r
                        self.parent[y] = (s, step)
                        nxt.append(y)
                        if not self.canonical:
                            self._fallback.setdefault((y.edges, self.graph.end(y)), []).append(y)
                if len(self.dist) > budget:
                    for y in nxt:
                        del self.dist[y]
                        del self.parent[y]
                        if not self.canonical:
                            self._fallback[(y.edges, self.graph.end(y))].remove(y)
                    raise BudgetExceeded(
                        f"groupoid ball of radius {r} exceeds budget of {budget} elements",
                        partial=self._loops(r - 1),
                        reached=r - 1,
                    )
            self.spheres.append(nxt)

    def loop_spheres(self, radius, budget=DEFAULT_BUDGET):
        self.grow(radius, budget)
        return self._loops(radius)

    def _loops(self, radius):
        base = self.graph.base
        return [[s for s in sphere if self.graph.end(s) == base] for sphere in self.spheres[: radius + 1]]

    def length(self, g, cutoff, budget=DEFAULT_BUDGET):
        r = 0
        while True:
            if r > self.radius:
                self.grow(r, budget)
            hit = self._lookup(g)
            if hit is not None and self.dist[hit] <= cutoff:
                return self.dist[hit]
            if r >= cutoff:
                return None
            r += 1

    def geodesic(self, g):
        """The breadth-first geodesic reaching ``g`` as an unreduced G-sequence."""
        target = self._lookup(g)
        if target is None:
            raise KeyError("element not yet reached")
        steps = []
        node = target
        while self.parent[node] is not None:
            node, step = self.parent[node]
            steps.append(step)
        steps.reverse()
        graph = self.graph
        vertex = graph.base
        labels = [graph.vertex_groups[vertex].identity]
        edges = []
        for kind, what, h in steps:
            if kind == "g":
                labels[-1] = graph.vertex_groups[vertex].mul(labels[-1], h)
            else:
                edges.append(what)
                vertex = graph.terminus(what)
                labels.append(graph.vertex_groups[vertex].identity)
        return GSequence(graph.base, tuple(labels), tuple(edges))


class Pi1Group(Group):
    """``pi_1(G, base)`` as a group object (elements: normal-form loops)."""

    kind = "pi1"

    def __init__(self, graph):
        super().__init__()
        self.graph = graph
        self.identity = graph.pi1_element(graph.identity())
        self.generators = ()

    def mul(self, a, b):
        return self.graph.pi1_multiply(a, b)

    def inv(self, a):
        return self.graph.pi1_inverse(a)

    def format(self, g):
        return self.graph.format(g)

    def word_length(self, g, cutoff=16, budget=DEFAULT_BUDGET):
        return self.graph.pi1_word_length(g, cutoff, budget)

    def ball(self, radius, budget=DEFAULT_BUDGET):
        out = []
        for sphere in self.graph.pi1_ball(radius, budget):
            out.extend(sphere)
        return out

    def __hash__(self):
        return id(self.graph)

    def __eq__(self, other):
        return isinstance(other, Pi1Group) and other.graph is self.graph


# ----------------------------------------------------------------------
# configuration


def _images(group, words, edge_group, field, diags):
    names = _edge_basis_names(edge_group)
    out = []
    for n in names:
        if n not in words:
            diags.append(Diagnostic("GraphIllFormed", field, f"missing image of {n!r}"))
            return None
        try:
            out.append(group.parse(str(words[n])))
        except ValueError as exc:
            diags.append(Diagnostic("ConfigParse", f"{field}.{n}", str(exc)))
            return None
    extra = set(words) - set(names)
    if extra:
        diags.append(Diagnostic("GraphIllFormed", field, f"images for unknown generators {sorted(extra)}"))
        return None
    return tuple(out)


def _edge_basis_names(group):
    if isinstance(group, FreeAbelian):
        return list(group.names)
    return list(group.basis)


def _build(cfg, diags, name=None):
    if not isinstance(cfg, dict):
        diags.append(Diagnostic("ConfigParse", "<root>", "expected a mapping"))
        return None
    vertices = {}
    for v, gcfg in (cfg.get("vertices") or {}).items():
        try:
            vertices[str(v)] = from_config(gcfg)
        except (ValueError, KeyError, TypeError) as exc:
            diags.append(Diagnostic("ConfigParse", f"vertices.{v}", str(exc)))
    if not vertices:
        diags.append(Diagnostic("GraphIllFormed", "vertices", "no vertices declared"))
        return None
    edges = []
    for i, ecfg in enumerate(cfg.get("edges") or []):
        field = f"edges[{i}]"
        if not isinstance(ecfg, dict):
            diags.append(Diagnostic("ConfigParse", field, "expected a mapping"))
            continue
        ename = str(ecfg.get("name", f"e{i + 1}"))
        src, dst = ecfg.get("source"), ecfg.get("target")
        if src not in vertices or dst not in vertices:
            diags.append(
                Diagnostic("GraphIllFormed", field, f"edge {ename!r} has endpoints {src!r}, {dst!r} not among vertices")
            )
            continue
        if ename in vertices or any(e.name == ename for e in edges):
            diags.append(Diagnostic("GraphIllFormed", field, f"duplicate name {ename!r}"))
            continue
        try:
            egroup = from_config(ecfg.get("group") or {})
        except (ValueError, KeyError, TypeError) as exc:
            diags.append(Diagnostic("ConfigParse", f"{field}.group", str(exc)))
            continue
        if egroup.kind not in ("free", "abelian"):
            diags.append(Diagnostic("GraphIllFormed", f"{field}.group", "edge groups must be free or free abelian"))
            continue
        words = dict(ecfg.get("iota") or {})
        words_bar = dict(ecfg.get("iota_bar") or {})
        images = _images(vertices[dst], words, egroup, f"{field}.iota", diags)
        images_bar = _images(vertices[src], words_bar, egroup, f"{field}.iota_bar", diags)
        if images is None or images_bar is None:
            continue
        oracles = []
        for key, amb, imgs in (("backend", vertices[dst], images), ("backend_bar", vertices[src], images_bar)):
            spec = ecfg.get(key)
            if spec is None:
                diags.append(Diagnostic("ConfigParse", f"{field}.{key}", "oracle backend must be declared"))
                oracles.append(None)
                continue
            params = {}
            if isinstance(spec, dict):
                params = {k: v for k, v in spec.items() if k != "kind"}
                spec = spec.get("kind")
            try:
                o = make_oracle(str(spec), amb, list(imgs), egroup, **params)
                o.backend_tag = ecfg.get(key)
                oracles.append(o)
            except (ValueError, TypeError) as exc:
                diags.append(Diagnostic("ConfigParse", f"{field}.{key}", str(exc)))
                oracles.append(None)
        if None in oracles:
            continue
        edges.append(
            EdgeData(ename, src, dst, egroup, images, images_bar, oracles[0], oracles[1], words, words_bar)
        )
    if any(d.code != "warning" for d in diags):
        return None
    return GraphOfGroups(vertices, edges, name=name)


def validate(cfg):
    """Diagnostics for a graph-of-groups configuration (empty list when valid)."""
    diags = []
    graph = _build(cfg, diags)
    if graph is None:
        return diags
    for e in graph.edges.values():
        for sign, key in ((1, "iota"), (-1, "iota_bar")):
            edge = (e.name, sign)
            o = graph.oracle(edge)
            images = e.images if sign > 0 else e.images_bar
            amb = graph.group_at(graph.terminus(edge))
            for n, img in zip(_edge_basis_names(e.group), images):
                if o.contains(img) is not True:
                    diags.append(
                        Diagnostic("EmbeddingOracleMismatch", f"edges.{e.name}.{key}.{n}", "image not accepted by oracle")
                    )
                    continue
                try:
                    back = o.preimage(img)
                except (NotInSubgroup, OracleUnknown) as exc:
                    diags.append(Diagnostic("EmbeddingOracleMismatch", f"edges.{e.name}.{key}.{n}", str(exc)))
                    continue
                if graph.iota(edge, back) != img:
                    diags.append(
                        Diagnostic("EmbeddingOracleMismatch", f"edges.{e.name}.{key}.{n}", "preimage does not map back")
                    )
            if isinstance(e.group, FreeAbelian):
                for a in range(len(images)):
                    for b in range(a + 1, len(images)):
                        x, y = images[a], images[b]
                        if amb.mul(x, y) != amb.mul(y, x):
                            diags.append(
                                Diagnostic(
                                    "EmbeddingNotHomomorphic",
                                    f"edges.{e.name}.{key}",
                                    "images of commuting generators do not commute",
                                )
                            )
    return diags


__all__ = [
    "GSequence",
    "GraphOfGroups",
    "GroupoidBall",
    "LocalTree",
    "Pi1Group",
    "Diagnostic",
    "validate",
    "reverse",
    "edge_label",
]
