"""Membership, preimage and coset services for edge-group images.

An oracle wraps a subgroup ``H = iota(G_e)`` of an ambient catalog group,
given by the images of the edge group's basis generators.  Every backend
answers ``contains`` and ``preimage``; backends that know a canonical
left-coset representative also implement ``coset_rep`` (used for normal
forms in the fundamental group).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import BudgetExceeded, ElementKindMismatch, NotInSubgroup, OracleUnknown
from .groups import (
    BaumslagSolitar,
    FreeAbelian,
    FreeByCyclic,
    FreeGroup,
    SemidirectZ2Z,
    cached_ball,
    free_reduce,
)


def _winv(w):
    return tuple(-a for a in reversed(w))


def _wmul(a, b):
    i = 0
    n = min(len(a), len(b))
    while i < n and a[-1 - i] == -b[i]:
        i += 1
    return a[: len(a) - i] + b[i:]


# ----------------------------------------------------------------------
# Stallings graphs


class StallingsGraph:
    """Folded graph of a finitely generated subgroup of a free group.

    Edges carry a label in the free group on the input generators (the
    generator-origin label), so tracing a word from the base state both
    decides membership and spells the word in the input generators.
    """

    def __init__(self, ambient, gens):
        self.ambient = ambient
        self.gens = [tuple(g) for g in gens]
        self.free_basis = True
        self._next = 1
        self.edges = {}
        self._eid = 0
        for i, w in enumerate(self.gens):
            if not w:
                continue
            state = 0
            for pos, a in enumerate(w):
                nxt = 0 if pos == len(w) - 1 else self._new_state()
                lam = (i + 1,) if pos == 0 else ()
                self._add(state, a, nxt, lam)
                state = nxt
        self._fold()
        self._index()

    def _new_state(self):
        s = self._next
        self._next += 1
        return s

    def _add(self, p, a, q, lam):
        if a < 0:
            p, q, a, lam = q, p, -a, _winv(lam)
        self.edges[self._eid] = [p, a, q, lam]
        self._eid += 1

    def _find_conflict(self):
        out, inn = {}, {}
        for eid, (p, a, q, _) in self.edges.items():
            key = (p, a)
            if key in out:
                return "out", out[key], eid
            out[key] = eid
            key = (q, a)
            if key in inn:
                return "in", inn[key], eid
            inn[key] = eid
        return None

    def _fold(self):
        while True:
            conflict = self._find_conflict()
            if conflict is None:
                return
            side, e1, e2 = conflict
            p1, _, q1, l1 = self.edges[e1]
            p2, _, q2, l2 = self.edges[e2]
            t1, t2 = (q1, q2) if side == "out" else (p1, p2)
            if t1 == t2:
                if l1 != l2:
                    self.free_basis = False
                del self.edges[e2]
                continue
            if t2 < t1:
                e1, e2, t1, t2, l1, l2 = e2, e1, t2, t1, l2, l1
            keep, gone = t1, t2
            if side == "out":
                d = _wmul(_winv(l1), l2)
            else:
                d = _wmul(l1, _winv(l2))
            del self.edges[e2]
            dinv = _winv(d)
            for edge in self.edges.values():
                if edge[0] == gone:
                    edge[0] = keep
                    edge[3] = _wmul(d, edge[3])
                if edge[2] == gone:
                    edge[2] = keep
                    edge[3] = _wmul(edge[3], dinv)

    def _index(self):
        self.out = {}
        self.inn = {}
        for p, a, q, lam in self.edges.values():
            self.out[(p, a)] = (q, lam)
            self.inn[(q, a)] = (p, lam)
        self.states = sorted({0} | {e[0] for e in self.edges.values()} | {e[2] for e in self.edges.values()})
        # spanning tree paths from the base, deterministic BFS order
        self.tree_path = {0: ()}
        frontier = [0]
        while frontier:
            nxt = []
            for s in frontier:
                for a in range(1, self.ambient.rank + 1):
                    for letter, table in ((a, self.out), (-a, self.inn)):
                        hit = table.get((s, a))
                        if hit is not None and hit[0] not in self.tree_path:
                            self.tree_path[hit[0]] = self.tree_path[s] + (letter,)
                            nxt.append(hit[0])
            frontier = nxt

    def __len__(self):
        return len(self.states)

    def step(self, state, letter):
        if letter > 0:
            return self.out.get((state, letter))
        hit = self.inn.get((state, -letter))
        if hit is None:
            return None
        return hit[0], _winv(hit[1])

    def trace(self, word):
        """Follow ``word`` from the base; returns (state, label, consumed)."""
        state, label = 0, ()
        for i, a in enumerate(word):
            hit = self.step(state, a)
            if hit is None:
                return state, label, i
            state, lam = hit
            label = _wmul(label, lam)
        return state, label, len(word)

    def contains(self, word):
        state, _, used = self.trace(word)
        return used == len(word) and state == 0

    def preimage(self, word):
        state, label, used = self.trace(word)
        if used != len(word) or state != 0:
            raise NotInSubgroup(f"{word!r} is not in the subgroup")
        return label

    def right_coset_rep(self, word):
        """Canonical representative of ``H word``."""
        state, _, used = self.trace(word)
        return free_reduce(self.tree_path[state] + tuple(word[used:]))

    def left_coset_rep(self, word):
        """Canonical representative of ``word H``."""
        return _winv(self.right_coset_rep(_winv(word)))

    def signature(self):
        """Isomorphism-invariant description (relabel states by tree paths)."""
        name = {s: self.tree_path.get(s) for s in self.states}
        return sorted((name[p], a, name[q]) for p, a, q, _ in self.edges.values())


def stallings_fold(ambient, gens):
    return StallingsGraph(ambient, gens)



# ----------------------------------------------------------------------
# integer lattices


def hermite_normal_form(rows):
    """Row-style HNF with transform: returns (H, U, rank) with H = U * rows.

    H is in echelon form with positive pivots and entries above each pivot
    reduced into ``[0, pivot)``.  Zero rows are moved to the bottom.
    """
    m = [list(r) for r in rows]
    k = len(m)
    n = len(m[0]) if m else 0
    u = [[1 if i == j else 0 for j in range(k)] for i in range(k)]
    r = 0
    pivots = []
    for c in range(n):
        # gcd-eliminate column c below row r
        while True:
            nz = [i for i in range(r, k) if m[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(m[i][c]))
            m[r], m[piv] = m[piv], m[r]
            u[r], u[piv] = u[piv], u[r]
            done = True
            for i in range(r + 1, k):
                if m[i][c]:
                    q = m[i][c] // m[r][c]
                    m[i] = [x - q * y for x, y in zip(m[i], m[r])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[r])]
                    if m[i][c]:
                        done = False
            if done:
                break
        if r < k and m[r][c] != 0:
            if m[r][c] < 0:
                m[r] = [-x for x in m[r]]
                u[r] = [-x for x in u[r]]
            for i in range(r):
                q = m[i][c] // m[r][c]
                if q:
                    m[i] = [x - q * y for x, y in zip(m[i], m[r])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[r])]
            pivots.append(c)
            r += 1
            if r == k:
                break
    return m, u, r, pivots


class IntegerLattice:
    """Sublattice of ``Z^n`` spanned by integer vectors (linearly independent)."""

    def __init__(self, vectors, dim=None):
        self.vectors = [tuple(int(x) for x in v) for v in vectors]
        self.dim = dim if dim is not None else (len(self.vectors[0]) if self.vectors else 0)
        if self.vectors:
            h, u, rank, pivots = hermite_normal_form(self.vectors)
        else:
            h, u, rank, pivots = [], [], 0, []
        if rank != len(self.vectors):
            raise ValueError("lattice generators are linearly dependent")
        self.hnf = h[:rank]
        self.transform = u[:rank]
        self.pivots = pivots

    def reduce(self, v):
        """Canonical representative of ``v`` modulo the lattice, plus HNF coordinates."""
        v = list(v)
        coords = []
        for row, c in zip(self.hnf, self.pivots):
            q = v[c] // row[c]
            coords.append(q)
            if q:
                v = [x - q * y for x, y in zip(v, row)]
        return tuple(v), coords

    def contains(self, v):
        rem, _ = self.reduce(v)
        return not any(rem)

    def coordinates(self, v):
        """Integer coefficients ``h`` with ``sum h_i vectors_i = v``."""
        rem, coords = self.reduce(v)
        if any(rem):
            raise NotInSubgroup(f"{v!r} is not in the lattice")
        k = len(self.vectors)
        return tuple(sum(coords[r] * self.transform[r][i] for r in range(len(coords))) for i in range(k))


# ----------------------------------------------------------------------
# oracles


class SubgroupOracle:
    """Base oracle; ``images`` are the ambient images of the edge-group basis."""

    backend = "abstract"
    backend_tag = None

    def __init__(self, ambient, images, edge_group=None):
        self.ambient = ambient
        self.images = [ambient.check(g) for g in images]
        self.edge_group = edge_group or _default_edge_group(ambient, len(self.images))

    def contains(self, g):
        raise NotImplementedError

    def preimage(self, g):
        raise NotImplementedError

    def coset_rep(self, g):
        """Canonical representative of the left coset ``g H`` (None if unsupported)."""
        return None

    @property
    def has_coset_reps(self):
        return False

    def _from_word(self, w):
        """Edge-group element for a word in the edge basis letters."""
        if isinstance(self.edge_group, FreeAbelian):
            v = [0] * self.edge_group.rank
            for a in w:
                v[abs(a) - 1] += 1 if a > 0 else -1
            return tuple(v)
        return tuple(w)

    def _from_vector(self, v):
        """Edge-group element for integer coordinates in the edge basis."""
        if isinstance(self.edge_group, FreeAbelian):
            return tuple(v)
        if len(v) != 1:
            raise ElementKindMismatch("a free edge group of rank > 1 has no abelian image")
        return _cyclic_word(v[0])

    def apply(self, h):
        """The embedding itself: substitute generator images into ``h``."""
        return apply_hom(self.edge_group, self.images, self.ambient, h)

    def _check(self, g):
        try:
            self.ambient.check(g)
        except ElementKindMismatch:
            raise
        return g

    def to_config(self):
        return {"backend": self.backend}


def _default_edge_group(ambient, n):
    if isinstance(ambient, FreeAbelian):
        return FreeAbelian(n, [f"a{i + 1}" for i in range(n)])
    return FreeGroup([f"a{i + 1}" for i in range(n)])


def apply_hom(source, images, target, h):
    """Image of ``h`` under the homomorphism sending basis letter i to ``images[i]``."""
    if isinstance(source, FreeAbelian):
        out = target.identity
        for i, c in enumerate(h):
            if c:
                out = target.mul(out, target.power(images[i], c))
        return out
    out = target.identity
    inv_cache = {}
    for i, sign in source.spell(h):
        if sign > 0:
            out = target.mul(out, images[i])
        else:
            if i not in inv_cache:
                inv_cache[i] = target.inv(images[i])
            out = target.mul(out, inv_cache[i])
    return out


class StallingsOracle(SubgroupOracle):
    backend = "stallings"

    def __init__(self, ambient, images, edge_group=None):
        if not isinstance(ambient, FreeGroup):
            raise ElementKindMismatch("stallings backend needs a free ambient group")
        super().__init__(ambient, images, edge_group)
        self.graph = StallingsGraph(ambient, self.images)

    def contains(self, g):
        return self.graph.contains(self._check(g))

    def preimage(self, g):
        return self._from_word(self.graph.preimage(self._check(g)))

    def coset_rep(self, g):
        return self.graph.left_coset_rep(g)

    @property
    def has_coset_reps(self):
        return True


class FactorOracle(SubgroupOracle):
    """Free factor spanned by a subset of the basis letters."""

    backend = "factor"

    def __init__(self, ambient, images, edge_group=None):
        super().__init__(ambient, images, edge_group)
        self.letters = {}
        for i, g in enumerate(self.images):
            if len(g) != 1 or g[0] < 0:
                raise ValueError("factor backend needs basis letters as images")
            self.letters[g[0]] = i + 1

    def contains(self, g):
        return all(abs(a) in self.letters for a in self._check(g))

    def preimage(self, g):
        if not self.contains(g):
            raise NotInSubgroup(f"{g!r} is not in the factor")
        return self._from_word(tuple(self.letters[a] if a > 0 else -self.letters[-a] for a in g))

    def coset_rep(self, g):
        i = len(g)
        while i and abs(g[i - 1]) in self.letters:
            i -= 1
        return g[:i]

    @property
    def has_coset_reps(self):
        return True


class LatticeOracle(SubgroupOracle):
    backend = "lattice"

    def __init__(self, ambient, images, edge_group=None):
        if not isinstance(ambient, FreeAbelian):
            raise ElementKindMismatch("lattice backend needs a free abelian ambient group")
        super().__init__(ambient, images, edge_group)
        self.lattice = IntegerLattice(self.images, ambient.rank)

    def contains(self, g):
        return self.lattice.contains(self._check(g))

    def preimage(self, g):
        return self._from_vector(self.lattice.coordinates(self._check(g)))

    def coset_rep(self, g):
        return self.lattice.reduce(g)[0]

    @property
    def has_coset_reps(self):
        return True


class FiberOracle(SubgroupOracle):
    """Subgroup of the fiber of ``Z^2 x| Z`` or ``F_r x| Z``."""

    backend = "fiber"

    def __init__(self, ambient, images, edge_group=None):
        if not isinstance(ambient, (SemidirectZ2Z, FreeByCyclic)):
            raise ElementKindMismatch("fiber backend needs a semidirect ambient group")
        super().__init__(ambient, images, edge_group)
        for g in self.images:
            if self._level(g) != 0:
                raise ValueError("fiber images must have zero t-exponent")
        self._by_level = {}
        if isinstance(ambient, SemidirectZ2Z):
            self.lattice = IntegerLattice([(g[0], g[1]) for g in self.images], 2)
        else:
            self.graph = StallingsGraph(ambient.fiber_group, [g[0] for g in self.images])

    @staticmethod
    def _level(g):
        return g[2] if len(g) == 3 else g[1]

    def contains(self, g):
        self._check(g)
        if self._level(g) != 0:
            return False
        if isinstance(self.ambient, SemidirectZ2Z):
            return self.lattice.contains((g[0], g[1]))
        return self.graph.contains(g[0])

    def preimage(self, g):
        if not self.contains(g):
            raise NotInSubgroup(f"{g!r} is not in the fiber subgroup")
        if isinstance(self.ambient, SemidirectZ2Z):
            return self._from_vector(self.lattice.coordinates((g[0], g[1])))
        return self._from_word(self.graph.preimage(g[0]))

    def _conjugated(self, k):
        """The structure describing ``t^k H t^-k`` inside the fiber."""
        hit = self._by_level.get(k)
        if hit is None:
            if isinstance(self.ambient, SemidirectZ2Z):
                a = self.ambient.matrix_power(k)
                vecs = [
                    (a[0][0] * g[0] + a[0][1] * g[1], a[1][0] * g[0] + a[1][1] * g[1])
                    for g in self.images
                ]
                hit = IntegerLattice(vecs, 2)
            else:
                hit = StallingsGraph(
                    self.ambient.fiber_group, [self.ambient.apply(g[0], k) for g in self.images]
                )
            self._by_level[k] = hit
        return hit

    def coset_rep(self, g):
        if isinstance(self.ambient, SemidirectZ2Z):
            rem, _ = self._conjugated(g[2]).reduce((g[0], g[1]))
            return (rem[0], rem[1], g[2])
        return (self._conjugated(g[1]).left_coset_rep(g[0]), g[1])

    @property
    def has_coset_reps(self):
        return True


class CyclicTranslationOracle(SubgroupOracle):
    """``<x^c>`` inside ``BS(1, m)``: integer translations divisible by ``c``."""

    backend = "cyclic"

    def __init__(self, ambient, images, edge_group=None):
        super().__init__(ambient, images, edge_group)
        (z,) = self.images
        if z[1] != 0 or z[2] != 0 or z[0] == 0:
            raise ValueError("cyclic backend on BS(1,m) needs z = x^c")
        self.c = z[0]

    def contains(self, g):
        self._check(g)
        return g[1] == 0 and g[2] == 0 and g[0] % self.c == 0

    def preimage(self, g):
        if not self.contains(g):
            raise NotInSubgroup(f"{g!r} is not in <x^{self.c}>")
        return self._from_vector((g[0] // self.c,))

    def coset_rep(self, g):
        # (a, k) * (c i, 0) = (a + m^k c i, k): reduce a modulo m^k |c|
        m = self.ambient.m
        a = Fraction(g[0], m ** g[1])
        period = Fraction(m) ** g[2] * abs(self.c)
        r = a - period * (a // period)
        den = r.denominator
        j = 0
        while den > 1:
            den //= m
            j += 1
        return (r.numerator * (m ** j // r.denominator), j, g[2]) if r else (0, 0, g[2])

    @property
    def has_coset_reps(self):
        return True


def _cyclic_word(n):
    return (1,) * n if n >= 0 else (-1,) * (-n)


class BoundedOracle(SubgroupOracle):
    """Membership by enumerating products of generator images up to ``cutoff``."""

    backend = "bounded"

    def __init__(self, ambient, images, edge_group=None, cutoff=8, budget=200_000):
        super().__init__(ambient, images, edge_group)
        self.cutoff = cutoff
        self.budget = budget
        self._table = None

    def _enumerate(self):
        if self._table is None:
            eg = self.edge_group
            table = {self.ambient.identity: eg.identity}
            frontier = [(self.ambient.identity, eg.identity)]
            gens = []
            for i, img in enumerate(self.images):
                for sign in (1, -1):
                    letter = tuple((1 if j == i else 0) * sign for j in range(len(self.images)))
                    h = letter if isinstance(eg, FreeAbelian) else ((i + 1) * sign,)
                    gens.append((img if sign > 0 else self.ambient.inv(img), h))
            for _ in range(self.cutoff):
                nxt = []
                for g, h in frontier:
                    for s, hs in gens:
                        y = self.ambient.mul(g, s)
                        if y not in table:
                            table[y] = eg.mul(h, hs)
                            nxt.append((y, table[y]))
                if len(table) > self.budget:
                    raise BudgetExceeded("bounded subgroup search exceeded budget")
                frontier = nxt
            self._table = table
        return self._table

    def contains(self, g):
        if self._check(g) in self._enumerate():
            return True
        return None

    def preimage(self, g):
        table = self._enumerate()
        if g not in table:
            raise OracleUnknown(f"{g!r} not found within {self.cutoff} generator products")
        return table[g]

    def to_config(self):
        return {"backend": self.backend, "cutoff": self.cutoff}


BACKENDS = {
    "stallings": StallingsOracle,
    "factor": FactorOracle,
    "lattice": LatticeOracle,
    "fiber": FiberOracle,
    "bounded": BoundedOracle,
}


def cyclic_oracle(ambient, z, edge_group=None):
    """Oracle for ``<z>`` chosen from the ambient structure."""
    if isinstance(ambient, FreeAbelian):
        return LatticeOracle(ambient, [z], edge_group)
    if isinstance(ambient, FreeGroup):
        return StallingsOracle(ambient, [z], edge_group)
    if isinstance(ambient, (SemidirectZ2Z, FreeByCyclic)) and FiberOracle._level(z) == 0:
        return FiberOracle(ambient, [z], edge_group)
    if isinstance(ambient, BaumslagSolitar) and z[1] == 0 and z[2] == 0:
        return CyclicTranslationOracle(ambient, [z], edge_group)
    return BoundedOracle(ambient, [z], edge_group)


def make_oracle(backend, ambient, images, edge_group=None, **params):
    if backend == "cyclic":
        if len(images) != 1:
            raise ValueError("cyclic backend takes exactly one generator")
        return cyclic_oracle(ambient, images[0], edge_group)
    if backend not in BACKENDS:
        raise ValueError(f"unknown oracle backend {backend!r}")
    return BACKENDS[backend](ambient, images, edge_group, **params)


def contains(oracle, g):
    return oracle.contains(g)


def preimage(oracle, g):
    return oracle.preimage(g)


def nearest_in_coset(oracle, target, left_coset_rep, radius, budget=None):
    """Closest element of ``left_coset_rep * H`` to ``target`` in the word metric.

    Returns ``(m, d)`` with ``d = L(target^-1 m)`` minimal among elements with
    ``d <= radius``, or ``(None, None)`` when there is none within ``radius``.
    """
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    group = oracle.ambient
    rep_inv = group.inv(left_coset_rep)
    if isinstance(oracle, LatticeOracle) and len(oracle.images) == 1:
        return _nearest_on_line(oracle, target, left_coset_rep, radius)
    if isinstance(oracle, StallingsOracle) and group.standard:
        # the shortest element of y H is the inverse of the Schreier-graph
        # geodesic for H y^-1, which is exactly the coset representative
        rep = oracle.coset_rep(group.mul(group.inv(target), left_coset_rep))
        if len(rep) > radius:
            return None, None
        return group.mul(target, rep), len(rep)
    kwargs = {} if budget is None else {"budget": budget}
    table = cached_ball(group, radius, **kwargs)
    for r in range(radius + 1):
        for beta in table.spheres[r]:
            m = group.mul(target, beta)
            if oracle.contains(group.mul(rep_inv, m)):
                return m, r
    return None, None


def _nearest_on_line(oracle, target, rep, radius):
    """Exact L1 closest point on ``rep + Z z``: the distance is convex in the step."""
    z = oracle.images[0]
    base = tuple(r - t for r, t in zip(rep, target))

    def dist(k):
        return sum(abs(b + k * c) for b, c in zip(base, z))

    # the minimum of a convex piecewise-linear function sits at a breakpoint
    candidates = {0}
    for b, c in zip(base, z):
        if c:
            q = Fraction(-b, c)
            candidates.update({q.numerator // q.denominator, q.numerator // q.denominator + 1})
    best = min(sorted(candidates), key=lambda k: (dist(k), abs(k)))
    d = dist(best)
    if d > radius:
        return None, None
    return tuple(r + best * c for r, c in zip(rep, z)), d


def brute_force_subgroup(ambient, images, max_len):
    """All products of at most ``max_len`` generator images (independent oracle)."""
    gens = list(images) + [ambient.inv(g) for g in images]
    seen = {ambient.identity}
    frontier = [ambient.identity]
    for _ in range(max_len):
        nxt = []
        for g in frontier:
            for s in gens:
                y = ambient.mul(g, s)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


__all__ = [
    "StallingsGraph",
    "stallings_fold",
    "IntegerLattice",
    "hermite_normal_form",
    "SubgroupOracle",
    "StallingsOracle",
    "FactorOracle",
    "LatticeOracle",
    "FiberOracle",
    "CyclicTranslationOracle",
    "BoundedOracle",
    "cyclic_oracle",
    "make_oracle",
    "contains",
    "preimage",
    "nearest_in_coset",
    "brute_force_subgroup",
    "apply_hom",
]
