"""Catalog of concrete groups with unique canonical forms.

Every group exposes the same small surface: ``identity``, ``mul``, ``inv``,
``check`` and a declared generating set ``generators`` (a tuple of
``(name, element)`` pairs).  Elements are plain hashable tuples, so equality
of elements is equality of canonical forms.

Canonical forms:

* ``FreeGroup``: freely reduced word, a tuple of nonzero ints where ``i+1``
  is the i-th basis letter and ``-(i+1)`` its inverse.
* ``FreeAbelian``: integer vector.
* ``SemidirectZ2Z``: ``(x, y, k)`` meaning ``(x, y) t^k``, with
  ``t v t^-1 = A v``.
* ``FreeByCyclic``: ``(word, k)`` meaning ``word t^k``, with
  ``t u t^-1 = alpha(u)``.
* ``BaumslagSolitar``: ``(n, j, k)`` meaning the affine map
  ``z -> n/m^j + m^k z`` i.e. ``x^(n/m^j) t^k``; ``n`` is prime to ``m``
  whenever ``j > 0``.
"""

from __future__ import annotations

import contextlib
import heapq
import math
import re
from dataclasses import dataclass, field

from .errors import BudgetExceeded, ElementKindMismatch

DEFAULT_BUDGET = 5_000_000

_ACTIVE_BUDGET = [DEFAULT_BUDGET]


@contextlib.contextmanager
def element_budget(n):
    """Cap every ball enumeration inside the block at ``n`` stored elements."""
    if n is None:
        yield
        return
    if n < 1:
        raise ValueError("element budget must be positive")
    _ACTIVE_BUDGET.append(min(n, _ACTIVE_BUDGET[-1]))
    try:
        yield
    finally:
        _ACTIVE_BUDGET.pop()


def effective_budget(budget):
    return min(budget, _ACTIVE_BUDGET[-1])

_TOKEN = re.compile(r"^([A-Za-z_][A-Za-z_0-9]*)(?:\^\(?(-?\d+)\)?)?$")


def parse_tokens(word):
    """Split ``"x1 x2^-1 t^3"`` into ``[("x1", 1), ("x2", -1), ("t", 3)]``."""
    if isinstance(word, (list, tuple)):
        word = " ".join(str(w) for w in word)
    word = word.replace("*", " ").replace(".", " ").strip()
    if word in ("", "1", "e", "id"):
        return []
    out = []
    for tok in word.split():
        m = _TOKEN.match(tok)
        if m is None:
            raise ValueError(f"cannot parse token {tok!r} in {word!r}")
        out.append((m.group(1), int(m.group(2)) if m.group(2) else 1))
    return out


def free_reduce(letters):
    out = []
    for a in letters:
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def word_power(w, n):
    if n < 0:
        w = tuple(-a for a in reversed(w))
        n = -n
    return free_reduce(w * n)


class Group:
    """Common machinery: symmetric generators, powers, parsing, search."""

    kind = "abstract"
    identity = ()
    standard = False

    def __init__(self):
        self._sym = None

    # -- group law -----------------------------------------------------
    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def check(self, a):
        return a

    def power(self, g, n):
        if n < 0:
            g, n = self.inv(g), -n
        result = self.identity
        while n:
            if n & 1:
                result = self.mul(result, g)
            g = self.mul(g, g)
            n >>= 1
        return result

    def product(self, elements):
        result = self.identity
        for g in elements:
            result = self.mul(result, g)
        return result

    # -- generators ----------------------------------------------------
    @property
    def generator_names(self):
        return [name for name, _ in self.generators]

    def symmetric_generators(self):
        """Generators and inverses, deduplicated, identity removed."""
        if self._sym is None:
            seen = {}
            for name, g in self.generators:
                for label, h in ((name, g), (name + "^-1", self.inv(g))):
                    if h != self.identity and h not in seen:
                        seen[h] = label
            self._sym = [(label, h) for h, label in seen.items()]
        return self._sym

    def named_elements(self):
        """Names accepted by :meth:`parse` (generators plus extra aliases)."""
        return dict(self.generators)

    def parse(self, word):
        names = self.named_elements()
        result = self.identity
        for name, exp in parse_tokens(word):
            if name not in names:
                raise ValueError(f"unknown generator {name!r} for {self!r}")
            result = self.mul(result, self.power(names[name], exp))
        return result

    def format(self, g):
        return repr(g)

    # -- lengths -------------------------------------------------------
    def closed_form_length(self, g):
        """Exact length when a closed form exists, else None."""
        return None

    def length_lower_bound(self, g):
        """A lower bound on the word length that is 1-Lipschitz."""
        return 0

    def word_length(self, g, cutoff=64, budget=DEFAULT_BUDGET):
        """Exact word length, or ``None`` when it exceeds ``cutoff``.

        Uses the closed form when available, otherwise A* search over the
        Cayley graph with :meth:`length_lower_bound` as heuristic (which is
        consistent, so the first time ``g`` is popped its length is exact).
        """
        self.check(g)
        closed = self.closed_form_length(g)
        if closed is not None:
            return closed if closed <= cutoff else None
        if g == self.identity:
            return 0
        table = _BALL_CACHE.get(self)
        if table is not None:
            if g in table.lengths:
                length = table.lengths[g]
                return length if length <= cutoff else None
            if table.radius >= cutoff:
                return None
        gens = [h for _, h in self.symmetric_generators()]
        inv = self.inv
        mul = self.mul
        lb = self.length_lower_bound

        def h(x):
            return lb(mul(inv(x), g))

        start = self.identity
        dist = {start: 0}
        heap = [(h(start), 0, 0, start)]
        counter = 0
        while heap:
            f, negd, _, x = heapq.heappop(heap)
            d = -negd
            if f > cutoff:
                return None
            if x == g:
                return d
            if dist.get(x, math.inf) < d:
                continue
            for s in gens:
                y = mul(x, s)
                nd = d + 1
                if nd < dist.get(y, math.inf):
                    dist[y] = nd
                    fy = nd + h(y)
                    if fy <= cutoff:
                        counter += 1
                        heapq.heappush(heap, (fy, -nd, counter, y))
            if len(dist) > budget:
                raise BudgetExceeded(f"word_length search exceeded {budget} elements")
        return None

    def ball(self, radius, budget=DEFAULT_BUDGET):
        return ball_enumerate(self, radius, budget)

    def to_config(self):
        raise NotImplementedError


@dataclass
class LengthTable:
    """Exact word lengths on a ball of the Cayley graph."""

    radius: int
    lengths: dict = field(default_factory=dict)
    spheres: list = field(default_factory=list)

    def ball(self, r=None):
        r = self.radius if r is None else r
        out = []
        for sphere in self.spheres[: r + 1]:
            out.extend(sphere)
        return out

    def ball_sizes(self):
        sizes, total = [], 0
        for sphere in self.spheres:
            total += len(sphere)
            sizes.append(total)
        return sizes

    def __contains__(self, g):
        return g in self.lengths

    def __len__(self):
        return len(self.lengths)


def ball_enumerate(group, radius, budget=DEFAULT_BUDGET):
    """Breadth-first enumeration of the ball of ``radius``.

    Raises BudgetExceeded with the partial table (complete up to
    ``reached``) when more than ``budget`` elements would be stored.
    """
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    budget = effective_budget(budget)
    gens = [h for _, h in group.symmetric_generators()]
    mul = group.mul
    table = LengthTable(radius=0, lengths={group.identity: 0}, spheres=[[group.identity]])
    for r in range(1, radius + 1):
        nxt = []
        lengths = table.lengths
        for x in table.spheres[-1]:
            for s in gens:
                y = mul(x, s)
                if y not in lengths:
                    lengths[y] = r
                    nxt.append(y)
            if len(lengths) > budget:
                for y in nxt:
                    del lengths[y]
                raise BudgetExceeded(
                    f"ball of radius {r} exceeds budget of {budget} elements",
                    partial=table,
                    reached=r - 1,
                )
        table.spheres.append(nxt)
        table.radius = r
    return table


# ----------------------------------------------------------------------
# Free groups


class FreeGroup(Group):
    """Free group on named basis letters with an optional redundant generating set.

    ``generators`` maps names to words in the basis; by default it is the
    basis itself.  ``aliases`` are extra names accepted by :meth:`parse`
    that are not part of the generating set.
    """

    kind = "free"

    def __init__(self, basis, generators=None, aliases=None):
        super().__init__()
        self.basis = tuple(basis)
        if len(set(self.basis)) != len(self.basis):
            raise ValueError("duplicate basis names")
        self._index = {name: i + 1 for i, name in enumerate(self.basis)}
        if generators is None:
            generators = {name: name for name in self.basis}
        self.generator_words = dict(generators)
        self.alias_words = dict(aliases or {})
        self.generators = tuple(
            (name, self._parse_basis(word)) for name, word in self.generator_words.items()
        )
        self.aliases = {name: self._parse_basis(w) for name, w in self.alias_words.items()}
        self.standard = [g for _, g in self.generators] == [(i + 1,) for i in range(self.rank)]
        self._ab_scale = max(
            (sum(abs(c) for c in self.abelianize(g)) for _, g in self.generators), default=1
        ) or 1

    def _parse_basis(self, word):
        letters = []
        for name, exp in parse_tokens(word):
            if name not in self._index:
                raise ValueError(f"unknown basis letter {name!r}")
            a = self._index[name]
            letters.extend([a if exp > 0 else -a] * abs(exp))
        return free_reduce(letters)

    @property
    def rank(self):
        return len(self.basis)

    def __repr__(self):
        return f"FreeGroup({', '.join(self.basis)})"

    def __eq__(self, other):
        return (
            isinstance(other, FreeGroup)
            and self.basis == other.basis
            and self.generators == other.generators
        )

    def __hash__(self):
        return hash((self.kind, self.basis, self.generators))

    def mul(self, a, b):
        i = 0
        n = min(len(a), len(b))
        while i < n and a[-1 - i] == -b[i]:
            i += 1
        return a[: len(a) - i] + b[i:]

    def inv(self, a):
        return tuple(-x for x in reversed(a))

    def check(self, a):
        if not isinstance(a, tuple) or any(
            not isinstance(x, int) or x == 0 or abs(x) > self.rank for x in a
        ):
            raise ElementKindMismatch(f"{a!r} is not a word of {self!r}")
        for x, y in zip(a, a[1:]):
            if x == -y:
                raise ElementKindMismatch(f"{a!r} is not freely reduced")
        return a

    def letter(self, name):
        return (self._index[name],)

    def named_elements(self):
        names = {name: (i + 1,) for i, name in enumerate(self.basis)}
        names.update(self.aliases)
        names.update(dict(self.generators))
        return names

    def format(self, g):
        if not g:
            return "1"
        out = []
        i = 0
        while i < len(g):
            j = i
            while j < len(g) and g[j] == g[i]:
                j += 1
            name = self.basis[abs(g[i]) - 1]
            exp = (j - i) * (1 if g[i] > 0 else -1)
            out.append(name if exp == 1 else f"{name}^{exp}")
            i = j
        return " ".join(out)

    def abelianize(self, g):
        v = [0] * self.rank
        for a in g:
            v[abs(a) - 1] += 1 if a > 0 else -1
        return tuple(v)

    def closed_form_length(self, g):
        return len(g) if self.standard else None

    def length_lower_bound(self, g):
        total = sum(abs(c) for c in self.abelianize(g))
        return -(-total // self._ab_scale)

    def spell(self, g):
        """Spell ``g`` as ``(basis index, +-1)`` letters (used by homomorphisms)."""
        return [(abs(a) - 1, 1 if a > 0 else -1) for a in g]

    def to_config(self):
        cfg = {"kind": "free", "basis": list(self.basis)}
        if not self.standard:
            cfg["generators"] = dict(self.generator_words)
        if self.alias_words:
            cfg["aliases"] = dict(self.alias_words)
        return cfg


# ----------------------------------------------------------------------
# Free abelian groups


class FreeAbelian(Group):
    kind = "abelian"
    standard = True

    def __init__(self, rank, names=None):
        super().__init__()
        self.rank = int(rank)
        self.names = tuple(names) if names else tuple(f"e{i + 1}" for i in range(self.rank))
        if len(self.names) != self.rank:
            raise ValueError("need one name per coordinate")
        self.identity = (0,) * self.rank
        self.generators = tuple(
            (name, tuple(1 if j == i else 0 for j in range(self.rank)))
            for i, name in enumerate(self.names)
        )

    def __repr__(self):
        return f"FreeAbelian({self.rank})"

    def __eq__(self, other):
        return isinstance(other, FreeAbelian) and self.names == other.names

    def __hash__(self):
        return hash((self.kind, self.names))

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        return tuple(-x for x in a)

    def power(self, g, n):
        return tuple(n * x for x in g)

    def check(self, a):
        if not isinstance(a, tuple) or len(a) != self.rank or any(not isinstance(x, int) for x in a):
            raise ElementKindMismatch(f"{a!r} is not an element of {self!r}")
        return a

    def format(self, g):
        parts = [
            name if c == 1 else f"{name}^{c}" for name, c in zip(self.names, g) if c
        ]
        return " ".join(parts) or "1"

    def closed_form_length(self, g):
        return sum(abs(x) for x in g)

    def spell(self, g):
        out = []
        for i, c in enumerate(g):
            out.extend([(i, 1 if c > 0 else -1)] * abs(c))
        return out

    def to_config(self):
        return {"kind": "abelian", "rank": self.rank, "names": list(self.names)}


# ----------------------------------------------------------------------
# Z^2 semidirect Z


def _mat_mul(a, b):
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


def _mat_vec(a, v):
    return (a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1])


class SemidirectZ2Z(Group):
    """``Z^2 x|_A Z``; for hyperbolic ``A`` this is a Sol lattice."""

    kind = "semidirect"

    def __init__(self, matrix, names=("e1", "e2", "t")):
        super().__init__()
        a = tuple(tuple(int(x) for x in row) for row in matrix)
        det = a[0][0] * a[1][1] - a[0][1] * a[1][0]
        if det != 1:
            raise ValueError(f"matrix {a} is not in SL2(Z)")
        self.matrix = a
        self.names = tuple(names)
        self._inverse = ((a[1][1], -a[0][1]), (-a[1][0], a[0][0]))
        self._powers = {0: ((1, 0), (0, 1)), 1: a, -1: self._inverse}
        self.identity = (0, 0, 0)
        self.generators = (
            (self.names[0], (1, 0, 0)),
            (self.names[1], (0, 1, 0)),
            (self.names[2], (0, 0, 1)),
        )

    def __repr__(self):
        return f"SemidirectZ2Z({list(map(list, self.matrix))})"

    def __eq__(self, other):
        return isinstance(other, SemidirectZ2Z) and self.matrix == other.matrix and self.names == other.names

    def __hash__(self):
        return hash((self.kind, self.matrix, self.names))

    @property
    def trace(self):
        return self.matrix[0][0] + self.matrix[1][1]

    def matrix_power(self, k):
        p = self._powers.get(k)
        if p is None:
            step = 1 if k > 0 else -1
            prev = self.matrix_power(k - step)
            p = _mat_mul(prev, self._powers[step])
            self._powers[k] = p
        return p

    def mul(self, a, b):
        w = _mat_vec(self.matrix_power(a[2]), (b[0], b[1]))
        return (a[0] + w[0], a[1] + w[1], a[2] + b[2])

    def inv(self, a):
        w = _mat_vec(self.matrix_power(-a[2]), (a[0], a[1]))
        return (-w[0], -w[1], -a[2])

    def check(self, a):
        if not isinstance(a, tuple) or len(a) != 3 or any(not isinstance(x, int) for x in a):
            raise ElementKindMismatch(f"{a!r} is not an element of {self!r}")
        return a

    def fiber(self, v):
        return (int(v[0]), int(v[1]), 0)

    def format(self, g):
        n = self.names
        parts = [f"{n[0]}^{g[0]}" if g[0] != 1 else n[0]] if g[0] else []
        if g[1]:
            parts.append(f"{n[1]}^{g[1]}" if g[1] != 1 else n[1])
        if g[2]:
            parts.append(f"{n[2]}^{g[2]}" if g[2] != 1 else n[2])
        return " ".join(parts) or "1"

    def length_lower_bound(self, g):
        return abs(g[2])

    def to_config(self):
        return {"kind": "semidirect", "matrix": [list(r) for r in self.matrix], "names": list(self.names)}


# ----------------------------------------------------------------------
# Free-by-cyclic


class FreeByCyclic(Group):
    """``F_r x|_alpha Z`` with ``alpha`` given by images of the basis letters."""

    kind = "free_by_cyclic"

    def __init__(self, basis, automorphism, t_name="t"):
        super().__init__()
        self.fiber_group = FreeGroup(basis)
        self.basis = self.fiber_group.basis
        self.t_name = t_name
        self.automorphism_words = {name: automorphism[name] for name in self.basis}
        images = tuple(self.fiber_group.parse(automorphism[name]) for name in self.basis)
        det = _integer_det([self.fiber_group.abelianize(w) for w in images])
        if abs(det) != 1:
            raise ValueError("automorphism is not invertible on the abelianization")
        self._images = {1: images, 0: tuple((i + 1,) for i in range(len(images)))}
        self._images[-1] = self._invert_images(images)
        self.identity = ((), 0)
        self.generators = tuple((name, ((i + 1,), 0)) for i, name in enumerate(self.basis)) + (
            (t_name, ((), 1)),
        )

    def _invert_images(self, images):
        from .subgroups import StallingsGraph

        graph = StallingsGraph(self.fiber_group, images)
        inverse = []
        for i in range(len(images)):
            h = graph.preimage((i + 1,))
            inverse.append(h)
        return tuple(inverse)

    def __repr__(self):
        return f"FreeByCyclic({', '.join(self.basis)}; {self.automorphism_words})"

    def __eq__(self, other):
        return (
            isinstance(other, FreeByCyclic)
            and self.basis == other.basis
            and self._images[1] == other._images[1]
        )

    def __hash__(self):
        return hash((self.kind, self.basis, self._images[1]))

    def images(self, k):
        imgs = self._images.get(k)
        if imgs is None:
            step = 1 if k > 0 else -1
            prev = self.images(k - step)
            base = self._images[step]
            imgs = tuple(self._substitute(w, base) for w in prev)
            self._images[k] = imgs
        return imgs

    @staticmethod
    def _substitute(word, images):
        out = []
        for a in word:
            img = images[abs(a) - 1]
            piece = img if a > 0 else tuple(-x for x in reversed(img))
            for x in piece:
                if out and out[-1] == -x:
                    out.pop()
                else:
                    out.append(x)
        return tuple(out)

    def apply(self, word, k=1):
        """alpha^k applied to a reduced word of the fiber."""
        if k == 0 or not word:
            return word
        return self._substitute(word, self.images(k))

    def mul(self, a, b):
        w = self.fiber_group.mul(a[0], self.apply(b[0], a[1]))
        return (w, a[1] + b[1])

    def inv(self, a):
        return (self.apply(self.fiber_group.inv(a[0]), -a[1]), -a[1])

    def check(self, a):
        if not isinstance(a, tuple) or len(a) != 2 or not isinstance(a[1], int):
            raise ElementKindMismatch(f"{a!r} is not an element of {self!r}")
        self.fiber_group.check(a[0])
        return a

    def format(self, g):
        w = self.fiber_group.format(g[0]) if g[0] else ""
        t = "" if g[1] == 0 else (self.t_name if g[1] == 1 else f"{self.t_name}^{g[1]}")
        return " ".join(p for p in (w, t) if p) or "1"

    def length_lower_bound(self, g):
        return abs(g[1])

    def to_config(self):
        return {
            "kind": "free_by_cyclic",
            "basis": list(self.basis),
            "automorphism": dict(self.automorphism_words),
            "t_name": self.t_name,
        }


def _integer_det(rows):
    from fractions import Fraction

    m = [[Fraction(x) for x in row] for row in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            for k in range(c, n):
                m[r][k] -= f * m[c][k]
    return int(det)


# ----------------------------------------------------------------------
# Baumslag-Solitar BS(1, m)


class BaumslagSolitar(Group):
    """``BS(1, m) = <x, t | t x t^-1 = x^m>`` acting affinely on ``Z[1/m]``."""

    kind = "bs"

    def __init__(self, m=2, names=("x", "t")):
        super().__init__()
        if m < 2:
            raise ValueError("BS(1, m) is implemented for m >= 2")
        self.m = int(m)
        self.names = tuple(names)
        self.identity = (0, 0, 0)
        self.generators = ((self.names[0], (1, 0, 0)), (self.names[1], (0, 0, 1)))

    def __repr__(self):
        return f"BS(1,{self.m})"

    def __eq__(self, other):
        return isinstance(other, BaumslagSolitar) and self.m == other.m and self.names == other.names

    def __hash__(self):
        return hash((self.kind, self.m, self.names))

    def _normalize(self, n, j):
        m = self.m
        while j > 0 and n % m == 0:
            n //= m
            j -= 1
        if n == 0:
            j = 0
        return n, j

    def _add(self, n1, j1, n2, j2):
        m = self.m
        if j1 >= j2:
            return self._normalize(n1 + n2 * m ** (j1 - j2), j1)
        return self._normalize(n1 * m ** (j2 - j1) + n2, j2)

    def _scale(self, n, j, k):
        """(n / m^j) * m^k in normal form."""
        if k >= j:
            return n * self.m ** (k - j), 0
        return self._normalize(n, j - k)

    def mul(self, a, b):
        n2, j2 = self._scale(b[0], b[1], a[2])
        n, j = self._add(a[0], a[1], n2, j2)
        return (n, j, a[2] + b[2])

    def inv(self, a):
        n, j = self._scale(-a[0], a[1], -a[2])
        return (n, j, -a[2])

    def check(self, a):
        if not isinstance(a, tuple) or len(a) != 3 or any(not isinstance(x, int) for x in a):
            raise ElementKindMismatch(f"{a!r} is not an element of {self!r}")
        if a[1] < 0 or (a[1] > 0 and a[0] % self.m == 0):
            raise ElementKindMismatch(f"{a!r} is not in normal form")
        return a

    def x_power(self, n):
        return (n, 0, 0)

    def translation(self, g):
        from fractions import Fraction

        return Fraction(g[0], self.m ** g[1])

    def format(self, g):
        x, t = self.names
        n, j, k = g
        parts = []
        if j:
            parts.append(f"{t}^-{j}")
        if n:
            parts.append(x if n == 1 else f"{x}^{n}")
        if j + k:
            parts.append(t if j + k == 1 else f"{t}^{j + k}")
        if not n:
            parts = [t if k == 1 else f"{t}^{k}"] if k else []
        return " ".join(parts) or "1"

    def length_lower_bound(self, g):
        # an x-letter at t-height h contributes m^h, so a denominator m^j
        # forces the t-profile down to -j before ending at k
        n, j, k = g
        return j + abs(k + j) + (1 if n else 0)

    def to_config(self):
        return {"kind": "bs", "m": self.m, "names": list(self.names)}


# ----------------------------------------------------------------------
# Public operations with kind checks


def multiply(group, a, b):
    group.check(a)
    group.check(b)
    return group.mul(a, b)


def invert(group, a):
    group.check(a)
    return group.inv(a)


def word_length(group, g, cutoff=64, budget=DEFAULT_BUDGET):
    if cutoff < 0:
        raise ValueError("cutoff must be nonnegative")
    return group.word_length(g, cutoff, budget)


def from_config(cfg):
    """Build a catalog group from a configuration mapping."""
    kind = cfg.get("kind")
    if kind == "free":
        if "basis" in cfg:
            basis = cfg["basis"]
        else:
            basis = [f"x{i + 1}" for i in range(int(cfg["rank"]))]
        return FreeGroup(basis, cfg.get("generators"), cfg.get("aliases"))
    if kind == "abelian":
        return FreeAbelian(cfg["rank"], cfg.get("names"))
    if kind == "semidirect":
        return SemidirectZ2Z(cfg["matrix"], tuple(cfg.get("names", ("e1", "e2", "t"))))
    if kind == "free_by_cyclic":
        return FreeByCyclic(cfg["basis"], cfg["automorphism"], cfg.get("t_name", "t"))
    if kind == "bs":
        return BaumslagSolitar(int(cfg.get("m", 2)), tuple(cfg.get("names", ("x", "t"))))
    raise ValueError(f"unknown group kind {kind!r}")


_BALL_CACHE = {}


def cached_ball(group, radius, budget=DEFAULT_BUDGET):
    """Ball enumeration memoized per group (the largest table is kept)."""
    budget = effective_budget(budget)
    table = _BALL_CACHE.get(group)
    if table is None or table.radius < radius:
        table = ball_enumerate(group, radius, budget)
        _BALL_CACHE[group] = table
        return table
    # a cached table must still honour the caller's budget
    for r, size in enumerate(table.ball_sizes()[: radius + 1]):
        if size > budget:
            partial = LengthTable(radius=r - 1, spheres=table.spheres[:r])
            partial.lengths = {g: k for k, sphere in enumerate(partial.spheres) for g in sphere}
            raise BudgetExceeded(f"ball of radius {r} exceeds budget of {budget} elements", partial=partial, reached=r - 1)
    return table
