"""Exact convolution on group algebras and empirical Rapid Decay ratios.

Functions are nonnegative and finitely supported; values are ints or
Fractions so every norm identity is checked without rounding.  Ratios are
kept squared (``||f*g||^2 / (||f||^2 ||g||^2)``) until reporting.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ContextMismatch
from .groups import DEFAULT_BUDGET, FreeAbelian, cached_ball


class SupportedFunction:
    """Finitely supported nonnegative function on ``group``."""

    __slots__ = ("group", "values")

    def __init__(self, group, values=None):
        self.group = group
        self.values = {}
        for g, c in (values or {}).items():
            if c < 0:
                raise ValueError("functions in R+G take nonnegative values")
            if c:
                self.values[g] = self.values.get(g, 0) + c

    @classmethod
    def delta(cls, group, g, weight=1):
        return cls(group, {g: weight})

    @classmethod
    def indicator(cls, group, elements):
        return cls(group, {g: 1 for g in elements})

    def __call__(self, g):
        return self.values.get(g, 0)

    def support(self):
        return list(self.values)

    def __len__(self):
        return len(self.values)

    def __eq__(self, other):
        return isinstance(other, SupportedFunction) and self.group == other.group and self.values == other.values

    def __add__(self, other):
        _same_context(self, other)
        out = dict(self.values)
        for g, c in other.values.items():
            out[g] = out.get(g, 0) + c
        return SupportedFunction(self.group, out)

    def scale(self, c):
        return SupportedFunction(self.group, {g: c * v for g, v in self.values.items()})

    def __repr__(self):
        return f"SupportedFunction({len(self.values)} points on {self.group!r})"


def _same_context(f, g):
    if f.group != g.group:
        raise ContextMismatch("functions live on different groups")


def convolve(f, g):
    """``(f*g)(x) = sum_mu f(mu) g(mu^-1 x)``."""
    _same_context(f, g)
    mul = f.group.mul
    out = {}
    for a, fa in f.values.items():
        for b, gb in g.values.items():
            x = mul(a, b)
            out[x] = out.get(x, 0) + fa * gb
    return SupportedFunction(f.group, out)


def l2_norm_sq(f):
    return sum(v * v for v in f.values.values())


def l1_norm(f):
    return sum(f.values.values())


def ratio_sq(f, g, fg=None):
    """``||f*g||^2 / (||f||^2 ||g||^2)`` as an exact Fraction."""
    fg = convolve(f, g) if fg is None else fg
    return Fraction(l2_norm_sq(fg)) / (Fraction(l2_norm_sq(f)) * l2_norm_sq(g))


def random_function(group, support, rng, max_weight=9, density=1.0, rational=False):
    """Random nonnegative weights on a random part of ``support``.

    Weights are integers in ``[0, max_weight]``, or with ``rational`` such
    integers divided by a random denominator in ``[1, 6]``.
    """
    values = {}
    for g in support:
        if rng.random() <= density:
            w = rng.randint(0, max_weight)
            if w and rational:
                w = Fraction(w, rng.randint(1, 6))
            if w:
                values[g] = w
    if not values:
        values[support[rng.randrange(len(support))]] = 1
    return SupportedFunction(group, values)


# ----------------------------------------------------------------------
# Rapid Decay curves


@dataclass
class RDPoint:
    r: int
    ratio_sq: Fraction
    samples: int
    strategy: str
    f_kind: str
    f_size: int
    g_size: int

    @property
    def ratio(self):
        return math.sqrt(self.ratio_sq)

    def to_dict(self):
        return {
            "r": self.r,
            "ratio": self.ratio,
            "ratio_sq": str(self.ratio_sq),
            "samples": self.samples,
            "strategy": self.strategy,
            "f": self.f_kind,
            "f_size": self.f_size,
            "g_size": self.g_size,
        }


@dataclass
class RDCurve:
    points: list = field(default_factory=list)
    classification: object = None
    note: str = ""

    def to_dict(self):
        return {
            "points": [p.to_dict() for p in self.points],
            "classification": None if self.classification is None else self.classification.to_dict(),
            "note": self.note,
            "lower_bound": True,
        }


STRATEGIES = ("random-nonneg", "folner-indicator", "sphere-indicator")


def rd_ratio_curve(
    group,
    r_max,
    strategy="random-nonneg",
    samples=10,
    seed=0,
    folner_radius=None,
    f_support=None,
    g_support=None,
    budget=DEFAULT_BUDGET,
    r_min=1,
):
    """Worst sampled ``||f*g|| / (||f|| ||g||)`` with ``supp f`` in ``B(r)``.

    ``f`` runs over the indicator of the support plus ``samples`` random
    perturbations of it; ``g`` follows ``strategy``.  ``f_support(r)`` and
    ``g_support(r, R)`` override the default balls (used to restrict to an
    amenable subgroup whose balls are Foelner sets).
    """
    from .distortion import classify_growth

    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    rng = random.Random(seed)
    folner_radius = folner_radius or (lambda r: 4 * r)
    curve = RDCurve()
    for r in range(r_min, r_max + 1):
        if f_support is None:
            fsup = cached_ball(group, r, budget).ball(r)
        else:
            fsup = f_support(r)
        fs = [("indicator", SupportedFunction.indicator(group, fsup))]
        for i in range(samples):
            fs.append((f"random-{i}", random_function(group, fsup, rng, density=0.7)))
        gs = _g_candidates(group, r, strategy, samples, rng, folner_radius, g_support, budget)
        best = None
        count = 0
        for fname, f in fs:
            for g in gs:
                q = ratio_sq(f, g)
                count += 1
                if best is None or q > best[0]:
                    best = (q, fname, len(f), len(g))
        curve.points.append(RDPoint(r, best[0], count, strategy, best[1], best[2], best[3]))
    pts = [(p.r, p.ratio) for p in curve.points]
    if len(pts) >= 5:
        curve.classification = classify_growth(pts)
    return curve


def _g_candidates(group, r, strategy, samples, rng, folner_radius, g_support, budget):
    if strategy == "folner-indicator":
        big = folner_radius(r)
        sup = g_support(r, big) if g_support else cached_ball(group, big, budget).ball(big)
        return [SupportedFunction.indicator(group, sup)]
    if strategy == "sphere-indicator":
        table = cached_ball(group, r, budget)
        return [SupportedFunction.indicator(group, table.spheres[k]) for k in range(r + 1)]
    sup = g_support(r, r) if g_support else cached_ball(group, r, budget).ball(r)
    return [random_function(group, sup, rng, density=0.7) for _ in range(max(samples, 1))]


def amenable_lower_bound(group, r, big_r, budget=DEFAULT_BUDGET):
    """``||chi_B(r) * chi_B(R)||_2 / ||chi_B(R)||_2`` for ``H`` in {Z, Z^2}.

    A certified lower bound for the operator norm of ``chi_B(r)``.  Returns
    ``(squared value as Fraction, float value)``.
    """
    if not isinstance(group, FreeAbelian) or group.rank not in (1, 2):
        raise ValueError("amenable_lower_bound is implemented for Z and Z^2")
    small = SupportedFunction.indicator(group, cached_ball(group, r, budget).ball(r))
    big = SupportedFunction.indicator(group, _l1_ball(group.rank, big_r))
    sq = Fraction(l2_norm_sq(convolve(small, big)), l2_norm_sq(big))
    return sq, math.sqrt(sq)


def _l1_ball(rank, radius):
    if rank == 1:
        return [(n,) for n in range(-radius, radius + 1)]
    return [
        (a, b)
        for a in range(-radius, radius + 1)
        for b in range(-(radius - abs(a)), radius - abs(a) + 1)
    ]


__all__ = [
    "SupportedFunction",
    "convolve",
    "l2_norm_sq",
    "l1_norm",
    "ratio_sq",
    "random_function",
    "rd_ratio_curve",
    "amenable_lower_bound",
    "RDCurve",
    "RDPoint",
]
