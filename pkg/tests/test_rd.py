import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gogrd.errors import ContextMismatch
from gogrd.groups import BaumslagSolitar, FreeAbelian, FreeGroup, cached_ball
from gogrd.rd import (
    SupportedFunction,
    amenable_lower_bound,
    convolve,
    l1_norm,
    l2_norm_sq,
    random_function,
    ratio_sq,
    rd_ratio_curve,
)

from .strategies import words

F2 = FreeGroup(["a", "b"])
Z1 = FreeAbelian(1, ["a"])
Z2 = FreeAbelian(2, ["a", "b"])
BS2 = BaumslagSolitar(2)


def functions(group, max_points=4):
    weights = st.one_of(st.integers(1, 9), st.fractions(Fraction(1, 6), Fraction(9)))
    return st.dictionaries(words(group, 4), weights, min_size=1, max_size=max_points).map(
        lambda d: SupportedFunction(group, d)
    )


@pytest.mark.parametrize("group", [F2, Z2, BS2], ids=repr)
def test_convolution_is_associative(group):
    @given(functions(group), functions(group), functions(group))
    def check(f, g, h):
        assert convolve(convolve(f, g), h) == convolve(f, convolve(g, h))

    check()


@pytest.mark.parametrize("group", [F2, Z2, BS2], ids=repr)
def test_young_inequality(group):
    @given(functions(group), functions(group))
    def check(f, g):
        fg = convolve(f, g)
        assert l2_norm_sq(fg) <= l1_norm(f) ** 2 * l2_norm_sq(g)
        assert l1_norm(fg) == l1_norm(f) * l1_norm(g)

    check()


@given(words(F2, 6), functions(F2))
def test_delta_is_an_isometry(x, g):
    assert ratio_sq(SupportedFunction.delta(F2, x), g) == 1


def test_ratio_is_exact_fraction():
    f = SupportedFunction(Z1, {(0,): Fraction(1, 3), (1,): 2})
    q = ratio_sq(f, f)
    assert isinstance(q, Fraction)
    # f*f = 1/9 d0 + 4/3 d1 + 4 d2
    assert q == Fraction(1 + 144 + 1296, 81) / (Fraction(37, 9) ** 2)


def test_context_mismatch():
    with pytest.raises(ContextMismatch):
        convolve(SupportedFunction.delta(F2, ()), SupportedFunction.delta(Z2, (0, 0)))


def test_negative_weights_rejected():
    with pytest.raises(ValueError):
        SupportedFunction(Z2, {(0, 0): -1})


def test_random_function_rational():
    rng = random.Random(1)
    f = random_function(Z2, [(0, 0), (1, 0), (0, 1)], rng, rational=True)
    assert all(v > 0 for v in f.values.values())


@pytest.mark.parametrize("strategy", ["random-nonneg", "sphere-indicator"])
def test_free_group_within_haagerup_bound(strategy):
    curve = rd_ratio_curve(F2, 3, strategy=strategy, samples=4, seed=2)
    for p in curve.points:
        # for f supported in B(r): ||f*g|| <= (r + 1)^(3/2) ||f|| ||g||
        assert p.ratio_sq <= (p.r + 1) ** 3


def test_unknown_strategy():
    with pytest.raises(ValueError):
        rd_ratio_curve(F2, 2, strategy="magic")


@pytest.mark.parametrize("group", [Z1, Z2], ids=repr)
def test_amenable_lower_bound(group):
    prev = 0
    for r in range(1, 4):
        size = len(cached_ball(group, r).ball(r))
        sq, value = amenable_lower_bound(group, r, 8 * r)
        assert value <= size
        assert value >= 0.9 * size
        assert value > prev
        prev = value


def test_amenable_lower_bound_exact_on_z():
    # chi_[-1,1] * chi_[-R,R] is 3 on 2R - 1 points, then 2 and 1 at each end
    sq, _ = amenable_lower_bound(Z1, 1, 4)
    assert sq == Fraction(7 * 9 + 2 * 4 + 2 * 1, 9)


def test_amenable_lower_bound_requires_abelian():
    with pytest.raises(ValueError):
        amenable_lower_bound(F2, 1, 4)
