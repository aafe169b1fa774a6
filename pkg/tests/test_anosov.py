import math

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from gogrd.anosov import (
    AnosovMap,
    has_no_power_fixed,
    meridian_constant,
    meridian_decomposition,
    min_iterate_window,
    shortening_violations,
)
from gogrd.errors import NotABasis, NotHyperbolic, ZeroVector

CAT = AnosovMap([[2, 1], [1, 1]])
MATRICES = [[[2, 1], [1, 1]], [[3, 1], [2, 1]], [[5, 2], [2, 1]], [[-3, 1], [-1, 0]], [[1, 1], [1, 2]]]
vectors = st.tuples(st.integers(-60, 60), st.integers(-60, 60)).filter(any)


@pytest.mark.parametrize("m", MATRICES, ids=str)
def test_eigendata(m):
    phi = AnosovMap(m)
    ru, rs, _ = phi.residuals()
    assert ru < 1e-9 and rs < 1e-9
    assert phi.lam > 1
    assert math.isclose(phi.mu_u * phi.mu_s, 1.0)
    assert math.isclose(phi.mu_u + phi.mu_s, phi.trace)


@pytest.mark.parametrize("m", [[[1, 1], [0, 1]], [[2, 0], [0, 1]], [[0, 1], [-1, 0]]], ids=str)
def test_not_hyperbolic(m):
    with pytest.raises(NotHyperbolic):
        AnosovMap(m)


@pytest.mark.parametrize("m", MATRICES, ids=str)
def test_slope_scales_by_lambda_squared(m):
    phi = AnosovMap(m)

    @given(vectors)
    def check(g):
        s = phi.slope(g)
        assert math.isclose(phi.slope(phi.apply(g)), phi.lam**2 * s, rel_tol=1e-8)

    check()


@pytest.mark.parametrize("m", MATRICES, ids=str)
def test_length_change_identity(m):
    phi = AnosovMap(m)

    @given(vectors)
    def check(g):
        c = phi.coordinates(g)
        change = phi.foliation_length(phi.apply(g)) - phi.foliation_length(g)
        expected = (phi.lam - 1) * (abs(c.a_u) - abs(c.a_s) / phi.lam)
        assert math.isclose(change, expected, rel_tol=1e-8, abs_tol=1e-8 * phi.foliation_length(g))

    check()


@given(vectors, st.integers(1, 9))
def test_slope_is_power_invariant(g, n):
    assert math.isclose(CAT.slope((n * g[0], n * g[1])), CAT.slope(g), rel_tol=1e-9)


def test_zero_vector():
    with pytest.raises(ZeroVector):
        CAT.slope((0, 0))
    with pytest.raises(ZeroVector):
        min_iterate_window(CAT, (0, 0), 3)


@pytest.mark.parametrize("m", MATRICES, ids=str)
def test_corrected_equivalence_has_no_violations(m):
    phi = AnosovMap(m)
    assert shortening_violations(phi, 25) == []
    assert shortening_violations(phi, 25, inverse=True) == []


def test_stated_threshold_is_violated():
    # count frozen from the exhaustive scan at bound 50
    assert len(shortening_violations(CAT, 50, threshold=CAT.lam)) == 4872
    assert len(shortening_violations(CAT, 50)) == 0


@given(vectors)
def test_window_is_zero_between_thresholds(g):
    s = CAT.slope(g)
    assume(1 / CAT.lam * (1 + 1e-6) < s < CAT.lam * (1 - 1e-6))
    assert min_iterate_window(CAT, g, 3).m_gamma == 0


@pytest.mark.parametrize("m", MATRICES, ids=str)
def test_window_properties(m):
    phi = AnosovMap(m)

    @given(st.tuples(st.integers(-12, 12), st.integers(-12, 12)).filter(any))
    def check(g):
        rep = min_iterate_window(phi, g, 4, growth_span=12)
        assert rep.strict_outside
        assert all(abs(j) <= rep.m_gamma for j in rep.minimizers.values())
        for key in ("forward", "backward"):
            assert abs(rep.growth[key] - phi.lam) < 1e-4 * phi.lam
            ratios = rep.step_ratios[key]
            assert all(b >= a - 1e-9 for a, b in zip(ratios, ratios[1:]))

    check()


@given(vectors)
def test_no_power_fixed(g):
    assert has_no_power_fixed(CAT, g)


@st.composite
def bases(draw):
    a, b = draw(st.integers(-9, 9)), draw(st.integers(-9, 9))
    assume(math.gcd(a, b) == 1)
    # complete (a, b) to a unimodular basis with Bezout coefficients
    g, x, y = _egcd(a, b)
    k = draw(st.integers(-3, 3))
    eta = (-y * g + k * a, x * g + k * b)
    return (a, b), eta


def _egcd(a, b):
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, x, y = _egcd(b, a % b)
    return g, y, x - (a // b) * y


@given(bases(), st.integers(1, 5), st.integers(-4, 4))
def test_meridian_decomposition_is_exact(basis, n, j):
    gamma, eta = basis
    assert abs(gamma[0] * eta[1] - gamma[1] * eta[0]) == 1
    u, v = meridian_decomposition(CAT, gamma, eta, n, j)
    x, y = CAT.apply((n * gamma[0], n * gamma[1]), j)
    assert (u * gamma[0] + v * eta[0], u * gamma[1] + v * eta[1]) == (x, y)


def test_meridian_needs_basis():
    with pytest.raises(NotABasis):
        meridian_decomposition(CAT, (2, 0), (0, 1), 1, 1)


def test_meridian_constant_rows_contract():
    rep = meridian_constant(CAT, (3, -5), (2, -3), 4, 6)
    assert rep.rows
    assert all(r["v"] != 0 for r in rep.rows)
    assert rep.c_emp == max(r["ratio"] for r in rep.rows)
