"""Hyperbolic elements of SL2(Z) acting on Z^2: foliation length and slope.

Real quantities (eigenvectors, foliation coordinates) are double precision;
exponent identities are solved exactly over the integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NotABasis, NotHyperbolic, ZeroVector


TIE_TOL = 1e-9


def _normalize(v):
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v)
    first = next(x for x in v if abs(x) > 1e-15)
    return v if first > 0 else -v


class AnosovMap:
    """Linear Anosov map of the torus given by ``A`` in SL2(Z), ``|tr A| > 2``."""

    def __init__(self, matrix):
        a = [[int(x) for x in row] for row in matrix]
        if a[0][0] * a[1][1] - a[0][1] * a[1][0] != 1:
            raise NotHyperbolic("matrix must have determinant 1")
        tr = a[0][0] + a[1][1]
        if abs(tr) <= 2:
            raise NotHyperbolic(f"|trace| = {abs(tr)} is not > 2")
        self.matrix = a
        self.trace = tr
        m = np.array(a, dtype=float)
        # roots of x^2 - tr x + 1; for tr < -2 the expanding eigenvalue is negative
        disc = math.sqrt(tr * tr - 4)
        mu_u = (tr + math.copysign(disc, tr)) / 2
        mu_s = 1 / mu_u
        self.mu_u, self.mu_s = mu_u, mu_s
        self.lam = abs(mu_u)
        self.v_u = _normalize(self._kernel(m, mu_u))
        self.v_s = _normalize(self._kernel(m, mu_s))
        self._basis = np.column_stack([self.v_u, self.v_s])
        self._basis_inv = np.linalg.inv(self._basis)

    @staticmethod
    def _kernel(m, mu):
        a, b = m[0, 0] - mu, m[0, 1]
        c, d = m[1, 0], m[1, 1] - mu
        # pick the better-conditioned row of (A - mu I)
        if abs(a) + abs(b) >= abs(c) + abs(d):
            return np.array([b, -a])
        return np.array([d, -c])

    def __repr__(self):
        return f"AnosovMap({self.matrix})"

    def residuals(self):
        m = np.array(self.matrix, dtype=float)
        ru = np.linalg.norm(m @ self.v_u - self.mu_u * self.v_u)
        rs = np.linalg.norm(m @ self.v_s - self.mu_s * self.v_s)
        return ru, rs, abs(self.lam * (1 / self.lam) - 1)

    def apply(self, v, j=1):
        """``A^j v`` exactly over the integers."""
        a = self.power(j)
        return (a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1])

    def power(self, j):
        a = self.matrix
        if j < 0:
            a = [[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]]
            j = -j
        out = [[1, 0], [0, 1]]
        while j:
            if j & 1:
                out = _mm(out, a)
            a = _mm(a, a)
            j >>= 1
        return out

    def coordinates(self, v):
        a_u, a_s = self._basis_inv @ np.asarray(v, dtype=float)
        return FoliationCoordinates(float(a_u), float(a_s))

    def foliation_length(self, v):
        c = self.coordinates(v)
        return abs(c.a_u) + abs(c.a_s)

    def slope(self, v):
        if not any(v):
            raise ZeroVector("slope of the zero vector")
        c = self.coordinates(v)
        if c.a_s == 0:
            return math.inf
        return abs(c.a_u) / abs(c.a_s)


@dataclass(frozen=True)
class FoliationCoordinates:
    a_u: float
    a_s: float


def _mm(a, b):
    return [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]


def foliation_length(phi, v):
    return phi.foliation_length(v)


def slope(phi, v):
    return phi.slope(v)


def l1(v):
    return abs(v[0]) + abs(v[1])


# ----------------------------------------------------------------------
# minimizing window


@dataclass
class WindowReport:
    gamma: tuple
    m_gamma: int
    minimizers: dict
    growth: dict = field(default_factory=dict)
    strict_outside: bool = True
    table: dict = field(default_factory=dict)
    step_ratios: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "gamma": list(self.gamma),
            "M_gamma": self.m_gamma,
            "minimizers": {str(n): j for n, j in self.minimizers.items()},
            "growth_rate": dict(self.growth),
            "step_ratios": dict(self.step_ratios),
            "strict_outside": self.strict_outside,
        }


def min_iterate_window(phi, gamma, n_max, scan=None, growth_span=None):
    """Smallest ``M`` with ``argmin_j |phi^j(gamma^n)|_phi`` in ``[-M, M]`` and
    ``|phi^j(gamma^n)|_phi > |gamma^n|_phi`` for ``|j| > M``, for all ``n <= n_max``.

    ``j -> |phi^j(gamma)|_phi = lambda^j |a_u| + lambda^-j |a_s|`` is convex,
    so ``M`` is the largest ``|j|`` with length at most ``|gamma^n|_phi``.
    Step ratios ``|phi^(j+1)| / |phi^j|`` are recorded for ``growth_span + 1``
    steps past the window in both directions; they increase to ``lambda``
    and the last one is reported as the growth rate.
    """
    if not any(gamma):
        raise ZeroVector("gamma must be nonzero")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    scan = scan if scan is not None else 12 + n_max
    growth_span = growth_span or n_max
    minimizers = {}
    table = {}
    m = 0
    for n in range(1, n_max + 1):
        v = (n * gamma[0], n * gamma[1])
        lengths = {j: phi.foliation_length(phi.apply(v, j)) for j in range(-scan, scan + 1)}
        table[n] = lengths
        best = min(lengths.values())
        js = [j for j, x in lengths.items() if x <= best * (1 + 1e-12)]
        minimizers[n] = min(js, key=abs)
        base = lengths[0]
        m = max(m, abs(minimizers[n]), max(abs(j) for j, x in lengths.items() if x <= base))
    if m >= scan:
        raise ValueError(f"window not found within |j| <= {scan}; raise scan")
    strict = all(x > t[0] for t in table.values() for j, x in t.items() if abs(j) > m)
    growth = {}
    steps = {}
    for sign in (1, -1):
        key = "forward" if sign > 0 else "backward"
        lengths = [phi.foliation_length(phi.apply(gamma, sign * (m + k))) for k in range(growth_span + 2)]
        steps[key] = [b / a for a, b in zip(lengths, lengths[1:])]
        # the rate of an exponential sequence is its limiting step ratio
        growth[key] = steps[key][-1]
    return WindowReport(tuple(gamma), m, minimizers, growth, strict, table, steps)


def shortening_violations(phi, bound, threshold=None, inverse=False):
    """Integer vectors with ``|gamma|_inf <= bound`` breaking
    ``|phi(gamma)| < |gamma|  <=>  sl(gamma) < threshold``.

    The threshold defaults to ``1/lambda``, where the equivalence holds:
    ``|phi(gamma)| - |gamma| = (lambda - 1)(|a_u| - |a_s| / lambda)``.
    With ``inverse`` the map is ``phi^-1`` and the test is ``sl > threshold``
    (default ``lambda``).  Boundary ties (equal lengths at slope equal to
    the threshold, up to ``TIE_TOL``) are skipped.
    """
    if threshold is None:
        threshold = phi.lam if inverse else 1 / phi.lam
    step = -1 if inverse else 1
    bad = []
    for x in range(-bound, bound + 1):
        for y in range(-bound, bound + 1):
            if x == 0 and y == 0:
                continue
            g = (x, y)
            before = phi.foliation_length(g)
            after = phi.foliation_length(phi.apply(g, step))
            s = phi.slope(g)
            if abs(s - threshold) <= TIE_TOL * threshold and abs(after - before) <= TIE_TOL * before:
                continue  # on the boundary both sides are equalities
            shorter = after < before
            predicted = s > threshold if inverse else s < threshold
            if shorter != predicted:
                bad.append(g)
    return bad


def has_no_power_fixed(phi, gamma, kmax=10):
    """``phi(gamma) != gamma^k`` for all ``|k| <= kmax``."""
    image = phi.apply(gamma)
    return all(image != (k * gamma[0], k * gamma[1]) for k in range(-kmax, kmax + 1))


# ----------------------------------------------------------------------
# meridian decomposition


def meridian_decomposition(phi, gamma, eta, n, j):
    """Exact ``(u, v)`` with ``phi^j(gamma^n) = gamma^u eta^v``."""
    det = gamma[0] * eta[1] - gamma[1] * eta[0]
    if det not in (1, -1):
        raise NotABasis(f"(gamma, eta) has determinant {det}")
    x, y = phi.apply((n * gamma[0], n * gamma[1]), j)
    u = (x * eta[1] - y * eta[0]) * det
    v = (gamma[0] * y - gamma[1] * x) * det
    assert u * gamma[0] + v * eta[0] == x and u * gamma[1] + v * eta[1] == y
    return u, v


@dataclass
class MeridianReport:
    c_emp: float
    rows: list

    def to_dict(self):
        return {"C_emp": self.c_emp, "rows": self.rows}


def meridian_constant(phi, gamma, eta, n_max, window):
    """Largest ``L1(gamma^n) / L1(eta^(v))`` over contracting ``(n, j)``.

    A pair is contracting when ``L1(phi^j(gamma^n)) < L1(gamma^n)``; the
    returned constant bounds the eta part from below.
    """
    rows = []
    worst = 0.0
    for n in range(1, n_max + 1):
        base = l1((n * gamma[0], n * gamma[1]))
        for j in range(-window, window + 1):
            if l1(phi.apply((n * gamma[0], n * gamma[1]), j)) < base:
                u, v = meridian_decomposition(phi, gamma, eta, n, j)
                eta_part = l1((v * eta[0], v * eta[1]))
                ratio = math.inf if eta_part == 0 else base / eta_part
                worst = max(worst, ratio)
                rows.append({"n": n, "j": j, "u": u, "v": v, "ratio": ratio})
    return MeridianReport(worst, rows)


def slope_closeness(phi, gamma, j):
    """How close ``sl(phi^j(gamma))`` is to 1 (reported, not asserted)."""
    return abs(math.log(phi.slope(phi.apply(gamma, j))))


__all__ = [
    "AnosovMap",
    "FoliationCoordinates",
    "foliation_length",
    "slope",
    "min_iterate_window",
    "WindowReport",
    "has_no_power_fixed",
    "shortening_violations",
    "meridian_decomposition",
    "meridian_constant",
    "MeridianReport",
    "slope_closeness",
]
