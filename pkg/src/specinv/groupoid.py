"""Desk-scale models of the boundary groupoids on X = [0,1]: coordinate
maps, defining relations, composition, Haar fiber grids, and length-function
growth certificates.

Interior units are placed so that rho(v)^{-n} lands on the uniform mu-grid
(1 + j*h); intermediate units appearing in fiber convolutions are then exact
grid points, and the fiber cap mu <= rho(v)^{-n} - 1 falls on a grid node.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NotComposable, RelationViolated
from .rng import SplitMix64

_INV_E = 1.0 / math.e


@dataclass
class BoundaryFn:
    """Boundary defining function: the global coordinate or the collar variant
    (e*x below 1/e, flat 1 beyond)."""

    kind: str = "global_x"

    def __post_init__(self):
        if self.kind not in ("global_x", "collar_piecewise"):
            raise ValueError(f"unknown boundary function kind {self.kind!r}")

    def rho(self, x):
        if self.kind == "global_x":
            return x
        return np.minimum(math.e * np.asarray(x, dtype=float), 1.0) if np.ndim(x) else min(math.e * x, 1.0)


GLOBAL_RHO = BoundaryFn("global_x")
COLLAR_RHO = BoundaryFn("collar_piecewise")


def _bridge_coeffs(n):
    # Hermite cubic on [1/e, 1]: values (1/e, 1), slopes (1/n, 1); the
    # Fritsch-Carlson region m0^2 + m1^2 <= 9 sec^2 holds for every n >= 1,
    # so the guard below only clamps pathological inputs.
    a, b = _INV_E, 1.0
    sec = (1.0 - a) / (b - a)
    m0, m1 = 1.0 / n, 1.0
    if m0 * m0 + m1 * m1 > 9.0 * sec * sec:
        scale = 3.0 * sec / math.hypot(m0, m1)
        m0, m1 = m0 * scale, m1 * scale
    return a, b, a, 1.0, m0, m1


def _bridge_eval(n, t):
    a, b, p0, p1, m0, m1 = _bridge_coeffs(n)
    s = (t - a) / (b - a)
    h00 = 2 * s**3 - 3 * s**2 + 1
    h10 = s**3 - 2 * s**2 + s
    h01 = -2 * s**3 + 3 * s**2
    h11 = s**3 - s**2
    return h00 * p0 + h10 * (b - a) * m0 + h01 * p1 + h11 * (b - a) * m1


def tau(n, t):
    """The boundary-compression coordinate map on [0, 1].

    Printed branches below 1/e and at the endpoints; a monotone C^1 Hermite
    bridge fills [1/e, 1) with endpoint slopes 1/n and 1.
    """
    t = float(t)
    if t < 0.0 or t > 1.0:
        raise DomainError(f"t = {t} outside [0, 1]")
    if t == 0.0:
        return 0.0
    if t >= 1.0:
        return t
    if t < _INV_E:
        return _INV_E * (-math.log(t)) ** (-1.0 / n)
    return float(_bridge_eval(n, t))


def tau_inv(n, s):
    """Inverse of tau on [0, 1] (branchwise; the bridge is inverted numerically)."""
    s = float(s)
    if s < 0.0 or s > 1.0:
        raise DomainError(f"s = {s} outside [0, 1]")
    if s == 0.0:
        return 0.0
    if s >= 1.0:
        return s
    if s < _INV_E:
        return math.exp(-((math.e * s) ** (-n)))
    lo, hi = _INV_E, 1.0
    t = 0.5 * (lo + hi)
    for _ in range(80):
        val = float(_bridge_eval(n, t))
        if val < s:
            lo = t
        else:
            hi = t
        t_new = 0.5 * (lo + hi)
        if abs(t_new - t) < 1e-16:
            break
        t = t_new
    return t


def f_map(n, x):
    """The straightening coordinate x^{1-n}/(1-n) + x of the cusp vector field (n >= 2)."""
    if n < 2:
        raise DomainError("calculus index n >= 2 required")
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0.0):
        raise DomainError("x > 0 required")
    return x ** (1 - n) / (1 - n) + x


def f_inv(n, s):
    """Inverse of f_map by safeguarded vectorized Newton (f' = x^{-n} + 1 > 0)."""
    if n < 2:
        raise DomainError("calculus index n >= 2 required")
    s = np.asarray(s, dtype=float)
    scalar = s.ndim == 0
    s = np.atleast_1d(s).astype(float)
    lo = ((n - 1.0) * (np.abs(s) + 2.0)) ** (-1.0 / (n - 1.0))
    hi = np.maximum(np.abs(s) + 1.0, 1.0)
    x = np.where(s > 0.5, np.maximum(s, lo), np.sqrt(lo * hi))
    for _ in range(100):
        fx = x ** (1 - n) / (1 - n) + x - s
        lo = np.where(fx < 0, x, lo)
        hi = np.where(fx > 0, x, hi)
        step = fx / (x ** (-float(n)) + 1.0)
        x_new = x - step
        bad = (x_new <= lo) | (x_new >= hi) | ~np.isfinite(x_new)
        x_new = np.where(bad, 0.5 * (lo + hi), x_new)
        if np.all(np.abs(x_new - x) <= 1e-16 * np.maximum(np.abs(x), 1.0)):
            x = x_new
            break
        x = x_new
    return float(x[0]) if scalar else x


@dataclass
class Arrow:
    """Groupoid arrow: range unit u, source unit v, fiber coordinate mu
    (log lambda in the b-presentation)."""

    u: float
    v: float
    mu: float


def b_relation_residual(rho, g):
    """|rho(x) - lambda rho(y)| for a b-arrow storing mu = log(lambda)."""
    return abs(rho.rho(g.u) - math.exp(g.mu) * rho.rho(g.v))


def cn_relation_residual(rho, n, g):
    """|mu rho(u)^n rho(v)^n - (rho(u)^n - rho(v)^n)|."""
    ru = rho.rho(g.u) ** n
    rv = rho.rho(g.v) ** n
    return abs(g.mu * ru * rv - (ru - rv))


def theta(n_plus_1, g, rho=COLLAR_RHO, pre_tol=1e-12):
    """Map a b-arrow (x, y, log lambda) to the index-(n+1) presentation.

    Collar points (below 1/e) pass through tau_n; mu = log(lambda) is the
    stored coordinate already.  Raises RelationViolated when the input fails
    rho(x) = lambda rho(y) at 1e-12.
    """
    n = n_plus_1 - 1
    if n < 1:
        raise DomainError("target index must be at least 2")
    lam = math.exp(g.mu)
    if b_relation_residual(rho, g) > pre_tol * max(1.0, lam * rho.rho(g.v)):
        raise RelationViolated("input fails rho(x) = lambda rho(y)")
    u = g.u if g.u >= _INV_E else tau(n, g.u)
    v = g.v if g.v >= _INV_E else tau(n, g.v)
    return Arrow(u=u, v=v, mu=g.mu)


def theta_inv(n_plus_1, g, rho=COLLAR_RHO):
    """Inverse of theta: pull collar points back through tau_inv."""
    n = n_plus_1 - 1
    if n < 1:
        raise DomainError("target index must be at least 2")
    x = g.u if g.u >= _INV_E else tau_inv(n, g.u)
    y = g.v if g.v >= _INV_E else tau_inv(n, g.v)
    return Arrow(u=x, v=y, mu=g.mu)


@dataclass
class ModelGroupoid:
    """Discretized boundary groupoid on [0, 1] with uniform mu-grid fibers.

    kind "cn" uses the relation mu rho(u)^n rho(v)^n = rho(u)^n - rho(v)^n;
    kind "b" stores mu = log(lambda) against rho(x) = lambda rho(y).
    """

    n: int = 1
    rho: BoundaryFn = field(default_factory=lambda: BoundaryFn("global_x"))
    h: float = 0.05
    L: float = 20.0
    unit_count: int = 401
    kind: str = "cn"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("calculus index n >= 1 required")
        if self.kind == "cn" and self.rho.kind != "global_x":
            raise ValueError("fiber grids need the injective global boundary function")
        self.m_half = int(round(self.L / self.h))
        self.L = self.m_half * self.h
        self.mu_grid = (np.arange(2 * self.m_half + 1) - self.m_half) * self.h
        self.xi_grid = 1.0 + np.arange(self.unit_count) * self.h
        self.interior_units = self.xi_grid ** (-1.0 / self.n)
        self.units = np.concatenate(([0.0], self.interior_units))
        dv = np.abs(np.diff(np.concatenate((self.interior_units[::-1], [1.0]))))
        self.unit_weights = np.concatenate(([0.0], dv[::-1]))  # crude density weights

    def xi(self, v):
        return float(v) ** (-self.n)

    def snap_unit(self, v):
        """Index of v on the unit grid (0 = boundary); NotComposable-grade snap h/2."""
        if abs(v) <= 1e-14:
            return 0
        j = int(round((self.xi(v) - 1.0) / self.h))
        if j < 0 or j >= self.unit_count:
            raise DomainError(f"unit {v} outside the stored grid")
        if abs(self.xi(v) - (1.0 + j * self.h)) > self.h / 2.0:
            raise DomainError(f"unit {v} does not snap to the grid")
        return j + 1

    def fiber_cap_index(self, j_interior):
        """Largest mu index in the fiber of interior unit j: mu <= xi - 1 = j*h."""
        return min(self.m_half + j_interior, len(self.mu_grid) - 1)

    def range_of(self, v, mu):
        """Range unit of the arrow with source v: (rho(v)^{-n} - mu)^{-1/n}."""
        return (self.xi(v) - mu) ** (-1.0 / self.n)

    def haar_fiber(self, v):
        """Right-invariant fiber grid at v: list of (Arrow, weight)."""
        idx = self.snap_unit(v)
        if idx == 0:
            return [(Arrow(0.0, 0.0, float(mu)), self.h) for mu in self.mu_grid]
        j = idx - 1
        cap = self.fiber_cap_index(j)
        out = []
        vj = float(self.interior_units[j])
        for m in range(cap + 1):
            mu = float(self.mu_grid[m])
            out.append((Arrow(self.range_of(vj, mu), vj, mu), self.h))
        return out

    def relation_residual(self, g):
        if self.kind == "b":
            return b_relation_residual(self.rho, g)
        return cn_relation_residual(self.rho, self.n, g)

    def compose(self, g1, g2):
        """(u,v,mu)(v,w,lam) = (u,w,mu+lam); sources snap at h/2 in xi-coordinates."""
        b1 = abs(g1.v) <= 1e-14
        b2 = abs(g2.u) <= 1e-14
        if b1 != b2:
            raise NotComposable("boundary/interior mismatch")
        if not b1:
            if self.kind == "cn":
                if abs(self.xi(g1.v) - self.xi(g2.u)) > self.h / 2.0:
                    raise NotComposable("source/range mismatch beyond h/2")
            elif abs(g1.v - g2.u) > self.h / 2.0:
                raise NotComposable("source/range mismatch beyond h/2")
        return Arrow(g1.u, g2.v, g1.mu + g2.mu)

    def inv(self, g):
        return Arrow(g.v, g.u, -g.mu)

    def length(self, g):
        """|mu| (equivalently |log lambda| pulled back through the coordinate change)."""
        return abs(g.mu)


@dataclass
class GrowthCertificate:
    """Measured polynomial-growth data of the length function on the fibers."""

    c: float
    N: int
    C_table: dict
    k0: int
    details: dict = field(default_factory=dict)

    def bound(self, r):
        return self.c * (r ** self.N + 1.0)


def _fiber_mu_values(g, unit_index):
    if unit_index == 0:
        return g.mu_grid
    return g.mu_grid[: g.fiber_cap_index(unit_index - 1) + 1]


def length_axiom_suite(g, samples=10000, seed=23, k_max=6, converge_tol=0.02):
    """Subadditivity/symmetry counts, properness proxy, and the growth fit.

    The growth degree N comes from the log-log slope of the sublevel measure
    over the upper half of the r-range; c is the envelope constant.  C_table
    holds the fiber integrals of (1 + |mu|)^{-k}; k0 is the smallest k whose
    integral is window-converged (halving the window moves it by < 2%).
    """
    rng = SplitMix64(seed)
    sub_viol = 0
    sym_viol = 0
    n_units = len(g.units)
    for trial in range(samples):
        gen = rng.spawn(trial)
        j = gen.integer(0, n_units)
        if j == 0:
            mu2 = float(g.mu_grid[gen.integer(0, len(g.mu_grid))])
            w_idx = 0
        else:
            ji = j - 1
            # keep the intermediate unit on the grid: xi(w) = xi(v) - mu2
            m_lo = max(0, g.m_half + ji - (g.unit_count - 1))
            m_hi = min(g.m_half + ji, len(g.mu_grid) - 1)
            m = gen.integer(m_lo, m_hi + 1)
            mu2 = float(g.mu_grid[m])
            w_idx = ji - (m - g.m_half) + 1
        mu_vals_w = _fiber_mu_values(g, w_idx)
        mu1 = float(mu_vals_w[gen.integer(0, len(mu_vals_w))])
        if abs(mu1 + mu2) > abs(mu1) + abs(mu2) + 1e-12:
            sub_viol += 1
        if abs(abs(-mu1) - abs(mu1)) > 0.0:
            sym_viol += 1

    # properness proxy + growth measurement on a spread of units
    sample_units = [0] + [1 + int(frac * (g.unit_count - 1)) for frac in (0.0, 0.25, 0.5, 1.0)]
    r_values = [r for r in (0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0) if r <= g.L]
    if g.L not in r_values:
        r_values.append(g.L)
    measures = {}
    nested_ok = True
    for j in sample_units:
        mu_vals = _fiber_mu_values(g, j)
        counts = [float(np.sum(np.abs(mu_vals) <= r)) * g.h for r in r_values]
        if any(b < a for a, b in zip(counts, counts[1:])):
            nested_ok = False
        measures[j] = counts
    # degree from the log-log slope at large r (boundary fiber dominates)
    upper = len(r_values) // 2
    lr = np.log(np.asarray(r_values[upper:]))
    lm = np.log(np.maximum(np.asarray(measures[0][upper:]), 1e-300))
    slope = float(np.polyfit(lr, lm, 1)[0])
    degree = max(1, int(round(slope)))
    c = max(m / (r ** degree + 1.0) for j in sample_units
            for r, m in zip(r_values, measures[j]))

    c_table = {}
    k0 = None
    for k in range(1, k_max + 1):
        full = 0.0
        half = 0.0
        for j in sample_units:
            mu_vals = np.abs(_fiber_mu_values(g, j))
            w = (1.0 + mu_vals) ** (-float(k)) * g.h
            full = max(full, float(np.sum(w)))
            half = max(half, float(np.sum(w[mu_vals <= g.L / 2.0])))
        c_table[k] = full
        if k0 is None and full > 0 and (full - half) / full <= converge_tol:
            k0 = k
    if k0 is None:
        k0 = k_max
    cert = GrowthCertificate(
        c=c, N=degree, C_table=c_table, k0=k0,
        details={"slope": slope, "r_values": r_values,
                 "boundary_measures": measures[0], "nested": nested_ok},
    )
    violations = {"subadditivity": sub_viol, "symmetry": sym_viol,
                  "samples": samples, "properness_nested": nested_ok}
    return cert, violations


def sample_b_arrow(rng, case, mu_window=30.0):
    """Seeded b-arrow (x, y, log lambda) with the collar rho, by relation case.

    Cases: both units in the collar, collar/flat mixed (both orders), both
    flat (forcing lambda = 1), and the boundary fiber x = y = 0.
    """
    if case == "collar_collar":
        y = rng.uniform(1e-8, _INV_E * 0.999)
        lam_max = min((_INV_E * 0.999) / y, math.exp(mu_window))
        lam = math.exp(rng.uniform(max(-mu_window, math.log(1e-8 / y)), math.log(lam_max)))
        x = lam * y
    elif case == "collar_flat":
        y = rng.uniform(_INV_E, 1.0)
        x = rng.uniform(1e-8, _INV_E * 0.999)
        lam = math.e * x  # rho(x) = lambda * 1
    elif case == "flat_collar":
        y = rng.uniform(1e-8, _INV_E * 0.999)
        x = rng.uniform(_INV_E, 1.0)
        lam = 1.0 / (math.e * y)
    elif case == "flat_flat":
        x = rng.uniform(_INV_E, 1.0)
        y = rng.uniform(_INV_E, 1.0)
        lam = 1.0
    elif case == "boundary":
        x = y = 0.0
        lam = math.exp(rng.uniform(-mu_window, mu_window))
    else:
        raise ValueError(f"unknown case {case!r}")
    return Arrow(u=x, v=y, mu=math.log(lam))
