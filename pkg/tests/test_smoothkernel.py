import numpy as np
import pytest

from specinv import smoothkernel as sk
from specinv.errors import DomainError, WindowOverflow
from specinv.rng import SplitMix64

BLOCK = np.array([[1.0, 0.2], [0.2, 0.5]], dtype=complex)


def rk4_flow(n, t_final, x0, steps=4000):
    """Independent ODE oracle for the flow: dx/dt = x^n / (1 + x^n)."""
    x = float(x0)
    dt = t_final / steps
    for _ in range(steps):
        def rhs(v):
            return v ** n / (1.0 + v ** n)
        k1 = rhs(x)
        k2 = rhs(x + 0.5 * dt * k1)
        k3 = rhs(x + 0.5 * dt * k2)
        k4 = rhs(x + dt * k3)
        x += dt * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0
    return x


def test_flow_examples():
    assert sk.flow(2, 0.0, 1.7) == 1.7
    # closed form: -1/x + x = 1.5 has the root x = 2
    assert abs(sk.flow(2, 1.5, 1.0) - 2.0) <= 1e-10
    assert abs(sk.flow(2, 1.5, 1.0) - rk4_flow(2, 1.5, 1.0)) <= 1e-8
    with pytest.raises(DomainError):
        sk.flow(2, 1.0, -1.0)
    with pytest.raises(DomainError):
        sk.flow(1, 1.0, 1.0)  # the b-case is refused


def test_flow_group_law_and_monotonicity():
    rng = SplitMix64(2)
    worst = 0.0
    for _ in range(1000):
        t, s = rng.uniform(-5, 5), rng.uniform(-5, 5)
        x = rng.uniform(0.01, 8.0)
        worst = max(worst, abs(sk.flow(3, t + s, x) - sk.flow(3, t, sk.flow(3, s, x))))
    assert worst <= 1e-10
    xs = np.linspace(0.05, 5.0, 50)
    flowed = sk.flow(2, 0.8, xs)
    assert np.all(np.diff(flowed) > 0)


def grid(count=240):
    return sk.HalfLineGrid(x_max=10.0, count=count, pad=1e-6)


def test_grid_invariants():
    g = grid()
    assert g.nodes[0] <= 1e-5
    assert np.all(np.diff(g.nodes) > 0)


def test_act_identity_and_transport():
    g = grid()
    a = sk.MatrixSchwartz.from_profile(
        g, lambda x: np.exp(-sk.f_map(2, x) ** 2 / 0.5), BLOCK)
    same = sk.act(2, 0.0, a)
    assert np.abs(same.values - a.values).max() == 0.0
    moved = sk.act(2, 1.5, a)
    peak = g.nodes[int(np.argmax(np.abs(moved.values[:, 0, 0])))]
    assert abs(peak - 2.0) <= 0.1  # support near x=1 moves to near x=2
    assert abs(moved.seminorm(0) - a.seminorm(0)) <= 1e-2 * a.seminorm(0)


def test_act_composition_tolerance():
    fine = sk.HalfLineGrid(x_max=10.0, count=2000, pad=1e-6)
    mono = sk.MatrixSchwartz.from_profile(
        fine, lambda x: 1.0 / (1.0 + np.exp(-np.clip(sk.f_map(2, x), -500, 500))),
        BLOCK)
    comp = sk.act(2, 0.7, sk.act(2, 0.8, mono))
    direct = sk.act(2, 1.5, mono)
    assert np.abs(comp.values - direct.values).max() <= 1e-6


def test_poly_growth_fit_flat_and_gaussian():
    g = grid()
    window = sk.MatrixSchwartz.from_profile(
        g, lambda x: np.ones_like(x), BLOCK)
    c, m, diag = sk.poly_growth_fit(2, window, 0, t_samples=np.linspace(-4, 4, 9))
    assert m == 0 and abs(c - 1.0) <= 0.05 and diag["r2"] >= 0.99
    a = sk.MatrixSchwartz.from_profile(
        g, lambda x: np.exp(-sk.f_map(2, x) ** 2 / 2.0), BLOCK)
    c1, m1, diag1 = sk.poly_growth_fit(2, a, 1)
    assert m1 <= 4 and diag1["r2"] >= 0.99 and np.isfinite(c1)
    c2, m2, _ = sk.poly_growth_fit(2, a, 2)
    assert m2 <= 4


def test_twisted_convolve_zero_and_closed_form():
    g = grid(count=120)
    one = np.eye(1, dtype=complex)
    f = sk.TwistedElement.separable(g, lambda t: np.exp(-t ** 2),
                                    lambda x: np.exp(-x ** 2 / 2), one,
                                    t_max=12.0, dt=0.1)
    z = sk.TwistedElement(g, 12.0, 0.1,
                          np.zeros_like(f.values))
    assert np.abs(sk.twisted_convolve(f, z, 2).values).max() == 0.0
    conv = sk.twisted_convolve(f, f, 2, frozen=True)
    exact_t = np.sqrt(np.pi / 2) * np.exp(-conv.t_grid ** 2 / 2)
    exact = exact_t[:, None] * (np.exp(-g.nodes ** 2 / 2) ** 2)[None, :]
    assert np.abs(conv.values[:, :, 0, 0] - exact).max() <= 1e-3


def test_twisted_window_overflow():
    g = grid(count=60)
    one = np.eye(1, dtype=complex)
    wide = sk.TwistedElement.separable(g, lambda t: np.ones_like(t),
                                       lambda x: np.exp(-x ** 2), one,
                                       t_max=8.0, dt=0.5, enforce_window=False)
    with pytest.raises(WindowOverflow):
        sk.twisted_convolve(wide, wide, 2)


def test_twisted_associativity_vs_triple_sum_oracle():
    g = sk.HalfLineGrid(x_max=6.0, count=50, pad=1e-6)
    one = np.eye(1, dtype=complex)
    els = [sk.TwistedElement.separable(
        g, lambda t, c=c: np.exp(-c * t ** 2) * (np.abs(t) <= 2.0),
        lambda x, b=b: np.exp(-(sk.f_map(2, x) - b) ** 2), one,
        t_max=8.0, dt=0.8) for c, b in ((1.0, 0.0), (1.3, 0.3), (0.9, 0.1))]
    lhs = sk.twisted_convolve(sk.twisted_convolve(els[0], els[1], 2), els[2], 2)
    # direct triple-sum oracle
    nt = len(els[0].t_grid)
    oracle = np.zeros_like(els[0].values)
    xs = g.nodes
    for j1, s1 in enumerate(els[0].t_grid):
        if np.abs(els[0].values[j1]).max() == 0:
            continue
        for j2, s2 in enumerate(els[1].t_grid):
            if np.abs(els[1].values[j2]).max() == 0:
                continue
            pulled_b = sk._pchip_complex(xs, els[1].values[j2])(
                np.clip(sk.flow(2, -s1, xs), xs[0], xs[-1]))
            for j3 in range(nt):
                i = j1 + (j2 - els[0].half) + (j3 - els[0].half)
                if i < 0 or i >= nt or np.abs(els[2].values[j3]).max() == 0:
                    continue
                q = np.clip(sk.flow(2, -(s1 + s2), xs), xs[0], xs[-1])
                pulled_c = sk._pchip_complex(xs, els[2].values[j3])(q)
                term = np.einsum("xij,xjk->xik", els[0].values[j1], pulled_b)
                term = np.einsum("xij,xjk->xik", term, pulled_c)
                oracle[i] += term * els[0].dt ** 2
    dev = np.abs(lhs.values - oracle).max()
    assert dev <= 1e-6 + 0.8 ** 2


def test_seminorms_and_robert():
    g = grid(count=120)
    f = sk.TwistedElement.separable(
        g, lambda t: np.exp(-t ** 2),
        lambda x: np.exp(-sk.f_map(2, x) ** 2 / 2), BLOCK, t_max=12.0, dt=0.4)
    gg = sk.TwistedElement.separable(
        g, lambda t: np.exp(-2 * t ** 2) * (1 + 0.3 * t),
        lambda x: np.exp(-(sk.f_map(2, x) - 0.5) ** 2 / 2), BLOCK, t_max=12.0, dt=0.4)
    z = sk.TwistedElement(g, 12.0, 0.4, np.zeros_like(f.values))
    assert sk.seminorm_nij(z, 1, 1, 1) == 0.0
    # frozen Young at (0,0,0): ||f*g|| <= ||f|| ||g||
    conv = sk.twisted_convolve(f, gg, 2, frozen=True)
    assert sk.seminorm_nij(conv, 0, 0, 0) <= \
        sk.seminorm_nij(f, 0, 0, 0) * sk.seminorm_nij(gg, 0, 0, 0) * 1.05
    rep = sk.robert_check(f, gg, 2, 1, 1, 1)
    assert not rep["violation"]


def test_ideal_membership_oracle():
    g = sk.HalfLineGrid(x_max=2.0, count=160, pad=1e-10)
    eye2 = np.eye(2, dtype=complex)
    flat = sk.BoundaryKernel.from_scalar(g, lambda x, xp: np.exp(-1 / x - 1 / xp), eye2)
    out = sk.ideal_membership_I(flat, cap=4)
    assert out["passes"] and out["decay_ok"] and out["operator_ok"]
    const = sk.BoundaryKernel.from_scalar(g, lambda x, xp: np.ones_like(x * xp), eye2)
    out = sk.ideal_membership_I(const, cap=4)
    assert not out["decay_ok"]
    assert out["decay_table"][(1, 0)] > 1e8 and out["decay_table"][(0, 0)] < 1e8
    lin = sk.BoundaryKernel.from_scalar(
        g, lambda x, xp: x * xp * np.exp(-x ** 2 - xp ** 2), eye2)
    assert sk.ideal_membership_I(lin, cap=1)["decay_ok"]
    out = sk.ideal_membership_I(lin, cap=4)
    assert not out["decay_ok"]
    assert out["decay_table"][(2, 0)] > 1e8 and out["decay_table"][(1, 1)] < 1e8


def test_cutoff_shape():
    x = np.array([0.0, 0.2, 0.3, 0.65, 1.0, 2.0])
    phi = sk.smooth_step_cutoff(x)
    assert phi[0] == 1.0 and phi[2] == 1.0
    assert phi[4] == 0.0 and phi[5] == 0.0
    assert 0.0 < phi[3] < 1.0


def test_closure_demo():
    report = sk.closure_demo(n=2)
    assert all(entry["passes"] for entry in report.values())
    assert report["twisted*twisted"]["route"] == "seminorm"
