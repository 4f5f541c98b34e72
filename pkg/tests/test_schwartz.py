import numpy as np
import pytest

from specinv import groupoid, schwartz
from specinv.errors import WindowOverflow
from specinv.rng import SplitMix64


def make_g(h=0.05, L=20.0, units=201, n=1):
    return groupoid.ModelGroupoid(n=n, h=h, L=L, unit_count=units)


def make_cert(g):
    gw = groupoid.ModelGroupoid(n=g.n, h=g.h, L=200.0, unit_count=9)
    cert, _ = groupoid.length_axiom_suite(gw, samples=64, seed=1)
    return cert


def test_zero_and_bilinear():
    g = make_g(units=51)
    z = schwartz.GroupoidKernel.zero(g)
    f = schwartz.GroupoidKernel.from_profile(g, lambda mu: np.exp(-mu ** 2))
    out = schwartz.convolve(g, f, z)
    assert np.abs(out.boundary).max() == 0.0
    two = schwartz.convolve(g, f.scaled(2.0), f)
    one = schwartz.convolve(g, f, f)
    assert np.abs(two.boundary - 2.0 * one.boundary).max() <= 1e-12


def test_gaussian_closed_form():
    g = make_g()
    f = schwartz.GroupoidKernel.from_profile(g, lambda mu: np.exp(-mu ** 2))
    conv = schwartz.convolve(g, f, f)
    exact = np.sqrt(np.pi / 2.0) * np.exp(-g.mu_grid ** 2 / 2.0)
    assert np.abs(conv.boundary - exact).max() <= 1e-3


def test_convolution_refinement_is_second_order():
    errors = []
    for h in (0.1, 0.05):
        g = make_g(h=h, L=8.0, units=9)
        tri = schwartz.GroupoidKernel.from_profile(
            g, lambda mu: np.maximum(0.0, 1.0 - np.abs(mu)))
        conv = schwartz.convolve(g, tri, tri)
        s = np.abs(g.mu_grid)
        # closed form: hat * hat is the cubic B-spline
        b3 = np.where(s <= 1.0, 2.0 / 3.0 - s ** 2 + s ** 3 / 2.0,
                      np.where(s <= 2.0, (2.0 - s) ** 3 / 6.0, 0.0))
        errors.append(np.abs(conv.boundary - b3).max())
    assert 2.5 <= errors[0] / errors[1] <= 6.0


def test_window_overflow():
    g = make_g(units=51)
    wide = schwartz.GroupoidKernel.from_profile(
        g, lambda mu: 1.0 / (1.0 + mu ** 2), enforce_window=False)
    with pytest.raises(WindowOverflow):
        schwartz.convolve(g, wide, wide)


def test_involution_properties():
    g = make_g(units=51)
    even = schwartz.GroupoidKernel.from_profile(g, lambda mu: np.exp(-mu ** 2))
    star = schwartz.involution(even)
    assert np.abs(star.boundary - even.boundary).max() <= 1e-15
    gen = SplitMix64(3)
    f = schwartz.GroupoidKernel.from_profile(
        g, lambda mu: (1 + 0.5j) * np.exp(-(mu - 0.4) ** 2))
    twice = schwartz.involution(schwartz.involution(f))
    assert np.abs(twice.boundary - f.boundary).max() == 0.0
    assert np.abs(twice.interior - f.interior).max() == 0.0
    g2 = schwartz.GroupoidKernel.from_profile(g, lambda mu: np.exp(-2 * (mu + 0.3) ** 2))
    lhs = schwartz.involution(schwartz.convolve(g, f, g2))
    rhs = schwartz.convolve(g, schwartz.involution(g2), schwartz.involution(f))
    assert np.abs(lhs.boundary - rhs.boundary).max() <= 1e-10
    k, d = 2, 0
    assert abs(schwartz.schwartz_norm(star, k, d)
               - schwartz.schwartz_norm(even, k, d)) <= 1e-12


def test_schwartz_norm_examples():
    g = make_g(units=51)
    f = schwartz.GroupoidKernel.from_profile(g, lambda mu: np.exp(-mu ** 2))
    assert abs(schwartz.schwartz_norm(f, 0, 0) - 1.0) <= 1e-12  # sup norm
    slow = schwartz.GroupoidKernel.from_profile(
        g, lambda mu: (1.0 + np.abs(mu)) ** -3.0, enforce_window=False)
    for k in (0, 1, 2, 3):
        assert abs(schwartz.schwartz_norm(slow, k, 0) - 1.0) <= 1e-12
    # monotone in k and d
    n20 = schwartz.schwartz_norm(f, 2, 0)
    n30 = schwartz.schwartz_norm(f, 3, 0)
    n21 = schwartz.schwartz_norm(f, 2, 1)
    assert n20 <= n30 + 1e-12 and n20 <= n21 + 1e-12
    # grid stability of the k=2, d=1 norm
    g2 = make_g(h=0.025, units=51)
    f2 = schwartz.GroupoidKernel.from_profile(g2, lambda mu: np.exp(-mu ** 2))
    assert abs(schwartz.schwartz_norm(f2, 2, 1) - n21) <= 0.01 * n21


def test_conv_inequality_and_k0_guard():
    g = make_g(units=101)
    cert = make_cert(g)
    f1 = schwartz.GroupoidKernel.from_profile(g, lambda mu: np.exp(-mu ** 2))
    f2 = schwartz.GroupoidKernel.from_profile(g, lambda mu: np.exp(-2 * mu ** 2))
    out = schwartz.conv_inequality_check(g, f1, f2, 2, 0, cert)
    assert not out["violation"] and out["ratio"] < 1.0
    z = schwartz.GroupoidKernel.zero(g)
    out = schwartz.conv_inequality_check(g, f1, z, 2, 0, cert)
    assert out["lhs"] == 0.0
    with pytest.raises(ValueError):
        schwartz.conv_inequality_check(g, f1, f2, 1, 0, cert)


def test_reduced_norm_bound_and_young():
    g = make_g(L=10.0, units=101)
    cert = make_cert(g)
    f = schwartz.GroupoidKernel.from_profile(g, lambda mu: np.exp(-mu ** 2))
    out = schwartz.reduced_norm_estimate(g, f, units=[0, 50], cert=cert)
    assert not out["violation"]
    # Young: the estimate is below the fiber ell^1 mass
    mass = float(np.sum(np.abs(f.boundary)) * g.h)
    assert out["estimate"] <= mass * 1.05
    assert schwartz.reduced_norm_estimate(g, schwartz.GroupoidKernel.zero(g),
                                          units=[0])["estimate"] == 0.0


def test_approximate_unit_norm():
    g = make_g(L=10.0, units=51)

    def bump(mu):
        s = np.clip(np.abs(mu) / 0.4, 0.0, 1.0)
        return 1.0 - 10 * s ** 3 + 15 * s ** 4 - 6 * s ** 5

    eta = schwartz.GroupoidKernel.from_profile(g, bump)
    eta = eta.scaled(1.0 / (float(np.sum(eta.boundary.real)) * g.h))
    est = schwartz.reduced_norm_estimate(g, eta, units=[0])["estimate"]
    assert abs(est - 1.0) <= 0.05


def test_radius_equality_and_sandwich():
    g = make_g(units=101)
    cert = make_cert(g)
    f = schwartz.GroupoidKernel.from_profile(g, lambda mu: np.exp(-2.0 * mu ** 2))
    out = schwartz.spectral_radius_norms_check(g, f, 2, 4, d=0, n_powers=48, cert=cert)
    assert out["agreement"] <= 0.05
    assert out["sandwich_finite"]
    assert abs(out["limit_k"] - 0.9) <= 0.05  # scaled to reduced norm 0.9


def test_associativity():
    g = make_g(units=101)
    rng = SplitMix64(7)
    fs = []
    for i in range(3):
        gen = rng.spawn(i)
        c = gen.complex_normal()
        fs.append(schwartz.GroupoidKernel.from_profile(
            g, lambda mu, c=c: c * np.exp(-(mu - 0.2) ** 2) * (np.abs(mu) <= g.L / 4)))
    a1 = schwartz.convolve(g, schwartz.convolve(g, fs[0], fs[1]), fs[2])
    a2 = schwartz.convolve(g, fs[0], schwartz.convolve(g, fs[1], fs[2]))
    assert np.abs(a1.boundary - a2.boundary).max() <= 1e-9
    assert np.abs(a1.interior - a2.interior).max() <= 1e-9


def test_holo_stability_demo_cases():
    from specinv import holocalc, opcore

    g = groupoid.ModelGroupoid(n=1, h=0.1, L=10.0, unit_count=9)
    f = schwartz.GroupoidKernel.from_profile(g, lambda mu: np.exp(-2.0 * mu ** 2))
    f = f.scaled(0.8 / opcore.op_norm_safe(schwartz.boundary_matrix(f)))
    ident = schwartz.holo_stability_demo(g, f, holocalc.IDENTITY)
    assert np.abs(ident["kernel"] - f.boundary).max() <= 1e-8
    sq = schwartz.holo_stability_demo(g, f, holocalc.SQUARE)
    conv = schwartz.convolve(g, f, f)
    assert np.abs(sq["kernel"] - conv.boundary).max() <= 1e-8
    demo = schwartz.holo_stability_demo(g, f, holocalc.SHIFTED_GEOM)
    assert demo["stable"]
    assert all(np.isfinite(v) for v in demo["decay_table"].values())
    with pytest.raises(ValueError):
        schwartz.holo_stability_demo(g, f, holocalc.EXP)  # exp(0) != 0


def test_l2_fiber_bound():
    g = make_g(units=51)
    cert = make_cert(g)
    f = schwartz.GroupoidKernel.from_profile(g, lambda mu: np.exp(-mu ** 2))
    norms = schwartz.l2_fiber_norms(f, 1)
    bound = np.sqrt(cert.C_table[cert.k0]) * schwartz.schwartz_norm(f, cert.k0, 1)
    assert max(norms) <= bound * 1.05
