import numpy as np

from specinv import symbols
from specinv.rng import SplitMix64


def test_identity_operator_symbol():
    n = 64
    phi0 = symbols.bump_cutoff(n)
    psi0 = symbols.bump_cutoff(n, width=1.8)
    sigma = symbols.local_symbol(np.eye(n, dtype=complex), phi0, psi0, n)
    # plane waves pass through: sigma = psi0 phi0, eta-independent
    assert np.abs(sigma - (psi0 * phi0)[:, None]).max() <= 1e-13


def test_multiplication_operator_eta_independent():
    n = 64
    y = symbols.circle_grid(n)
    phi0 = symbols.bump_cutoff(n)
    psi0 = symbols.bump_cutoff(n, width=1.8)
    mat = symbols.multiplication_matrix(n, np.exp(np.sin(y)))
    assert symbols.eta_independence_residual(mat, phi0, psi0, n) <= 1e-13
    sigma = symbols.local_symbol(mat, phi0, psi0, n)
    assert np.abs(sigma[:, 0] - psi0 * np.exp(np.sin(y)) * phi0).max() <= 1e-13


def test_difference_operator_product_rule():
    # sigma of the first-difference realization against the product-rule
    # oracle psi0 (i phi0' - eta phi0), to first order in the grid step
    n = 256
    y = symbols.circle_grid(n)
    width = 2.0
    s = (y - np.pi) / width
    phi0 = np.where(np.abs(s) < 1, np.exp(-1 / np.maximum(1 - s ** 2, 1e-12)), 0.0) / np.exp(-1)
    dphi = np.where(np.abs(s) < 1,
                    phi0 * (-2 * s / np.maximum((1 - s ** 2) ** 2, 1e-12)) / width, 0.0)
    psi0 = phi0.copy()
    mat = symbols.forward_difference_matrix(n)
    sigma = symbols.local_symbol(mat, phi0, psi0, n)
    eta = symbols.frequency_grid(n)
    for idx in np.where(np.abs(eta) <= 6)[0]:
        oracle = psi0 * (1j * dphi - eta[idx] * phi0)
        err = np.abs(sigma[:, idx] - oracle).max()
        assert err <= 0.6 * (1 + abs(eta[idx]))  # first-order stencil error O(dy)


def test_circulant_multiplier_symbol():
    n = 64
    phi0 = symbols.bump_cutoff(n)
    psi0 = symbols.bump_cutoff(n, width=1.8)
    mat = symbols.circulant_matrix(n, lambda eta: np.exp(-0.05 * eta ** 2))
    sigma = symbols.local_symbol(mat, phi0, psi0, n)
    eta = symbols.frequency_grid(n)
    mid = np.where(np.abs(eta) <= 3)[0]
    target = (psi0 * phi0)[:, None] * np.exp(-0.05 * eta[mid] ** 2)[None, :]
    assert np.abs(sigma[:, mid] - target).max() <= 0.2


def test_l2_estimate_zero_violations():
    n = 64
    y = symbols.circle_grid(n)
    phi0 = symbols.bump_cutoff(n)
    psi0 = symbols.bump_cutoff(n, width=1.8)
    rng = SplitMix64(5)
    fam = symbols.TorusOperatorFamily(n, [])
    mats = [symbols.multiplication_matrix(n, np.cos(y) + 2.0),
            symbols.circulant_matrix(n, lambda e: (1.0 + e ** 2) ** -0.5),
            rng.complex_matrix(n) / n,
            symbols.forward_difference_matrix(n) / n]
    for i, m in enumerate(mats):
        fam.x_samples.append(float(i))
        fam.matrices[float(i)] = m
    out = symbols.symbol_estimate_suite(fam, phi0, psi0)
    assert out["l2_violations"] == 0
    assert all(v >= 0 for v in out["derivative_table"].values())
    # zero family gives all-zero estimates
    zfam = symbols.TorusOperatorFamily(n, [0.0],
                                       {0.0: np.zeros((n, n), dtype=complex)})
    zout = symbols.symbol_estimate_suite(zfam, phi0, psi0)
    assert all(v == 0.0 for v in zout["derivative_table"].values())


def test_generators_are_hermitian():
    gens = symbols.torus_generators(32)
    assert gens.hermitian_residual() <= 1e-12


def test_first_order_convergence():
    out = symbols.convergence_check(lambda y: np.exp(np.sin(y)),
                                    lambda y: np.cos(y) * np.exp(np.sin(y)))
    assert 1.5 <= out["ratio"] <= 3.0
