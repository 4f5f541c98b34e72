import numpy as np
import pytest

from specinv import holocalc, psistar
from specinv.errors import ContourTooClose, NoSpectralGap
from specinv.holocalc import Contour
from specinv.rng import SplitMix64


def test_winding_number_quadrature():
    assert Contour(0.3 + 0.2j, 1.7, 64).winding_residual() <= 1e-12


def test_holofn_derivatives_match_finite_differences():
    h = 1e-6
    for fn in (holocalc.EXP, holocalc.SQUARE, holocalc.INV_TWO_MINUS_Z,
               holocalc.SHIFTED_GEOM):
        for z in (0.1, -0.4 + 0.3j, 0.8j):
            fd = (fn.eval(z + h) - fn.eval(z - h)) / (2 * h)
            assert abs(fn.deriv(z) - fd) <= 1e-6 * max(1.0, abs(fd))


def test_cauchy_identity_and_diagonal_square():
    a = np.diag([1.0, 3.0]).astype(complex)
    out = holocalc.cauchy_calc(a, holocalc.ONE, Contour(2.0, 3.0, 64))
    assert np.abs(out - np.eye(2)).max() <= 1e-10
    out = holocalc.cauchy_calc(a, holocalc.SQUARE, Contour(2.0, 3.0, 128))
    assert np.abs(out - np.diag([1.0, 9.0])).max() <= 1e-8


def test_cauchy_nilpotent_exponential():
    # oracle: exp of a nilpotent is the terminating series I + N
    n = np.array([[0, 1], [0, 0]], dtype=complex)
    out = holocalc.cauchy_calc(n, holocalc.EXP, Contour(0.0, 1.0, 64))
    assert np.abs(out - np.array([[1, 1], [0, 1]])).max() <= 1e-10


def test_contour_too_close():
    with pytest.raises(ContourTooClose):
        holocalc.cauchy_calc(np.diag([1.0, 3.0]).astype(complex), holocalc.ONE,
                             Contour(0.0, 1.0, 64))


def test_multiplicativity_normal():
    rng = SplitMix64(2)
    v = rng.unitary_matrix(4)
    d = np.array([0.5, -0.3j, 0.2 + 0.4j, -0.6])
    a = v @ np.diag(d) @ v.conj().T
    c = Contour(0.0, 1.2, 128)
    fg = holocalc.product_fn(holocalc.EXP, holocalc.SQUARE)
    lhs = holocalc.cauchy_calc(a, fg, c)
    rhs = holocalc.cauchy_calc(a, holocalc.EXP, c) @ holocalc.cauchy_calc(a, holocalc.SQUARE, c)
    assert np.abs(lhs - rhs).max() <= 1e-8


def test_spectral_projection_examples():
    p = holocalc.spectral_projection(np.diag([0.0, 5.0]).astype(complex),
                                     Contour(0.0, 1.0, 64))
    assert np.abs(p - np.diag([1.0, 0.0])).max() <= 1e-10
    z = holocalc.spectral_projection(np.diag([5.0, 7.0]).astype(complex),
                                     Contour(0.0, 1.0, 64))
    assert np.abs(z).max() <= 1e-10


def test_spectral_projection_rank_counts_eigenvalues():
    rng = SplitMix64(8)
    v = rng.unitary_matrix(6)
    evals = np.array([-2.0, -1.0, -0.5, 1.0, 1.5, 2.0])
    h = v @ np.diag(evals).astype(complex) @ v.conj().T
    c = Contour(-1.2, 1.0, 128)
    inside = int(np.sum(np.abs(evals - (-1.2)) < 1.0))  # independent count
    assert inside == 3
    p = holocalc.spectral_projection(h, c)
    assert round(float(np.trace(p).real)) == inside
    assert np.abs(p @ p - p).max() <= 1e-8
    assert np.abs(p @ h - h @ p).max() <= 1e-8 * np.abs(h).max()


def test_moore_penrose_examples():
    assert np.abs(holocalc.moore_penrose(np.diag([2.0, 0.0]).astype(complex))
                  - np.diag([0.5, 0.0])).max() <= 1e-10
    rng = SplitMix64(3)
    a = rng.complex_matrix(4) + 3.0 * np.eye(4)
    assert np.abs(holocalc.moore_penrose(a) - np.linalg.inv(a)).max() <= 1e-8
    n = np.array([[0, 1], [0, 0]], dtype=complex)
    pinv = holocalc.moore_penrose(n)
    assert np.abs(pinv - np.array([[0, 0], [1, 0]])).max() <= 1e-10
    for res in holocalc.penrose_residuals(n, pinv).values():
        assert res <= 1e-10


def test_moore_penrose_double_inverse():
    rng = SplitMix64(17)
    u = rng.unitary_matrix(5)
    v = rng.unitary_matrix(5)
    a = u @ np.diag([1.2, 0.0, 0.7, 0.0, 1.9]).astype(complex) @ v.conj().T
    assert np.abs(holocalc.moore_penrose(holocalc.moore_penrose(a)) - a).max() <= 1e-7


def test_no_spectral_gap_raises():
    a = np.diag([5e-7, 1.0]).astype(complex)
    with pytest.raises(NoSpectralGap):
        holocalc.moore_penrose(a)


def test_semiideal_factorization_scalar_and_nilpotent():
    su = psistar.strictly_upper_basis(2)
    out = holocalc.semiideal_fcalc_check(0.5, np.zeros((2, 2), dtype=complex),
                                         holocalc.EXP, Contour(0.5, 1.0, 64), su)
    assert out["factorization_residual"] <= 1e-12
    x = np.array([[0, 1], [0, 0]], dtype=complex)
    # oracle: exp(x) - I - x = 0 for 2x2 nilpotent, so x R x must vanish
    out = holocalc.semiideal_fcalc_check(0.0, x, holocalc.EXP, Contour(0.0, 1.0, 64), su)
    assert out["factorization_residual"] <= 1e-10


def test_semiideal_factorization_strict_upper_inverse_oracle():
    su = psistar.strictly_upper_basis(3)
    x = np.array([[0, 0.7, -0.2], [0, 0, 1.1], [0, 0, 0]], dtype=complex)
    # independent oracle: f(x) for f = 1/(2-z) is the direct inverse
    fa = np.linalg.inv(2.0 * np.eye(3) - x)
    contour = Contour(0.0, 1.0, 128)
    calc = holocalc.cauchy_calc(x, holocalc.INV_TWO_MINUS_Z, contour)
    assert np.abs(calc - fa).max() <= 1e-10
    out = holocalc.semiideal_fcalc_check(0.0, x, holocalc.INV_TWO_MINUS_Z, contour, su)
    assert out["factorization_residual"] <= 1e-10
    assert out["remainder_membership"] <= 1e-8


def test_adaptive_node_doubling():
    a = np.diag([0.9, -0.9]).astype(complex)
    out, contour = holocalc.cauchy_calc_adaptive(a, holocalc.EXP,
                                                 Contour(0.0, 1.0, 16), target=1e-10)
    assert contour.nodes > 16
    assert np.abs(out - np.diag(np.exp([0.9, -0.9]))).max() <= 1e-8
