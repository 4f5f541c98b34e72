"""Local symbols of decomposable operator families on a discretized torus
fiber, with the L^2 symbol estimate and the weighted finite-difference table.

The circle carries N grid points y_j = 2 pi j / N and integer frequencies
eta in (-N/2, N/2].  y-differences are forward (periodic) at first order, so
halving the grid step halves the table error for smooth symbols;
eta-differences are unit-step forward differences in the integer frequency.
"""

from dataclasses import dataclass, field

import numpy as np

from .psistar import DerivationSet, scale_norm_q


def _exact_opnorm(a):
    """Direct largest singular value (eigenvalue route); norm plumbing for
    the estimate tables, where the iterative contract would dominate runtime."""
    a = np.asarray(a, dtype=complex)
    evals = np.linalg.eigvalsh(a.conj().T @ a)
    return float(np.sqrt(max(float(evals[-1]), 0.0)))


def circle_grid(n_points):
    return 2.0 * np.pi * np.arange(n_points) / n_points


def frequency_grid(n_points):
    return np.arange(-(n_points // 2) + 1, n_points // 2 + 1)


@dataclass
class TorusOperatorFamily:
    """Finitely sampled decomposable family: one N x N matrix per unit sample."""

    n_points: int
    x_samples: list
    matrices: dict = field(default_factory=dict)

    @classmethod
    def from_builder(cls, n_points, x_samples, builder):
        fam = cls(n_points, list(x_samples))
        for x in x_samples:
            fam.matrices[x] = np.asarray(builder(x), dtype=complex)
        return fam

    def sup_norm(self):
        return max(_exact_opnorm(self.matrices[x]) for x in self.x_samples)


def multiplication_matrix(n_points, m_values):
    return np.diag(np.asarray(m_values, dtype=complex))


def circulant_matrix(n_points, eta_symbol):
    """Fourier multiplier: diagonal in the discrete Fourier basis."""
    eta = frequency_grid(n_points)
    y = circle_grid(n_points)
    basis = np.exp(1j * np.outer(y, eta)) / np.sqrt(n_points)
    diag = np.asarray(eta_symbol(eta), dtype=complex)
    return basis @ np.diag(diag) @ basis.conj().T


def forward_difference_matrix(n_points):
    """Periodic forward difference realizing the i d/dy-type action."""
    y_step = 2.0 * np.pi / n_points
    shift_up = np.roll(np.eye(n_points), 1, axis=1)  # (S f)_i = f_{i+1}
    return 1j * (shift_up - np.eye(n_points)) / y_step


def local_symbol(matrix, phi0, psi0, n_points):
    """sigma(y, eta) = e^{-i y eta} psi0(y) (A [phi0 e^{i . eta}])(y), per eta."""
    y = circle_grid(n_points)
    eta = frequency_grid(n_points)
    waves = np.exp(1j * np.outer(y, eta))          # (y', eta)
    probe = phi0[:, None] * waves                   # phi0(y') e^{i y' eta}
    image = np.asarray(matrix, dtype=complex) @ probe
    return np.conj(waves) * psi0[:, None] * image   # (y, eta)


def torus_generators(n_points):
    """Hermitian derivation generators: cos/sin multiplication and the
    antisymmetric momentum stencil (the periodic stand-ins for coordinate
    multiplication and i d/dy)."""
    y = circle_grid(n_points)
    y_step = 2.0 * np.pi / n_points
    shift_up = np.roll(np.eye(n_points), -1, axis=1)
    momentum = 1j * (shift_up - shift_up.T) / (2.0 * y_step)
    return DerivationSet([np.diag(np.cos(y)).astype(complex),
                          np.diag(np.sin(y)).astype(complex),
                          momentum.astype(complex)])


def symbol_estimate_suite(family, phi0, psi0, alpha_max=2, beta_max=2,
                          headroom=0.05):
    """L^2 bound violations and the weighted derivative table of the symbols.

    (i) per unit sample: sup_eta sum_y |sigma|^2 dy <= c(phi0, psi0) * ||A(x)||^2
    with c measured from the cutoffs.  (ii) for each (alpha, beta) <= 2:
    sup <eta>^beta |D_eta^beta D_y^alpha sigma| against the commutator
    seminorm of the family at order alpha + beta (ratios reported, not
    asserted; the embedding constants are not pinned).
    """
    if alpha_max > 2 or beta_max > 2:
        raise ValueError("finite-difference orders capped at 2")
    n = family.n_points
    y_step = 2.0 * np.pi / n
    eta = frequency_grid(n)
    c_cut = float(np.max(np.abs(psi0)) ** 2 * np.sum(np.abs(phi0) ** 2) * y_step)
    gens = torus_generators(n)
    l2_violations = 0
    l2_table = {}
    deriv_table = {}
    seminorm_table = {}
    for x in family.x_samples:
        mat = family.matrices[x]
        sigma = local_symbol(mat, phi0, psi0, n)
        lhs = float(np.max(np.sum(np.abs(sigma) ** 2, axis=0)) * y_step)
        bound = c_cut * _exact_opnorm(mat) ** 2
        l2_table[x] = (lhs, bound)
        if lhs > bound * (1.0 + headroom):
            l2_violations += 1
        q_of_r = {r: scale_norm_q(mat, r, 0, gens, base_norms=[_exact_opnorm])
                  for r in range(alpha_max + beta_max + 1)}
        for alpha in range(alpha_max + 1):
            for beta in range(beta_max + 1):
                table = sigma
                for _ in range(alpha):  # periodic forward difference in y
                    table = (np.roll(table, -1, axis=0) - table) / y_step
                cols = len(eta) - beta
                for _ in range(beta):   # forward difference in integer eta
                    table = table[:, 1:] - table[:, :-1]
                weight = (1.0 + eta[:cols].astype(float) ** 2) ** (beta / 2.0)
                sup = float(np.max(np.abs(table) * weight[None, :]))
                key = (alpha, beta)
                deriv_table[key] = max(deriv_table.get(key, 0.0), sup)
                seminorm_table[key] = max(seminorm_table.get(key, 0.0), q_of_r[alpha + beta])
    ratios = {k: (deriv_table[k] / seminorm_table[k] if seminorm_table[k] > 0 else 0.0)
              for k in deriv_table}
    return {
        "c_cutoffs": c_cut,
        "l2_violations": l2_violations,
        "l2_table": l2_table,
        "derivative_table": deriv_table,
        "seminorm_table": seminorm_table,
        "ratios": ratios,
    }


def eta_independence_residual(matrix, phi0, psi0, n_points):
    """Max spread of sigma across eta (zero for multiplication operators)."""
    sigma = local_symbol(matrix, phi0, psi0, n_points)
    return float(np.max(np.abs(sigma - sigma[:, :1])))


def bump_cutoff(n_points, center=np.pi, width=2.0):
    """Smooth compactly supported bump on the circle."""
    y = circle_grid(n_points)
    s = (y - center) / width
    out = np.zeros(n_points)
    inside = np.abs(s) < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - s[inside] ** 2))
    return out / np.exp(-1.0)


def convergence_check(m_func, m_deriv, n_base=64, alpha=1):
    """First-order convergence of the y-difference table for a smooth
    multiplication symbol (full-chart cutoffs, so the stencil error is the
    whole error): error(N) / error(2N) for the alpha-th derivative."""
    errors = []
    for n in (n_base, 2 * n_base):
        y = circle_grid(n)
        ones = np.ones(n)
        mat = multiplication_matrix(n, m_func(y))
        sigma = local_symbol(mat, ones, ones, n)
        y_step = 2.0 * np.pi / n
        table = sigma
        for _ in range(alpha):
            table = (np.roll(table, -1, axis=0) - table) / y_step
        errors.append(float(np.max(np.abs(table[:, 0] - m_deriv(y)))))
    return {"errors": errors, "ratio": errors[0] / max(errors[1], 1e-300)}
