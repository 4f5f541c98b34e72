"""Dense complex linear algebra substrate.

Model operators are plain square complex ndarrays.  The three workhorses are
written out rather than delegated: LU with partial pivoting (the resolvent
kernel), cyclic Jacobi for Hermitian eigenproblems (the trusted oracle for
everything spectral), and power iteration on a*a for the operator norm.  This
keeps the oracle route independent of the contour-quadrature route it is used
to check.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NonConvergence, NotHermitian, Overflow, SingularMatrix

_EPS = np.finfo(float).eps


def adjoint(a):
    return np.asarray(a).conj().T


def frobenius(a):
    return float(np.linalg.norm(np.asarray(a)))


def sup_entry(a):
    """Largest entry magnitude (a convenient submultiplicative-free norm)."""
    return float(np.max(np.abs(a))) if np.asarray(a).size else 0.0


def lu_factor(a, singular_threshold=None):
    """LU with partial pivoting; returns (packed LU, row permutation).

    The singularity threshold is dim * eps * max|entry| of the input.
    """
    a = np.array(a, dtype=complex)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("square matrix required")
    if singular_threshold is None:
        singular_threshold = n * _EPS * max(sup_entry(a), 1e-300)
    perm = np.arange(n)
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[p, k]) <= singular_threshold:
            raise SingularMatrix(f"pivot {abs(a[p, k]):.3e} at column {k}")
        if p != k:
            a[[k, p]] = a[[p, k]]
            perm[[k, p]] = perm[[p, k]]
        if k + 1 < n:
            a[k + 1:, k] /= a[k, k]
            a[k + 1:, k + 1:] -= np.outer(a[k + 1:, k], a[k, k + 1:])
    return a, perm


def lu_solve(lu, perm, b):
    b = np.array(b, dtype=complex)
    vector = b.ndim == 1
    if vector:
        b = b[:, None]
    n = lu.shape[0]
    x = b[perm].copy()
    for k in range(1, n):  # forward substitution, unit lower triangle
        x[k] -= lu[k, :k] @ x[:k]
    for k in range(n - 1, -1, -1):  # back substitution
        x[k] -= lu[k, k + 1:] @ x[k + 1:]
        x[k] /= lu[k, k]
    return x[:, 0] if vector else x


def solve(a, b):
    """Solve AX = B by LU with partial pivoting.

    Raises SingularMatrix when a pivot underflows dim*eps*max|entry|.
    """
    lu, perm = lu_factor(a)
    return lu_solve(lu, perm, b)


def inverse(a):
    return solve(a, np.eye(np.asarray(a).shape[0], dtype=complex))


def hermitian_eig(h, tol_factor=1e-10, max_sweeps=30):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns (eigenvalues ascending, unitary V with columns the eigenvectors).
    Raises NotHermitian when ||h - h*|| > 1e-10 ||h|| (Frobenius).
    """
    h = np.array(h, dtype=complex)
    n = h.shape[0]
    scale = frobenius(h)
    if frobenius(h - adjoint(h)) > tol_factor * max(scale, 1e-300):
        raise NotHermitian("matrix is not Hermitian at 1e-10 relative")
    a = (h + adjoint(h)) / 2.0
    v = np.eye(n, dtype=complex)
    if n == 1:
        return np.array([a[0, 0].real]), v
    # rotations below this size cannot move the off-diagonal mass meaningfully
    skip = _EPS * max(scale, 1e-300) / max(n, 1)
    for _ in range(max_sweeps):
        off = frobenius(a - np.diag(np.diag(a)))
        if off <= 1e-14 * max(scale, 1e-300):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                r = abs(a[p, q])
                if r <= skip:
                    continue
                phase = a[p, q] / r
                tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                t = 1.0 if tau == 0.0 else np.sign(tau) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # rotation R: R_pp = c, R_pq = s*phase, R_qp = -s*conj(phase),
                # R_qq = c; apply H <- R* H R and V <- V R
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * phase * rq
                a[q, :] = s * np.conj(phase) * rp + c * rq
                cp = a[:, p].copy()
                cq = a[:, q].copy()
                a[:, p] = c * cp - s * np.conj(phase) * cq
                a[:, q] = s * phase * cp + c * cq
                a[p, q] = 0.0
                a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * np.conj(phase) * vq
                v[:, q] = s * phase * vp + c * vq
    evals = np.diag(a).real.copy()
    order = np.argsort(evals, kind="stable")
    return evals[order], v[:, order]


def op_norm(a, tol=1e-12, max_iter=None, seed=0x5EED):
    """Largest singular value by power iteration on a*a.

    Deterministic seeded start vector; stops when the Rayleigh quotient moves
    by less than `tol` relative.  Raises NonConvergence at the iteration cap
    (10 * dim^2); callers may fall back to hermitian_eig of a*a.
    """
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    if n == 0 or sup_entry(a) == 0.0:
        return 0.0
    b = adjoint(a) @ a
    if max_iter is None:
        max_iter = 10 * n * n
    # fixed splitmix-filled start vector, independent of global state
    from .rng import SplitMix64

    gen = SplitMix64(seed)
    v = np.array([gen.complex_normal() for _ in range(n)])
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(max_iter):
        w = b @ v
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
        lam_new = float((v.conj() @ (b @ v)).real)
        if abs(lam_new - lam) <= tol * max(abs(lam_new), 1e-300):
            return float(np.sqrt(max(lam_new, 0.0)))
        lam = lam_new
    raise NonConvergence("power iteration cap reached (degenerate leading pair?)")


def op_norm_safe(a):
    """op_norm with the documented fallback: on power-iteration stall
    (degenerate leading singular pair), read the norm from hermitian_eig of a*a."""
    try:
        return op_norm(a)
    except NonConvergence:
        evals, _ = hermitian_eig(adjoint(a) @ np.asarray(a, dtype=complex))
        return float(np.sqrt(max(float(evals[-1]), 0.0)))


@dataclass
class NormSeq:
    """values[n-1] = norm(a^n)^(1/n); the printed sequence behind the spectral radius."""

    values: list
    norm_tag: str


def spectral_radius_seq(a, norm=op_norm, n_terms=32, norm_tag=None):
    """Sequence norm(a^n)^(1/n), n = 1..n_terms, by repeated multiplication.

    Raises Overflow when a power leaves the floating range (rescale `a`).
    """
    if n_terms < 1:
        raise ValueError("n_terms >= 1 required")
    a = np.asarray(a, dtype=complex)
    tag = norm_tag if norm_tag is not None else getattr(norm, "__name__", "norm")
    values = []
    power = np.eye(a.shape[0], dtype=complex)
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(1, n_terms + 1):
            power = power @ a
            if not np.all(np.isfinite(power)):
                raise Overflow(f"power {n} left the floating range")
            values.append(float(norm(power)) ** (1.0 / n))
    return NormSeq(values=values, norm_tag=tag)
