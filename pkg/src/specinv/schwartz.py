"""Schwartz convolution algebra on the discretized boundary groupoids:
convolution, involution, weighted norms, and the convolution/reduced-norm/
radius-equality inequality checks.

Kernels carry two blocks: the boundary fiber (the translation group in mu,
a plain array over the mu-grid) and the interior block, a matrix over the
xi-aligned interior units with A[i, j] the value on the arrow of source unit
j, range unit i, mu = (j - i) h.  In that picture groupoid convolution is
h * A1 @ A2 on the nose, and the fiber cap mu <= xi - 1 is the constraint
i >= 0.  Columns whose intermediate units would leave the stored window are
marked invalid and excluded from norms.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import WindowOverflow
from .holocalc import ONE, Contour, cauchy_calc
from .opcore import op_norm


@dataclass
class FiberDirection:
    """Central O(h^2) difference along the fiber coordinate; edges become NaN
    so that iterated application erodes the stencil honestly."""

    order: int = 2

    def apply(self, values, h, axis=0):
        v = np.asarray(values, dtype=complex)
        out = np.full_like(v, np.nan + 0j)
        upper = np.take(v, range(2, v.shape[axis]), axis=axis)
        lower = np.take(v, range(0, v.shape[axis] - 2), axis=axis)
        core = (upper - lower) / (2.0 * h)
        sl = [slice(None)] * v.ndim
        sl[axis] = slice(1, v.shape[axis] - 1)
        out[tuple(sl)] = core
        return out


MU_DIRECTION = FiberDirection()


@dataclass
class GroupoidKernel:
    """Sampled element of the Schwartz convolution algebra of a ModelGroupoid."""

    G: object
    boundary: np.ndarray
    interior: np.ndarray
    valid_cols: int = -1

    def __post_init__(self):
        self.boundary = np.asarray(self.boundary, dtype=complex)
        self.interior = np.asarray(self.interior, dtype=complex)
        if self.valid_cols < 0:
            self.valid_cols = self.G.unit_count

    @classmethod
    def from_profile(cls, g, profile, unit_factor=None, enforce_window=True):
        """Sample profile(mu) (optionally times unit_factor(v)) on every fiber.

        With enforce_window the sample is truncated to |mu| <= L/2, the
        validity window for single convolutions.
        """
        mu = g.mu_grid
        bvals = np.asarray(profile(mu), dtype=complex)
        if unit_factor is not None:
            bvals = bvals * unit_factor(0.0)
        u = g.unit_count
        offs = np.arange(u)[None, :] - np.arange(u)[:, None]  # j - i
        a = np.zeros((u, u), dtype=complex)
        band = np.abs(offs) <= g.m_half
        a[band] = np.asarray(profile(offs[band] * g.h), dtype=complex).ravel()
        if unit_factor is not None:
            a = a * np.asarray(unit_factor(g.interior_units))[None, :]
        if enforce_window:
            bvals = np.where(np.abs(mu) <= g.L / 2.0 + 1e-12, bvals, 0.0)
            a[np.abs(offs) * g.h > g.L / 2.0 + 1e-12] = 0.0
        return cls(g, bvals, a)

    @classmethod
    def zero(cls, g):
        u = g.unit_count
        return cls(g, np.zeros(len(g.mu_grid), dtype=complex), np.zeros((u, u), dtype=complex))

    def copy(self):
        return GroupoidKernel(self.G, self.boundary.copy(), self.interior.copy(), self.valid_cols)

    def scaled(self, s):
        return GroupoidKernel(self.G, s * self.boundary, s * self.interior, self.valid_cols)

    def support_radius(self):
        g = self.G
        nz = np.abs(self.boundary) > 1e-300
        radius = float(np.max(np.abs(g.mu_grid[nz]))) if np.any(nz) else 0.0
        offs = np.arange(g.unit_count)[None, :] - np.arange(g.unit_count)[:, None]
        nz = np.abs(self.interior) > 1e-300
        if np.any(nz):
            radius = max(radius, float(np.max(np.abs(offs[nz]))) * g.h)
        return radius

    def _interior_masks(self):
        g = self.G
        u = g.unit_count
        offs = np.arange(u)[None, :] - np.arange(u)[:, None]
        band = np.abs(offs) <= g.m_half
        band[:, self.valid_cols:] = False
        return offs, band


def involution(f):
    """f*(g) = conj(f(g^{-1})): reverse the boundary fiber, adjoint the interior block."""
    return GroupoidKernel(f.G, np.conj(f.boundary[::-1]), np.conj(f.interior.T), f.valid_cols)


def convolve(g, f1, f2, clip=False):
    """Groupoid convolution (f1 * f2)(g) = sum f1(g g'^{-1}) f2(g') h.

    With clip=False the combined supports must fit in |mu| <= L (else
    WindowOverflow); clip=True truncates to the window, which is how the
    long power sequences are run.
    """
    if f1.G is not g or f2.G is not g:
        raise ValueError("kernels must live on the supplied groupoid")
    s1 = f1.support_radius()
    s2 = f2.support_radius()
    if not clip and s1 + s2 > g.L + 1e-12:
        raise WindowOverflow(f"supports {s1:.2f}+{s2:.2f} exceed the window L={g.L}")
    full = np.convolve(f1.boundary, f2.boundary) * g.h
    mid = len(f1.boundary) - 1
    boundary = full[mid - g.m_half: mid + g.m_half + 1]
    interior = g.h * (f1.interior @ f2.interior)
    offs = np.arange(g.unit_count)[None, :] - np.arange(g.unit_count)[:, None]
    interior[np.abs(offs) > g.m_half] = 0.0
    # column j of the product needs intermediates up to xi_j + supp(f2)
    shave = int(math.ceil(max(s2, 0.0) / g.h))
    valid = min(f1.valid_cols, f2.valid_cols, g.unit_count - shave)
    return GroupoidKernel(g, boundary, interior, max(valid, 0))


def schwartz_norm(f, k, d):
    """sup over arrows of |derivative^i f| (1 + |mu|)^k, maximized over i <= d.

    Derivatives are iterated central differences along the fiber direction;
    eroded stencil edges and invalidated interior columns are excluded.
    """
    if d > 3:
        raise ValueError("d <= 3 (stencil limit)")
    g = f.G
    weight_b = (1.0 + np.abs(g.mu_grid)) ** float(k)
    offs, band = f._interior_masks()
    weight_i = (1.0 + np.abs(offs) * g.h) ** float(k)
    best = 0.0
    vals_b = f.boundary.astype(complex)
    vals_i = f.interior.astype(complex)
    vals_i = np.where(band, vals_i, np.nan + 0j)
    for i in range(d + 1):
        if i > 0:
            vals_b = MU_DIRECTION.apply(vals_b, g.h)
            vals_i = MU_DIRECTION.apply(vals_i, g.h, axis=0)
        wb = np.abs(vals_b) * weight_b
        if np.any(~np.isnan(wb)):
            best = max(best, float(np.nanmax(wb)))
        wi = np.abs(vals_i) * weight_i
        wi = np.where(band, wi, np.nan)
        if np.any(~np.isnan(wi)):
            best = max(best, float(np.nanmax(wi)))
    return best


def l2_fiber_norms(f, d):
    """Grid-ell^2 norms (weight h) of the derivatives, per fiber, max over fibers."""
    g = f.G
    out = []
    vals_b = f.boundary.astype(complex)
    offs, band = f._interior_masks()
    vals_i = np.where(band, f.interior.astype(complex), np.nan + 0j)
    for i in range(d + 1):
        if i > 0:
            vals_b = MU_DIRECTION.apply(vals_b, g.h)
            vals_i = MU_DIRECTION.apply(vals_i, g.h, axis=0)
        best = float(np.sqrt(np.nansum(np.abs(vals_b) ** 2) * g.h))
        col = np.sqrt(np.nansum(np.abs(vals_i) ** 2, axis=0) * g.h)
        if col.size:
            best = max(best, float(np.nanmax(col)))
        out.append(best)
    return out


def conv_inequality_check(g, f1, f2, k, d, cert, headroom=0.05):
    """Convolution bound: ||f1*f2||_{k,d} <= 2^{k+1} C ||f1||_{k,d} ||f2||_{k,d}.

    C is the growth-certificate fiber integral at this k; requires k >= k0.
    """
    if k < cert.k0:
        raise ValueError(f"k = {k} below certified k0 = {cert.k0}")
    conv = convolve(g, f1, f2)
    lhs = schwartz_norm(conv, k, d)
    c_k = cert.C_table[k]
    bound = 2.0 ** (k + 1) * c_k * schwartz_norm(f1, k, d) * schwartz_norm(f2, k, d)
    allowed = bound * (1.0 + headroom)
    return {"lhs": lhs, "bound": bound, "allowed": allowed,
            "ratio": lhs / bound if bound > 0 else 0.0,
            "violation": bool(lhs > allowed)}


def _boundary_toeplitz(f):
    g = f.G
    n = len(g.mu_grid)
    idx = np.arange(n)
    shift = idx[:, None] - idx[None, :] + g.m_half
    ok = (shift >= 0) & (shift < n)
    mat = np.zeros((n, n), dtype=complex)
    mat[ok] = f.boundary[shift[ok]]
    return mat * g.h


def _interior_rep_matrix(f, j_interior):
    """Left-convolution matrix on the fiber grid of interior unit j (zero-fill
    beyond the stored unit window; a documented compression of the true rep)."""
    g = f.G
    cap = g.fiber_cap_index(j_interior)
    m = np.arange(cap + 1)
    dm = m[:, None] - m[None, :]           # (mu - mu') / h
    jw = j_interior - (m[None, :] - g.m_half)  # intermediate interior unit index
    iw = jw - dm                            # row index into the kernel block
    ok = (np.abs(dm) <= g.m_half) & (jw >= 0) & (jw < g.unit_count) & \
         (iw >= 0) & (iw < g.unit_count) & (jw < f.valid_cols)
    mat = np.zeros(dm.shape, dtype=complex)
    jw_c = np.clip(jw, 0, g.unit_count - 1)
    iw_c = np.clip(iw, 0, g.unit_count - 1)
    gathered = f.interior[iw_c.ravel(), np.broadcast_to(jw_c, dm.shape).ravel()].reshape(dm.shape)
    mat[ok] = gathered[ok]
    return mat * g.h


def reduced_norm_estimate(g, f, units=None, k=None, cert=None, headroom=0.05):
    """Max operator norm of the regular representation over sampled units.

    Checked against lambda_k ||f||_{k,0} with lambda_k = 2^{k+1} C(k) when a
    growth certificate is supplied (k defaults to its k0).
    """
    if units is None:
        units = [0, 1, g.unit_count // 2, g.unit_count - 1]
    est = 0.0
    for u in units:
        mat = _boundary_toeplitz(f) if u == 0 else _interior_rep_matrix(f, u - 1)
        est = max(est, op_norm(mat))
    out = {"estimate": est, "units": list(units)}
    if cert is not None:
        kk = cert.k0 if k is None else k
        lam = 2.0 ** (kk + 1) * cert.C_table[kk]
        bound = lam * schwartz_norm(f, kk, 0)
        out.update({"k": kk, "lambda_k": lam, "bound": bound,
                    "violation": bool(est > bound * (1.0 + headroom))})
    return out


def _running_limit(norms):
    """Extrapolated limit of norm(f^n)^(1/n): least-squares fit of
    log norm(f^n) = n log(rho) + alpha log(n) + c over the tail window."""
    n = len(norms)
    ns = np.arange(1, n + 1, dtype=float)
    lo = max(1, n // 2) - 1
    y = np.log(np.maximum(np.asarray(norms[lo:], dtype=float), 1e-300))
    x1 = ns[lo:]
    design = np.stack([x1, np.log(x1), np.ones_like(x1)], axis=1)
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    return float(np.exp(coef[0]))


def spectral_radius_norms_check(g, f, k, l, d=0, n_powers=64, cert=None,
                                target_norm=0.9, tol=0.05):
    """Radius equality between the (k,d) and (l,d) norm scales, plus the
    sandwich regularization of a bounded slow-decay kernel.

    The element is rescaled so its reduced-norm estimate sits near
    `target_norm`; powers run on the boundary fiber (the translation-invariant
    model), clipped to the window, with the running limits extrapolated from
    the tail of the sequence.
    """
    if not (l >= k and (cert is None or k >= cert.k0)):
        raise ValueError("need l >= k >= k0")
    est = reduced_norm_estimate(g, f, units=[0])["estimate"]
    scale = target_norm / est if est > 0 else 1.0
    fs = f.scaled(scale)
    norms_k = []
    norms_l = []
    cur = fs.copy()
    for n in range(1, n_powers + 1):
        norms_k.append(schwartz_norm(cur, k, d))
        norms_l.append(schwartz_norm(cur, l, d))
        if n < n_powers:
            cur = convolve(g, fs, cur, clip=True)
    seq_k = [v ** (1.0 / n) for n, v in enumerate(norms_k, start=1)]
    seq_l = [v ** (1.0 / n) for n, v in enumerate(norms_l, start=1)]
    lim_k = _running_limit(norms_k)
    lim_l = _running_limit(norms_l)
    agreement = abs(lim_l - lim_k) / max(lim_k, 1e-300)

    slow = GroupoidKernel.from_profile(g, lambda mu: 1.0 / (1.0 + np.abs(mu)),
                                       enforce_window=False)
    sandwich = convolve(g, convolve(g, fs, slow, clip=True), fs, clip=True)
    sandwich_norm = schwartz_norm(sandwich, 0, d)
    return {
        "limit_k": lim_k, "limit_l": lim_l, "agreement": agreement,
        "within_tol": bool(agreement <= tol),
        "seq_k": seq_k, "seq_l": seq_l,
        "sandwich_norm_0d": sandwich_norm,
        "sandwich_finite": bool(np.isfinite(sandwich_norm)),
        "scale": scale,
    }


def boundary_matrix(f):
    """Public handle on the boundary-fiber convolution (Toeplitz) matrix."""
    return _boundary_toeplitz(f)


def holo_stability_demo(g, f, func, k_max=6, nodes=128, noise_floor=1e-12):
    """Contour functional calculus of the boundary convolution matrix, with a
    rapid-decay table of the resulting kernel.

    func(0) = 0 is required (non-unital calculus).  The output kernel is read
    off the middle matrix row; for k = 0..k_max the table holds
    sup |K(mu)| (1+|mu|)^k over entries above the noise floor.  The class
    signature asserted: the weighted sup peaks inside |mu| <= L/2 and decays
    by >= 1e3 toward the window edge.
    """
    if abs(complex(func.eval(0.0))) > 1e-14:
        raise ValueError("func(0) = 0 required for the non-unital calculus")
    mat = _boundary_toeplitz(f)
    norm = op_norm(mat)
    radius = max(1.25 * norm, 0.05)
    contour = Contour(0.0, radius, nodes)
    # spectrum lies in the disc of radius `norm`; the circle clears it by 25%
    result = cauchy_calc(mat, func, contour, check=False)
    probe = cauchy_calc(mat, ONE, contour, check=False)
    self_test = float(np.linalg.norm(probe - np.eye(mat.shape[0])))
    mid = g.m_half
    kernel = result[mid, :] / g.h
    mu = (np.arange(len(kernel)) - mid) * g.h
    peak = float(np.max(np.abs(kernel)))
    floor = noise_floor * max(peak, 1e-300)
    table = {}
    ok = True
    for k in range(k_max + 1):
        weighted = np.abs(kernel) * (1.0 + np.abs(mu)) ** float(k)
        live = np.abs(kernel) > floor
        if not np.any(live):
            table[k] = 0.0
            continue
        sup = float(np.max(weighted[live]))
        table[k] = sup
        arg = float(np.abs(mu[live][np.argmax(weighted[live])]))
        edge = float(np.max(weighted[np.abs(mu) >= g.L - 2 * g.h]))
        if arg > g.L / 2.0 or (sup > 0 and edge > 1e-3 * sup):
            ok = False
    return {"decay_table": table, "stable": ok, "contour_radius": radius,
            "self_test": self_test, "kernel_mu": mu, "kernel": kernel}
