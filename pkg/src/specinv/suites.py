"""Named check suites over the workbench modules.

Each suite function maps a validated SuiteConfig to (records, series); the
registry fixes the execution and report order.  All randomness flows from the
config seed through per-check split-mix children, so a (config, seed) pair
reproduces the report body byte for byte.
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import groupoid, holocalc, opcore, psistar, schwartz, smoothkernel, symbols
from .errors import ConfigError, NotComposable
from .report import record, series
from .rng import SplitMix64

_GRID_KEYS = {"h", "L", "unit_count"}
_CONTOUR_KEYS = {"center", "radius", "nodes"}
_TOP_KEYS = {"suite", "n", "grid", "contour", "tolerances", "seed", "trials"}
SUITE_NAMES = ("fcalc", "penrose", "scales", "groupoid", "schwartz", "cusp", "symbols")


@dataclass
class SuiteConfig:
    suite: str = "all"
    n: int = 1
    h: float = 0.05
    L: float = 20.0
    unit_count: int = 201
    center: complex = 0.0
    radius: float = 2.0
    nodes: int = 64
    tolerances: dict = field(default_factory=dict)
    seed: int = 42
    trials: int = 100

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(data) - _TOP_KEYS
        if unknown:
            raise ConfigError(f"unknown config key {sorted(unknown)[0]!r}")
        cfg = cls()
        cfg.suite = data.get("suite", cfg.suite)
        if cfg.suite not in SUITE_NAMES + ("all",):
            raise ConfigError(f"unknown suite {cfg.suite!r}")
        cfg.n = int(data.get("n", cfg.n))
        grid = data.get("grid", {})
        bad = set(grid) - _GRID_KEYS
        if bad:
            raise ConfigError(f"unknown grid key {sorted(bad)[0]!r}")
        cfg.h = float(grid.get("h", cfg.h))
        cfg.L = float(grid.get("L", cfg.L))
        cfg.unit_count = int(grid.get("unit_count", cfg.unit_count))
        contour = data.get("contour", {})
        bad = set(contour) - _CONTOUR_KEYS
        if bad:
            raise ConfigError(f"unknown contour key {sorted(bad)[0]!r}")
        cfg.center = complex(contour.get("center", cfg.center))
        cfg.radius = float(contour.get("radius", cfg.radius))
        cfg.nodes = int(contour.get("nodes", cfg.nodes))
        tol = data.get("tolerances", {})
        if not isinstance(tol, dict):
            raise ConfigError("tolerances must be an object")
        cfg.tolerances = {str(k): float(v) for k, v in tol.items()}
        cfg.seed = int(data.get("seed", cfg.seed))
        cfg.trials = int(data.get("trials", cfg.trials))
        for name, value in (("n", cfg.n), ("h", cfg.h), ("L", cfg.L),
                            ("unit_count", cfg.unit_count), ("radius", cfg.radius),
                            ("nodes", cfg.nodes), ("trials", cfg.trials)):
            if value <= 0:
                raise ConfigError(f"config field {name!r} must be positive")
        return cfg

    def echo(self):
        return {
            "suite": self.suite, "n": self.n,
            "grid": {"h": self.h, "L": self.L, "unit_count": self.unit_count},
            "contour": {"center": repr(self.center), "radius": self.radius,
                        "nodes": self.nodes},
            "tolerances": dict(sorted(self.tolerances.items())),
            "seed": self.seed, "trials": self.trials,
        }

    def tol(self, name, default):
        return float(self.tolerances.get(name, default))


class _Collector:
    def __init__(self, cfg):
        self.cfg = cfg
        self.records = []
        self.series = []
        self._t0 = time.perf_counter()

    def _elapsed_ms(self):
        now = time.perf_counter()
        ms = (now - self._t0) * 1000.0
        self._t0 = now
        return round(ms, 3)

    def check(self, name, anchor, measured, tolerance, mode="le"):
        tolerance = self.cfg.tol(name, tolerance)
        if mode == "le":
            ok = measured <= tolerance
        elif mode == "eq":
            ok = measured == tolerance
        else:
            raise ValueError(mode)
        self.records.append(record(name, anchor, "pass" if ok else "fail",
                                   measured=measured, tolerance=tolerance,
                                   runtime_ms=self._elapsed_ms()))
        return ok

    def bounded(self, name, anchor, measured, bound, headroom=0.0):
        ok = measured <= bound * (1.0 + headroom)
        self.records.append(record(name, anchor, "pass" if ok else "fail",
                                   measured=measured, bound=bound,
                                   tolerance=headroom, runtime_ms=self._elapsed_ms()))
        return ok

    def info(self, name, anchor, measured):
        self.records.append(record(name, anchor, "info", measured=measured,
                                   runtime_ms=self._elapsed_ms()))

    def add_series(self, name, columns, rows):
        self.series.append(series(name, columns, rows))


# ---------------------------------------------------------------------------
# fcalc


def suite_fcalc(cfg):
    col = _Collector(cfg)
    rng = SplitMix64(cfg.seed)
    contour = holocalc.Contour(cfg.center, cfg.radius, cfg.nodes)
    col.check("fcalc.winding_residual", "functional-calculus-quadrature",
              contour.winding_residual(), 1e-12)

    # identity integral of the resolvent, with node-doubling refinement
    worst = {nodes: 0.0 for nodes in (cfg.nodes, 2 * cfg.nodes, 4 * cfg.nodes)}
    doubling_ok = True
    for trial in range(50):
        gen = rng.spawn(trial)
        dim = 2 + trial % 7
        a = gen.complex_matrix(dim)
        a *= 0.65 * cfg.radius / opcore.op_norm_safe(a)
        a += cfg.center * np.eye(dim)
        res = {}
        for nodes in worst:
            c = holocalc.Contour(cfg.center, cfg.radius, nodes)
            probe = holocalc.cauchy_calc(a, holocalc.ONE, c)
            res[nodes] = opcore.frobenius(probe - np.eye(dim))
            worst[nodes] = max(worst[nodes], res[nodes])
        r1, r2 = res[cfg.nodes], res[2 * cfg.nodes]
        if not (r2 <= r1 / 100.0 or r2 <= 1e-14):
            doubling_ok = False
    col.check("fcalc.cauchy_identity.max_residual", "functional-calculus-quadrature",
              worst[cfg.nodes], 1e-10)
    col.check("fcalc.cauchy_identity.node_doubling_gain", "functional-calculus-quadrature",
              0.0 if doubling_ok else 1.0, 0.5)
    col.add_series("cauchy_refinement", ("nodes", "worst_residual"),
                   [(nodes, w) for nodes, w in sorted(worst.items())])

    # eigendecomposition oracle for normal elements
    fns = (holocalc.EXP, holocalc.SQUARE, holocalc.INV_TWO_MINUS_Z)
    worst_dev = 0.0
    for trial in range(12):
        gen = rng.spawn(1000 + trial)
        dim = 2 + trial % 5
        v = gen.unitary_matrix(dim)
        d = np.array([0.9 * gen.uniform() * np.exp(2j * np.pi * gen.uniform())
                      for _ in range(dim)])
        a = v @ np.diag(d) @ v.conj().T
        c13 = holocalc.Contour(0.0, 1.3, 128)
        for fn in fns:
            oracle = v @ np.diag(fn.eval(d)) @ v.conj().T
            calc = holocalc.cauchy_calc(a, fn, c13)
            worst_dev = max(worst_dev, opcore.frobenius(calc - oracle)
                            / max(opcore.frobenius(oracle), 1.0))
    col.check("fcalc.eig_oracle_agreement", "functional-calculus-quadrature",
              worst_dev, 1e-8)

    # multiplicativity on a normal element
    gen = rng.spawn(2000)
    v = gen.unitary_matrix(4)
    d = np.array([0.8 * gen.uniform() * np.exp(2j * np.pi * gen.uniform())
                  for _ in range(4)])
    a = v @ np.diag(d) @ v.conj().T
    c13 = holocalc.Contour(0.0, 1.3, 128)
    fg = holocalc.product_fn(holocalc.EXP, holocalc.SQUARE)
    lhs = holocalc.cauchy_calc(a, fg, c13)
    rhs = holocalc.cauchy_calc(a, holocalc.EXP, c13) @ holocalc.cauchy_calc(a, holocalc.SQUARE, c13)
    col.check("fcalc.multiplicativity", "functional-calculus-quadrature",
              opcore.frobenius(lhs - rhs) / max(opcore.frobenius(lhs), 1.0), 1e-8)

    # semi-ideal factorization: scalar, nilpotent, strictly-upper cases
    su2 = psistar.strictly_upper_basis(2)
    zero = holocalc.semiideal_fcalc_check(
        0.7, np.zeros((2, 2), dtype=complex), holocalc.EXP,
        holocalc.Contour(0.7, 1.0, 64), su2)
    col.check("fcalc.semiideal.scalar_case", "semi-ideal-factorization",
              zero["factorization_residual"], 1e-12)
    nil = holocalc.semiideal_fcalc_check(
        0.0, np.array([[0, 1], [0, 0]], dtype=complex), holocalc.EXP,
        holocalc.Contour(0.0, 1.0, 64), su2)
    col.check("fcalc.semiideal.nilpotent_exp", "semi-ideal-factorization",
              nil["factorization_residual"], 1e-10)
    su3 = psistar.strictly_upper_basis(3)
    gen = rng.spawn(3000)
    xs = np.zeros((3, 3), dtype=complex)
    for i in range(3):
        for j in range(i + 1, 3):
            xs[i, j] = gen.complex_normal()
    upper = holocalc.semiideal_fcalc_check(
        0.0, xs, holocalc.INV_TWO_MINUS_Z, holocalc.Contour(0.0, 1.0, 128), su3)
    col.check("fcalc.semiideal.upper_triangular", "semi-ideal-factorization",
              upper["factorization_residual"], 1e-10)
    col.check("fcalc.semiideal.remainder_membership", "semi-ideal-factorization",
              upper["remainder_membership"], 1e-8)
    return col.records, col.series


# ---------------------------------------------------------------------------
# penrose


def _seeded_matrix_with_gap(gen, dim, deficient):
    u = gen.unitary_matrix(dim)
    v = gen.unitary_matrix(dim)
    sig = np.array([0.5 + 1.5 * gen.uniform() for _ in range(dim)])
    if deficient:
        k = 1 + gen.integer(0, dim - 1)
        sig[:k] = 0.0
    return u @ np.diag(sig) @ v.conj().T, sig


def suite_penrose(cfg):
    col = _Collector(cfg)
    rng = SplitMix64(cfg.seed)
    worst = {k: 0.0 for k in ("a~a=a", "~a~=~", "(~a)*=~a", "(a~)*=a~")}
    worst_proj_idem = 0.0
    worst_proj_comm = 0.0
    worst_double = 0.0
    deficient_count = 0
    for trial in range(200):
        gen = rng.spawn(trial)
        dim = 2 + trial % 11
        deficient = trial % 10 < 4
        deficient_count += int(deficient)
        a, sig = _seeded_matrix_with_gap(gen, dim, deficient)
        pinv = holocalc.moore_penrose(a)
        for key, val in holocalc.penrose_residuals(a, pinv).items():
            worst[key] = max(worst[key], val)
        if trial % 10 == 0:
            b = opcore.adjoint(a) @ a
            evals, _ = opcore.hermitian_eig(b)
            nz = evals[evals > dim * np.finfo(float).eps * evals[-1]]
            if nz.size and nz.size < dim:
                p = holocalc.spectral_projection(
                    b, holocalc.Contour(0.0, float(nz[0]) / 2.0, 64), check=False)
                worst_proj_idem = max(worst_proj_idem, opcore.frobenius(p @ p - p))
                worst_proj_comm = max(worst_proj_comm,
                                      opcore.frobenius(p @ b - b @ p)
                                      / max(opcore.frobenius(b), 1.0))
            dd = holocalc.moore_penrose(pinv)
            worst_double = max(worst_double,
                               opcore.frobenius(dd - a) / max(opcore.frobenius(a), 1.0))
    for key, val in worst.items():
        col.check(f"penrose.residual.{key}", "relative-inverse-projection", val, 1e-8)
    col.check("penrose.deficient_fraction", "relative-inverse-projection",
              0.0 if deficient_count >= 60 else 1.0, 0.5)
    col.check("penrose.projection_idempotent", "relative-inverse-projection",
              worst_proj_idem, 1e-8)
    col.check("penrose.projection_commutes", "relative-inverse-projection",
              worst_proj_comm, 1e-8)
    col.check("penrose.double_inverse", "relative-inverse-projection",
              worst_double, 1e-7)

    worst_diag = 0.0
    for trial in range(20):
        gen = rng.spawn(10_000 + trial)
        dim = 2 + trial % 6
        sig = np.array([0.0 if gen.uniform() < 0.4 else 0.5 + 1.5 * gen.uniform()
                        for _ in range(dim)])
        a = np.diag(sig).astype(complex)
        oracle = np.diag([1.0 / s if s > 0 else 0.0 for s in sig]).astype(complex)
        pinv = holocalc.moore_penrose(a)
        worst_diag = max(worst_diag, opcore.frobenius(pinv - oracle))
    col.check("penrose.diagonal_oracle", "relative-inverse-projection",
              worst_diag, 1e-10)
    return col.records, col.series


# ---------------------------------------------------------------------------
# scales


def suite_scales(cfg):
    col = _Collector(cfg)
    rng = SplitMix64(cfg.seed)

    worst_identity = 0.0
    for trial in range(100):
        gen = rng.spawn(trial)
        dim = 2 + trial % 5
        x, y, a = (gen.complex_matrix(dim) for _ in range(3))
        ders = psistar.DerivationSet([gen.hermitian_matrix(dim),
                                      gen.hermitian_matrix(dim)])
        for _, res, scale in psistar.identity_suite(x, y, a, ders):
            worst_identity = max(worst_identity, res / scale)
    col.check("scales.identity_suite", "module-map-identities", worst_identity, 1e-12)

    ut = psistar.upper_triangular_basis(3, tol=1e-9)
    rep = psistar.spectral_invariance_suite(ut, trials=cfg.trials, eps=0.4,
                                            seed=rng.spawn(50_000).state, tol=1e-9)
    col.check("scales.invariance.upper_triangular.violations", "inverse-closure",
              rep["global_violations"] + rep["local_violations"], 0, mode="eq")
    col.check("scales.invariance.upper_triangular.residual", "inverse-closure",
              rep["max_inverse_residual"], 1e-9)
    dg = psistar.diagonal_basis(3, tol=1e-9)
    rep = psistar.spectral_invariance_suite(dg, trials=cfg.trials, eps=0.4,
                                            seed=rng.spawn(50_001).state, tol=1e-9)
    col.check("scales.invariance.diagonal.violations", "inverse-closure",
              rep["global_violations"] + rep["local_violations"], 0, mode="eq")

    # nilpotent span: the truncating Neumann series example
    nil = psistar.SubalgebraBasis(2, [np.array([[0, 1], [0, 0]], dtype=complex)],
                                  contains_unit=True)
    gen = rng.spawn(50_002)
    lam = 1.0 + gen.uniform()
    xn = gen.complex_normal() * np.array([[0, 1], [0, 0]])
    inv = opcore.inverse(lam * np.eye(2) + xn)
    col.check("scales.invariance.nilpotent_case", "inverse-closure",
              psistar.membership(inv, nil), 1e-12)

    # monotonicity of both norm scales, and submultiplicativity of q_{1,0}
    mono_ok = 0
    submult_worst = 0.0
    for trial in range(100):
        gen = rng.spawn(100_000 + trial)
        dim = 2 + trial % 4
        a = gen.complex_matrix(dim)
        b = gen.complex_matrix(dim)
        ders = psistar.DerivationSet([gen.hermitian_matrix(dim),
                                      gen.hermitian_matrix(dim)])
        if trial < 20:
            qs = [psistar.scale_norm_q(a, r, 0, ders) for r in range(4)]
            ps = [psistar.semiideal_norm_p(a, 0, k, ders) for k in range(3)]
            if any(u > v + 1e-12 for u, v in zip(qs, qs[1:])) or \
               any(u > v + 1e-12 for u, v in zip(ps, ps[1:])):
                mono_ok += 1
        qa = psistar.scale_norm_q(a, 1, 0, ders)
        qb = psistar.scale_norm_q(b, 1, 0, ders)
        qab = psistar.scale_norm_q(a @ b, 1, 0, ders)
        submult_worst = max(submult_worst, qab / (qa * qb))
    col.check("scales.monotonicity_violations", "scale-recursion", mono_ok, 0, mode="eq")
    col.bounded("scales.q_submultiplicative", "scale-recursion",
                submult_worst, 1.0, headroom=1e-8)

    # sobolev graph-norm endpoints
    ders0 = psistar.DerivationSet([np.zeros((3, 3), dtype=complex)])
    dersI = psistar.DerivationSet([np.eye(3, dtype=complex)])
    xi = np.array([1.0, -2.0, 0.5])
    dev = max(abs(psistar.sobolev_norm_p(xi, r, ders0) - np.linalg.norm(xi))
              for r in range(4))
    dev = max(dev, max(abs(psistar.sobolev_norm_p(xi, r, dersI)
                           - 2.0 ** r * np.linalg.norm(xi)) for r in range(4)))
    col.check("scales.sobolev_endpoints", "graph-norm-recursion", dev, 1e-12)

    # symmetrized sub-bases stay product-closed
    worst_sym = 0.0
    for basis in (psistar.upper_triangular_basis(3), psistar.diagonal_basis(4),
                  psistar.strictly_upper_basis(3)):
        sym = psistar.symmetrized_basis(basis)
        if sym.basis:
            worst_sym = max(worst_sym, sym.product_closure_residual())
    col.check("scales.symmetrization_closure", "adjoint-symmetrization", worst_sym, 1e-8)

    model = psistar.CommutativeModel(points=12, marked=list(range(8, 12)),
                                     blocks=[[0, 1, 2], [3, 4, 5], [6, 7],
                                             [8, 9], [10, 11]])
    rep = psistar.ideal_transfer_demo(model, samples=max(cfg.trials, 200),
                                      seed=rng.spawn(60_000).state)
    total = sum(v["violations"] for v in rep["properties"].values())
    col.check("scales.ideal_transfer.violations", "ideal-transfer", total, 0, mode="eq")
    col.info("scales.ideal_transfer.note", "ideal-transfer", rep["info"][0])
    return col.records, col.series


# ---------------------------------------------------------------------------
# groupoid


def suite_groupoid(cfg):
    col = _Collector(cfg)
    rng = SplitMix64(cfg.seed)

    cases = ("collar_collar", "collar_flat", "flat_collar", "flat_flat", "boundary")
    worst_rel = 0.0
    worst_round = 0.0
    per_case = 10_000 // len(cases)
    for n in (1, 2, 3):
        for case in cases:
            gen = rng.spawn(n * 100 + cases.index(case))
            for _ in range(per_case):
                arrow = groupoid.sample_b_arrow(gen, case)
                out = groupoid.theta(n + 1, arrow)
                worst_rel = max(worst_rel, groupoid.cn_relation_residual(
                    groupoid.COLLAR_RHO, n, out))
                back = groupoid.theta_inv(n + 1, out)
                worst_round = max(worst_round, abs(back.u - arrow.u),
                                  abs(back.v - arrow.v), abs(back.mu - arrow.mu))
    col.check("groupoid.theta_relation", "coordinate-change", worst_rel, 1e-12)
    col.check("groupoid.theta_roundtrip", "coordinate-change", worst_round, 1e-10)

    worst_tau = 0.0
    for n in (1, 2, 3):
        ts = np.linspace(0.0, 1.0, 2001)
        worst_tau = max(worst_tau,
                        max(abs(groupoid.tau_inv(n, groupoid.tau(n, float(t))) - float(t))
                            for t in ts))
    col.check("groupoid.tau_roundtrip", "coordinate-change", worst_tau, 1e-10)
    col.check("groupoid.tau_frozen_values", "coordinate-change",
              max(abs(groupoid.tau(2, math.exp(-4.0)) - 1.0 / (2.0 * math.e)),
                  abs(groupoid.tau(3, 1.0) - 1.0), abs(groupoid.tau(1, 0.0))), 1e-15)
    worst_f = 0.0
    for n in (2, 3, 4):
        xs = np.geomspace(1e-3, 10.0, 200)
        worst_f = max(worst_f, float(np.max(np.abs(
            groupoid.f_inv(n, groupoid.f_map(n, xs)) - xs))))
    col.check("groupoid.f_roundtrip", "flow-straightening", worst_f, 1e-12)

    g = groupoid.ModelGroupoid(n=cfg.n, h=cfg.h, L=cfg.L,
                               unit_count=cfg.unit_count)
    gen = rng.spawn(777)
    worst_comp = 0.0
    for _ in range(200):
        ji = gen.integer(0, g.unit_count)
        # pick mu so the range unit of g2 stays on the stored grid
        m_lo = max(0, g.m_half + ji - (g.unit_count - 1))
        m_hi = min(g.m_half + ji, len(g.mu_grid) - 1)
        m = gen.integer(m_lo, m_hi + 1)
        v = float(g.interior_units[ji])
        g2 = groupoid.Arrow(g.range_of(v, float(g.mu_grid[m])), v, float(g.mu_grid[m]))
        fiber_w = g.haar_fiber(g2.u)
        g1, _ = fiber_w[gen.integer(0, len(fiber_w))]
        prod = g.compose(g1, g2)
        worst_comp = max(worst_comp, g.relation_residual(prod))
        unit = g.compose(prod, g.inv(prod))
        worst_comp = max(worst_comp, abs(unit.mu), g.relation_residual(unit))
    col.check("groupoid.compose_relation", "fiber-composition", worst_comp, 1e-12)
    try:
        g.compose(groupoid.Arrow(g.units[1], g.units[1], 0.0),
                  groupoid.Arrow(0.0, 0.0, 1.0))
        col.check("groupoid.compose_mismatch_raises", "fiber-composition", 1.0, 0.5)
    except NotComposable:
        col.check("groupoid.compose_mismatch_raises", "fiber-composition", 0.0, 0.5)

    fib0 = g.haar_fiber(0.0)
    cap_unit = g.haar_fiber(1.0)
    translation_ok = len({round(w, 12) for _, w in fib0}) == 1
    col.check("groupoid.haar_fiber_shapes", "haar-fiber",
              0.0 if (len(fib0) == 2 * g.m_half + 1
                      and max(a.mu for a, _ in cap_unit) <= 1e-12
                      and translation_ok) else 1.0, 0.5)
    mus = sorted(a.mu for a, _ in g.haar_fiber(g.units[40]))
    shifted = sorted(a.mu + 0.35 for a, _ in g.haar_fiber(g.units[40]))
    inside = [m for m in shifted if mus[0] + 0.5 <= m <= mus[-1] - 0.5]
    aligned = max(abs((m - mus[0]) / g.h - round((m - mus[0]) / g.h)) for m in inside)
    col.check("groupoid.haar_translation_alignment", "haar-fiber", aligned, 1e-9)

    gw = groupoid.ModelGroupoid(n=cfg.n, h=cfg.h, L=200.0, unit_count=cfg.unit_count)
    cert, viol = groupoid.length_axiom_suite(gw, samples=10_000,
                                             seed=rng.spawn(888).state)
    col.check("groupoid.length.subadditivity_violations", "length-growth",
              viol["subadditivity"], 0, mode="eq")
    col.check("groupoid.length.symmetry_violations", "length-growth",
              viol["symmetry"], 0, mode="eq")
    col.check("groupoid.length.properness_nested", "length-growth",
              0.0 if viol["properness_nested"] else 1.0, 0.5)
    col.check("groupoid.growth.degree", "length-growth", abs(cert.N - 1), 0, mode="eq")
    col.check("groupoid.growth.constant", "length-growth",
              abs(cert.c - 2.0) / 2.0, 0.02)
    col.check("groupoid.growth.C2_closed_form", "length-growth",
              abs(cert.C_table[2] - 2.0) / 2.0, 0.02)
    col.check("groupoid.growth.k0", "length-growth", abs(cert.k0 - 2), 0, mode="eq")
    rows = [(r, m, cert.bound(r)) for r, m in
            zip(cert.details["r_values"], cert.details["boundary_measures"])]
    col.add_series("growth_sweep", ("r", "measure", "bound"), rows)
    return col.records, col.series


# ---------------------------------------------------------------------------
# schwartz


def _mixture_profile(gen, width_lo=0.8, width_hi=3.0):
    parts = []
    for _ in range(3):
        c = gen.complex_normal()
        aa = width_lo + (width_hi - width_lo) * gen.uniform()
        b = 1.5 * (2.0 * gen.uniform() - 1.0)
        parts.append((c, aa, b))

    def profile(mu):
        mu = np.asarray(mu, dtype=float)
        out = np.zeros(mu.shape, dtype=complex)
        for c, aa, b in parts:
            out += c * np.exp(-aa * (mu - b) ** 2)
        return out

    return profile


def _selfadjoint_profile(gen, width=2.0):
    c = 0.5 + gen.uniform()
    b = gen.uniform()

    def profile(mu):
        mu = np.asarray(mu, dtype=float)
        return c * np.exp(-width * mu * mu) * (1.0 + 0.3 * np.cos(b * mu))

    return profile


def suite_schwartz(cfg):
    col = _Collector(cfg)
    rng = SplitMix64(cfg.seed)
    g = groupoid.ModelGroupoid(n=cfg.n, h=cfg.h, L=cfg.L, unit_count=cfg.unit_count)
    gw = groupoid.ModelGroupoid(n=cfg.n, h=cfg.h, L=200.0, unit_count=9)
    cert, _ = groupoid.length_axiom_suite(gw, samples=64, seed=rng.spawn(1).state)

    # closed-form convolution and refinement orders
    f_gauss = schwartz.GroupoidKernel.from_profile(g, lambda mu: np.exp(-mu ** 2))
    conv = schwartz.convolve(g, f_gauss, f_gauss)
    exact = np.sqrt(np.pi / 2.0) * np.exp(-g.mu_grid ** 2 / 2.0)
    col.check("schwartz.gaussian_closed_form", "convolution-bound",
              float(np.max(np.abs(conv.boundary - exact))), 1e-3)

    tri_errors = []
    for hh in (cfg.h, cfg.h / 2.0):
        gh = groupoid.ModelGroupoid(n=cfg.n, h=hh, L=8.0, unit_count=9)
        tri = schwartz.GroupoidKernel.from_profile(
            gh, lambda mu: np.maximum(0.0, 1.0 - np.abs(mu)))
        cv = schwartz.convolve(gh, tri, tri)
        s = np.abs(gh.mu_grid)
        b3 = np.where(s <= 1.0, 2.0 / 3.0 - s ** 2 + s ** 3 / 2.0,
                      np.where(s <= 2.0, (2.0 - s) ** 3 / 6.0, 0.0))
        tri_errors.append(float(np.max(np.abs(cv.boundary - b3))))
    ratio = tri_errors[0] / max(tri_errors[1], 1e-300)
    col.check("schwartz.refinement_order", "convolution-bound",
              0.0 if 2.5 <= ratio <= 6.0 else ratio, 0.5)
    col.info("schwartz.refinement_ratio", "convolution-bound", ratio)

    g_fine = groupoid.ModelGroupoid(n=cfg.n, h=0.0125, L=5.0, unit_count=9)
    base = schwartz.GroupoidKernel.from_profile(g_fine, lambda mu: np.exp(-mu ** 2))
    unit_errors = []
    for eps in (0.8, 0.4, 0.2):
        def bump(mu, eps=eps):
            s = np.clip(np.abs(mu) / eps, 0.0, 1.0)
            return (1 - 10 * s ** 3 + 15 * s ** 4 - 6 * s ** 5) / eps
        eta = schwartz.GroupoidKernel.from_profile(g_fine, bump)
        mass = float(np.sum(eta.boundary.real)) * g_fine.h
        eta = eta.scaled(1.0 / mass)
        sm = schwartz.convolve(g_fine, base, eta)
        unit_errors.append(float(np.max(np.abs(sm.boundary - base.boundary))))
    r1 = unit_errors[0] / max(unit_errors[1], 1e-300)
    r2 = unit_errors[1] / max(unit_errors[2], 1e-300)
    col.check("schwartz.approx_unit_order", "convolution-bound",
              0.0 if (r1 >= 2.5 and r2 >= 2.5) else min(r1, r2), 0.5)

    # convolution inequality over seeded pairs
    violations = 0
    worst_ratio = 0.0
    for trial in range(50):
        gen = rng.spawn(10_000 + trial)
        f1 = schwartz.GroupoidKernel.from_profile(g, _mixture_profile(gen))
        f2 = schwartz.GroupoidKernel.from_profile(g, _mixture_profile(gen))
        k = 2 + trial % 2
        out = schwartz.conv_inequality_check(g, f1, f2, k, 0, cert)
        violations += int(out["violation"])
        worst_ratio = max(worst_ratio, out["ratio"])
    col.check("schwartz.conv_inequality.violations", "convolution-bound",
              violations, 0, mode="eq")
    col.info("schwartz.conv_inequality.worst_ratio", "convolution-bound", worst_ratio)

    # reduced-norm bound and the approximate-unit estimate
    g_red = groupoid.ModelGroupoid(n=cfg.n, h=cfg.h, L=10.0, unit_count=101)
    red_violations = 0
    young_worst = 0.0
    for trial in range(50):
        gen = rng.spawn(20_000 + trial)
        gamma = 0.2 * gen.uniform()
        f = schwartz.GroupoidKernel.from_profile(
            g_red, _mixture_profile(gen),
            unit_factor=lambda v: 1.0 + gamma * np.asarray(v))
        out = schwartz.reduced_norm_estimate(g_red, f, units=[0, 50], cert=cert)
        red_violations += int(out["violation"])
        mass = float(np.max(np.sum(np.abs(f.interior), axis=0)) * g_red.h)
        mass = max(mass, float(np.sum(np.abs(f.boundary)) * g_red.h))
        young_worst = max(young_worst, out["estimate"] / mass)
    col.check("schwartz.reduced_norm.violations", "reduced-norm",
              red_violations, 0, mode="eq")
    col.bounded("schwartz.reduced_norm.young", "reduced-norm",
                young_worst, 1.0, headroom=0.05)
    def unit_bump(mu):
        s = np.clip(np.abs(mu) / 0.5, 0.0, 1.0)
        return 1.0 - 10 * s ** 3 + 15 * s ** 4 - 6 * s ** 5
    eta = schwartz.GroupoidKernel.from_profile(g_red, unit_bump)
    eta = eta.scaled(1.0 / (float(np.sum(eta.boundary.real)) * g_red.h))
    est = schwartz.reduced_norm_estimate(g_red, eta, units=[0])["estimate"]
    col.check("schwartz.approx_unit_estimate", "reduced-norm", abs(est - 1.0), 0.05)

    # radius equality across the norm scale, and the sandwich regularization
    for tag, profile in (("gauss", lambda mu: np.exp(-2.0 * mu ** 2)),
                         ("bump", lambda mu: np.maximum(0.0, 1.0 - (mu / 1.0) ** 2) ** 2)):
        f = schwartz.GroupoidKernel.from_profile(g, profile)
        out = schwartz.spectral_radius_norms_check(g, f, k=2, l=4, d=0,
                                                   n_powers=64, cert=cert)
        col.check(f"schwartz.radius_equality.{tag}", "radius-equality",
                  out["agreement"], 0.05)
        col.check(f"schwartz.sandwich_finite.{tag}", "radius-equality",
                  0.0 if out["sandwich_finite"] else 1.0, 0.5)
        rows_k = [(i + 1, v) for i, v in enumerate(out["seq_k"])]
        rows_l = [(i + 1, v) for i, v in enumerate(out["seq_l"])]
        col.add_series(f"radius_{tag}_k2", ("n", "norm_root"), rows_k)
        col.add_series(f"radius_{tag}_k4", ("n", "norm_root"), rows_l)

    # involution and associativity
    gen = rng.spawn(30_000)
    f1 = schwartz.GroupoidKernel.from_profile(g, _mixture_profile(gen))
    f2 = schwartz.GroupoidKernel.from_profile(g, _mixture_profile(gen))
    invol = schwartz.involution(schwartz.involution(f1))
    dev = float(np.max(np.abs(invol.boundary - f1.boundary)))
    dev = max(dev, float(np.max(np.abs(invol.interior - f1.interior))))
    col.check("schwartz.involution_idempotent", "convolution-involution", dev, 1e-14)
    lhs = schwartz.involution(schwartz.convolve(g, f1, f2))
    rhs = schwartz.convolve(g, schwartz.involution(f2), schwartz.involution(f1))
    col.check("schwartz.involution_antihomomorphism", "convolution-involution",
              float(np.max(np.abs(lhs.boundary - rhs.boundary))), 1e-10)
    col.check("schwartz.involution_norm", "convolution-involution",
              abs(schwartz.schwartz_norm(schwartz.involution(f1), 2, 0)
                  - schwartz.schwartz_norm(f1, 2, 0)), 1e-10)
    narrow = [schwartz.GroupoidKernel.from_profile(
        g, _mixture_profile(rng.spawn(31_000 + i), 2.0, 4.0)) for i in range(3)]
    for f in narrow:
        f.boundary[np.abs(g.mu_grid) > g.L / 4.0] = 0.0
        offs = np.arange(g.unit_count)[None, :] - np.arange(g.unit_count)[:, None]
        f.interior[np.abs(offs) * g.h > g.L / 4.0] = 0.0
    a1 = schwartz.convolve(g, schwartz.convolve(g, narrow[0], narrow[1]), narrow[2])
    a2 = schwartz.convolve(g, narrow[0], schwartz.convolve(g, narrow[1], narrow[2]))
    col.check("schwartz.associativity", "convolution-bound",
              float(np.max(np.abs(a1.boundary - a2.boundary)))
              + float(np.max(np.abs(a1.interior - a2.interior))), 1e-9)

    # fiberwise L^2 bound from the growth constant
    l2_worst = 0.0
    for trial in range(10):
        gen = rng.spawn(40_000 + trial)
        f = schwartz.GroupoidKernel.from_profile(g, _mixture_profile(gen))
        norms = schwartz.l2_fiber_norms(f, 1)
        bound = math.sqrt(cert.C_table[cert.k0]) * schwartz.schwartz_norm(f, cert.k0, 1)
        l2_worst = max(l2_worst, max(norms) / bound)
    col.bounded("schwartz.l2_bound", "reduced-norm", l2_worst, 1.0, headroom=0.05)

    # stability of the class under the contour calculus
    g_demo = groupoid.ModelGroupoid(n=cfg.n, h=0.1, L=10.0, unit_count=9)
    f = schwartz.GroupoidKernel.from_profile(g_demo, lambda mu: np.exp(-2.0 * mu ** 2))
    mat = schwartz.boundary_matrix(f)
    scale = 0.8 / opcore.op_norm_safe(mat)
    f = f.scaled(scale)
    demo = schwartz.holo_stability_demo(g_demo, f, holocalc.SHIFTED_GEOM)
    col.check("schwartz.holo_stability.decay_table", "radius-equality",
              0.0 if demo["stable"] else 1.0, 0.5)
    ident = schwartz.holo_stability_demo(g_demo, f, holocalc.IDENTITY)
    col.check("schwartz.holo_stability.identity_recovers", "radius-equality",
              float(np.max(np.abs(ident["kernel"] - f.boundary))), 1e-8)
    sq = schwartz.holo_stability_demo(g_demo, f, holocalc.SQUARE)
    conv_fss = schwartz.convolve(g_demo, f, f)
    col.check("schwartz.holo_stability.square_is_convolution", "radius-equality",
              float(np.max(np.abs(sq["kernel"] - conv_fss.boundary))), 1e-8)
    mat_s = schwartz.boundary_matrix(f)
    neumann = np.zeros_like(mat_s)
    term = np.eye(mat_s.shape[0], dtype=complex)
    for _ in range(200):
        term = term @ mat_s / 2.0
        neumann += term
        if opcore.sup_entry(term) < 1e-14:
            break
    contour_fn = holocalc.cauchy_calc(mat_s, holocalc.SHIFTED_GEOM,
                                      holocalc.Contour(0.0, demo["contour_radius"], 128),
                                      check=False)
    col.check("schwartz.holo_stability.neumann_oracle", "radius-equality",
              opcore.frobenius(contour_fn - neumann) / max(opcore.frobenius(neumann), 1.0),
              1e-8)
    col.add_series("decay_table", ("k", "sup_weighted"),
                   sorted(demo["decay_table"].items()))
    return col.records, col.series


# ---------------------------------------------------------------------------
# cusp


def _rk4_flow_oracle(n, t_final, x0, steps=4000):
    """Independent ODE route: integrate dx/dt = x^n / (1 + x^n)."""
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


def suite_cusp(cfg):
    col = _Collector(cfg)
    rng = SplitMix64(cfg.seed)
    n = max(cfg.n, 2)

    gen = rng.spawn(1)
    worst = 0.0
    for _ in range(1000):
        t, s = gen.uniform(-5, 5), gen.uniform(-5, 5)
        x = gen.uniform(0.01, 8.0)
        worst = max(worst, abs(smoothkernel.flow(n, t + s, x)
                               - smoothkernel.flow(n, t, smoothkernel.flow(n, s, x))))
    col.check("cusp.flow_group_law", "flow-straightening", worst, 1e-10)
    col.check("cusp.flow_frozen_value", "flow-straightening",
              abs(smoothkernel.flow(2, 1.5, 1.0) - 2.0), 1e-8)
    col.check("cusp.flow_ode_oracle", "flow-straightening",
              abs(smoothkernel.flow(2, 1.5, 1.0) - _rk4_flow_oracle(2, 1.5, 1.0)), 1e-8)

    grid = smoothkernel.HalfLineGrid(x_max=10.0, count=240, pad=1e-6)
    block = np.array([[1.0, 0.2], [0.2, 0.5]], dtype=complex)
    a = smoothkernel.MatrixSchwartz.from_profile(
        grid, lambda x: np.exp(-smoothkernel.f_map(n, x) ** 2 / 2.0), block)
    ident = smoothkernel.act(n, 0.0, a)
    col.check("cusp.action_identity", "flow-twisted-product",
              float(np.max(np.abs(ident.values - a.values))), 0.0, mode="eq")
    fine = smoothkernel.HalfLineGrid(x_max=10.0, count=2000, pad=1e-6)
    mono = smoothkernel.MatrixSchwartz.from_profile(
        fine,
        lambda x: 1.0 / (1.0 + np.exp(-np.clip(smoothkernel.f_map(n, x), -500, 500))),
        block)
    comp = smoothkernel.act(n, 0.7, smoothkernel.act(n, 0.8, mono))
    direct = smoothkernel.act(n, 1.5, mono)
    col.check("cusp.action_composition", "flow-twisted-product",
              float(np.max(np.abs(comp.values - direct.values))), 1e-6)
    col.check("cusp.action_sup_preserved", "flow-twisted-product",
              abs(smoothkernel.act(n, 1.5, a).seminorm(0) - a.seminorm(0)), 1e-3)

    c1, m1, diag1 = smoothkernel.poly_growth_fit(n, a, 1)
    col.check("cusp.growth_fit_r2", "polynomial-growth", 1.0 - diag1["r2"], 0.01)
    col.check("cusp.growth_fit_degree", "polynomial-growth",
              0.0 if m1 <= 4 else m1, 0.5)
    c0, m0, _ = smoothkernel.poly_growth_fit(n, a, 0)
    bound_cmp = c0 * (1.0 + 5.0 ** m0) <= c1 * (1.0 + 5.0 ** m1) * (1.0 + 1e-9)
    col.check("cusp.growth_index_monotone", "polynomial-growth",
              0.0 if bound_cmp else 1.0, 0.5)
    col.info("cusp.growth_constants", "polynomial-growth",
             {"C0": c0, "M0": m0, "C1": c1, "M1": m1, "degree": diag1["degree"]})

    # frozen action reduces to ordinary convolution
    sgrid = smoothkernel.HalfLineGrid(x_max=10.0, count=120, pad=1e-6)
    one = np.eye(1, dtype=complex)
    s1 = smoothkernel.TwistedElement.separable(
        sgrid, lambda t: np.exp(-t ** 2), lambda x: np.exp(-x ** 2 / 2.0), one,
        t_max=12.0, dt=0.1)
    s2 = smoothkernel.TwistedElement.separable(
        sgrid, lambda t: np.exp(-t ** 2), lambda x: np.exp(-x ** 2 / 2.0), one,
        t_max=12.0, dt=0.1)
    frozen = smoothkernel.twisted_convolve(s1, s2, n, frozen=True)
    exact_t = np.sqrt(np.pi / 2.0) * np.exp(-frozen.t_grid ** 2 / 2.0)
    exact = exact_t[:, None] * (np.exp(-sgrid.nodes ** 2 / 2.0) ** 2)[None, :]
    col.check("cusp.frozen_closed_form", "flow-twisted-product",
              float(np.max(np.abs(frozen.values[:, :, 0, 0] - exact))), 1e-3)
    tvals = s1.values[:, 0, 0, 0]
    plain = np.convolve(tvals, s2.values[:, 0, 0, 0]) * s1.dt
    mid = len(tvals) - 1
    plain = plain[mid - s1.half: mid + s1.half + 1]
    col.check("cusp.frozen_equals_ordinary", "flow-twisted-product",
              float(np.max(np.abs(frozen.values[:, 0, 0, 0] - plain))), 1e-10)

    # associativity against the direct triple sum on a coarse grid
    cgrid = smoothkernel.HalfLineGrid(x_max=6.0, count=60, pad=1e-6)
    els = []
    for i in range(3):
        gen = rng.spawn(100 + i)
        els.append(smoothkernel.TwistedElement.separable(
            cgrid,
            lambda t, c=gen.uniform(0.8, 1.5): np.exp(-c * t ** 2) * (np.abs(t) <= 2.0),
            lambda x, b=gen.uniform(0.0, 0.5): np.exp(-(smoothkernel.f_map(n, x) - b) ** 2),
            block, t_max=8.0, dt=0.8))
    lhs = smoothkernel.twisted_convolve(smoothkernel.twisted_convolve(els[0], els[1], n),
                                        els[2], n)
    rhs = smoothkernel.twisted_convolve(els[0],
                                        smoothkernel.twisted_convolve(els[1], els[2], n), n)
    col.check("cusp.associativity", "flow-twisted-product",
              float(np.max(np.abs(lhs.values - rhs.values))), 1e-6 + 0.8 ** 2)

    # seminorm inequality for the twisted product over seeded pairs
    rgrid = smoothkernel.HalfLineGrid(x_max=10.0, count=120, pad=1e-6)
    rob_violations = 0
    worst_rob = 0.0
    for trial in range(50):
        gen = rng.spawn(200 + trial)
        b1 = gen.uniform(0.0, 0.6)
        b2 = gen.uniform(0.0, 0.6)
        w1 = gen.uniform(0.8, 1.6)
        w2 = gen.uniform(0.8, 1.6)
        c1x = gen.uniform(0.5, 1.0)
        f = smoothkernel.TwistedElement.separable(
            rgrid, lambda t: np.exp(-w1 * t ** 2) * (1.0 + 0.2 * t),
            lambda x: np.exp(-(smoothkernel.f_map(n, x) - b1) ** 2 / 2.0), block,
            t_max=12.0, dt=0.4)
        gg = smoothkernel.TwistedElement.separable(
            rgrid, lambda t: c1x * np.exp(-w2 * t ** 2),
            lambda x: np.exp(-(smoothkernel.f_map(n, x) - b2) ** 2 / 2.0), block,
            t_max=12.0, dt=0.4)
        idx = int(np.argmax(np.max(np.abs(gg.values.reshape(len(gg.t_grid), -1)), axis=1)))
        growth = {}
        for sem in (0, 1):
            cg, mg, _ = smoothkernel.poly_growth_fit(
                n, gg.slice(idx), sem, t_samples=np.linspace(-6.0, 6.0, 13))
            growth[sem] = (cg, mg)
        conv = smoothkernel.twisted_convolve(f, gg, n)
        prof_conv = {(sem, j): smoothkernel.seminorm_profile(conv, sem, j)
                     for sem in (0, 1) for j in (0, 1)}
        prof_f = {sem: smoothkernel.seminorm_profile(f, sem, 0) for sem in (0, 1)}
        prof_g = {(sem, j): smoothkernel.seminorm_profile(gg, sem, j)
                  for sem in (0, 1) for j in (0, 1)}
        for sem in (0, 1):
            cg, mg = growth[sem]
            for i in (0, 1):
                for j in (0, 1):
                    lhs = smoothkernel.seminorm_nij(conv, sem, i, j,
                                                    profile=prof_conv[(sem, j)])
                    rhs = 0.0
                    for beta in range(i + 1):
                        gamma = i - beta
                        rhs += math.comb(i, beta) * (
                            smoothkernel.seminorm_nij(f, sem, beta, 0, profile=prof_f[sem])
                            + smoothkernel.seminorm_nij(f, sem, beta + mg, 0,
                                                        profile=prof_f[sem])) * \
                            smoothkernel.seminorm_nij(gg, sem, gamma, j,
                                                      profile=prof_g[(sem, j)])
                    rhs *= cg
                    if rhs > 0:
                        worst_rob = max(worst_rob, lhs / rhs)
                    if lhs > rhs * 1.05:
                        rob_violations += 1
    col.check("cusp.twisted_seminorm.violations", "twisted-seminorm",
              rob_violations, 0, mode="eq")
    col.info("cusp.twisted_seminorm.worst_ratio", "twisted-seminorm", worst_rob)

    # residual-ideal membership against the power-counting oracle
    igrid = smoothkernel.HalfLineGrid(x_max=2.0, count=160, pad=1e-10)
    eye2 = np.eye(2, dtype=complex)
    k_flat = smoothkernel.BoundaryKernel.from_scalar(
        igrid, lambda x, xp: np.exp(-1.0 / x - 1.0 / xp), eye2)
    r_flat = smoothkernel.ideal_membership_I(k_flat, cap=4, n=n)
    col.check("cusp.ideal.flat_kernel_passes", "residual-ideal",
              0.0 if r_flat["passes"] else 1.0, 0.5)
    k_const = smoothkernel.BoundaryKernel.from_scalar(
        igrid, lambda x, xp: np.ones_like(x * xp), eye2)
    r_const = smoothkernel.ideal_membership_I(k_const, cap=4, n=n)
    const_ok = (not r_const["decay_ok"]) and \
        r_const["decay_table"][(1, 0)] > 1e8 and r_const["decay_table"][(0, 0)] < 1e8
    col.check("cusp.ideal.constant_fails_first_power", "residual-ideal",
              0.0 if const_ok else 1.0, 0.5)
    k_lin = smoothkernel.BoundaryKernel.from_scalar(
        igrid, lambda x, xp: x * xp * np.exp(-x ** 2 - xp ** 2), eye2)
    r_lin_lo = smoothkernel.ideal_membership_I(k_lin, cap=1, n=n)
    r_lin_hi = smoothkernel.ideal_membership_I(k_lin, cap=4, n=n)
    oracle_match = r_lin_lo["decay_ok"] and (not r_lin_hi["decay_ok"]) and \
        r_lin_hi["decay_table"][(2, 0)] > 1e8 and r_lin_hi["decay_table"][(1, 1)] < 1e8
    col.check("cusp.ideal.power_counting_oracle", "residual-ideal",
              0.0 if oracle_match else 1.0, 0.5)

    closure = smoothkernel.closure_demo(n=n)
    col.check("cusp.closure_demo", "residual-ideal",
              0.0 if all(v["passes"] for v in closure.values()) else 1.0, 0.5)
    return col.records, col.series


# ---------------------------------------------------------------------------
# symbols


def suite_symbols(cfg):
    col = _Collector(cfg)
    rng = SplitMix64(cfg.seed)
    n_pts = 64
    y = symbols.circle_grid(n_pts)
    phi0 = symbols.bump_cutoff(n_pts)
    psi0 = symbols.bump_cutoff(n_pts, width=1.8)

    mult = symbols.multiplication_matrix(n_pts, np.exp(np.sin(y)))
    col.check("symbols.eta_independence", "local-symbol",
              symbols.eta_independence_residual(mult, phi0, psi0, n_pts), 1e-13)

    gen = rng.spawn(1)
    builders = [
        lambda x: symbols.multiplication_matrix(n_pts, np.exp(np.sin(y) * (1 + x))),
        lambda x: symbols.circulant_matrix(n_pts, lambda eta: (1.0 + eta ** 2) ** -0.5),
        lambda x: symbols.forward_difference_matrix(n_pts) / n_pts,
        lambda x: gen.complex_matrix(n_pts) / n_pts,
        lambda x: symbols.multiplication_matrix(n_pts, np.cos(2 * y) + 1.2)
        @ symbols.circulant_matrix(n_pts, lambda eta: np.exp(-0.1 * eta ** 2)),
    ]
    fam = symbols.TorusOperatorFamily(n_pts, [])
    for i, build in enumerate(builders):
        for x in (0.2, 0.8):
            key = round(x + i, 3)
            fam.x_samples.append(key)
            fam.matrices[key] = np.asarray(build(x), dtype=complex)
    suite = symbols.symbol_estimate_suite(fam, phi0, psi0)
    col.check("symbols.l2_estimate.violations", "local-symbol",
              suite["l2_violations"], 0, mode="eq")
    conv = symbols.convergence_check(lambda yy: np.exp(np.sin(yy)),
                                     lambda yy: np.cos(yy) * np.exp(np.sin(yy)))
    col.check("symbols.table_first_order", "local-symbol",
              0.0 if 1.5 <= conv["ratio"] <= 3.0 else conv["ratio"], 0.5)
    col.info("symbols.cutoff_constant", "local-symbol", suite["c_cutoffs"])
    rows = [(a, b, suite["derivative_table"][(a, b)], suite["seminorm_table"][(a, b)])
            for (a, b) in sorted(suite["derivative_table"])]
    col.add_series("symbol_table", ("alpha", "beta", "sup_weighted", "commutator_seminorm"),
                   rows)
    return col.records, col.series


REGISTRY = {
    "fcalc": suite_fcalc,
    "penrose": suite_penrose,
    "scales": suite_scales,
    "groupoid": suite_groupoid,
    "schwartz": suite_schwartz,
    "cusp": suite_cusp,
    "symbols": suite_symbols,
}


def run_config(cfg):
    from . import __version__
    from .report import assemble

    names = SUITE_NAMES if cfg.suite == "all" else (cfg.suite,)
    records = []
    series_list = []
    for name in names:
        recs, sers = REGISTRY[name](cfg)
        records.extend(recs)
        series_list.extend(sers)
    return assemble(records, series_list, cfg.seed, cfg.echo(), __version__)
