"""Independent checks: finite-difference eigenvalues and operator residuals.

The eigensolver only needs the potential V(r); it does not touch the
spectrum or wavefunction code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .params import NatanzonParams, R_symmetric, domain_of
from .potential import potential_limits, potential_of_z
from .zmap import ZMap, build_zmap, z_derivatives

FLAT_TOL = 1e-12
DECAY_LENGTHS = 40.0


@dataclass(frozen=True)
class FDResult:
    eigenvalues: np.ndarray
    complete: bool
    r_span: tuple[float, float]
    n: int
    threshold: float
    zmap: ZMap | None = field(default=None, repr=False, compare=False)

    def __len__(self):
        return len(self.eigenvalues)

    def __getitem__(self, i):
        return self.eigenvalues[i]


@dataclass(frozen=True)
class ResidualReport:
    check: str
    l2_relative: float
    max_node: float
    grid: str

    def passed(self, tol: float) -> bool:
        return self.l2_relative < tol


# --------------------------------------------------------------------------
# finite-difference eigensolver


def fd_levels(V, r_lo: float, r_hi: float, n: int, k: int) -> np.ndarray:
    """k lowest eigenvalues of -d2/dr2 + V on [r_lo, r_hi], Dirichlet ends,
    three-point differences on n intervals."""
    h = (r_hi - r_lo) / n
    x = r_lo + h * np.arange(1, n)
    d = 2.0 / h**2 + V(x)
    e = np.full(n - 2, -1.0 / h**2)
    k = min(k, n - 1)
    return eigh_tridiagonal(d, e, eigvals_only=True, select="i", select_range=(0, k - 1))


def fd_richardson(V, r_lo: float, r_hi: float, n: int, k: int) -> np.ndarray:
    """Richardson-extrapolated eigenvalues from grids of n and 2n intervals."""
    coarse = fd_levels(V, r_lo, r_hi, n, k)
    fine = fd_levels(V, r_lo, r_hi, 2 * n, k)
    return (4.0 * fine - coarse) / 3.0


def _flat_edge(r, v, v_inf, from_right: bool):
    """Outermost node where |V - V_inf| still exceeds FLAT_TOL (None if flat everywhere)."""
    idx = np.flatnonzero(np.abs(v - v_inf) >= FLAT_TOL)
    if idx.size == 0:
        return None
    return r[idx[-1]] if from_right else r[idx[0]]


def _truncation(params: NatanzonParams, zmap: ZMap):
    """Pick [r_lo, r_hi] where the potential has flattened at infinite ends.

    Rebuilds the map with a smaller z-margin when the flat region lies
    beyond the current one.
    """
    dom = domain_of(params)
    v_left, v_right = potential_limits(params)
    margin = float(np.exp(zmap.u[0]) / (1 + np.exp(zmap.u[0])))
    for _ in range(8):
        v = potential_of_z(params, zmap.z, zmap.w)
        lo, hi = zmap.r_range
        ok = True
        if dom.left_endpoint_kind == "finite-r":
            r_lo = 0.0 if dom.r_min == 0.0 else lo
        else:
            edge = _flat_edge(zmap.r, v, v_left, from_right=False)
            ok &= edge is not None and edge > lo + 1e-9
            r_lo = edge if edge is not None else lo
        if dom.right_endpoint_kind == "finite-r":
            r_hi = 0.0 if dom.r_max == 0.0 else hi
        else:
            edge = _flat_edge(zmap.r, v, v_right, from_right=True)
            ok &= edge is not None and edge < hi - 1e-9
            r_hi = edge if edge is not None else hi
        if ok:
            return zmap, r_lo, r_hi
        margin = margin**2
        if margin < 1e-280:
            break
        zmap = build_zmap(params, n_points=len(zmap.u), z_margin=margin)
    return zmap, r_lo, r_hi


def _extend(zmap: ZMap, params: NatanzonParams, r_lo: float, r_hi: float):
    """Make sure the map covers [r_lo, r_hi], shrinking the z-margin as needed."""
    margin = float(1 / (1 + np.exp(-zmap.u[0])))
    while True:
        lo, hi = zmap.r_range
        if lo <= r_lo and hi >= r_hi:
            return zmap
        margin = margin**2
        if margin < 1e-300:
            return zmap
        zmap = build_zmap(params, n_points=len(zmap.u), z_margin=margin)


def fd_eigensolve(params: NatanzonParams, zmap: ZMap | None, k: int, h: float = 0.005,
                  n_max: int = 400_000) -> FDResult:
    """k lowest bound-state energies from a finite-difference discretization.

    The domain is cut where V is flat to 1e-12 and then widened so that it
    spans at least 40 decay lengths of the shallowest bound level found.
    Only eigenvalues below the continuum threshold are returned;
    ``complete`` is False when fewer than k exist.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    p = params.as_float()
    if zmap is None:
        zmap = build_zmap(p)
    v_left, v_right = potential_limits(p)
    dom = domain_of(p)
    thresholds = []
    if dom.left_endpoint_kind != "finite-r":
        thresholds.append(v_left)
    if dom.right_endpoint_kind != "finite-r":
        thresholds.append(v_right)
    threshold = min(thresholds) if thresholds else math.inf

    zmap, r_lo, r_hi = _truncation(p, zmap)

    def solve(zm, lo, hi):
        n = int(min(n_max, max(200, math.ceil((hi - lo) / h))))

        def V(r):
            z, w = zm.zw_of_r(r)
            return potential_of_z(p, z, w)

        return fd_richardson(V, lo, hi, n, k), n

    ev, n = solve(zmap, r_lo, r_hi)
    bound = ev[ev < threshold]
    if bound.size and math.isfinite(threshold):
        # widen for the shallowest level; the well center is the minimum of V
        v_nodes = potential_of_z(p, zmap.z, zmap.w)
        r_c = float(zmap.r[np.argmin(np.where(np.isfinite(v_nodes), v_nodes, np.inf))])
        new_lo, new_hi = r_lo, r_hi
        if dom.left_endpoint_kind != "finite-r":
            kappa = math.sqrt(max(v_left - bound.max(), 1e-30))
            new_lo = min(r_lo, r_c - DECAY_LENGTHS / kappa)
        if dom.right_endpoint_kind != "finite-r":
            kappa = math.sqrt(max(v_right - bound.max(), 1e-30))
            new_hi = max(r_hi, r_c + DECAY_LENGTHS / kappa)
        if (new_lo, new_hi) != (r_lo, r_hi):
            zmap = _extend(zmap, p, new_lo, new_hi)
            lo_m, hi_m = zmap.r_range
            r_lo, r_hi = max(new_lo, lo_m), min(new_hi, hi_m)
            ev, n = solve(zmap, r_lo, r_hi)
            bound = ev[ev < threshold]
    return FDResult(bound, len(bound) >= k, (r_lo, r_hi), n, threshold, zmap)


def fd_eigensolve_potential(V, r_lo: float, r_hi: float, k: int, threshold: float = math.inf,
                            h: float = 0.005, n_max: int = 400_000) -> FDResult:
    """Same discretization for an arbitrary callable potential on a fixed interval."""
    n = int(min(n_max, max(200, math.ceil((r_hi - r_lo) / h))))
    ev = fd_richardson(V, r_lo, r_hi, n, k)
    bound = ev[ev < threshold]
    return FDResult(bound, len(bound) >= k, (r_lo, r_hi), n, threshold)


# --------------------------------------------------------------------------
# residuals


def _interior_grid(state, trim: float = 0.0):
    zm = state.zmap
    n = len(zm.u)
    cut = int(trim * n)
    u = zm.u[cut: n - cut] if cut else zm.u
    r = zm.r_of_u(u)
    return r, np.exp(-np.logaddexp(0.0, -u)), np.exp(-np.logaddexp(0.0, u))


def _report(check: str, r, res, phi, grid: str) -> ResidualReport:
    num = np.trapezoid(res * res, r)
    den = np.trapezoid(phi * phi, r)
    l2 = math.sqrt(num / den) if den > 0 else math.inf
    mx = float(np.max(np.abs(res)) / np.max(np.abs(phi)))
    return ResidualReport(check, l2, mx, grid)


def schrodinger_residual(params: NatanzonParams, zmap: ZMap, state, energy: float | None = None) -> ResidualReport:
    """Relative residual of -Phi'' + (V - E) Phi on the map nodes."""
    E = state.level.E if energy is None else energy
    r, z, w = _interior_grid(state)
    phi, _, d2 = state.derivs_zw(z, w)
    V = potential_of_z(params, z, w)
    res = -d2 + (V - E) * phi
    return _report("schrodinger", r, res, phi, f"map nodes n={len(r)}")


def casimir_action(params: NatanzonParams, z, w, phi, d2phi, p: float, m: float):
    """Q applied to exp(i m phi) Phi, radial part, with d/dphi -> i m."""
    z1, z2, z3 = z_derivatives(params, z, w)
    w2 = w * w
    coef = (-m * m / (4 * z) + p * m * (1 + z) / (2 * z * w) + (1 - p * p) / (4 * z)
            + z * z3 / (2 * z1**3) - 3 * z * z2 * z2 / (4 * z1**4))
    return w2 * z / z1**2 * d2phi + w2 * coef * phi


def casimir_residual(params: NatanzonParams, zmap: ZMap, state, q: float | None = None) -> ResidualReport:
    """Relative residual of (Q - q) Phi using the level's own (p, q, m)."""
    lv = state.level
    q = lv.q if q is None else q
    r, z, w = _interior_grid(state)
    phi, _, d2 = state.derivs_zw(z, w)
    res = casimir_action(params, z, w, phi, d2, lv.p, lv.m) - q * phi
    return _report("casimir", r, res, phi, f"map nodes n={len(r)}")


def master_G(params: NatanzonParams, z, w=None):
    """G = 4 z / R, the factor matching the second-derivative terms."""
    w = 1.0 - np.asarray(z) if w is None else w
    return 4.0 * z / R_symmetric(params, z, w)


def master_G_from_map(params: NatanzonParams, z, w=None):
    """G = z'^2 / (z (z - 1)^2), the same factor before using the z-ODE."""
    w = 1.0 - np.asarray(z) if w is None else w
    z1, _, _ = z_derivatives(params, z, w)
    return z1 * z1 / (z * w * w)


def master_residual(params: NatanzonParams, zmap: ZMap, state, G=None) -> ResidualReport:
    """Relative residual of G (Q - q) Phi - (E - H) Phi.

    ``G`` may be replaced by a callable of (z, w) for negative controls.
    """
    lv = state.level
    r, z, w = _interior_grid(state)
    phi, _, d2 = state.derivs_zw(z, w)
    g = master_G(params, z, w) if G is None else G(z, w)
    V = potential_of_z(params, z, w)
    lhs = g * (casimir_action(params, z, w, phi, d2, lv.p, lv.m) - lv.q * phi)
    rhs = lv.E * phi + d2 - V * phi
    return _report("master", r, lhs - rhs, phi, f"map nodes n={len(r)}")


def master_operator_residual(params: NatanzonParams, level, G=None, n: int = 401) -> ResidualReport:
    """Same identity applied to the test function z^2 w^3 instead of an eigenstate.

    On an eigenstate both sides vanish separately, so a wrong ``G`` goes
    unnoticed there. Off-shell the identity still holds for the level's
    (E, p, m, q), and the factor ``G`` is exercised.
    """
    z = np.linspace(0.0, 1.0, n + 2)[1:-1]
    w = 1.0 - z
    z1, z2, _ = z_derivatives(params, z, w)
    f = z**2 * w**3
    fz = 2 * z * w**3 - 3 * z**2 * w**2
    fzz = 2 * w**3 - 12 * z * w**2 + 6 * z**2 * w
    d2 = fzz * z1 * z1 + fz * z2
    g = master_G(params, z, w) if G is None else G(z, w)
    lhs = g * (casimir_action(params, z, w, f, d2, level.p, level.m) - level.q * f)
    rhs = level.E * f + d2 - potential_of_z(params, z, w) * f
    res = lhs - rhs
    scale = np.max(np.abs(rhs))
    return ResidualReport("master-operator", float(np.sqrt(np.mean(res**2)) / np.sqrt(np.mean(rhs**2))),
                          float(np.max(np.abs(res)) / scale), f"uniform z nodes n={n}")


def ladder_casimir_residual(params: NatanzonParams, zmap: ZMap, state) -> ResidualReport:
    """Check q Phi = J0 (J0 + 1) Phi - J- J+ Phi with the radial ladder operators."""
    from .ladder import RadialLadderOp

    lv = state.level
    r, z, w = _interior_grid(state)
    phi, d1, d2 = state.derivs_zw(z, w)
    up = RadialLadderOp("up", lv.p, lv.m)
    g, dg = up.apply_zw(params, z, w, phi, d1, d2)
    down = RadialLadderOp("down", lv.p, lv.m + 1)
    jmjp = down.apply_zw(params, z, w, g, dg)
    res = lv.m * (lv.m + 1) * phi - jmjp - lv.q * phi
    return _report("ladder-casimir", r, res, phi, f"map nodes n={len(r)}")


def run_checks(params: NatanzonParams, zmap: ZMap | None = None, fd_tol: float = 1e-4) -> list[tuple[str, bool, str]]:
    """Pass/fail table for one parameter set: spectrum vs FD and all residuals."""
    from .spectrum import enumerate_levels
    from .wavefunction import build_state

    p = params.as_float()
    zmap = build_zmap(p) if zmap is None else zmap
    rows = []
    levels = enumerate_levels(p)
    rows.append(("levels found", bool(levels), f"{len(levels)}"))
    if not levels:
        return rows
    fd = fd_eigensolve(p, zmap, len(levels))
    ok = fd.complete and all(abs(a - b.E) <= fd_tol * max(1.0, abs(b.E)) for a, b in zip(fd.eigenvalues, levels))
    rows.append(("fd eigenvalues", ok, " ".join(f"{x:.8g}" for x in fd.eigenvalues)))
    for lv in levels:
        st = build_state(p, zmap, lv)
        for name, rep, tol in (
            ("schrodinger", schrodinger_residual(p, zmap, st), 1e-6),
            ("casimir", casimir_residual(p, zmap, st), 1e-5),
            ("master", master_residual(p, zmap, st), 1e-5),
            ("master operator", master_operator_residual(p, lv), 1e-5),
        ):
            rows.append((f"nu={lv.nu} {name}", rep.l2_relative < tol, f"{rep.l2_relative:.3e}"))
        rows.append((f"nu={lv.nu} nodes", st.node_count() == lv.nu, f"{st.node_count()}"))
    return rows
