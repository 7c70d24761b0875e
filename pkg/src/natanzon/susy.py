"""Supersymmetric partner of a Natanzon potential and comparison with satellites.

With ground state Phi0 at energy E0 the superpotential is W = -Phi0'/Phi0
and

    V      = W^2 - W' + E0
    V_part = W^2 + W' + E0

The partner shares every level of V except E0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .params import NatanzonParams
from .potential import potential_of_z
from .spectrum import NoBoundState, solve_level
from .zmap import ZMap

EDGE_DROP = 0.05
DISTINCT_REL = 1e-3


@dataclass(frozen=True)
class PartnerPotential:
    r: np.ndarray = field(repr=False)
    W: np.ndarray = field(repr=False)
    dW: np.ndarray = field(repr=False)
    V: np.ndarray = field(repr=False)
    V_partner: np.ndarray = field(repr=False)
    E0: float = 0.0
    reconstruction_error: float = math.nan

    def __call__(self, r):
        """Partner potential at arbitrary r by interpolation on the grid."""
        return np.interp(r, self.r, self.V_partner)


def superpotential(phi, dphi, d2phi):
    """W and W' from a nodeless Phi0 and its first two derivatives.

    A constant Phi0 gives W = W' = 0.
    """
    phi = np.asarray(phi, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        L = np.where(phi != 0, np.asarray(dphi) / phi, 0.0)
        W = -L
        dW = -np.where(phi != 0, np.asarray(d2phi) / phi, 0.0) + L * L
    return W, dW


def superpotential_from_logs(L1, L2):
    """W and W' from Phi0'/Phi0 and Phi0''/Phi0."""
    return -L1, -L2 + L1 * L1


def partner_from_arrays(phi, dphi, d2phi, E0: float):
    """(V reconstructed, V partner) from ground-state samples."""
    W, dW = superpotential(phi, dphi, d2phi)
    return W * W - dW + E0, W * W + dW + E0


def _grid(zmap: ZMap, drop: float = 0.0):
    n = len(zmap.u)
    cut = int(drop * n)
    u = zmap.u[cut: n - cut] if cut else zmap.u
    z = np.exp(-np.logaddexp(0.0, -u))
    w = np.exp(-np.logaddexp(0.0, u))
    return zmap.r_of_u(u), z, w


def susy_partner(params: NatanzonParams, zmap: ZMap, ground, drop: float = 0.0) -> PartnerPotential:
    """Partner potential on the map nodes.

    ``ground`` is the nu = 0 bound state.  ``reconstruction_error`` is the
    largest |W^2 - W' + E0 - V| / (1 + |V|) over the interior 90 % of nodes.
    """
    if ground.level.nu != 0:
        raise ValueError("the partner needs the ground state (nu = 0)")
    p = params.as_float()
    r, z, w = _grid(zmap, drop)
    W, dW = superpotential_from_logs(*ground.log_derivs_zw(z, w))
    V = potential_of_z(p, z, w)
    E0 = ground.level.E
    V_rec = W * W - dW + E0
    V_part = W * W + dW + E0
    n = len(r)
    k = int(EDGE_DROP * n)
    sl = slice(k, n - k)
    err = float(np.max(np.abs(V_rec[sl] - V[sl]) / (1.0 + np.abs(V[sl]))))
    return PartnerPotential(r, W, dW, V, V_part, E0, err)


def partner_callable(params: NatanzonParams, zmap: ZMap, ground):
    """Partner potential as an exact function of r (no interpolation)."""
    E0 = ground.level.E

    def V_part(r):
        z, w = zmap.zw_of_r(r)
        W, dW = superpotential_from_logs(*ground.log_derivs_zw(z, w))
        return W * W + dW + E0

    return V_part


@dataclass(frozen=True)
class Comparison:
    sup_norm_diff: float
    sup_norm_ref: float
    verdict: str
    shift_a: float
    shift_b: float
    n_nodes: int

    def to_dict(self) -> dict:
        return {
            "sup_norm_diff": self.sup_norm_diff,
            "sup_norm_ref": self.sup_norm_ref,
            "verdict": self.verdict,
            "ground_a": self.shift_a,
            "ground_b": self.shift_b,
            "n_nodes": self.n_nodes,
        }


def compare_potentials(V_a, E_a: float, V_b, E_b: float) -> Comparison:
    """Compare two sampled potentials after moving each ground level to 0.

    The verdict is "distinct" iff sup|dV| > 1e-3 (1 + sup|V_a|), otherwise
    "equivalent".
    """
    Va = np.asarray(V_a, dtype=float) - E_a
    Vb = np.asarray(V_b, dtype=float) - E_b
    ok = np.isfinite(Va) & np.isfinite(Vb)
    diff = float(np.max(np.abs(Va[ok] - Vb[ok])))
    ref = float(np.max(np.abs(Va[ok])))
    verdict = "distinct" if diff > DISTINCT_REL * (1.0 + ref) else "equivalent"
    return Comparison(diff, ref, verdict, E_a, E_b, int(ok.sum()))


def compare_satellite_vs_susy(params: NatanzonParams, zmap: ZMap, step, ground=None) -> Comparison:
    """Satellite potential of ``step`` against the SUSY partner of ``params``.

    Both potentials share the coordinate map.  The satellite is shifted by
    its own ground energy; the partner by its ground energy, which is the
    source's nu = 1 level (or E0 when the source has a single level and the
    partner has none).  The outer 5 % of map nodes on each side are dropped.
    """
    from .wavefunction import build_state

    p = params.as_float()
    if ground is None:
        ground = build_state(p, zmap, solve_level(p, 0))
    r, z, w = _grid(zmap, EDGE_DROP)
    W, dW = superpotential_from_logs(*ground.log_derivs_zw(z, w))
    V_part = W * W + dW + ground.level.E
    try:
        part_ground = solve_level(p, 1).E
    except NoBoundState:
        part_ground = ground.level.E
    sat = step.result.as_float()
    V_sat = potential_of_z(sat, z, w)
    sat_ground = solve_level(sat, 0).E
    return compare_potentials(V_sat, sat_ground, V_part, part_ground)


def partner_fd_levels(params: NatanzonParams, zmap: ZMap, ground, k: int):
    """Lowest k finite-difference levels of the partner potential.

    Uses the same truncated interval as the source's own FD solve.
    """
    from .verify import fd_eigensolve, fd_eigensolve_potential

    fd = fd_eigensolve(params, zmap, k + 1)
    V_part = partner_callable(params, fd.zmap, ground)
    return fd_eigensolve_potential(V_part, *fd.r_span, k, threshold=fd.threshold)
