"""The hypergeometric Natanzon potential as a function of z (or r via a map)."""

from __future__ import annotations

import math

import numpy as np
from scipy.special import expit

from .params import NatanzonParams, R_symmetric


def potential_of_z(params: NatanzonParams, z, w=None):
    """V_N at z, optionally with an accurately known ``w = 1 - z``.

    Written as

        [(h0+1) w + (h1+1) z - f z w] / R
        + [a z^2 w^2 - (a + (c1-c0)(z-w)) z w] / R^2
        - 5 Delta z^2 w^2 / (4 R^3)

    which expands to the usual two-bracket form but has no 1/(z(z-1))
    factor to cancel at the endpoints.
    """
    p = params.as_float()
    z = np.asarray(z, dtype=float)
    w = 1.0 - z if w is None else np.asarray(w, dtype=float)
    R = R_symmetric(p, z, w)
    zw = z * w
    first = ((p.h0 + 1) * w + (p.h1 + 1) * z - p.f * zw) / R
    second = (p.a * zw * zw - (p.a + (p.c1 - p.c0) * (z - w)) * zw) / R**2
    third = -1.25 * p.Delta * zw * zw / R**3
    return first + second + third


def potential_limits(params: NatanzonParams) -> tuple[float, float]:
    """Limits of V at z -> 0 and z -> 1.

    At an infinite-r end these are the continuum thresholds (h0+1)/c0 and
    (h1+1)/c1; at a finite-r end V diverges and ``inf`` or ``-inf`` is
    returned according to the sign of the leading coefficient.
    """
    p = params.as_float()
    out = []
    for c, h, zsmall in ((p.c0, p.h0, True), (p.c1, p.h1, False)):
        if c > 0:
            out.append((h + 1) / c)
        else:
            z = 1e-12 if zsmall else 1 - 1e-12
            w = 1e-12 if not zsmall else 1 - 1e-12
            v = float(potential_of_z(p, z, w))
            out.append(math.copysign(math.inf, v))
    return out[0], out[1]


def potential_min(params: NatanzonParams, n: int = 20001, u_span: float = 40.0) -> float:
    """Minimum of V sampled on a logit-uniform z grid."""
    u = np.linspace(-u_span, u_span, n)
    v = potential_of_z(params, expit(u), expit(-u))
    return float(np.min(v[np.isfinite(v)]))


def potential_value(params: NatanzonParams, zmap, r):
    """V_N(r) with z = z(r) from ``zmap``."""
    z, w = zmap.zw_of_r(r)
    return potential_of_z(params, z, w)
