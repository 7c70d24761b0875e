"""Coordinate map r <-> z solving z' = 2 z (1 - z) / sqrt(R(z)).

Internally the map is carried in the logit variable ``u = log(z / (1 - z))``.
In that variable the ODE becomes ``dr/du = sqrt(R) / 2``, which is smooth
and bounded, and both ``z = expit(u)`` and ``1 - z = expit(-u)`` stay
accurate all the way to the endpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicHermiteSpline
from scipy.special import expit, logit

from .params import NatanzonParams, PotentialDomain, R_symmetric, domain_of, require_admissible

PT2_TANH2 = "pt2-tanh2"
RM_SHIFTED_TANH = "rm-shifted-tanh"
NUMERIC = "numeric"

DEFAULT_N_POINTS = 4096
DEFAULT_Z_MARGIN = 1e-10


class MapRangeError(ValueError):
    pass


def _log_sinh(x):
    x = np.asarray(x, dtype=float)
    # log(sinh x) = x - log 2 + log1p(-exp(-2x)), fine for x > 0
    return x - math.log(2.0) + np.log1p(-np.exp(-2.0 * x))


def z_prime_of_z(params: NatanzonParams, z, w=None):
    """dz/dr = 2 z w / sqrt(R) as a function of z (w = 1 - z)."""
    if w is None:
        w = 1.0 - z
    return 2.0 * z * w / np.sqrt(R_symmetric(params, z, w))


@dataclass(frozen=True)
class ZMap:
    """Tabulated, invertible map between r and z.

    Attributes
    ----------
    r, z, zp : ndarray
        Node values of r, z and dz/dr; z increases strictly with r.
    u : ndarray
        The logit of z at the nodes.
    domain : PotentialDomain
    closed_form : str
        One of ``"pt2-tanh2"``, ``"rm-shifted-tanh"``, ``"numeric"``.
    """

    params: NatanzonParams
    u: np.ndarray
    r: np.ndarray
    domain: PotentialDomain
    closed_form: str
    scale: float = 1.0
    _r_of_u: CubicHermiteSpline | None = field(default=None, repr=False, compare=False)
    _u_of_r: CubicHermiteSpline | None = field(default=None, repr=False, compare=False)

    @property
    def z(self) -> np.ndarray:
        return expit(self.u)

    @property
    def w(self) -> np.ndarray:
        return expit(-self.u)

    @property
    def zp(self) -> np.ndarray:
        return z_prime_of_z(self.params, self.z, self.w)

    @property
    def r_range(self) -> tuple[float, float]:
        return float(self.r[0]), float(self.r[-1])

    @property
    def z_range(self) -> tuple[float, float]:
        return float(expit(self.u[0])), float(expit(self.u[-1]))

    def _check_r(self, r):
        r = np.asarray(r, dtype=float)
        lo, hi = self.r_range
        slack = 1e-12 * max(1.0, abs(lo), abs(hi))
        if np.any(r < lo - slack) or np.any(r > hi + slack):
            raise MapRangeError(f"r outside map range [{lo:.6g}, {hi:.6g}]")
        return np.clip(r, lo, hi)

    def u_of_r(self, r):
        r = self._check_r(r)
        x = r / self.scale
        if self.closed_form == PT2_TANH2:
            with np.errstate(divide="ignore"):
                return 2.0 * _log_sinh(x)
        if self.closed_form == RM_SHIFTED_TANH:
            return 2.0 * x
        u = self._u_of_r(r)
        # Newton polish against the forward spline, dr/du = sqrt(R)/2
        for _ in range(3):
            z, w = expit(u), expit(-u)
            u = u - (self._r_of_u(u) - r) / (0.5 * np.sqrt(R_symmetric(self.params, z, w)))
        return u

    def r_of_u(self, u):
        u = np.asarray(u, dtype=float)
        if self.closed_form == PT2_TANH2:
            return self.scale * np.arcsinh(np.exp(0.5 * u))
        if self.closed_form == RM_SHIFTED_TANH:
            return self.scale * 0.5 * u
        if np.any(u < self.u[0] - 1e-12) or np.any(u > self.u[-1] + 1e-12):
            raise MapRangeError("z outside map range")
        return self._r_of_u(u)

    def z_of_r(self, r):
        return expit(self.u_of_r(r))

    def zw_of_r(self, r):
        """Return ``(z, 1 - z)`` at r, each computed without cancellation."""
        u = self.u_of_r(r)
        return expit(u), expit(-u)

    def r_of_z(self, z):
        z = np.asarray(z, dtype=float)
        zlo, zhi = self.z_range
        if np.any(z < zlo * (1 - 1e-12)) or np.any(z > zhi + 1e-15):
            raise MapRangeError(f"z outside map range [{zlo:.3g}, 1 - {1 - zhi:.3g}]")
        with np.errstate(divide="ignore"):
            return self.r_of_u(logit(z))

    def zp_of_r(self, r):
        z, w = self.zw_of_r(r)
        return z_prime_of_z(self.params, z, w)

    def ode_residual(self) -> np.ndarray:
        """|z'_i - 2 z_i (1 - z_i)/sqrt(R(z_i))| with z'_i from the stored map.

        For tabulated maps z'_i is taken from the derivative of the r(u)
        spline, i.e. from the integrator output, not from the ODE itself.
        """
        z, w = self.z, self.w
        if self.closed_form == PT2_TANH2:
            x = self.r / self.scale
            t = np.tanh(x)
            zp_map = 2.0 * t / np.cosh(x) ** 2 / self.scale
        elif self.closed_form == RM_SHIFTED_TANH:
            x = self.r / self.scale
            zp_map = 0.5 / np.cosh(x) ** 2 / self.scale
        else:
            drdu = self._r_of_u.derivative()(self.u)
            zp_map = z * w / drdu
        return np.abs(zp_map - z_prime_of_z(self.params, z, w))

    def csv_rows(self):
        yield ("r", "z", "zp")
        for r, z, zp in zip(self.r, self.z, self.zp):
            yield (repr(float(r)), repr(float(z)), repr(float(zp)))


def _closed_form_kind(params: NatanzonParams):
    a, c0, c1 = float(params.a), float(params.c0), float(params.c1)
    if a == 0 and c0 == 0 and c1 > 0:
        return PT2_TANH2, math.sqrt(c1)
    if a == 0 and c0 == c1 and c0 > 0:
        return RM_SHIFTED_TANH, math.sqrt(c0)
    return NUMERIC, 1.0


def _tail(params: NatanzonParams, at_left: bool, u_edge: float) -> float:
    """Length in r between a finite endpoint and the grid edge.

    Near z = 0 with c0 = 0, R ~ tau z and dr/du = sqrt(tau z)/2, integrating
    to sqrt(tau z); the right end is symmetric with R ~ -(2a + tau)(1 - z).
    """
    if at_left:
        slope = float(params.tau)
        s = expit(u_edge)
    else:
        slope = -(2.0 * float(params.a) + float(params.tau))
        s = expit(-u_edge)
    if slope <= 0:
        # R has a double zero at the endpoint (R ~ a s^2); dr/du ~ sqrt(a) s / 2
        return 0.5 * math.sqrt(float(params.a)) * s
    return math.sqrt(slope * s)


def build_zmap(
    params: NatanzonParams,
    n_points: int = DEFAULT_N_POINTS,
    z_margin: float = DEFAULT_Z_MARGIN,
    force_numeric: bool = False,
    rtol: float = 1e-12,
) -> ZMap:
    """Build the coordinate map for ``params`` covering z in [eps, 1 - eps].

    Presets of tanh^2 type (a = c0 = 0) and shifted-tanh type (a = 0,
    c0 = c1) use their closed forms unless ``force_numeric`` is set; all
    other sets integrate dr/du = sqrt(R)/2 with RK45.

    The r-origin is fixed by z(0) = 0 when c0 = 0, z(0) = 1 when only c1 = 0,
    and z(0) = 1/2 when both ends are at infinite r.
    """
    params = params.as_float()
    require_admissible(params)
    if n_points < 100:
        raise ValueError("n_points must be at least 100")
    if not 0 < z_margin < 0.5:
        raise ValueError("z_margin must lie in (0, 1/2)")
    dom = domain_of(params)
    u_lo = float(logit(z_margin))
    u = np.linspace(u_lo, -u_lo, n_points)
    kind, scale = _closed_form_kind(params)
    if force_numeric:
        kind, scale = NUMERIC, 1.0

    if kind != NUMERIC:
        r = ZMap(params, u, np.empty(0), dom, kind, scale).r_of_u(u)
        return ZMap(params, u, r, dom, kind, scale)

    def drdu(uu):
        z, w = expit(uu), expit(-uu)
        return 0.5 * np.sqrt(R_symmetric(params, z, w))

    # integrate outward from u = 0 (z = 1/2) in both directions
    pos = u >= 0.0
    pieces = []
    for span in (u[pos], u[~pos][::-1]):
        t_eval = np.concatenate([[0.0], span])
        sol = solve_ivp(
            lambda t, y: [drdu(t)],
            (0.0, float(span[-1])),
            [0.0],
            method="RK45",
            t_eval=t_eval,
            rtol=rtol,
            atol=1e-14,
        )
        if not sol.success:
            raise RuntimeError(f"z-map integration failed: {sol.message}")
        pieces.append(sol.y[0][1:])
    r = np.concatenate([pieces[1][::-1], pieces[0]])

    if dom.left_endpoint_kind == "finite-r":
        r = r - r[0] + _tail(params, True, u[0])
        r_min, r_max = 0.0, math.inf
        if dom.right_endpoint_kind == "finite-r":
            r_max = float(r[-1] + _tail(params, False, u[-1]))
    elif dom.right_endpoint_kind == "finite-r":
        r = r - r[-1] - _tail(params, False, u[-1])
        r_min, r_max = -math.inf, 0.0
    else:
        r_min, r_max = -math.inf, math.inf

    slopes = drdu(u)
    fwd = CubicHermiteSpline(u, r, slopes)
    inv = CubicHermiteSpline(r, u, 1.0 / slopes)
    return ZMap(params, u, r, PotentialDomain(dom.left_endpoint_kind, dom.right_endpoint_kind, r_min, r_max), NUMERIC, 1.0, fwd, inv)


def z_of_r(zmap: ZMap, r):
    return zmap.z_of_r(r)


def r_of_z(zmap: ZMap, z):
    return zmap.r_of_z(z)


def z_derivatives(params: NatanzonParams, z, w=None):
    """Return (z', z'', z''') with respect to r, as functions of z.

    Obtained by differentiating z' = Z(z) = 2 z w / sqrt(R) along the flow:
    z'' = Z_z Z and z''' = (Z_zz Z + Z_z^2) Z.
    """
    p = params.as_float()
    z = np.asarray(z, dtype=float)
    w = 1.0 - z if w is None else np.asarray(w, dtype=float)
    R = R_symmetric(p, z, w)
    Rp = 2.0 * p.a * z + p.tau
    sR = np.sqrt(R)
    zw = z * w
    Z = 2.0 * zw / sR
    Zz = 2.0 * (w - z) / sR - zw * Rp / (R * sR)
    Zzz = -4.0 / sR - 2.0 * (w - z) * Rp / (R * sR) - 2.0 * p.a * zw / (R * sR) + 1.5 * zw * Rp**2 / (R * R * sR)
    return Z, Zz * Z, (Zzz * Z + Zz * Zz) * Z
