"""Bound-state radial functions built on terminating Gauss series.

A level (nu, alpha, beta, delta) gives

    Phi(r) = K z^(beta/2) (1 - z)^(delta/2) R^(1/4) 2F1(-nu, alpha - nu; 1 + beta; z)

with z = z(r).  The series has degree nu and is stored as explicit
coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.integrate import quad
from scipy.special import expit

from .params import NatanzonParams, R_symmetric
from .spectrum import Level
from .zmap import ZMap, z_derivatives


class NormalizationError(RuntimeError):
    pass


def _is_nonpositive_int(x: float) -> bool:
    return float(x) <= 0 and float(x) == math.floor(float(x))


def series_coefficients(a: float, b: float, c: float, n_max: int | None = None) -> np.ndarray:
    """Coefficients of 2F1(a, b; c; z) truncated where the series terminates.

    ``a`` (or ``b``) must be a nonpositive integer unless ``n_max`` bounds
    the number of terms.  Coefficients follow
    t_{k+1} = t_k (a + k)(b + k) / ((c + k)(k + 1)), t_0 = 1.
    """
    if n_max is None:
        degs = [int(-x) for x in (a, b) if _is_nonpositive_int(x)]
        if not degs:
            raise ValueError("series does not terminate: neither a nor b is a nonpositive integer")
        n_max = min(degs)
    out = np.empty(n_max + 1)
    t = 1.0
    out[0] = t
    for k in range(n_max):
        den = (c + k) * (k + 1)
        if den == 0:
            raise ValueError(f"c = {c} hits a pole of the series")
        t = t * (a + k) * (b + k) / den
        out[k + 1] = t
    return out


@dataclass(frozen=True)
class TerminatingHyp:
    """2F1(-nu, b; c; z) as a degree-nu polynomial in z."""

    nu: int
    b: float
    c: float
    coeffs: np.ndarray = field(repr=False, compare=False)

    @property
    def a(self) -> int:
        return -self.nu

    @classmethod
    def make(cls, nu: int, b: float, c: float) -> "TerminatingHyp":
        if nu < 0:
            raise ValueError("nu must be >= 0")
        if _is_nonpositive_int(c) and -c < nu:
            raise ValueError(f"c = {c} is a nonpositive integer inside the series")
        return cls(nu, float(b), float(c), series_coefficients(-nu, b, c, n_max=nu))

    @classmethod
    def for_level(cls, level: Level) -> "TerminatingHyp":
        return cls.make(level.nu, level.alpha - level.nu, 1.0 + level.beta)

    def __call__(self, z, deriv: int = 0):
        return hyp_eval(self, z, deriv)


def hyp_eval(h: TerminatingHyp, z, deriv: int = 0):
    """Horner evaluation of the polynomial (or its ``deriv``-th z-derivative)."""
    c = np.polynomial.polynomial.polyder(h.coeffs, deriv) if deriv else h.coeffs
    z = np.asarray(z, dtype=float)
    acc = np.zeros_like(z) + (c[-1] if len(c) else 0.0)
    for coef in c[-2::-1]:
        acc = acc * z + coef
    return acc


def hyp2f1_terminating(a: float, b: float, c: float, z):
    """Terminating 2F1 by direct summation; ``a`` or ``b`` a nonpositive integer."""
    coeffs = series_coefficients(a, b, c)
    return np.polynomial.polynomial.polyval(np.asarray(z, dtype=float), coeffs)


def _exact_series(a, b, c, z: Fraction, n: int, lowered: bool = False) -> Fraction:
    """Terminating series summed in rational arithmetic.

    With ``lowered=True`` returns (c - 1) 2F1(a - 1, b; c - 1; z), continued
    through c = 1 via (c - 1)/(c - 1)_k = 1/(c)_{k-1}.
    """
    total = Fraction(0)
    t = Fraction(1)
    if lowered:
        total = c - 1
        for k in range(1, n + 1):
            t = t * (a - 1 + k - 1) * (b + k - 1) / (k * (c + k - 2) if k > 1 else 1)
            total += t * z**k
        return total
    zk = Fraction(1)
    for k in range(n + 1):
        total += t * zk
        t = t * (a + k) * (b + k) / ((c + k) * (k + 1))
        zk *= z
    return total


def contiguous_terms(a: float, b: float, c: float, z: float):
    """The five functions entering the two contiguous relations, as floats.

    The series are summed exactly from the binary values of the inputs and
    rounded once, so cancellation inside a polynomial cannot leak into the
    relation residuals.
    """
    A, B, C, Z = (Fraction(float(x)) for x in (a, b, c, z))
    n = int(round(-a))
    F0 = _exact_series(A, B, C, Z, n)
    Fup = _exact_series(A + 1, B + 1, C + 1, Z, n - 1) if n >= 1 else Fraction(1)
    Fdn = _exact_series(A, B, C, Z, n + 1, lowered=True)
    Fb = _exact_series(A, B + 1, C, Z, n)
    return float(F0), float(Fup), float(Fdn), float(Fb)


def contiguous_residuals(a: float, b: float, c: float, z, as_printed: bool = False):
    """Residuals of the two contiguous relations used for the ladder action.

        z b (z-1) a F(a+1,b+1;c+1) + c(c-1) F(a-1,b;c-1) + c(zb-c+1) F(a,b;c) = 0
        (c-1) F(a-1,b;c-1) + (b-c+1) F(a,b;c) + b(z-1) F(a,b+1;c) = 0

    Both are returned with denominators cleared and divided by the sum of
    the absolute values of their terms, so they are dimensionless and
    finite at z = 0 and at c = 1.  ``a`` must be a negative integer (a = 0
    makes the first relation vacuous).

    With ``as_printed=True`` the plus signs in front of the last term of
    each relation are flipped to minus; those variants do not hold and are
    kept only as a diagnostic.
    """
    if not (_is_nonpositive_int(a) and a < 0):
        raise ValueError("a must be a negative integer")
    if b == 0:
        raise ValueError("b = 0 makes the first relation vacuous")
    if _is_nonpositive_int(c) or _is_nonpositive_int(c + 1):
        raise ValueError("c makes F(a,b;c) or F(a+1,b+1;c+1) undefined")
    s = -1.0 if as_printed else 1.0

    def one(zz):
        F0, Fup, Fdn, Fb = contiguous_terms(a, b, c, zz)
        t14 = (zz * b * (zz - 1) * a * Fup, c * Fdn, s * c * (zz * b - c + 1) * F0)
        t15 = (Fdn, s * (b - c + 1) * F0, b * (zz - 1) * Fb)
        out = []
        for terms in (t14, t15):
            scale = sum(abs(t) for t in terms)
            out.append(math.fsum(terms) / scale if scale > 0 else 0.0)
        return out

    z = np.asarray(z, dtype=float)
    if z.ndim == 0:
        res_a, res_b = one(float(z))
        return res_a, res_b
    pairs = np.array([one(float(x)) for x in z.ravel()])
    return pairs[:, 0].reshape(z.shape), pairs[:, 1].reshape(z.shape)


@dataclass(frozen=True)
class BoundState:
    """Closed-form bound state attached to a coordinate map.

    ``K`` is the positive normalization constant; :meth:`phi` and friends
    accept ``normalized=False`` to drop it (K = 1), which is the convention
    in which the ladder coefficients come out exactly.
    """

    params: NatanzonParams
    zmap: ZMap
    level: Level
    hyp: TerminatingHyp
    K: float

    @property
    def exponents(self) -> tuple[float, float, float]:
        return self.level.beta / 2, self.level.delta / 2, 0.25

    def _scale(self, normalized: bool) -> float:
        return self.K if normalized else 1.0

    def _prefactor(self, z, w):
        beta, delta = self.level.beta, self.level.delta
        R = R_symmetric(self.params, z, w)
        return np.power(z, 0.5 * beta) * np.power(w, 0.5 * delta) * np.power(R, 0.25)

    def _parts_zw(self, z, w):
        """Prefactor e^S and its r-log-derivatives s1 = S', s2 = S''."""
        p = self.params
        beta, delta = self.level.beta, self.level.delta
        pre = self._prefactor(z, w)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            R = R_symmetric(p, z, w)
            sq = np.sqrt(R)
            Rp = 2.0 * p.a * z + p.tau
            z1, z2, _ = z_derivatives(p, z, w)
            # ratios z'/z, z'/w and the log-derivative of z' avoid z^2 underflow
            rz, rw = 2 * w / sq, 2 * z / sq
            Zz = 2 * (w - z) / sq - z * w * Rp / (R * sq)
            g = Rp / (4 * R)
            s1 = 0.5 * beta * rz - 0.5 * delta * rw + z1 * g
            s2 = (-0.5 * beta * rz * rz - 0.5 * delta * rw * rw
                  + z1 * z1 * (2 * p.a / (4 * R) - Rp * Rp / (4 * R * R))
                  + Zz * (0.5 * beta * rz - 0.5 * delta * rw) + z2 * g)
        return pre, s1, s2, z1, z2

    def derivs_zw(self, z, w, normalized: bool = True):
        """(Phi, dPhi/dr, d2Phi/dr2) at given (z, 1 - z)."""
        z = np.asarray(z, dtype=float)
        w = np.asarray(w, dtype=float)
        pre, s1, s2, z1, z2 = self._parts_zw(z, w)
        P, P1, P2 = self.hyp(z), self.hyp(z, 1), self.hyp(z, 2)
        k = self._scale(normalized)
        phi = k * pre * P
        d1 = k * pre * (s1 * P + z1 * P1)
        d2 = k * pre * ((s2 + s1 * s1) * P + 2 * s1 * z1 * P1 + z1 * z1 * P2 + z2 * P1)
        return phi, d1, d2

    def log_derivs_zw(self, z, w):
        """(Phi'/Phi, Phi''/Phi) without forming Phi, so no underflow far out."""
        z = np.asarray(z, dtype=float)
        w = np.asarray(w, dtype=float)
        _, s1, s2, z1, z2 = self._parts_zw(z, w)
        P = self.hyp(z)
        g1, g2 = self.hyp(z, 1) / P, self.hyp(z, 2) / P
        L1 = s1 + z1 * g1
        L2 = s2 + s1 * s1 + 2 * s1 * z1 * g1 + z1 * z1 * g2 + z2 * g1
        return L1, L2

    def derivs(self, r, normalized: bool = True):
        z, w = self.zmap.zw_of_r(r)
        return self.derivs_zw(z, w, normalized)

    def phi(self, r, normalized: bool = True):
        z, w = self.zmap.zw_of_r(r)
        return self._scale(normalized) * self._prefactor(z, w) * self.hyp(z)

    __call__ = phi

    def dphi(self, r, normalized: bool = True):
        return self.derivs(r, normalized)[1]

    def d2phi(self, r, normalized: bool = True):
        return self.derivs(r, normalized)[2]

    def phi_of_u(self, u, normalized: bool = True):
        """Phi as a function of the logit variable u = log(z/(1-z))."""
        u = np.asarray(u, dtype=float)
        z, w = expit(u), expit(-u)
        return self._scale(normalized) * self._prefactor(z, w) * self.hyp(z)

    def norm_integral(self, normalized: bool = True) -> float:
        return _density_integral(self, self, normalized)

    def node_count(self, n: int = 4000) -> int:
        """Sign changes of Phi on the interior of the map."""
        u = np.linspace(self.zmap.u[0], self.zmap.u[-1], n)
        v = self.phi_of_u(u, normalized=False)
        v = v[np.abs(v) > 1e-300]
        return int(np.count_nonzero(np.signbit(v[1:]) != np.signbit(v[:-1])))


def _density_integral(s1: BoundState, s2: BoundState, normalized: bool = True) -> float:
    """Integral of Phi_1 Phi_2 dr, computed over u with dr = sqrt(R)/2 du."""
    p = s1.params

    def integrand(u):
        z, w = expit(u), expit(-u)
        jac = 0.5 * math.sqrt(float(R_symmetric(p, z, w)))
        return float(s1.phi_of_u(u, normalized) * s2.phi_of_u(u, normalized)) * jac

    total = 0.0
    for lo, hi in ((-np.inf, 0.0), (0.0, np.inf)):
        val, err = quad(integrand, lo, hi, epsabs=0.0, epsrel=1e-13, limit=400)
        if not math.isfinite(val):
            raise NormalizationError("normalization integral diverged")
        total += val
    return total


def overlap(s1: BoundState, s2: BoundState) -> float:
    """<Phi_1, Phi_2> for two normalized states of potentials sharing a z-map."""
    if s1.params.as_tuple()[:3] != s2.params.as_tuple()[:3]:
        raise ValueError("states live on different coordinate maps")
    return _density_integral(s1, s2, True)


def build_state(params: NatanzonParams, zmap: ZMap, level: Level) -> BoundState:
    """Normalized bound state for a solved level (K > 0)."""
    params = params.as_float()
    hyp = TerminatingHyp.for_level(level)
    raw = BoundState(params, zmap, level, hyp, 1.0)
    n2 = raw.norm_integral(normalized=False)
    if not (math.isfinite(n2) and n2 > 0):
        raise NormalizationError(f"bad norm {n2!r} for nu={level.nu}")
    return BoundState(params, zmap, level, hyp, 1.0 / math.sqrt(n2))


def raw_state(params: NatanzonParams, zmap: ZMap, level: Level) -> BoundState:
    """State with K = 1, the convention of the ladder coefficients."""
    return BoundState(params.as_float(), zmap, level, TerminatingHyp.for_level(level), 1.0)


def state_derivative(state: BoundState, r):
    """dPhi/dr by the chain rule through z(r)."""
    return state.dphi(r)
