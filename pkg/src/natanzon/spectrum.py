"""Discrete spectrum from the group-parameter relations.

For each counter nu the energy solves

    alpha(E) - beta(E) - delta(E) = 2 nu + 1,

with alpha^2 = -a E + f + 1, beta^2 = -c0 E + h0 + 1, delta^2 = -c1 E + h1 + 1
and all three roots taken nonnegative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .params import NatanzonParams, require_admissible
from .potential import potential_min, potential_value

__all__ = [
    "Level", "NoBoundState", "LEVEL_COLUMNS", "abd_of_energy", "enumerate_levels", "irrep_alignment_check",
    "potential_value", "quantization_function", "solve_level", "spectrum_table",
]

N_SCAN = 10_000


class NoBoundState(ValueError):
    """No normalizable solution of the quantization condition for this nu."""


@dataclass(frozen=True)
class Level:
    """One bound state: counter, energy and group parameters."""

    nu: int
    E: float
    alpha: float
    beta: float
    delta: float
    p: float
    q: float
    m: float

    @classmethod
    def from_abd(cls, nu: int, E: float, alpha: float, beta: float, delta: float) -> "Level":
        return cls(
            nu=nu,
            E=E,
            alpha=alpha,
            beta=beta,
            delta=delta,
            p=(alpha + beta) / 2,
            q=(delta * delta - 1) / 4,
            m=(alpha - beta) / 2,
        )

    def as_row(self) -> tuple:
        return (self.nu, self.E, self.alpha, self.beta, self.delta, self.p, self.q, self.m)

    def quantization_residual(self) -> float:
        return self.alpha - self.beta - self.delta - (2 * self.nu + 1)


LEVEL_COLUMNS = ("nu", "E", "alpha", "beta", "delta", "p", "q", "m")


def radicands(params: NatanzonParams, E):
    p = params.as_float()
    return (-p.a * E + p.f + 1, -p.c0 * E + p.h0 + 1, -p.c1 * E + p.h1 + 1)


def abd_of_energy(params: NatanzonParams, E: float):
    """Positive square roots (alpha, beta, delta) at energy E.

    Returns ``None`` when any radicand is negative (complex group
    parameters).
    """
    rads = radicands(params, E)
    if min(rads) < 0:
        return None
    return tuple(math.sqrt(x) for x in rads)


def quantization_function(params: NatanzonParams, nu: int, E):
    """F(E) = alpha - beta - delta - (2 nu + 1); ``nan`` where complex."""
    p = params.as_float()
    rads = radicands(p, E)
    scales = (abs(p.f) + 1, abs(p.h0) + 1, abs(p.h1) + 1)
    # rounding at a window edge can leave a radicand at -1e-16; treat it as 0
    ra, rb, rd = (np.where((x < 0) & (x > -1e-13 * sc), 0.0, x)
                  for x, sc in zip((np.asarray(r, dtype=float) for r in rads), scales))
    with np.errstate(invalid="ignore"):
        out = np.sqrt(ra) - np.sqrt(rb) - np.sqrt(rd) - (2 * nu + 1)
    return out


def energy_window(params: NatanzonParams) -> tuple[float, float]:
    """E-interval where all three radicands are nonnegative, clipped below
    at min(V) - 1 (no bound state can lie under the potential minimum)."""
    p = params.as_float()
    lo, hi = potential_min(p) - 1.0, math.inf
    for coef, h in ((p.a, p.f), (p.c0, p.h0), (p.c1, p.h1)):
        if coef > 0:
            hi = min(hi, (h + 1) / coef)
        elif coef < 0:
            lo = max(lo, (h + 1) / coef)
        elif h + 1 < 0:
            return math.nan, math.nan
    if not math.isfinite(hi):
        # no radicand closes the window from above; the potential is confining
        hi = lo + 1e4
    return lo, hi


def _endpoint_strict(params: NatanzonParams) -> tuple[bool, bool]:
    """Whether beta (z = 0 end) and delta (z = 1 end) must be strictly positive.

    At an infinite-r end the state decays like z^(beta/2) in a variable that
    itself decays exponentially, so beta = 0 is not normalizable.  At a
    finite-r end R vanishes and the R^(1/4) factor keeps beta = 0 square
    integrable and zero at the wall.
    """
    return params.c0 != 0, params.c1 != 0


def _valid(params: NatanzonParams, abd, tol: float = 0.0) -> bool:
    if abd is None:
        return False
    alpha, beta, delta = abd
    strict_b, strict_d = _endpoint_strict(params)
    ok_b = beta > tol if strict_b else beta >= 0
    ok_d = delta > tol if strict_d else delta >= 0
    return alpha > 0 and ok_b and ok_d


def solve_level(params: NatanzonParams, nu: int, n_scan: int = N_SCAN) -> Level:
    """Energy and group parameters of level ``nu``.

    The admissible E-window is scanned on ``n_scan`` uniform samples and the
    lowest sign change of F(E) with normalizable (alpha, beta, delta) is
    refined by bisection (Brent) to ~1e-13.

    Raises
    ------
    NoBoundState
        If no admissible root exists.
    """
    if nu < 0 or int(nu) != nu:
        raise ValueError("nu must be a nonnegative integer")
    nu = int(nu)
    p = params.as_float()
    lo, hi = energy_window(p)
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi < lo:
        raise NoBoundState(f"empty energy window for nu={nu}")
    E = np.linspace(lo, hi, n_scan + 1)
    F = quantization_function(p, nu, E)

    def Fs(e):
        return float(quantization_function(p, nu, e))

    for i in range(n_scan + 1):
        if not np.isfinite(F[i]):
            continue
        if F[i] == 0.0:
            root = float(E[i])
        elif i < n_scan and np.isfinite(F[i + 1]) and F[i] * F[i + 1] < 0:
            root = brentq(Fs, E[i], E[i + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
        else:
            continue
        abd = abd_of_energy(p, root)
        if _valid(p, abd):
            return Level.from_abd(nu, root, *abd)
    raise NoBoundState(f"no bound state with nu={nu}")


def enumerate_levels(params: NatanzonParams, nu_max: int = 200) -> list[Level]:
    """All levels nu = 0, 1, ... up to the first missing one."""
    require_admissible(params)
    out: list[Level] = []
    for nu in range(nu_max + 1):
        try:
            out.append(solve_level(params, nu))
        except NoBoundState:
            break
    return out


def irrep_alignment_check(params: NatanzonParams, nu0: int, nu1: int | None = None, tol: float = 1e-9):
    """Do levels ``nu0`` and ``nu1`` (default ``nu0 + 1``) share (p, q)?

    Returns ``(same, (p0, q0), (p1, q1))``.  Only the pair (p, q) fixes an
    irrep; m always differs between distinct levels.
    """
    nu1 = nu0 + 1 if nu1 is None else nu1
    l0 = solve_level(params, nu0)
    l1 = solve_level(params, nu1)
    same = abs(l0.p - l1.p) <= tol * max(1.0, abs(l0.p)) and abs(l0.q - l1.q) <= tol * max(1.0, abs(l0.q))
    return same, (l0.p, l0.q), (l1.p, l1.q)


def spectrum_table(levels) -> list[tuple]:
    return [lv.as_row() for lv in levels]
