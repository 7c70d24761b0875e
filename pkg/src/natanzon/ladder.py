"""so(2,1) ladder operators on Natanzon bound states and satellite potentials.

On Psi = exp(i m phi) Phi(r) the generators act as first-order radial
operators, J Phi = A(z) Phi + B(z) dPhi/dr, with

    A = [m (1+z) + s Z_z sqrt(R) / 2 - (1-z)(s + p)] / (2 sqrt z)
    B = s sqrt(R) / (2 sqrt z)

where Z(z) = dz/dr and s = +1 for the lowering operator J-, s = -1 for the
raising operator J+.  This is the two-variable realization with
d/dphi -> i m; the phase exp(i(m -+ 1) phi) of the result is implied.

Sign convention.  With this realization (the one whose J0(J0+1) - J-J+
reproduces the Casimir and q = (delta^2 - 1)/4) and K = 1 states, the
raising action is exactly J+ Phi_nu = -beta Phi_sat(nu+1), while the
lowering action carries an extra minus sign relative to the tabulated
coefficient nu (alpha - nu - 1 - beta)/(1 + beta).  :data:`LOWERING_PHASE`
records that sign, fixed once from the PT2 nu = 1 -> 0 pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq

from .params import NatanzonParams, R_symmetric, admissible, exact_sqrt, preset_rm
from .spectrum import Level, NoBoundState, _valid, solve_level
from .wavefunction import BoundState

RAISING = "up"
LOWERING = "down"
LOWERING_PHASE = -1.0
RAISING_PHASE = 1.0

ISOSPECTRAL = "isospectral"
GROUND_ZERO = "ground-zero"
FIX_H1S = "h1s"


class ClosureInapplicable(ValueError):
    pass


class LowestWeight(ValueError):
    """Lowering the nu = 0 state: J- annihilates it."""


def _direction(direction: str) -> str:
    d = {"up": RAISING, "raise": RAISING, "raising": RAISING, "+": RAISING,
         "down": LOWERING, "lower": LOWERING, "lowering": LOWERING, "-": LOWERING}.get(direction)
    if d is None:
        raise ValueError(f"direction must be 'up' or 'down', got {direction!r}")
    return d


@dataclass(frozen=True)
class RadialLadderOp:
    direction: str
    p: float
    m: float

    @classmethod
    def for_level(cls, level: Level, direction: str) -> "RadialLadderOp":
        return cls(_direction(direction), level.p, level.m)

    @property
    def s(self) -> float:
        return 1.0 if self.direction == LOWERING else -1.0

    def coefficients(self, params: NatanzonParams, z, w):
        """A, B and their z-derivatives at (z, 1 - z)."""
        p = params.as_float()
        z = np.asarray(z, dtype=float)
        w = np.asarray(w, dtype=float)
        s, pp, m = self.s, self.p, self.m
        R = R_symmetric(p, z, w)
        sR = np.sqrt(R)
        Rp = 2.0 * p.a * z + p.tau
        Z = 2.0 * z * w / sR
        Zz = 2.0 * (w - z) / sR - z * w * Rp / (R * sR)
        Zzz = (-4.0 / sR - 2.0 * (w - z) * Rp / (R * sR) - 2.0 * p.a * z * w / (R * sR)
               + 1.5 * z * w * Rp**2 / (R * R * sR))
        qz = 0.5 / np.sqrt(z)
        bracket = m * (1.0 + z) + 0.5 * s * Zz * sR - w * (s + pp)
        A = qz * bracket
        B = s * qz * sR
        dq = -qz / (2.0 * z)
        A_z = dq * bracket + qz * (m + 0.5 * s * (Zzz * sR + Zz * Rp / (2.0 * sR)) + (s + pp))
        B_z = s * (dq * sR + qz * Rp / (2.0 * sR))
        return A, B, A_z, B_z, Z

    def apply_zw(self, params, z, w, phi, dphi, d2phi=None):
        """Apply to a radial function given by its values and r-derivatives.

        Returns ``J phi`` and, when ``d2phi`` is supplied, also ``d(J phi)/dr``.
        """
        A, B, A_z, B_z, Z = self.coefficients(params, z, w)
        out = A * phi + B * dphi
        if d2phi is None:
            return out
        return out, A_z * Z * phi + (A + B_z * Z) * dphi + B * d2phi


def apply_ladder(op: RadialLadderOp, state: BoundState, r, normalized: bool = False):
    """Radial part of J Psi at r for a bound state (K = 1 by default)."""
    if abs(op.m - state.level.m) > 1e-9 * max(1.0, abs(op.m)):
        raise ValueError("operator m does not match the state's m")
    z, w = state.zmap.zw_of_r(r)
    phi, d1, _ = state.derivs_zw(z, w, normalized)
    return op.apply_zw(state.params, z, w, phi, d1)


def ladder_coefficients(level: Level, direction: str) -> float:
    """Tabulated ladder coefficient for ``level``.

    lowering: nu (alpha - nu - 1 - beta) / (1 + beta)
    raising:  -beta

    Multiply by :data:`LOWERING_PHASE` / :data:`RAISING_PHASE` to get the
    factor produced by :class:`RadialLadderOp` on K = 1 states.
    """
    nu, alpha, beta = level.nu, level.alpha, level.beta
    if _direction(direction) == RAISING:
        return -beta
    if 1 + beta == 0:
        raise ZeroDivisionError("1 + beta = 0")
    return nu * (alpha - nu - 1 - beta) / (1 + beta)


def effective_coefficient(level: Level, direction: str) -> float:
    d = _direction(direction)
    phase = RAISING_PHASE if d == RAISING else LOWERING_PHASE
    return phase * ladder_coefficients(level, d)


# --------------------------------------------------------------------------
# satellite potentials


def parse_closure(closure) -> tuple[str, float | None]:
    """Accept ``"isospectral"``, ``"ground-zero"``, ``"h1s=<v>"`` or ``("h1s", v)``."""
    if isinstance(closure, tuple):
        kind, val = closure
        if kind != FIX_H1S:
            raise ValueError(f"unknown closure {closure!r}")
        return FIX_H1S, val
    if isinstance(closure, str):
        c = closure.strip().lower()
        if c in ("isospectral", "isospectral-match"):
            return ISOSPECTRAL, None
        if c in ("ground-zero", "ground-energy-zero"):
            return GROUND_ZERO, None
        if c.startswith("h1s="):
            txt = c.split("=", 1)[1]
            try:
                return FIX_H1S, Fraction(txt) if "/" in txt else float(txt)
            except ValueError as exc:
                raise ValueError(f"bad h1s value {txt!r}") from exc
    raise ValueError(f"unknown closure {closure!r}")


@dataclass(frozen=True)
class SatelliteStep:
    """One ladder step: source level -> satellite parameters."""

    direction: str
    source: NatanzonParams
    source_level: Level
    closure: str
    result: NatanzonParams
    coefficient: float
    E_target: float
    target_nu: int
    target_abd: tuple
    h1s: float = field(default=math.nan)

    def to_dict(self) -> dict:
        return {
            "direction": self.direction,
            "closure": self.closure,
            "source_nu": self.source_level.nu,
            "source_E": float(self.source_level.E),
            "target_nu": self.target_nu,
            "E_target": float(self.E_target),
            "coefficient": float(self.coefficient),
            "target_alpha": float(self.target_abd[0]),
            "target_beta": float(self.target_abd[1]),
            "target_delta": float(self.target_abd[2]),
            "params": self.result.to_dict(),
        }


def exact_level(params: NatanzonParams, nu: int, E) -> Level:
    """Level with rational group parameters, for exact-arithmetic checks.

    All three radicands at ``E`` must be rational squares and the
    quantization condition must hold exactly.
    """
    E = Fraction(E)
    a, b, d = (exact_sqrt(x) for x in (-params.a * E + params.f + 1,
                                        -params.c0 * E + params.h0 + 1,
                                        -params.c1 * E + params.h1 + 1))
    if a - b - d != 2 * nu + 1:
        raise ValueError("E does not satisfy the quantization condition exactly")
    return Level(nu, E, a, b, d, (a + b) / 2, (d * d - 1) / 4, (a - b) / 2)


def _params_at(params: NatanzonParams, abd2, E_t) -> NatanzonParams:
    A2, B2, D2 = abd2
    return params.with_(
        f=A2 - 1 + params.a * E_t,
        h0=B2 - 1 + params.c0 * E_t,
        h1=D2 - 1 + params.c1 * E_t,
    )


def satellite_params(params: NatanzonParams, level: Level, direction: str = RAISING,
                     closure=ISOSPECTRAL) -> SatelliteStep:
    """Natanzon parameters of the satellite reached by one ladder step.

    The step keeps (a, c0, c1) and sends (alpha, beta, delta) at nu to
    (alpha +- 1, beta -+ 1, delta) at nu +- 1.  The three relations
    alpha1^2 = -a E + f1 + 1, ... then fix (f1, h01, h11) once the target
    energy E is chosen by the closure:

    ``isospectral``   E = E(nu) of the source;
    ``ground-zero``   the satellite's lowest level sits at E = 0;
    ``h1s=<v>``       h11 = v, E = (v + 1 - delta1^2)/c1 (needs c1 != 0).

    Changing E at fixed targets shifts the satellite potential by a
    constant, so the closures only differ in the energy origin.

    Exact (Fraction) parameters and level give exact results for the
    isospectral and h1s closures.
    """
    d = _direction(direction)
    kind, val = parse_closure(closure)
    sgn = 1 if d == RAISING else -1
    if d == LOWERING and level.nu == 0:
        raise LowestWeight("J- annihilates the nu = 0 state")
    exact = params.is_exact and isinstance(level.alpha, Fraction)
    if not exact:
        params = params.as_float()
    a1, b1, d1 = level.alpha + sgn, level.beta - sgn, level.delta
    abd2 = (a1 * a1, b1 * b1, d1 * d1)

    if kind == ISOSPECTRAL:
        E_t = level.E
    elif kind == FIX_H1S:
        if params.c1 == 0:
            raise ClosureInapplicable("h1s closure needs c1 != 0")
        v = Fraction(val) if exact else float(val)
        E_t = (v + 1 - abd2[2]) / params.c1
    else:
        if exact:
            raise ValueError("ground-zero closure is only available in floating point")
        trial = _params_at(params, abd2, level.E)
        try:
            ground = solve_level(trial, 0)
        except NoBoundState as exc:
            raise ClosureInapplicable("satellite has no ground state to pin at E = 0") from exc
        E_t = level.E - ground.E

    result = _params_at(params, abd2, E_t)
    ok, why = admissible(result)
    if not ok:
        raise ValueError(f"satellite not admissible: {why}")
    return SatelliteStep(
        direction=d,
        source=params,
        source_level=level,
        closure=kind if kind != FIX_H1S else f"h1s={val}",
        result=result,
        coefficient=ladder_coefficients(level, d),
        E_target=E_t,
        target_nu=level.nu + sgn,
        target_abd=(a1, b1, d1),
        h1s=result.h1,
    )


def satellite_level(step: SatelliteStep, tol: float = 1e-9) -> Level:
    """Re-solve the satellite at the target counter and check the shifts.

    Raises :class:`NoBoundState` if the target is not a normalizable level
    of the satellite.
    """
    abd = step.target_abd
    res = step.result.as_float()
    if not _valid(res, tuple(float(x) for x in abd)):
        raise NoBoundState(
            f"target (alpha, beta, delta) = {tuple(float(x) for x in abd)} is not normalizable")
    lv = solve_level(res, step.target_nu)
    got = (lv.alpha, lv.beta, lv.delta)
    if any(abs(g - float(t)) > tol * max(1.0, abs(float(t))) for g, t in zip(got, abd)):
        raise NoBoundState(f"satellite level {step.target_nu} does not carry the shifted group parameters")
    return lv


@dataclass
class SatelliteChain:
    steps: list
    reason: str

    def __iter__(self):
        return iter(self.steps)

    def __len__(self):
        return len(self.steps)

    def __getitem__(self, i):
        return self.steps[i]


def satellite_chain(params: NatanzonParams, start_nu: int, steps: int,
                    closure=ISOSPECTRAL, direction: str = RAISING) -> SatelliteChain:
    """Repeated ladder steps in one direction.

    Each step re-solves the new potential at the reached counter and uses
    that level as the next source.  Stops early when the reached state is
    not a bound state (``reason`` says why).
    """
    d = _direction(direction)
    out: list[SatelliteStep] = []
    if steps <= 0:
        return SatelliteChain(out, "no steps requested")
    cur_p = params.as_float()
    cur_l = solve_level(cur_p, start_nu)
    for _ in range(steps):
        try:
            step = satellite_params(cur_p, cur_l, d, closure)
        except LowestWeight:
            return SatelliteChain(out, "lowest weight")
        try:
            nxt = satellite_level(step)
        except NoBoundState as exc:
            return SatelliteChain(out, f"target level lost: {exc}")
        out.append(step)
        cur_p, cur_l = step.result, nxt
    return SatelliteChain(out, "completed")


# --------------------------------------------------------------------------
# Rosen-Morse satellite in (A, B) form


def rm_satellite_AB(A: float, B: float, alpha: float, nu: int) -> dict:
    """(A_S, B_S) of the Rosen-Morse satellite reached from level nu by J+.

    A_S follows from alpha1 = alpha + 1.  B_S is found two ways: by solving
    q_S(nu + 1) = q(nu) for B_S numerically (the matching oracle), and in
    closed form

        B_S = (A - nu alpha - alpha/2)(2B + (A - nu alpha) alpha) / (2 (A - nu alpha)).

    The tabulated quotient with denominator (4 nu alpha - A) is evaluated
    too and reported with an agreement flag.
    """
    A, B, al = float(A), float(B), float(alpha)
    src = preset_rm(A, B, al)
    lv = solve_level(src, nu)
    A_S = A + al / 2
    X = A - nu * al
    closed = (X - al / 2) * (2 * B + X * al) / (2 * X)
    printed = -(2 * nu * al + al - 2 * A) * (nu * al * al - A * al - 2 * B) / (4 * nu * al - A)

    Y = A_S - (nu + 1) * al
    if Y <= 0:
        raise NoBoundState("satellite well too shallow for level nu + 1")
    bound = Y * Y * (1 - 1e-12)

    def q_gap(bs):
        try:
            return solve_level(preset_rm(A_S, bs, al), nu + 1).q - lv.q
        except NoBoundState:
            return math.nan

    grid = np.linspace(-bound, bound, 201)
    gaps = np.array([q_gap(b) for b in grid])
    ok = np.flatnonzero(np.isfinite(gaps[:-1]) & np.isfinite(gaps[1:]) & (gaps[:-1] * gaps[1:] <= 0))
    if ok.size == 0:
        raise NoBoundState("no B_S reproduces the source q")
    i = int(ok[0])
    matched = brentq(q_gap, grid[i], grid[i + 1], xtol=1e-14, rtol=1e-15)
    sat_lv = solve_level(preset_rm(A_S, matched, al), nu + 1)
    tol = 1e-9 * max(1.0, abs(matched))
    return {
        "A_S": A_S,
        "B_S_matched": matched,
        "B_S_closed": closed,
        "B_S_printed": printed,
        "p_source": lv.p,
        "p_satellite": sat_lv.p,
        "q_source": lv.q,
        "q_satellite": sat_lv.q,
        "closed_agrees": abs(closed - matched) <= tol,
        "printed_agrees": abs(printed - matched) <= tol,
    }
