"""Natanzon parameter sets, derived quantities and the preset catalog.

Units are hbar = 2m = 1 throughout, so the radial problem reads
``-psi'' + V psi = E psi``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from numbers import Real
from typing import Any

FINITE = "finite-r"
INFINITE = "infinite-r"

_PARAM_KEYS = ("a", "c0", "c1", "f", "h0", "h1")


class AdmissibilityError(ValueError):
    """Raised when a parameter set cannot define a Natanzon potential."""


@dataclass(frozen=True)
class NatanzonParams:
    """The sextuple (a, c0, c1, f, h0, h1).

    Fields may be floats or :class:`fractions.Fraction`; the exact form is
    kept for test oracles, everything numeric goes through :meth:`as_float`.
    ``preset`` optionally records where the set came from, e.g.
    ``{"preset": "pt2", "A": 4.5, "B": 1.5, "alpha": 1.0}``.
    """

    a: Real
    c0: Real
    c1: Real
    f: Real
    h0: Real
    h1: Real
    preset: dict | None = field(default=None, compare=False)

    @property
    def tau(self):
        return self.c1 - self.c0 - self.a

    @property
    def Delta(self):
        return self.tau**2 - 4 * self.a * self.c0

    @property
    def is_exact(self) -> bool:
        return all(isinstance(getattr(self, k), (int, Fraction)) for k in _PARAM_KEYS)

    def as_tuple(self) -> tuple:
        return tuple(getattr(self, k) for k in _PARAM_KEYS)

    def as_float(self) -> "NatanzonParams":
        return replace(self, **{k: float(getattr(self, k)) for k in _PARAM_KEYS})

    def with_(self, **changes) -> "NatanzonParams":
        """Copy with some fields replaced; drops the preset tag."""
        changes.setdefault("preset", None)
        return replace(self, **changes)

    def to_dict(self) -> dict:
        d = {k: _jsonable(getattr(self, k)) for k in _PARAM_KEYS}
        if self.preset:
            d.update({k: _jsonable(v) for k, v in self.preset.items()})
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "NatanzonParams":
        """Build from a JSON-style mapping.

        A ``"preset"`` key (``"pt2"`` or ``"rm"``) together with ``A``, ``B``
        and ``alpha`` takes precedence; otherwise all six Natanzon keys are
        required.
        """
        kind = d.get("preset")
        if kind is not None:
            try:
                A, B, alpha = d["A"], d["B"], d["alpha"]
            except KeyError as exc:
                raise ValueError(f"preset {kind!r} needs A, B and alpha") from exc
            builders = {"pt2": preset_pt2, "rm": preset_rm}
            if kind not in builders:
                raise ValueError(f"unknown preset {kind!r}")
            return builders[kind](A, B, alpha)
        missing = [k for k in _PARAM_KEYS if k not in d]
        if missing:
            raise ValueError(f"missing Natanzon parameters: {missing}")
        return cls(**{k: float(d[k]) for k in _PARAM_KEYS})

    @classmethod
    def from_json(cls, text: str) -> "NatanzonParams":
        return cls.from_dict(json.loads(text))


def _jsonable(v):
    if isinstance(v, Fraction):
        return float(v)
    return v


@dataclass(frozen=True)
class PotentialDomain:
    left_endpoint_kind: str
    right_endpoint_kind: str
    r_min: float
    r_max: float

    @property
    def is_half_line(self) -> bool:
        return math.isfinite(self.r_min) != math.isfinite(self.r_max)

    @property
    def is_full_line(self) -> bool:
        return not (math.isfinite(self.r_min) or math.isfinite(self.r_max))


def tau_delta(params: NatanzonParams):
    """Return ``(tau, Delta)`` with tau = c1 - c0 - a, Delta = tau**2 - 4 a c0."""
    return params.tau, params.Delta


def eval_R(params: NatanzonParams, z):
    """R(z) = a z**2 + tau z + c0 (works on scalars and numpy arrays)."""
    return params.a * z * z + params.tau * z + params.c0


def R_symmetric(params: NatanzonParams, z, w):
    """R written as c0 w + c1 z - a z w with w = 1 - z.

    Algebraically identical to :func:`eval_R` but free of cancellation at
    either endpoint when ``w`` is supplied accurately.
    """
    return params.c0 * w + params.c1 * z - params.a * z * w


def admissible(params: NatanzonParams) -> tuple[bool, str]:
    """Check R > 0 on the open interval (0, 1) and that R is not degenerate.

    Returns ``(ok, diagnostic)``; the diagnostic is ``"ok"`` on success.
    """
    a, c0, c1 = params.a, params.c0, params.c1
    if a == 0 and c0 == 0 and c1 == 0:
        return False, "degenerate R: a = c0 = c1 = 0"
    if c0 < 0:
        return False, "R(0) = c0 < 0"
    if c1 < 0:
        return False, "R(1) = c1 < 0"
    if a > 0:
        zs = -params.tau / (2 * a)
        if 0 < zs < 1:
            rmin = -params.Delta / (4 * a)
            if rmin <= 0:
                return False, f"R dips to {float(rmin):.6g} at z = {float(zs):.6g} inside (0, 1)"
        elif c0 == 0 and c1 == 0:
            return False, "R vanishes at both endpoints and is convex"
    return True, "ok"


def require_admissible(params: NatanzonParams) -> None:
    ok, why = admissible(params)
    if not ok:
        raise AdmissibilityError(why)


def domain_of(params: NatanzonParams) -> PotentialDomain:
    """Classify the endpoints and fix the r-origin convention.

    z = 0 sits at finite r iff c0 = 0, z = 1 iff c1 = 0.  A finite left end
    is placed at r = 0; with only a finite right end that end is r = 0; with
    two infinite ends z(0) = 1/2.  The numeric extent of a finite far end is
    only known after integration, so it is reported as ``nan`` here and
    filled in by :mod:`natanzon.zmap`.
    """
    left = FINITE if params.c0 == 0 else INFINITE
    right = FINITE if params.c1 == 0 else INFINITE
    if left == FINITE:
        r_min, r_max = 0.0, (math.inf if right == INFINITE else math.nan)
    elif right == FINITE:
        r_min, r_max = -math.inf, 0.0
    else:
        r_min, r_max = -math.inf, math.inf
    return PotentialDomain(left, right, r_min, r_max)


def _num(x, exact: bool):
    if exact:
        return Fraction(x) if not isinstance(x, float) else Fraction(str(x))
    return float(x)


def preset_pt2(A, B, alpha, exact: bool = False) -> NatanzonParams:
    """Poschl-Teller II potential
    ``(A-B)^2 - A(A+alpha) sech^2(alpha r) + B(B-alpha) csch^2(alpha r)``.

    Parameters
    ----------
    A, B, alpha : real
        Well parameters; ``alpha > 0``.  Bound states at the finite end
        additionally need ``2B > alpha`` (not enforced here so that
        boundary cases reached by ladder steps can still be represented).
    exact : bool
        Return :class:`~fractions.Fraction` fields (floats are converted
        through their decimal repr, so ``4.5`` becomes ``9/2``).
    """
    A, B, al = (_num(x, exact) for x in (A, B, alpha))
    if al <= 0:
        raise ValueError("alpha must be positive")
    al2 = al * al
    p = NatanzonParams(
        a=_num(0, exact),
        c0=_num(0, exact),
        c1=1 / al2,
        f=(2 * A - al) * (2 * A + 3 * al) / (4 * al2),
        h0=(2 * B + al) * (2 * B - 3 * al) / (4 * al2),
        h1=(A - B + al) * (A - B - al) / al2,
        preset={"preset": "pt2", "A": A, "B": B, "alpha": al},
    )
    return p


def preset_rm(A, B, alpha, exact: bool = False) -> NatanzonParams:
    """Rosen-Morse potential
    ``A^2 + B^2/A^2 + 2B tanh(alpha r) - A(A+alpha) sech^2(alpha r)``."""
    A, B, al = (_num(x, exact) for x in (A, B, alpha))
    if al <= 0:
        raise ValueError("alpha must be positive")
    if A == 0:
        raise ValueError("A must be nonzero")
    al2 = al * al
    A2 = A * A
    return NatanzonParams(
        a=_num(0, exact),
        c0=1 / al2,
        c1=1 / al2,
        f=4 * A * (A + al) / al2,
        h0=(-B + A * al + A2) * (-B - A * al + A2) / (al2 * A2),
        h1=(B + A * al + A2) * (B - A * al + A2) / (al2 * A2),
        preset={"preset": "rm", "A": A, "B": B, "alpha": al},
    )


def pt2_closed_form(A, B, alpha):
    """Callable r -> V_PT2(r), straight from the hyperbolic expression."""
    import numpy as np

    A, B, al = float(A), float(B), float(alpha)

    def V(r):
        r = np.asarray(r, dtype=float)
        return (A - B) ** 2 - A * (A + al) / np.cosh(al * r) ** 2 + B * (B - al) / np.sinh(al * r) ** 2

    return V


def rm_closed_form(A, B, alpha):
    import numpy as np

    A, B, al = float(A), float(B), float(alpha)

    def V(r):
        r = np.asarray(r, dtype=float)
        return A * A + B * B / (A * A) + 2 * B * np.tanh(al * r) - A * (A + al) / np.cosh(al * r) ** 2

    return V


def identify_pt2(params: NatanzonParams):
    """Read ``(A, B, alpha, shift)`` back off a PT2-shaped parameter set.

    The set must have a = c0 = 0.  ``shift`` is the constant by which the
    potential exceeds ``preset_pt2(A, B, alpha)``; the positive roots of
    f + 1 and h0 + 1 are taken.
    """
    if params.a != 0 or params.c0 != 0 or params.c1 <= 0:
        raise ValueError("not a PT2-shaped parameter set (need a = c0 = 0 < c1)")
    exact = params.is_exact
    sqrt = _exact_sqrt if exact else math.sqrt
    al = 1 / sqrt(params.c1)
    A = al * sqrt(params.f + 1) - al / 2
    B = al * sqrt(params.h0 + 1) + al / 2
    ref = preset_pt2(A, B, al, exact=exact)
    shift = (params.h1 - ref.h1) / params.c1
    return A, B, al, shift


def identify_rm(params: NatanzonParams):
    """Read ``(A, shift_free_h0, h1)`` style data off an RM-shaped set.

    Only A is recoverable without knowing the energy offset: alpha = 1/sqrt(c)
    and A follows from f = 4A(A+alpha)/alpha^2.  Returns ``(A, alpha)``.
    """
    if params.a != 0 or params.c0 != params.c1 or params.c0 <= 0:
        raise ValueError("not an RM-shaped parameter set (need a = 0, c0 = c1 > 0)")
    al = 1 / math.sqrt(float(params.c0))
    # 4A^2 + 4A alpha - f alpha^2 = 0, positive root
    f = float(params.f)
    A = al * (-1 + math.sqrt(1 + f)) / 2
    return A, al


def _exact_sqrt(x) -> Fraction:
    """Square root of a nonnegative rational that is a perfect square."""
    x = Fraction(x)
    if x < 0:
        raise ValueError(f"negative radicand {x}")
    n, d = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if n * n != x.numerator or d * d != x.denominator:
        raise ValueError(f"{x} is not a rational square")
    return Fraction(n, d)


exact_sqrt = _exact_sqrt
