import math

import numpy as np
import pytest

from natanzon import NatanzonParams, build_zmap, preset_pt2, r_of_z, z_of_r
from natanzon.zmap import NUMERIC, PT2_TANH2, RM_SHIFTED_TANH, MapRangeError, z_derivatives, z_prime_of_z


def test_pt2_closed_form(pt2_map):
    assert pt2_map.closed_form == PT2_TANH2
    assert z_of_r(pt2_map, 1.0) == pytest.approx(math.tanh(1.0) ** 2, abs=1e-8)
    assert r_of_z(pt2_map, math.tanh(1.0) ** 2) == pytest.approx(1.0, abs=1e-8)


def test_rm_anchor(rm_map):
    assert rm_map.closed_form == RM_SHIFTED_TANH
    assert z_of_r(rm_map, 0.0) == 0.5
    r = np.linspace(-3, 3, 13)
    assert np.allclose(z_of_r(rm_map, r), 0.5 + 0.5 * np.tanh(r), atol=1e-14)


def test_generic_ode_residual(generic_map):
    assert generic_map.closed_form == NUMERIC
    assert np.max(generic_map.ode_residual()) < 1e-10
    assert z_of_r(generic_map, 0.0) == pytest.approx(0.5, abs=1e-14)


def test_generic_half_step_cross_check(generic):
    coarse = build_zmap(generic, n_points=1024)
    fine = build_zmap(generic, n_points=2048)
    r = np.linspace(-8, 8, 101)
    assert np.max(np.abs(coarse.z_of_r(r) - fine.z_of_r(r))) < 1e-9


@pytest.mark.parametrize("params", [preset_pt2(4.5, 1.5, 1.0), NatanzonParams(0, 1, 1, 0, 0, 0),
                                    NatanzonParams(0, 0, 2.5, 0, 0, 0)])
def test_numeric_matches_closed_form(params):
    exact = build_zmap(params)
    num = build_zmap(params, force_numeric=True)
    assert num.closed_form == NUMERIC
    lo, hi = num.r_range
    r = np.linspace(max(lo, exact.r_range[0]) + 1e-3, min(hi, 20.0), 400)
    assert np.max(np.abs(num.z_of_r(r) - exact.z_of_r(r))) < 1e-10


@pytest.mark.parametrize("fixture", ["pt2_map", "rm_map", "generic_map"])
def test_round_trip_and_monotone(fixture, request):
    zm = request.getfixturevalue(fixture)
    assert np.all(np.diff(zm.r) > 0) and np.all(np.diff(zm.z) > 0)
    assert np.all((zm.z > 0) & (zm.z < 1))
    rng = np.random.default_rng(7)
    z = rng.uniform(1e-6, 1 - 1e-6, 1000)
    assert np.max(np.abs(zm.z_of_r(zm.r_of_z(z)) - z)) < 1e-9


def test_quadratic_contact_at_wall(pt2_map, pt2):
    num = build_zmap(pt2, force_numeric=True)
    for zm in (pt2_map, num):
        r, z = zm.r[:400], zm.z[:400]
        sel = (z > 1e-10) & (z < 1e-9)
        slope = np.polyfit(np.log(r[sel]), np.log(z[sel]), 1)[0]
        assert abs(slope - 2.0) < 0.05


def test_out_of_range(pt2_map):
    with pytest.raises(MapRangeError):
        pt2_map.z_of_r(-1.0)
    with pytest.raises(MapRangeError):
        pt2_map.r_of_z(1.5)


def test_rejects_bad_input(pt2):
    with pytest.raises(ValueError):
        build_zmap(NatanzonParams(0, 0, 0, 1, 1, 1))
    with pytest.raises(ValueError):
        build_zmap(pt2, n_points=50)


def test_derivatives_against_finite_differences(generic_map, generic):
    h = 1e-4
    for r0 in (-2.0, 0.3, 1.7):
        z = generic_map.z_of_r(np.array([r0 - 2 * h, r0 - h, r0, r0 + h, r0 + 2 * h]))
        fd1 = (z[3] - z[1]) / (2 * h)
        fd2 = (z[3] - 2 * z[2] + z[1]) / h**2
        z1, z2, _ = z_derivatives(generic, z[2])
        assert z1 == pytest.approx(fd1, rel=1e-7)
        assert z2 == pytest.approx(fd2, rel=1e-5, abs=1e-7)
        assert z1 == pytest.approx(float(z_prime_of_z(generic, z[2])), rel=1e-15)


def test_csv_rows(rm_map):
    rows = list(rm_map.csv_rows())
    assert rows[0] == ("r", "z", "zp") and len(rows) == len(rm_map.r) + 1


@pytest.mark.parametrize("z0", ["0.05", "0.3", "0.77"])
def test_third_derivative_high_precision(generic, z0):
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 40
    tau = generic.c1 - generic.c0 - generic.a

    def Z(z):
        return 2 * z * (1 - z) / mp.sqrt(generic.a * z * z + tau * z + generic.c0)

    z = mp.mpf(z0)
    Zz, Zzz = mp.diff(Z, z), mp.diff(Z, z, 2)
    want = [Z(z), Zz * Z(z), (Zzz * Z(z) + Zz**2) * Z(z)]
    got = z_derivatives(generic, float(z0))
    for g, w in zip(got, want):
        assert float(g) == pytest.approx(float(w), rel=1e-13, abs=1e-15)
