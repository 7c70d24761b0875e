import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.optimize import minimize_scalar
from scipy.special import hyp2f1

from natanzon import (
    TerminatingHyp,
    build_state,
    build_zmap,
    contiguous_residuals,
    enumerate_levels,
    hyp_eval,
    overlap,
    preset_pt2,
    solve_level,
    state_derivative,
)
from natanzon.wavefunction import hyp2f1_terminating, raw_state, series_coefficients


def pochhammer_sum(a, b, c, z):
    """Direct summation with mpmath rising factorials."""
    n = int(-a)
    return sum(mp.rf(a, k) * mp.rf(b, k) / (mp.rf(c, k) * mp.factorial(k)) * mp.mpf(z) ** k for k in range(n + 1))


def test_hyp_degree_zero_and_one():
    h0 = TerminatingHyp.make(0, 3.7, 2.2)
    assert np.all(hyp_eval(h0, np.linspace(0, 1, 5)) == 1.0)
    al, be = 5.0, 1.0
    h1 = TerminatingHyp.make(1, al - 1, 1 + be)
    z = np.linspace(0, 1, 7)
    assert np.allclose(hyp_eval(h1, z), 1 - (al - 1) * z / (1 + be), atol=1e-15)


def test_hyp_deep_well_level3():
    lv = solve_level(preset_pt2(10.5, 1.5, 1.0), 3)
    h = TerminatingHyp.for_level(lv)
    want = pochhammer_sum(-3, lv.alpha - 3, 1 + lv.beta, 0.3)
    assert float(hyp_eval(h, 0.3)) == pytest.approx(float(want), abs=1e-14)


@settings(max_examples=80)
@given(nu=st.integers(0, 8), b=st.floats(-10, 10), c=st.floats(0.5, 10), z=st.floats(0, 1))
def test_coefficients_match_pochhammer(nu, b, c, z):
    coeffs = series_coefficients(-nu, b, c)
    assert coeffs[0] == 1.0
    for k, ck in enumerate(coeffs):
        want = mp.rf(-nu, k) * mp.rf(b, k) / (mp.rf(c, k) * mp.factorial(k))
        assert ck == pytest.approx(float(want), rel=1e-12, abs=1e-300)
    if nu:
        assert float(hyp2f1_terminating(-nu, b, c, z)) == pytest.approx(
            float(pochhammer_sum(-nu, b, c, z)), rel=1e-11, abs=1e-11)


def test_hyp_derivative_is_polynomial_derivative():
    h = TerminatingHyp.make(4, 2.3, 1.7)
    z = np.linspace(0.1, 0.9, 9)
    step = 1e-6
    fd = (hyp_eval(h, z + step) - hyp_eval(h, z - step)) / (2 * step)
    assert np.allclose(hyp_eval(h, z, 1), fd, rtol=1e-8)


def test_series_errors():
    with pytest.raises(ValueError):
        series_coefficients(0.5, 1.5, 2.0)
    with pytest.raises(ValueError):
        TerminatingHyp.make(3, 1.0, -1.0)


@pytest.mark.parametrize("a, b, c, z", [(-2, 3, 2, 0.4), (-1, 1, 1, 0.5)])
def test_contiguous_examples(a, b, c, z):
    res_a, res_b = contiguous_residuals(a, b, c, z)
    assert abs(res_a) < 1e-14 and abs(res_b) < 1e-14


def test_contiguous_at_zero():
    assert contiguous_residuals(-3, 2.5, 1.5, 0.0) == (0.0, 0.0)


def test_contiguous_against_mpmath():
    # each function evaluated independently by mpmath, unscaled residuals
    for a, b, c, z in [(-2, 3, 2, 0.4), (-4, -2.5, 3.3, 0.71), (-5, 7.1, 0.8, 0.2)]:
        F = lambda *args: mp.hyp2f1(*args, z)  # noqa: E731
        lhs_a = z * b * (z - 1) * a * F(a + 1, b + 1, c + 1) + c * (c - 1) * F(a - 1, b, c - 1) + c * (z * b - c + 1) * F(a, b, c)
        lhs_b = (c - 1) * F(a - 1, b, c - 1) + (b - c + 1) * F(a, b, c) + b * (z - 1) * F(a, b + 1, c)
        assert abs(lhs_a) < 1e-12 and abs(lhs_b) < 1e-12


def test_contiguous_random_instances():
    rng = np.random.default_rng(20240611)
    worst = 0.0
    for _ in range(500):
        a = -int(rng.integers(1, 7))
        b = rng.uniform(-10, 10)
        c = rng.uniform(0.5, 10)
        z = rng.uniform(0.05, 0.95)
        worst = max(worst, *map(abs, contiguous_residuals(a, b, c, z)))
    assert worst < 1e-11


def test_flipped_sign_variant_fails():
    res_a, res_b = contiguous_residuals(-2, 3, 2, 0.4, as_printed=True)
    assert abs(res_a) > 1e-2 and abs(res_b) > 1e-2


def _pt2_oracle_norm(A, B, al, lv):
    """Integral of the unnormalized PT2 state over r with z = tanh^2(alpha r)."""
    def phi(r):
        z = math.tanh(al * r) ** 2
        R = z / al**2
        F = hyp2f1(-lv.nu, lv.alpha - lv.nu, 1 + lv.beta, z)
        return z ** (lv.beta / 2) * (1 - z) ** (lv.delta / 2) * R**0.25 * F
    return quad(lambda r: phi(r) ** 2, 0, np.inf, epsabs=0, epsrel=1e-12, limit=400)[0]


def _rm_oracle_norm(lv, c=1.0):
    def phi(r):
        z = 0.5 + 0.5 * math.tanh(r)
        F = hyp2f1(-lv.nu, lv.alpha - lv.nu, 1 + lv.beta, z)
        return z ** (lv.beta / 2) * (1 - z) ** (lv.delta / 2) * c**0.25 * F
    return sum(quad(lambda r: phi(r) ** 2, lo, hi, epsabs=0, epsrel=1e-12, limit=400)[0]
               for lo, hi in ((-np.inf, 0), (0, np.inf)))


def test_normalization_against_r_quadrature(pt2, pt2_map, rm, rm_map):
    for lv in enumerate_levels(pt2):
        st_ = build_state(pt2, pt2_map, lv)
        assert st_.K == pytest.approx(1 / math.sqrt(_pt2_oracle_norm(4.5, 1.5, 1.0, lv)), rel=1e-8)
        assert st_.norm_integral() == pytest.approx(1.0, abs=1e-8)
    for lv in enumerate_levels(rm):
        st_ = build_state(rm, rm_map, lv)
        assert st_.K == pytest.approx(1 / math.sqrt(_rm_oracle_norm(lv)), rel=1e-8)


def test_generic_states(generic, generic_map):
    states = [build_state(generic, generic_map, lv) for lv in enumerate_levels(generic)]
    for st_ in states:
        assert st_.K > 0
        assert st_.norm_integral() == pytest.approx(1.0, abs=1e-8)
        assert st_.node_count() == st_.level.nu
    for i in range(len(states)):
        for j in range(i):
            assert abs(overlap(states[i], states[j])) < 1e-7


@pytest.mark.parametrize("name", ["pt2", "rm"])
def test_nodes_orthogonality_decay(name, request):
    p = request.getfixturevalue(name)
    zm = request.getfixturevalue(name + "_map")
    s0, s1 = (build_state(p, zm, lv) for lv in enumerate_levels(p))
    assert s0.node_count() == 0 and s1.node_count() == 1
    assert abs(overlap(s0, s1)) < 1e-7
    lo, hi = zm.r_range
    for s in (s0, s1):
        assert abs(s(lo)) < 1e-3 and abs(s(hi)) < 1e-3


def test_derivative_at_maximum(pt2, pt2_map):
    s0 = build_state(pt2, pt2_map, solve_level(pt2, 0))
    res = minimize_scalar(lambda r: -s0(r), bounds=(0.1, 4.0), method="bounded", options={"xatol": 1e-10})
    assert abs(state_derivative(s0, res.x)) < 1e-6


@pytest.mark.parametrize("name, nu, r0", [("pt2", 1, 0.7), ("rm", 0, 0.0), ("rm", 1, -0.4)])
def test_derivative_finite_difference(name, nu, r0, request):
    p = request.getfixturevalue(name)
    zm = request.getfixturevalue(name + "_map")
    s = build_state(p, zm, solve_level(p, nu))
    h = 1e-5
    fd = (s(r0 + h) - s(r0 - h)) / (2 * h)
    assert state_derivative(s, r0) == pytest.approx(fd, rel=1e-6)
    fd2 = (s(r0 + 1e-4) - 2 * s(r0) + s(r0 - 1e-4)) / 1e-8
    assert s.d2phi(r0) == pytest.approx(fd2, rel=1e-5, abs=1e-6)


def test_log_derivatives_match(generic, generic_map):
    s = raw_state(generic, generic_map, solve_level(generic, 1))
    z, w = generic_map.z[100:-100:50], generic_map.w[100:-100:50]
    phi, d1, d2 = s.derivs_zw(z, w)
    L1, L2 = s.log_derivs_zw(z, w)
    assert np.allclose(L1, d1 / phi, rtol=1e-10) and np.allclose(L2, d2 / phi, rtol=1e-9)


def test_beta_zero_state_is_normalizable():
    # PT2 with beta = 0 at the hard wall: Phi ~ r^(1/2)
    p = preset_pt2(5.5, 0.5, 1.0)
    zm = build_zmap(p)
    s = build_state(p, zm, solve_level(p, 0))
    assert s.level.beta == pytest.approx(0.0, abs=1e-12)
    assert s.norm_integral() == pytest.approx(1.0, abs=1e-8)
