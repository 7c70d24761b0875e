import numpy as np
import pytest

from natanzon import (
    build_state,
    compare_potentials,
    compare_satellite_vs_susy,
    enumerate_levels,
    partner_fd_levels,
    satellite_params,
    solve_level,
    susy_partner,
)
from natanzon.susy import partner_from_arrays, superpotential


@pytest.fixture(scope="module")
def grounds(pt2, pt2_map, rm, rm_map, generic, generic_map):
    return {
        "pt2": build_state(pt2, pt2_map, solve_level(pt2, 0)),
        "rm": build_state(rm, rm_map, solve_level(rm, 0)),
        "generic": build_state(generic, generic_map, solve_level(generic, 0)),
    }


@pytest.mark.parametrize("name", ["pt2", "rm", "generic"])
def test_reconstruction(name, grounds, request):
    p = request.getfixturevalue(name)
    zm = request.getfixturevalue(name + "_map")
    part = susy_partner(p, zm, grounds[name])
    assert part.reconstruction_error < 1e-4
    assert part.E0 == grounds[name].level.E


def test_partner_needs_ground(pt2, pt2_map):
    s1 = build_state(pt2, pt2_map, solve_level(pt2, 1))
    with pytest.raises(ValueError):
        susy_partner(pt2, pt2_map, s1)


def test_pt2_partner_is_shape_invariant(pt2, pt2_map, grounds):
    # the PT2 partner is PT2(A - alpha, B + alpha) lifted by E(1) = 8
    from natanzon import preset_pt2
    from natanzon.potential import potential_of_z

    part = susy_partner(pt2, pt2_map, grounds["pt2"])
    ref = potential_of_z(preset_pt2(3.5, 2.5, 1.0), pt2_map.z, pt2_map.w)
    rel = np.abs(part.V_partner - ref - 8.0) / (1.0 + np.abs(ref))
    assert np.max(rel) < 1e-10


def test_constant_ground_gives_zero_superpotential():
    x = np.linspace(0, 1, 50)
    phi = np.ones_like(x)
    W, dW = superpotential(phi, np.zeros_like(x), np.zeros_like(x))
    assert np.all(W == 0) and np.all(dW == 0)
    V = np.full_like(x, 2.5)
    V_rec, V_part = partner_from_arrays(phi, 0 * x, 0 * x, 2.5)
    assert np.array_equal(V_rec, V) and np.array_equal(V_part, V)


@pytest.mark.parametrize("name", ["pt2", "rm", "generic"])
def test_partner_degeneracy(name, grounds, request):
    p = request.getfixturevalue(name)
    zm = request.getfixturevalue(name + "_map")
    levels = enumerate_levels(p)
    fd = partner_fd_levels(p, zm, grounds[name], len(levels) - 1)
    assert fd.complete
    for got, lv in zip(fd.eigenvalues, levels[1:]):
        assert got == pytest.approx(lv.E, rel=1e-3)


@pytest.mark.parametrize("name", ["pt2", "rm"])
def test_presets_distinct(name, grounds, request):
    p = request.getfixturevalue(name)
    zm = request.getfixturevalue(name + "_map")
    step = satellite_params(p, grounds[name].level, "up", "isospectral")
    res = compare_satellite_vs_susy(p, zm, step, grounds[name])
    assert res.verdict == "distinct"
    assert res.sup_norm_diff > 1e-3 * (1 + res.sup_norm_ref)


def test_self_comparison():
    V = np.sin(np.linspace(0, 3, 200)) * 7
    res = compare_potentials(V, 1.25, V.copy(), 1.25)
    assert res.sup_norm_diff < 1e-12 and res.verdict != "distinct"


def test_constant_offset_is_not_a_difference():
    V = np.cos(np.linspace(-2, 2, 100))
    assert compare_potentials(V, 0.0, V + 5.0, 5.0).verdict == "equivalent"


def test_comparison_independent_of_closure(pt2, pt2_map, grounds):
    # closures differ by a constant, so the verdict and the norm do not change
    lv = grounds["pt2"].level
    a = compare_satellite_vs_susy(pt2, pt2_map, satellite_params(pt2, lv, "up", "isospectral"), grounds["pt2"])
    b = compare_satellite_vs_susy(pt2, pt2_map, satellite_params(pt2, lv, "up", "ground-zero"), grounds["pt2"])
    assert a.sup_norm_diff == pytest.approx(b.sup_norm_diff, rel=1e-9)
