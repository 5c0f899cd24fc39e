import math

import numpy as np
import pytest

from bosegas import scattering as sc
from bosegas.quadrature import simpson


def soft_sphere_a_exact(R0, v0, mu):
    # piecewise solution: u = sinh(kappa r) inside, r - a outside
    kappa = math.sqrt(v0 / (2.0 * mu))
    return R0 * (1.0 - math.tanh(kappa * R0) / (kappa * R0))


def test_hard_core_scattering_length_is_radius():
    sol = sc.solve_zero_energy(sc.hard_core(1.0))
    assert abs(sol.a - 1.0) < 1e-12
    sol = sc.solve_zero_energy(sc.hard_core(0.37))
    assert abs(sol.a - 0.37) / 0.37 < 1e-12


def test_zero_potential_has_zero_scattering_length():
    sol = sc.solve_zero_energy(sc.soft_sphere(1.0, 0.0))
    assert sol.a == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("v0,mu", [(4.0, 1.0), (25.0, 1.0), (4.0, 0.5), (100.0, 2.0)])
def test_soft_sphere_matches_closed_form(v0, mu):
    sol = sc.solve_zero_energy(sc.soft_sphere(1.0, v0), mu)
    a_exact = soft_sphere_a_exact(1.0, v0, mu)
    assert abs(sol.a - a_exact) / a_exact < 1e-6


def test_grid_round_trip_refinement():
    for v in (sc.soft_sphere(1.0, 9.0),
              sc.tabulated([(0.0, 5.0), (0.5, 3.0), (1.0, 0.0)])):
        sol = sc.solve_zero_energy(v)
        assert abs(sol.a - sol.a_refined) / abs(sol.a) < 1e-6


def test_scaling_covariance():
    base = sc.solve_zero_energy(sc.soft_sphere(1.0, 9.0))
    unit = sc.soft_sphere(1.0 / base.a, 9.0 * base.a**2)
    for lam in (0.1, 1.0, 10.0):
        scaled = sc.scale_potential(unit, lam)
        assert abs(sc.solve_zero_energy(scaled).a - lam) / lam < 1e-8


def test_scale_potential_identity_and_hard_core():
    hc = sc.hard_core(1.0)
    same = sc.scale_potential(hc, 1.0)
    assert same.core_radius == 1.0
    small = sc.scale_potential(hc, 0.01)
    assert small.core_radius == pytest.approx(0.01)
    assert sc.solve_zero_energy(small).a == pytest.approx(0.01, rel=1e-12)


def test_scale_potential_requires_unit_base():
    with pytest.raises(ValueError):
        sc.scale_potential(sc.soft_sphere(1.0, 9.0), 0.5)


def test_energy_identity_hard_core_value():
    hc = sc.hard_core(1.0)
    sol = sc.solve_zero_energy(hc)
    res = sc.energy_identity_residual(sol, hc, 2.0)
    assert res["rhs"] == pytest.approx(4.0 * math.pi)
    assert res["residual"] < 1e-8
    # R -> infinity limit: value approaches 8 pi mu a
    res8 = sc.energy_identity_residual(sol, hc, 8.0)
    assert res8["lhs"] == pytest.approx(8.0 * math.pi * (1 - 1.0 / 8.0), rel=1e-8)


@pytest.mark.parametrize("R_over_R0", [2.0, 4.0, 8.0])
def test_energy_identity_residual_corpus(R_over_R0):
    for v in (sc.hard_core(1.0), sc.soft_sphere(1.0, 25.0),
              sc.tabulated([(0.0, 12.0), (0.3, 8.0), (0.7, 2.0), (1.0, 0.0)])):
        sol = sc.solve_zero_energy(v)
        res = sc.energy_identity_residual(sol, v, R_over_R0 * v.core_radius)
        assert res["residual"] < 1e-5


def test_s_parameter_hard_core_is_one():
    sol = sc.solve_zero_energy(sc.hard_core(1.0))
    assert abs(sc.s_parameter(sol) - 1.0) < 1e-9


def test_s_parameter_weak_potential_small_and_monotone():
    previous = 0.0
    for v0 in (0.5, 2.0, 8.0, 32.0):
        sol = sc.solve_zero_energy(sc.soft_sphere(1.0, v0))
        s = sc.s_parameter(sol)
        assert 0.0 < s < 1.0
        assert s > previous  # harder potential, more kinetic share
        previous = s


def test_s_parameter_bounded_over_random_corpus(rng):
    for _ in range(10):
        n_pts = rng.integers(4, 9)
        rs = np.sort(rng.uniform(0.05, 1.0, n_pts))
        rs[-1] = 1.0
        vs = rng.uniform(0.0, 30.0, n_pts)
        vs[-1] = 0.0
        v = sc.tabulated(list(zip(rs, vs)))
        sol = sc.solve_zero_energy(v)
        if sol.a > 1e-6:
            assert 0.0 < sc.s_parameter(sol) <= 1.0 + 1e-9


def test_s_parameter_errors_for_zero_a():
    sol = sc.solve_zero_energy(sc.soft_sphere(1.0, 0.0))
    with pytest.raises(ValueError):
        sc.s_parameter(sol)


def test_2d_hard_disc():
    sol = sc.solve_zero_energy(sc.hard_core(1.0, dimension=2))
    assert sol.dimension == 2
    assert abs(sol.a - 1.0) < 1e-4


def test_2d_soft_disc_refinement_and_positivity():
    sol = sc.solve_zero_energy(sc.soft_sphere(1.0, 25.0, dimension=2))
    assert 0.0 < sol.a < 1.0
    assert abs(sol.a - sol.a_refined) < 1e-6


def test_2d_zero_potential_rejected():
    with pytest.raises(ValueError, match="no logarithmic asymptote"):
        sc.solve_zero_energy(sc.soft_sphere(1.0, 0.0, dimension=2))


def test_minimality_of_scattering_solution(rng):
    # the zero-energy solution minimizes the quadratic form at fixed psi(R)
    v = sc.soft_sphere(1.0, 9.0)
    sol = sc.solve_zero_energy(v)
    r = sol.grid
    R = 4.0
    mask = r <= R
    rr = r[mask]
    c = sol.du[-1]
    psi0 = np.where(rr > 0, sol.u[mask] / np.maximum(rr, 1e-300), 1.0) / c

    def quad_form(psi):
        dp = np.gradient(psi, rr)
        return simpson((2.0 * dp**2 + v(rr) * psi**2) * rr**2, rr)

    base = quad_form(psi0)
    for _ in range(20):
        # smooth perturbation vanishing at r = R
        ks = rng.integers(1, 4)
        eta = np.zeros_like(rr)
        for k in range(1, ks + 1):
            eta += rng.normal() * np.sin(math.pi * k * rr / R)
        eta *= 0.05 / max(np.max(np.abs(eta)), 1e-12)
        assert quad_form(psi0 + eta) >= base - 1e-10


def test_invalid_inputs():
    with pytest.raises(ValueError):
        sc.soft_sphere(1.0, -2.0)
    with pytest.raises(ValueError):
        sc.tabulated([(0.5, 1.0), (0.2, 1.0)])
    with pytest.raises(ValueError):
        sc.tabulated([(0.0, 1.0), (0.5, -1.0)])
    with pytest.raises(ValueError):
        sc.GridSpec(n=4096, rmax_factor=2.0)
    sol = sc.solve_zero_energy(sc.hard_core(1.0))
    with pytest.raises(ValueError):
        sc.energy_identity_residual(sol, sc.hard_core(1.0), 0.5)


def test_potential_file_round_trip(tmp_path):
    v = sc.tabulated([(0.0, 12.0), (0.3, 8.0), (0.7, 2.0), (1.0, 0.0)])
    path = tmp_path / "pot.txt"
    sc.save_potential(v, path)
    back = sc.load_potential(path)
    assert back.dimension == 3
    assert back.core_radius == pytest.approx(1.0)
    a1 = sc.solve_zero_energy(v).a
    a2 = sc.solve_zero_energy(back).a
    assert a1 == pytest.approx(a2, rel=1e-12)


def test_solution_csv_export(tmp_path):
    sol = sc.solve_zero_energy(sc.hard_core(1.0))
    path = tmp_path / "sol.csv"
    sol.export_csv(path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "r,u"
    assert len(lines) == len(sol.grid) + 1
