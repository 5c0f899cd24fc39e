import math

import numpy as np
import pytest

from bosegas import homogeneous as hb
from bosegas import scattering as sc
from bosegas.quadrature import simpson


def state_at_Y(Y, mu=1.0):
    return hb.GasState3D(3.0 * Y / (4.0 * math.pi), 1.0, mu)


def test_Y_definition():
    st = hb.GasState3D(1e-3, 0.1)
    assert st.Y == pytest.approx(4.0 * math.pi * 1e-3 * 0.1**3 / 3.0, rel=1e-15)


def test_length_scales_ordering():
    st = hb.GasState3D(1e-6, 0.1)
    ls = hb.LengthScales.from_state(st)
    assert ls.ordered
    assert ls.a < ls.mean_spacing < ls.healing


def test_upper_bound_limits():
    # a/b -> 0: every correction factor -> 1
    st = hb.GasState3D(1e-6, 1.0)
    val = hb.upper_bound_3d(st, b=1e9)
    assert val / st.leading == pytest.approx(1.0, rel=1e-8)
    with pytest.raises(ValueError):
        hb.upper_bound_3d(st, b=1.0)  # b = a singular
    with pytest.raises(ValueError):
        hb.upper_bound_3d(st, b=0.5)


def test_upper_bound_thermodynamic_form_dual_path():
    # independent re-implementation of the rational expression
    st = state_at_Y(1e-3)
    y3 = 1e-1
    expected = st.leading * (1 - y3 + y3**2 - 0.5 * y3**3) / (1 - y3) ** 8
    assert hb.upper_bound_3d(st) == pytest.approx(expected, rel=1e-13)


def test_upper_bound_finite_range_variant():
    st = hb.GasState3D(1e-6, 1.0)
    v_inf = hb.upper_bound_3d(st, b=5.0)
    v_fin = hb.upper_bound_3d(st, b=5.0, finite_range=True, R0=1.0)
    # finite-range expression is the sharper of the two here
    assert v_fin < v_inf
    with pytest.raises(ValueError):
        hb.upper_bound_3d(st, b=5.0, finite_range=True, R0=6.0)


def test_lower_bound_explicit_and_clamp():
    st = state_at_Y(1e-40)
    lb = hb.lower_bound_3d(st)
    assert not lb.clamped
    assert lb.value / st.leading == pytest.approx(1.0 - 8.9 * 1e-40 ** (1 / 17))
    lb2 = hb.lower_bound_3d(state_at_Y(1e-4))
    assert lb2.clamped and lb2.value == 0.0
    # Y = 0 limit approached: ratio -> 1
    tiny = state_at_Y(1e-300)
    assert hb.lower_bound_3d(tiny).value / tiny.leading == \
        pytest.approx(1.0, abs=1e-12)


def test_dyson_classic_constant():
    st = hb.GasState3D(2e-5, 0.3, 1.7)
    assert hb.dyson_classic_lower_bound(st) / st.leading == \
        1.0 / (10.0 * math.sqrt(2.0))


def test_lhy_coefficients_dual_path():
    assert hb.LHY_C1 == pytest.approx(4.814417779607521, abs=1e-14)
    assert hb.LHY_C2 == pytest.approx(19.653915177740107, abs=1e-13)
    st = state_at_Y(1e-8)
    x = st.rho * st.a**3
    expected = st.leading * (1 + hb.LHY_C1 * math.sqrt(x)
                             + hb.LHY_C2 * x * math.log(x))
    assert hb.lhy_reference(st) == pytest.approx(expected, rel=1e-14)


def test_bracketing_sweep():
    for Y in np.geomspace(1e-9, 1e-4, 25):
        st = state_at_Y(Y)
        lo = hb.lower_bound_3d(st).value
        assert lo <= hb.lhy_reference(st) <= hb.upper_bound_3d(st)


def test_error_exponent_fits():
    Ys = np.geomspace(1e-40, 1e-20, 11)
    errs = [1.0 - hb.lower_bound_3d(state_at_Y(Y)).value / state_at_Y(Y).leading
            for Y in Ys]
    slope = np.polyfit(np.log(Ys), np.log(errs), 1)[0]
    assert abs(slope - 1.0 / 17.0) < 0.1 / 17.0
    Ys = np.geomspace(1e-9, 1e-4, 11)
    errs = [hb.upper_bound_3d(state_at_Y(Y)) / state_at_Y(Y).leading - 1.0
            for Y in Ys]
    slope = np.polyfit(np.log(Ys), np.log(errs), 1)[0]
    assert abs(slope - 1.0 / 3.0) < 0.1 / 3.0


# --- finite-box bound -------------------------------------------------------

def test_finite_box_n1_vanishes():
    st = hb.GasState3D(1e-4, 0.05)
    assert hb.finite_box_lower_bound(1, 10.0, 1.0, 0.2, 0.3, st) == 0.0


def test_K_monotone_decreasing_in_n():
    ks = [hb.k_factor(n, 50.0, 5.0, 1.0, 0.4, 0.05)
          for n in np.unique(np.geomspace(2, 1e4, 400).astype(int))]
    assert all(ks[i] >= ks[i + 1] - 1e-15 for i in range(len(ks) - 1))


def test_epsilon_zero_reduces_to_pure_dyson_first_order():
    # with eps = 0 and the Temple factor off, the bound is exactly the
    # first-order nearest-neighbor expectation mu a <W_R>_0 lower bound
    st = hb.GasState3D(1e-3, 0.05)
    n, ell, R, R0 = 40.0, 8.0, 1.0, 0.2
    got = hb.finite_box_lower_bound(n, ell, R, R0, 0.0, st, include_temple=False)
    rho_cell = n / ell**3
    first_order = (4.0 * math.pi * st.mu * st.a * rho_cell * (1 - 1 / n) * n
                   * (1 - 2 * R / ell) ** 3
                   / (1 + 4 * math.pi * rho_cell * (R**3 - R0**3) / 3))
    assert got == pytest.approx(first_order, rel=1e-12)


def test_finite_box_trivial_bound_when_temple_fails():
    st = hb.GasState3D(1e-3, 0.5)
    # huge n drives the Temple denominator negative
    assert hb.finite_box_lower_bound(1e4, 5.0, 1.0, 0.2, 1e-6, st) == 0.0


def test_thermodynamic_cell_bound_positive_for_tiny_Y():
    st = state_at_Y(1e-25)
    out = hb.thermodynamic_cell_bound(st)
    assert 0.0 < out["value"] < st.leading
    assert out["eps"] == pytest.approx(1e-25 ** (1 / 17))


# --- 2D bounds ---------------------------------------------------------------

def test_bounds_2d_limits_and_errors():
    st = hb.GasState2D(1e-4, 1e-3)
    out = hb.bounds_2d(st)
    lead = 4.0 * math.pi * st.mu * st.rho / st.logY
    assert out.lower == pytest.approx(lead)
    assert out.b == pytest.approx((2.0 * math.pi * st.rho) ** -0.5)
    with pytest.raises(ValueError):
        hb.bounds_2d(st, b=1e-3)
    with pytest.raises(ValueError):
        hb.bounds_2d(st, b=0.5e-3)


def test_bounds_2d_converge_together():
    prev = None
    for rho_a2 in (1e-10, 1e-20, 1e-40, 1e-80):
        st = hb.GasState2D(1e-4, math.sqrt(rho_a2 / 1e-4))
        out = hb.bounds_2d(st)
        ratio = out.upper / out.lower
        assert abs(ratio - 1.0) < 3.0 * st.logY ** -0.2
        if prev is not None:
            assert abs(ratio - 1.0) < prev
        prev = abs(ratio - 1.0)


def test_bounds_2d_state_requires_dilute():
    with pytest.raises(ValueError):
        hb.GasState2D(1.0, 2.0)


# --- soft potentials and the radial-line lemma -------------------------------

def test_soft_potential_3d_height_and_norm():
    U = hb.soft_potential(2.0, 1.0, 3)
    assert U.height == pytest.approx(3.0 / 7.0)
    rep = hb.soft_potential_norm_report(U)
    assert rep["integral"] == pytest.approx(1.0, abs=1e-9)


def test_soft_potential_2d_norm_and_nu():
    U = hb.soft_potential(3.0, 1.5, 2, a=1.0)
    rep = hb.soft_potential_norm_report(U)
    assert rep["integral"] == pytest.approx(1.0, abs=1e-12)
    # Gauss-Legendre oracle for int ln(r/a) r dr
    x, w = np.polynomial.legendre.leggauss(60)
    r = 1.5 + 0.75 * (x + 1.0)
    quad = float(np.sum(0.75 * w * np.log(r) * r))
    assert quad == pytest.approx(hb.nu_2d(3.0, 1.5, 1.0), abs=1e-12)


def test_soft_potential_preconditions():
    with pytest.raises(ValueError):
        hb.soft_potential(1.0, 2.0, 3)
    with pytest.raises(ValueError):
        hb.soft_potential(3.0, 0.5, 2, a=1.0)  # needs R0 > a


def test_dyson_lemma_trivial_when_support_outside():
    v = sc.soft_sphere(1.0, 9.0)
    U = hb.soft_potential(6.0, 5.0, 3)
    r = np.linspace(1e-6, 4.0, 4000)
    psi = 1.0 - 0.3 / np.maximum(r, 0.3)
    margin = hb.dyson_lemma_residual(r, psi, v, U, 4.0, 3)
    assert margin >= 0.0


def test_dyson_lemma_near_saturation():
    # psi = zero-energy solution, U a narrow annulus far out: the inequality
    # saturates up to O(a/R)
    v = sc.soft_sphere(1.0, 25.0)
    sol = sc.solve_zero_energy(v)
    a = sol.a
    R = 200.0 * a
    U = hb.soft_potential(R, 0.995 * R, 3)
    c = sol.du[-1]
    psi_in = np.where(sol.grid > 0, sol.u / np.maximum(sol.grid, 1e-300), 0.0) / c
    # beyond the solver grid the solution is exactly 1 - a/r
    r_out = np.linspace(sol.grid[-1], 1.03 * R, 60000)[1:]
    r = np.concatenate([sol.grid, r_out])
    psi = np.concatenate([psi_in, 1.0 - a / r_out])
    lhs_scale = sol.mu * a  # per-line energy identity value ~ mu a (1 - a/R)
    margin = hb.dyson_lemma_residual(r, psi, v, U, 1.02 * R, 3, a=a)
    assert margin >= -1e-9 * lhs_scale
    assert margin < 0.01 * lhs_scale


def test_dyson_lemma_random_corpus_3d(rng):
    v = sc.soft_sphere(1.0, 9.0)
    sol_a = sc.solve_zero_energy(v).a
    U = hb.soft_potential(3.0, 1.0, 3)
    r = np.linspace(1e-6, 8.0, 6000)
    for _ in range(50):
        coef = rng.normal(size=4)
        psi = 1.0 + 0.0 * r
        for k, c in enumerate(coef, start=1):
            psi += 0.2 * c * np.sin(k * r / 8.0 * math.pi / 2)
        margin = hb.dyson_lemma_residual(r, psi, v, U, 8.0, 3, a=sol_a)
        assert margin >= -1e-9


def test_dyson_lemma_2d_variant(rng):
    v = sc.soft_sphere(1.0, 9.0, dimension=2)
    a2 = sc.solve_zero_energy(v).a
    U = hb.soft_potential(4.0, 1.5, 2, a=a2)
    r = np.linspace(1e-6, 8.0, 6000)
    for _ in range(20):
        coef = rng.normal(size=3)
        psi = 1.0 + 0.0 * r
        for k, c in enumerate(coef, start=1):
            psi += 0.2 * c * np.sin(k * r / 8.0 * math.pi / 2)
        assert hb.dyson_lemma_residual(r, psi, v, U, 8.0, 2) >= -1e-9


def test_dyson_lemma_rejects_bad_U():
    v = sc.soft_sphere(1.0, 9.0)
    U = hb.soft_potential(3.0, 1.0, 3)
    bad = hb.SoftPotential(U.R0, U.R, 3, U.height * 3.0)  # violates norm
    r = np.linspace(1e-6, 8.0, 100)
    with pytest.raises(ValueError):
        hb.dyson_lemma_residual(r, np.ones_like(r), v, bad, 8.0, 3, a=0.5)


# --- Temple ------------------------------------------------------------------

def test_temple_zero_variance_returns_mean():
    assert hb.temple_bound(1.3, 1.69, 2.0) == pytest.approx(1.3)


def test_temple_two_level_oracle():
    # H = diag(0, 1), state (cos t, sin t): bound <= 0 = E0 whenever <H> < E1
    for theta in np.linspace(0.05, 1.2, 17):
        c, s = math.cos(theta), math.sin(theta)
        hm = s * s
        h2 = s * s
        if 1.0 <= hm:
            continue
        assert hb.temple_bound(hm, h2, 1.0) <= 0.0 + 1e-14


def test_temple_gap_violation_raises():
    with pytest.raises(ValueError, match="Temple gap violated"):
        hb.temple_bound(1.0, 1.5, 1.0)
    with pytest.raises(ValueError):
        hb.temple_bound(1.0, 0.5, 2.0)  # negative variance


# --- cell combinatorics ------------------------------------------------------

def test_cell_distribution_examples():
    val, t = hb.cell_distribution_min(3.0, 12)
    assert val == pytest.approx(6.0) and t == pytest.approx(3.0)
    val, t = hb.cell_distribution_min(1.0, 5)
    assert val == pytest.approx(0.0)


def test_cell_distribution_brute_force_dominates():
    for k in range(1, 6):
        for p in range(1, 4 * k + 5):
            closed, _ = hb.cell_distribution_min(k, p)
            brute = hb.cell_distribution_brute_force(k, p)
            assert brute >= closed - 1e-12


def test_cell_distribution_equality_at_p_4k():
    for k in range(1, 6):
        closed, t = hb.cell_distribution_min(k, 4 * k)
        assert closed == pytest.approx(k * (k - 1.0))
        assert t == pytest.approx(k)
        assert hb.cell_distribution_brute_force(k, 4 * k) == pytest.approx(closed)


# --- lemma on (x, b) ---------------------------------------------------------

def test_lemma_xb_substitution_point():
    b = 0.5
    lb = abs(math.log(b))
    expected = (b * b / lb) * (1.0 / (2.0 * lb)) ** 2
    assert hb.lemma_xb_margin(b, b, 1.0) == pytest.approx(expected, rel=1e-12)


def test_lemma_xb_sweep(rng):
    x = rng.uniform(1e-12, 1 - 1e-12, 100000)
    b = rng.uniform(1e-12, 1 - 1e-12, 100000)
    k = rng.uniform(1.0, 1e6, 100000)
    assert float(np.min(hb.lemma_xb_margin(x, b, k))) >= -1e-12


def test_lemma_xb_near_one_finite():
    m = hb.lemma_xb_margin(0.999999999999, 1.0 - 1e-13, 1.0)
    assert np.isfinite(m) and m > 0


def test_lemma_xb_domain_errors():
    with pytest.raises(ValueError):
        hb.lemma_xb_margin(0.0, 0.5, 1.0)
    with pytest.raises(ValueError):
        hb.lemma_xb_margin(0.5, 1.0, 1.0)
    with pytest.raises(ValueError):
        hb.lemma_xb_margin(0.5, 0.5, 0.5)
