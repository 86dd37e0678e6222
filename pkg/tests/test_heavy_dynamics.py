"""
Og'ir zarralar spektri: WKB (yopiq va kvadratura), Numerov, sathlar soni.
"""

import os
import sys
import math

import numpy as np
import pytest
from scipy import special
from scipy.optimize import brentq

# Loyiha root papkasini path ga qo'shish
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from qc.errors import (
    DomainError,
    InsufficientLevelsError,
    LevelNotSupportedError,
    NoRootError,
    NumericalError,
    ResonanceError,
)
from qc.twobody import ModelParams
from qc.adiabatic import asymptotic_potential, range_r1_scale, v_asympt
from qc.heavy_dynamics import (
    BoundLevel,
    BoundSpectrum,
    NumerovSolver,
    accumulated_phase,
    bound_state_count,
    calibrate_theta0,
    closed_level_position,
    fit_spectrum_model,
    matching_radius,
    n0_estimate,
    numerov_integrate,
    numerov_spectrum,
    outer_turning_point,
    resolve_potential,
    truncated_potential,
    wkb_phase_closed,
    wkb_phase_quadrature,
    wkb_spectrum,
)
from qc.scattering import resonance_positions

V = asymptotic_potential("asympt_V")


# ─── WKB ───

def test_closed_chain_is_exactly_linear():
    """v = -1/(R^2 ln R) uchun ln(n^2 |E_n|) = ln(4 beta/pi^2) - (pi^2/(2 beta)) n^2."""
    beta = 20.0
    spectrum = wkb_spectrum(ModelParams.from_beta(beta=beta), 4, 8)
    assert spectrum.method == "wkb_closed"
    assert list(spectrum.quantum_numbers) == [4, 5, 6, 7, 8]
    assert spectrum.fit.slope == pytest.approx(math.pi ** 2 / (2 * beta), rel=1e-10)
    assert spectrum.fit.e0 == pytest.approx(4 * beta / math.pi ** 2, rel=1e-10)
    assert spectrum.fit.r_squared == pytest.approx(1.0)


def test_closed_level_position():
    rho_n = closed_level_position(3, 20.0)
    # phi(e, R_n) = pi n - 2 sqrt(beta)
    assert wkb_phase_closed(math.e, rho_n, 20.0) == pytest.approx(3 * math.pi - 2 * math.sqrt(20.0))
    with pytest.raises(LevelNotSupportedError):
        closed_level_position(0, 20.0, theta0=0.5)


def test_levels_beyond_r1_not_supported():
    params = ModelParams.from_beta(beta=20.0, a1=1e3)
    assert len(wkb_spectrum(params, 4, 5).levels) == 2
    with pytest.raises(LevelNotSupportedError):
        wkb_spectrum(params, 4, 8)


def test_accumulated_phase_zero_energy():
    """E = 0 da integral yopiq ko'rinishga aynan teng."""
    beta = 10.0
    expected = 2 * math.sqrt(beta) * (math.sqrt(math.log(1e4)) - math.sqrt(math.log(3.0)))
    assert accumulated_phase(0.0, 3.0, 1e4, V, beta) == pytest.approx(expected, rel=1e-6)
    assert accumulated_phase(0.0, 5.0, 5.0, V, beta) == 0.0


def test_accumulated_phase_is_additive():
    """phi(a, c) = phi(a, b) + phi(b, c), burilish nuqtasigacha va undan keyin."""
    beta, rho_e = 20.0, 1e4
    energy = v_asympt(rho_e)
    for a, b, c in [(2.0, 50.0, rho_e), (1.5, 3.0, 700.0), (10.0, 2e3, 3e4)]:
        whole = accumulated_phase(energy, a, c, V, beta)
        parts = accumulated_phase(energy, a, b, V, beta) + accumulated_phase(energy, b, c, V, beta)
        print(f"   [{a}, {b}, {c}]: {whole:.10f} vs {parts:.10f}")
        assert parts == pytest.approx(whole, rel=1e-6)
    # taqiqlangan sohada faza o'smaydi
    assert accumulated_phase(energy, rho_e, 5 * rho_e, V, beta) == pytest.approx(0.0, abs=1e-9)


def test_quadrature_vs_closed_phase():
    """Yopiq faza E ni tashlab yuboradi: farq ~1%."""
    beta, rho_e = 20.0, 1e7
    energy = v_asympt(rho_e)
    quad_phase = wkb_phase_quadrature(energy, 3.0, V, beta, rho_turn=rho_e)
    closed = wkb_phase_closed(3.0, rho_e, beta)
    assert quad_phase < closed
    assert quad_phase == pytest.approx(closed, rel=0.02)


def test_quadrature_levels_shift_outward():
    params = ModelParams.from_beta(beta=20.0)
    closed = wkb_spectrum(params, 4, 6)
    quadrature = wkb_spectrum(params, 4, 6, potential=V)
    assert quadrature.method == "wkb_quadrature"
    # E ni hisobga olish fazani kamaytiradi: R_n tashqariga siljiydi
    for a, b in zip(closed.levels, quadrature.levels):
        assert b.outer_turning_point > a.outer_turning_point
        assert 0.3 < b.energy / a.energy < 0.8


def test_calibrate_theta0_roundtrip():
    beta, theta0 = 20.0, 0.3
    rho_n = closed_level_position(5, beta, theta0)
    assert calibrate_theta0(v_asympt(rho_n), 5, beta) == pytest.approx(theta0, abs=1e-8)


def test_outer_turning_point():
    assert outer_turning_point(V, v_asympt(100.0), 1.5) == pytest.approx(100.0, rel=1e-10)
    with pytest.raises(NoRootError):
        outer_turning_point(V, 0.0, 1.5)
    with pytest.raises(DomainError):
        outer_turning_point(V, -1.0, 10.0, 5.0)


def test_wkb_phase_domain():
    with pytest.raises(DomainError):
        wkb_phase_quadrature(1e-3, 3.0, V, 20.0)
    with pytest.raises(DomainError):
        wkb_phase_closed(0.5, 10.0, 20.0)


# ─── Numerov ───

def square_well_levels(beta, depth, radius, wall):
    """Devor (u(wall) = 0) va chuqur o'ra uchun aniq sathlar: J0/Y0 ichkarida, K0 tashqarida."""
    def matching(kappa):
        k = math.sqrt(beta * depth - kappa * kappa)
        j0w, y0w = special.j0(k * wall), special.y0(k * wall)
        chi = special.j0(k * radius) * y0w - special.y0(k * radius) * j0w
        dchi = k * (-special.j1(k * radius) * y0w + special.y1(k * radius) * j0w)
        return dchi * special.k0(kappa * radius) + kappa * special.k1(kappa * radius) * chi

    top = math.sqrt(beta * depth)
    grid = np.linspace(1e-4, top * (1 - 1e-9), 4000)
    values = [matching(x) for x in grid]
    kappas = [brentq(matching, grid[i], grid[i + 1], xtol=1e-15)
              for i in range(len(grid) - 1) if values[i] * values[i + 1] < 0]
    return sorted(-kappa ** 2 / beta for kappa in kappas)


def test_numerov_square_well():
    beta, depth, radius, wall = 1.0, 10.0, 1.0, 0.1
    exact = square_well_levels(beta, depth, radius, wall)
    assert exact, "analitik sath topilmadi"

    def well(rho):
        return np.where(np.asarray(rho) < radius, -depth, 0.0)

    spectrum = numerov_spectrum(well, beta, len(exact), inner_bc=wall, rho_max=50.0, points=40001)
    assert len(spectrum.levels) == len(exact)
    for level, e in zip(spectrum.levels, exact):
        assert level.energy == pytest.approx(e, rel=1e-4)


def test_numerov_quasi_coulomb_slope():
    """Rezonansda beta = 20, n = 4..8: moslashgan qiyalik nazariyaga 15% ichida."""
    beta = 20.0
    spectrum = numerov_spectrum(V, beta, 8, inner_bc=0.5, rho_max=1e5)
    levels = [lvl for lvl in spectrum.levels if lvl.n >= 4]
    assert [lvl.n for lvl in levels] == [4, 5, 6, 7, 8]
    fit = fit_spectrum_model(levels)
    print(f"   slope = {fit.slope:.5f}, nazariy = {math.pi ** 2 / (2 * beta):.5f}")
    assert fit.slope == pytest.approx(math.pi ** 2 / (2 * beta), rel=0.15)


@pytest.mark.parametrize("inner_bc", [0.1, 1.0])
def test_numerov_slope_insensitive_to_inner_wall(inner_bc):
    """rho_min [0.1, 1] oralig'ida: qiyalik nazariyaga 15% ichida qoladi."""
    beta = 20.0
    spectrum = numerov_spectrum(V, beta, 8, inner_bc=inner_bc, rho_max=1e5)
    levels = [lvl for lvl in spectrum.levels if lvl.n >= 4]
    assert [lvl.n for lvl in levels] == [4, 5, 6, 7, 8]
    fit = fit_spectrum_model(levels)
    print(f"   rho_min = {inner_bc}: slope = {fit.slope:.5f}")
    assert fit.slope == pytest.approx(math.pi ** 2 / (2 * beta), rel=0.15)


def test_numerov_grid_doubling():
    """To'r nuqtalari ikki barobar: E_n nisbiy o'zgarishi < 1e-6."""
    beta, rho_max = 20.0, 1e4
    size = NumerovSolver(V, beta, 0.5, rho_max).rho.size
    coarse = numerov_spectrum(V, beta, 6, inner_bc=0.5, rho_max=rho_max)
    fine = numerov_spectrum(V, beta, 6, inner_bc=0.5, rho_max=rho_max, points=2 * size - 1)
    assert [lvl.n for lvl in coarse.levels] == [lvl.n for lvl in fine.levels] == [1, 2, 3, 4, 5, 6]
    for a, b in zip(coarse.levels, fine.levels):
        rel = abs(a.energy / b.energy - 1.0)
        print(f"   n = {a.n}: E = {a.energy:.10g}, nisbiy farq = {rel:.2e}")
        assert rel < 1e-6


def test_wkb_follows_numerov_after_calibration():
    """theta0 ni n = 3 Numerov sathiga moslab, n >= 3 uchun |E_wkb/E_num - 1| < 0.5."""
    beta = 20.0
    numerov = numerov_spectrum(V, beta, 8, inner_bc=0.5, rho_max=1e5)
    e_num = {lvl.n: lvl.energy for lvl in numerov.levels}
    e3 = e_num[3]
    theta0 = 3 * math.pi - wkb_phase_quadrature(e3, 1.0 + 1e-9, V, beta)
    wkb = wkb_spectrum(ModelParams.from_beta(beta=beta), 3, 8, theta0=theta0, potential=V)
    assert wkb.levels[0].energy == pytest.approx(e3, rel=1e-3)
    for lvl in wkb.levels:
        ratio = lvl.energy / e_num[lvl.n]
        print(f"   n = {lvl.n}: E_wkb / E_num = {ratio:.4f}")
        assert abs(ratio - 1.0) < 0.5


def test_numerov_node_counts_match_levels():
    beta = 20.0
    spectrum = numerov_spectrum(V, beta, 5, inner_bc=0.5, rho_max=1e5)
    for lvl in spectrum.levels:
        sol = numerov_integrate(V, beta, 0.999 * lvl.energy, 0.5, 1e5)
        assert sol.node_count == lvl.n


def test_numerov_integrate_output():
    sol = numerov_integrate(V, 20.0, -1e-4, 0.5, 1e3, points=2001)
    assert sol.grid.shape == sol.u_values.shape
    assert sol.energy == -1e-4
    assert np.all(np.isfinite(sol.u_values))
    with pytest.raises(DomainError):
        numerov_integrate(V, 20.0, 1e-3)


def test_numerov_solver_validation():
    with pytest.raises(DomainError):
        NumerovSolver(V, 20.0, 2.0, 1.0)
    with pytest.raises(DomainError):
        NumerovSolver(V, 20.0, 0.5, 10.0, points=2)


def test_no_levels_in_repulsive_potential():
    spectrum = numerov_spectrum(lambda r: 1.0 / np.asarray(r) ** 2, 5.0, 3, inner_bc=0.5, rho_max=100.0)
    assert spectrum.levels == []


# ─── Sathlar soni ───

def test_n0_estimate():
    assert n0_estimate(ModelParams.from_beta(beta=10.0, a1=1e3)) == pytest.approx(3.549, abs=1e-3)
    assert n0_estimate(ModelParams.from_beta(beta=10.0, a1=1e6)) == pytest.approx(5.16, abs=1e-2)
    assert n0_estimate(ModelParams.from_beta()) == math.inf
    with pytest.raises(DomainError):
        n0_estimate(ModelParams.from_beta(a1=1.5))


def test_bound_state_count():
    counts = []
    for a1 in (1e3, 1e4, 1e5, 1e6):
        params = ModelParams.from_beta(beta=10.0, a1=a1)
        count = bound_state_count(params)
        assert abs(count - round(n0_estimate(params))) <= 1
        counts.append(count)
    print(f"   Sathlar soni: {counts}")
    assert counts[0] == 4 and counts[-1] == 5
    assert counts == sorted(counts)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_count_steps_at_a0_poles(n):
    """A0 qutbi a1_n dan o'tishda sathlar soni aynan bittaga oshadi."""
    beta = 10.0
    a1_n = resonance_positions(ModelParams.from_beta(beta=beta, a1=1e3), [n])[0].a1_exact
    below = bound_state_count(ModelParams.from_beta(beta=beta, a1=0.95 * a1_n))
    above = bound_state_count(ModelParams.from_beta(beta=beta, a1=1.05 * a1_n))
    print(f"   a1_{n} = {a1_n:.6g}: {below} -> {above}")
    assert below == n
    assert above - below == 1


def test_matching_radius():
    for a1 in (50.0, 1e3, 1e6):
        params = ModelParams.from_beta(beta=10.0, a1=a1)
        assert matching_radius(params) == pytest.approx(math.sqrt(a1 / 2), rel=1e-12)
    with pytest.raises(DomainError):
        matching_radius(ModelParams.from_beta(a1=1.5))


def test_bound_state_count_grid_independent():
    params = ModelParams.from_beta(beta=10.0, a1=1e4)
    assert bound_state_count(params, points=2001) == bound_state_count(params) == 4
    with pytest.raises(DomainError):
        bound_state_count(params, points=2)


def test_bound_state_count_at_resonance():
    with pytest.raises(ResonanceError):
        bound_state_count(ModelParams.from_beta())


# ─── Yordamchilar ───

def test_truncated_potential():
    cut = truncated_potential(V, 50.0)
    assert cut(60.0) == 0.0
    assert cut(10.0) == pytest.approx(v_asympt(10.0))
    np.testing.assert_array_equal(cut(np.array([1.0, 100.0])), [np.inf, 0.0])


def test_resolve_potential():
    params = ModelParams.from_beta(a1=1e3)
    r1 = range_r1_scale(params).numeric
    v = resolve_potential(params, "asympt_V")
    assert v(2 * r1) == 0.0
    assert resolve_potential(ModelParams.from_beta(), "asympt_V")(1e6) < 0
    with pytest.raises(DomainError):
        resolve_potential(params, "branch_III")


def test_fit_requires_four_levels():
    levels = [BoundLevel(n=n, energy=-1.0 / n ** 3, outer_turning_point=float(n)) for n in (1, 2, 3)]
    with pytest.raises(InsufficientLevelsError):
        fit_spectrum_model(levels)


def test_spectrum_validation():
    with pytest.raises(NumericalError):
        BoundSpectrum(method="numerov", levels=[
            BoundLevel(1, -1.0, 1.0), BoundLevel(2, -2.0, 2.0),
        ])
    with pytest.raises(NumericalError):
        BoundSpectrum(method="numerov", levels=[BoundLevel(1, 0.5, 1.0)])
    with pytest.raises(DomainError):
        BoundSpectrum(method="exact", levels=[])


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
