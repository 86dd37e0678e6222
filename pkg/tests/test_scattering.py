"""
Atom-molekula sochilishi: A0, sigma0(k) va rezonans pozitsiyalari.
"""

import os
import sys
import math
import logging

import numpy as np
import pytest

# Loyiha root papkasini path ga qo'shish
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from qc.config import EULER_GAMMA
from qc.errors import DomainError, NumericalError, PoleError
from qc.twobody import ModelParams, p_wave_pole
from qc.adiabatic import range_r1_scale
from qc.heavy_dynamics import n0_estimate
from qc.scattering import (
    ScatteringObservables,
    atom_molecule_length,
    cross_section,
    incident_momentum,
    resonance_positions,
    resonance_scan,
    scattering_observables,
)

BETA = 10.0


def params_at(a1, beta=BETA):
    return ModelParams.from_beta(beta=beta, a1=a1)


def test_cross_section_formula():
    k, a_mol = 1e-3, 50.0
    log_term = math.log(0.5 * k * a_mol * math.exp(EULER_GAMMA))
    expected = (math.pi ** 2 / k) / (math.pi ** 2 / 4 + log_term ** 2)
    assert cross_section(k, a_mol) == pytest.approx(expected, rel=1e-14)


def test_cross_section_maximum_at_unitarity():
    """ln(k A0 e^gamma / 2) = 0 da sigma0 = 4/k."""
    a_mol = 20.0
    k = 2.0 * math.exp(-EULER_GAMMA) / a_mol
    assert cross_section(k, a_mol) == pytest.approx(4.0 / k)


def test_cross_section_warns_outside_low_energy(caplog):
    with caplog.at_level(logging.WARNING, logger="qc.scattering"):
        cross_section(0.5, 10.0)
    assert any("k r1" in rec.message for rec in caplog.records)


def test_cross_section_domain():
    with pytest.raises(DomainError):
        cross_section(0.0, 10.0)
    with pytest.raises(DomainError):
        cross_section(1e-3, -1.0)


def test_resonance_positions_invert_n0():
    for pos in resonance_positions(params_at(1e3), [1, 2, 3, 4]):
        assert n0_estimate(params_at(pos.a1_exact)) == pytest.approx(pos.n + 0.5, rel=1e-12)
        c = math.pi ** 2 / (2 * BETA)
        assert pos.a1_asymptotic == pytest.approx(math.exp(c * pos.n ** 2))
        assert pos.a1_exact / pos.a1_asymptotic == pytest.approx(2 * math.exp(c * (pos.n + 0.25)))


def test_resonance_positions_domain():
    with pytest.raises(DomainError):
        resonance_positions(params_at(1e3), [0])
    with pytest.raises(DomainError):
        resonance_positions(params_at(1e3), [1.5])


def test_a0_pole_at_resonance_position():
    a1 = resonance_positions(params_at(1e3), [3])[0].a1_exact
    with pytest.raises(PoleError):
        atom_molecule_length(params_at(a1))


def test_a0_value():
    params = params_at(1e3)
    n0 = n0_estimate(params)
    r1 = range_r1_scale(params).numeric
    expected = r1 * math.exp(-(1 / (2 * BETA)) * math.pi * n0 * math.tan(math.pi * n0))
    assert atom_molecule_length(params) == pytest.approx(expected)


def test_a0_grows_towards_pole():
    """Qutbga o'ngdan (N0 -> n + 1/2 yuqoridan) yaqinlashganda A0 -> inf."""
    pole = resonance_positions(params_at(1e3), [3])[0].a1_exact
    far = atom_molecule_length(params_at(pole * 1.5))
    near = atom_molecule_length(params_at(pole * 1.01))
    assert near > far > 0


@pytest.mark.parametrize("n", [2, 3, 4])
def test_a0_minus_r1_changes_sign_across_pole(n):
    """a1_n dan pastda A0 < R1, yuqorida A0 > R1."""
    pole = resonance_positions(params_at(1e3), [n])[0].a1_exact
    for factor, sign in ((0.99, -1.0), (1.01, 1.0)):
        params = params_at(pole * factor)
        diff = atom_molecule_length(params) - range_r1_scale(params).numeric
        print(f"   n = {n}, a1 = {pole * factor:.6g}: A0 - R1 = {diff:.6g}")
        assert math.copysign(1.0, diff) == sign


@pytest.mark.parametrize("n", [2, 3, 4])
def test_a0_equals_r1_at_integer_n0(n):
    """N0 butun bo'lganda tan(pi N0) = 0 va A0 = R1."""
    a1 = 2.0 * math.exp(math.pi ** 2 * n ** 2 / (2 * BETA))
    params = params_at(a1)
    assert n0_estimate(params) == pytest.approx(n, rel=1e-12)
    assert atom_molecule_length(params) == pytest.approx(range_r1_scale(params).numeric, rel=1e-9)


def test_scan_pole_count_matches_positions():
    grid = np.geomspace(10.0, 1e6, 4 * 64 + 1)
    scan = resonance_scan(params_at(1e3), grid)
    expected = [p for p in resonance_positions(params_at(1e3), range(1, 10))
                if 10.0 <= p.a1_exact <= 1e6]
    assert [n for n, _ in scan.poles] == [p.n for p in expected] == [2, 3, 4]
    for (_, a1), p in zip(scan.poles, expected):
        assert a1 == pytest.approx(p.a1_exact, rel=1e-9)
    print(f"   Qutblar: {scan.poles}")
    summary = scan.get_summary()
    assert summary["points"] == grid.size and summary["poles"] == 3


def test_scan_validation():
    base = params_at(1e3)
    with pytest.raises(DomainError):
        resonance_scan(base, [100.0, 50.0])
    with pytest.raises(DomainError):
        resonance_scan(base, [5.0, 50.0])
    with pytest.raises(DomainError):
        resonance_scan(base, [])


def test_incident_momentum():
    assert incident_momentum(1e-4, ModelParams.from_beta(beta=BETA)) == pytest.approx(math.sqrt(BETA * 1e-4))
    params = params_at(1e3)
    eps1 = p_wave_pole(params).epsilon1
    assert incident_momentum(eps1 + 1e-6, params) == pytest.approx(math.sqrt(BETA * 1e-6), rel=1e-6)
    with pytest.raises(DomainError):
        incident_momentum(2 * eps1, params)


def test_scattering_observables():
    obs = scattering_observables(params_at(1e3), [1e-4, 1e-3])
    assert obs.n0 == pytest.approx(3.549, abs=1e-3)
    assert [n for n, _ in obs.resonances] == [1, 2, 3, 4]
    assert all(s > 0 for _, s in obs.sigma_samples)


def test_observables_validation():
    with pytest.raises(NumericalError):
        ScatteringObservables(n0=1.0, a_molecule=1.0, resonances=[(1, 100.0), (2, 50.0)])
    with pytest.raises(NumericalError):
        ScatteringObservables(n0=1.0, a_molecule=1.0, sigma_samples=[(1e-3, 0.0)])


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
