"""
Bessel K_m funksiyalarini test qilish.
"""

import os
import sys
import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy import special

# Loyiha root papkasini path ga qo'shish
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from qc.specfun import bessel_k, bessel_k_scaled, bessel_k_sequence
from qc.errors import DomainError


def k_quadrature(m: int, x: float) -> float:
    """K_m(x) = int_0^inf exp(-x cosh t) cosh(m t) dt."""
    value, _ = quad(lambda t: math.exp(-x * math.cosh(t)) * math.cosh(m * t), 0.0, np.inf,
                    epsabs=0.0, epsrel=1e-13, limit=400)
    return value


@pytest.mark.parametrize("m", [0, 1, 2, 3])
@pytest.mark.parametrize("x", [1e-3, 0.1, 0.5, 1.0, 1.9, 2.1, 5.0, 20.0])
def test_against_quadrature(m, x):
    """Integral ko'rinishi bilan solishtirish."""
    expected = k_quadrature(m, x)
    assert bessel_k(m, x) == pytest.approx(expected, rel=1e-10)


def k_quadrature_scaled(m: int, x: float) -> float:
    """e^x K_m(x) = int_0^inf exp(-x (cosh t - 1)) cosh(m t) dt, cho'qqida bo'lingan."""
    def exponent(t):
        return -x * (math.cosh(t) - 1.0) + m * t

    def integrand(t):
        return math.exp(exponent(t)) * 0.5 * (1.0 + math.exp(-2.0 * m * t))

    peak = math.asinh(m / x)
    end = peak + 1.0
    while exponent(end) > exponent(peak) - 60.0:
        end += 1.0
    pieces = [(0.0, peak), (peak, end)] if peak > 0 else [(0.0, end)]
    return sum(quad(integrand, a, b, epsabs=0.0, epsrel=1e-13, limit=400)[0] for a, b in pieces)


@pytest.mark.parametrize("m", [0, 1, 2, 3])
def test_against_quadrature_log_grid(m):
    """[1e-6, 100] da 20 ta log nuqta: integral bilan 1e-10 ichida."""
    worst = 0.0
    for x in np.geomspace(1e-6, 100.0, 20):
        expected = k_quadrature_scaled(m, float(x))
        rel = abs(bessel_k_scaled(m, float(x)) / expected - 1.0)
        worst = max(worst, rel)
        assert rel < 1e-10, f"m = {m}, x = {x:.4g}"
    print(f"   m = {m}: eng katta nisbiy xato {worst:.2e}")


@pytest.mark.parametrize("x", [1e6, 1e8])
def test_scaled_very_large_argument(x):
    """e^x K_m(x) chekli va sqrt(pi/(2x)) (1 + (4m^2 - 1)/(8x)) ga teng."""
    for m in range(4):
        value = bessel_k_scaled(m, x)
        assert math.isfinite(value)
        expected = math.sqrt(math.pi / (2 * x)) * (1 + (4 * m * m - 1) / (8 * x))
        assert value == pytest.approx(expected, rel=1e-10)
        assert value == pytest.approx(special.kve(m, x), rel=1e-12)
    assert bessel_k(0, x) == 0.0


def test_against_scipy_special():
    """scipy.special.kv bilan massiv bo'yicha solishtirish."""
    x = np.geomspace(1e-6, 50.0, 300)
    for m in range(5):
        np.testing.assert_allclose(bessel_k(m, x), special.kv(m, x), rtol=1e-11)
        np.testing.assert_allclose(bessel_k_scaled(m, x), special.kve(m, x), rtol=1e-11)


def test_known_values():
    print("K0(1), K1(1) ma'lum qiymatlari...")
    assert bessel_k(0, 1.0) == pytest.approx(0.42102443824070834, rel=1e-13)
    assert bessel_k(1, 1.0) == pytest.approx(0.60190723019723457, rel=1e-13)


def test_series_and_fraction_agree_at_split():
    """x = 2 atrofida ikki usul uzluksiz tutashadi."""
    left = bessel_k_scaled(0, 2.0)
    right = bessel_k_scaled(0, 2.0 + 1e-12)
    assert left == pytest.approx(right, rel=1e-11)


def test_small_argument_limits():
    x = 1e-8
    assert bessel_k(0, x) == pytest.approx(-math.log(0.5 * x) - 0.5772156649015329, rel=1e-12)
    assert bessel_k(1, x) * x == pytest.approx(1.0, rel=1e-12)


def test_scaled_large_argument():
    """Katta x: e^x K_m(x) -> sqrt(pi/(2x)), K_m o'zi 0 ga."""
    x = 1000.0
    assert bessel_k_scaled(0, x) == pytest.approx(math.sqrt(math.pi / (2 * x)), rel=2e-4)
    assert bessel_k(0, x) == pytest.approx(0.0, abs=1e-300)


def test_recurrence_identity():
    x = np.array([0.3, 1.5, 7.0])
    seq = bessel_k_sequence(4, x)
    for m in range(1, 4):
        np.testing.assert_allclose(seq[m + 1], seq[m - 1] + (2 * m / x) * seq[m], rtol=1e-13)


def test_sequence_shape_and_monotone_in_order():
    x = np.linspace(0.5, 5.0, 7)
    seq = bessel_k_sequence(3, x)
    assert seq.shape == (4, 7)
    assert np.all(np.diff(seq, axis=0) > 0)


def test_scalar_returns_float():
    assert isinstance(bessel_k(0, 1.0), float)
    assert isinstance(bessel_k(2, np.array([1.0, 2.0])), np.ndarray)


@pytest.mark.parametrize("x", [0.0, -1.0, np.nan])
def test_domain_error_for_nonpositive_argument(x):
    with pytest.raises(DomainError):
        bessel_k(0, x)


def test_domain_error_for_bad_order():
    with pytest.raises(DomainError):
        bessel_k(-1, 1.0)
    with pytest.raises(DomainError):
        bessel_k(1.5, 1.0)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
