"""
Ikkinchi turdagi modifikatsiyalangan Bessel funksiyalari K_m.
Modified Bessel functions of the second kind for integer orders.

  - K0, K1: x <= 2 da darajali qator, x > 2 da Steed zanjirli kasri (CF2)
  - K2 va undan yuqori: oldinga rekurrensiya (K uchun barqaror)
  - *_scaled: e^x * K_m(x), katta x da ham chekli

Barcha funksiyalar skalyar yoki numpy massiv qabul qiladi.
"""

import math
import logging
from typing import Tuple, Union

import numpy as np

from qc.config import (
    EULER_GAMMA,
    BESSEL_SERIES_SPLIT,
    BESSEL_SERIES_TERMS,
    BESSEL_CF_MAX_ITER,
    BESSEL_CF_EPS,
)
from qc.errors import DomainError, NumericalError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


def _prepare(order: int, x: ArrayLike) -> Tuple[np.ndarray, bool]:
    """Tartib va argumentni tekshirish, massivga aylantirish."""
    if int(order) != order or order < 0:
        raise DomainError(f"Bessel tartibi manfiy bo'lmagan butun son bo'lishi kerak: {order}")
    arr = np.asarray(x, dtype=float)
    if arr.size and not np.all(arr > 0):
        bad = arr[~(arr > 0)].ravel()[0]
        raise DomainError(f"K_m(x) faqat x > 0 uchun aniqlangan, berilgan x = {bad}")
    return arr, arr.ndim == 0


def _series_k01(x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """K0, K1 darajali qatori (x <= 2)."""
    t = 0.25 * x * x
    term0 = np.ones_like(x)          # t^k / (k!)^2
    term1 = np.ones_like(x)          # t^k / (k! (k+1)!)
    i0 = np.ones_like(x)
    s0 = np.zeros_like(x)
    i1 = np.ones_like(x)
    s1 = np.full_like(x, 1.0 - 2.0 * EULER_GAMMA)   # psi(1) + psi(2)
    harmonic = 0.0
    for k in range(1, BESSEL_SERIES_TERMS + 1):
        term0 = term0 * t / (k * k)
        term1 = term1 * t / (k * (k + 1))
        harmonic += 1.0 / k
        i0 += term0
        s0 += term0 * harmonic
        i1 += term1
        s1 += term1 * (2.0 * harmonic + 1.0 / (k + 1) - 2.0 * EULER_GAMMA)

    log_half = np.log(0.5 * x)
    k0 = -(log_half + EULER_GAMMA) * i0 + s0
    k1 = 1.0 / x + log_half * (0.5 * x) * i1 - 0.25 * x * s1
    return k0, k1


def _steed_k01_scaled(x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """e^x K0, e^x K1 Steed (Temme CF2) usulida, x > 2."""
    n = x.size
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = d.copy()
    delh = d.copy()
    q1 = np.zeros(n)
    q2 = np.ones(n)
    a1 = 0.25
    q = np.full(n, a1)
    c = a1
    a = -a1
    s = 1.0 + q * delh

    active = np.arange(n)
    for i in range(2, BESSEL_CF_MAX_ITER):
        a -= 2.0 * (i - 1)
        c = -a * c / i
        idx = active
        qnew = (q1[idx] - b[idx] * q2[idx]) / a
        q1[idx] = q2[idx]
        q2[idx] = qnew
        q[idx] += c * qnew
        b[idx] += 2.0
        d[idx] = 1.0 / (b[idx] + a * d[idx])
        delh[idx] = (b[idx] * d[idx] - 1.0) * delh[idx]
        h[idx] += delh[idx]
        dels = q[idx] * delh[idx]
        s[idx] += dels
        active = idx[np.abs(dels / s[idx]) >= BESSEL_CF_EPS]
        if active.size == 0:
            break
    else:
        raise NumericalError(
            f"K0/K1 zanjirli kasri {BESSEL_CF_MAX_ITER} iteratsiyada yaqinlashmadi"
        )

    k0e = np.sqrt(math.pi / (2.0 * x)) / s
    k1e = k0e * (x + 0.5 - a1 * h) / x
    return k0e, k1e


def _k01_scaled(x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    flat = x.ravel()
    k0e = np.empty_like(flat)
    k1e = np.empty_like(flat)

    small = flat <= BESSEL_SERIES_SPLIT
    if np.any(small):
        xs = flat[small]
        k0, k1 = _series_k01(xs)
        scale = np.exp(xs)
        k0e[small] = k0 * scale
        k1e[small] = k1 * scale
    if np.any(~small):
        k0e[~small], k1e[~small] = _steed_k01_scaled(flat[~small])

    return k0e.reshape(x.shape), k1e.reshape(x.shape)


def bessel_k_sequence(m_max: int, x: ArrayLike, scaled: bool = False) -> np.ndarray:
    """
    K_0 ... K_{m_max} ni birdaniga hisoblash.
    Returns array of shape (m_max + 1,) + shape(x).
    """
    arr, _ = _prepare(m_max, x)
    k0e, k1e = _k01_scaled(arr)
    out = np.empty((m_max + 1,) + arr.shape)
    out[0] = k0e
    if m_max >= 1:
        out[1] = k1e
    for m in range(1, m_max):
        # K_{m+1} = K_{m-1} + (2m/x) K_m
        out[m + 1] = out[m - 1] + (2.0 * m / arr) * out[m]
    if not scaled:
        out = out * np.exp(-arr)
    return out


def bessel_k_scaled(order: int, x: ArrayLike) -> ArrayLike:
    """e^x * K_order(x); x -> inf da sqrt(pi/(2x)) ga intiladi."""
    arr, is_scalar = _prepare(order, x)
    value = bessel_k_sequence(int(order), arr, scaled=True)[int(order)]
    return float(value) if is_scalar else value


def bessel_k(order: int, x: ArrayLike) -> ArrayLike:
    """K_order(x). x > 700 da natija 0 ga yaqin, bessel_k_scaled ishlating."""
    arr, is_scalar = _prepare(order, x)
    value = bessel_k_sequence(int(order), arr, scaled=True)[int(order)] * np.exp(-arr)
    return float(value) if is_scalar else value
