"""
Og'ir-yengil zarralar juftligi uchun ikki o'lchamli effektiv radius modeli.
Two-dimensional heavy-light effective-range scattering model.

Barcha kattaliklar mavhum impuls o'qida (k = i*kappa) olinadi, shuning uchun
teskari T-matritsa funksiyalari haqiqiy sonlar qaytaradi:

    g_0(kappa) = (2/pi) [gamma + ln(kappa a0 / 2)]
    g_1(kappa) = (2/pi) [1/(a1 kappa^2) + ln kappa]
    T_m        = -(1/pi) / g_m
"""

import math
import logging
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy.optimize import brentq

from qc.config import (
    EULER_GAMMA,
    R0_MIN,
    DEFAULT_BETA,
    DEFAULT_INV_A1,
    DEFAULT_A0,
    DEFAULT_R0,
    DEFAULT_THETA0,
    NEAR_RESONANCE_INV_A1,
    POLE_BRACKET_FRACTION,
    ROOT_RTOL,
    ROOT_XTOL,
    ROOT_MAX_ITER,
)
from qc.errors import ParameterError, DomainError, PoleError, NoRootError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class ModelParams:
    """
    Model parametrlari (hbar = mu = r1 = 1 birliklarida).

    alpha  - m/M, yengil va og'ir massalar nisbati
    inv_a1 - 1/a1; 0 aniq rezonansni bildiradi
    a0     - s-to'lqin sochilish uzunligi
    r0     - potensial radiusi (faqat tekshiruvlar uchun)
    theta0 - qisqa masofa WKB fazasi
    """
    alpha: float
    inv_a1: float = DEFAULT_INV_A1
    a0: float = DEFAULT_A0
    r0: float = DEFAULT_R0
    theta0: float = DEFAULT_THETA0

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise ParameterError(f"alpha musbat chekli son bo'lishi kerak: {self.alpha}")
        if not (math.isfinite(self.inv_a1) and self.inv_a1 >= 0):
            raise ParameterError(
                f"inv_a1 manfiy bo'lmagan chekli son bo'lishi kerak: {self.inv_a1}\n"
                f"Rezonans uchun inv_a1 = 0 bering."
            )
        if not (math.isfinite(self.a0) and self.a0 > 0):
            raise ParameterError(f"a0 musbat bo'lishi kerak: {self.a0}")
        if not (math.isfinite(self.r0) and self.r0 >= R0_MIN):
            raise ParameterError(
                f"r0 = {self.r0} effektiv radius chegarasini buzadi.\n"
                f"r1 <= (1/2) e^gamma r0 shartidan r0 >= {R0_MIN:.6f} bo'lishi kerak."
            )
        if not (-math.pi <= self.theta0 <= math.pi):
            raise ParameterError(f"theta0 [-pi, pi] oralig'ida bo'lishi kerak: {self.theta0}")

    @classmethod
    def from_beta(
        cls,
        beta: float = DEFAULT_BETA,
        inv_a1: float = DEFAULT_INV_A1,
        a0: float = DEFAULT_A0,
        r0: float = DEFAULT_R0,
        theta0: float = DEFAULT_THETA0,
        a1: Optional[float] = None,
    ) -> "ModelParams":
        """beta = M/mu orqali qurish; a1 berilsa inv_a1 o'rniga ishlatiladi."""
        if not (math.isfinite(beta) and beta > 1.0):
            raise ParameterError(
                f"beta = M/mu > 1 bo'lishi kerak (beta = 1 + 1/(2 alpha)): {beta}"
            )
        if a1 is not None:
            if not a1 > 0:
                raise ParameterError(f"a1 musbat bo'lishi kerak: {a1}")
            inv_a1 = 0.0 if math.isinf(a1) else 1.0 / a1
        return cls(
            alpha=1.0 / (2.0 * (beta - 1.0)),
            inv_a1=inv_a1,
            a0=a0,
            r0=r0,
            theta0=theta0,
        )

    @property
    def beta(self) -> float:
        return (1.0 + 2.0 * self.alpha) / (2.0 * self.alpha)

    @property
    def a1(self) -> float:
        return math.inf if self.inv_a1 == 0 else 1.0 / self.inv_a1

    @property
    def at_resonance(self) -> bool:
        return self.inv_a1 == 0

    @property
    def near_resonance(self) -> bool:
        """a1 >> r1^2 rejimi."""
        return self.inv_a1 < NEAR_RESONANCE_INV_A1


@dataclass(frozen=True)
class PWaveBoundState:
    """p-to'lqin bog'langan holati: qutb kappa1 va energiya -kappa1^2/2."""
    kappa1: float
    epsilon1: float

    @classmethod
    def from_kappa(cls, kappa1: float) -> "PWaveBoundState":
        return cls(kappa1=kappa1, epsilon1=-0.5 * kappa1 * kappa1)


def _check_kappa(kappa: ArrayLike) -> np.ndarray:
    arr = np.asarray(kappa, dtype=float)
    if not np.all(arr > 0):
        raise DomainError(f"kappa > 0 bo'lishi kerak, berilgan: {kappa}")
    return arr


def _result(value: np.ndarray) -> ArrayLike:
    return float(value) if np.ndim(value) == 0 else value


def inv_t0(kappa: ArrayLike, params: ModelParams) -> ArrayLike:
    """s-to'lqin teskari T-matritsasi (haqiqiy qismi)."""
    k = _check_kappa(kappa)
    return _result((2.0 / math.pi) * (EULER_GAMMA + np.log(0.5 * k * params.a0)))


def inv_t1(kappa: ArrayLike, params: ModelParams) -> ArrayLike:
    """p-to'lqin teskari T-matritsasi; rezonansda faqat ln(kappa) qoladi."""
    k = _check_kappa(kappa)
    return _result((2.0 / math.pi) * (params.inv_a1 / (k * k) + np.log(k)))


def inv_t_higher(m: int, kappa: ArrayLike, params: ModelParams) -> ArrayLike:
    """
    |m| >= 2 kanallar uchun r0 radiusli qattiq disk bahosi.

    Past energiyada T_m ~ (kappa r0)^{2m}, ya'ni
        g_m = (-1)^{m+1} m! (m-1)! / pi * (2 / (kappa r0))^{2m}.
    """
    m = abs(int(m))
    if m < 2:
        raise DomainError(f"inv_t_higher faqat |m| >= 2 uchun: m = {m}")
    k = _check_kappa(kappa)
    prefactor = math.factorial(m) * math.factorial(m - 1) / math.pi
    sign = 1.0 if m % 2 == 1 else -1.0
    return _result(sign * prefactor * (2.0 / (k * params.r0)) ** (2 * m))


def inv_t(m: int, kappa: ArrayLike, params: ModelParams) -> ArrayLike:
    """Ixtiyoriy m kanal uchun teskari T-matritsa; T_{-m} = T_m."""
    m = abs(int(m))
    if m == 0:
        return inv_t0(kappa, params)
    if m == 1:
        return inv_t1(kappa, params)
    return inv_t_higher(m, kappa, params)


def t_matrix(m: int, kappa: float, params: ModelParams) -> float:
    """T_m(i kappa) = -(1/pi) / g_m(kappa)."""
    g = inv_t(m, kappa, params)
    if g == 0:
        raise PoleError(
            f"T_{m} qutbida: kappa = {kappa} da teskari T-matritsa nolga teng.\n"
            f"Bog'langan holat qutbidan uzoqroq kappa tanlang."
        )
    return -(1.0 / math.pi) / g


def p_wave_energy_estimate(params: ModelParams) -> float:
    """Yopiq ko'rinishdagi baho: eps1 ~ -1 / (a1 ln(a1/2))."""
    a1 = params.a1
    if not (math.isfinite(a1) and a1 > 2.0):
        raise DomainError(f"Baho a1 > 2 uchun aniqlangan: a1 = {a1}")
    return -1.0 / (a1 * math.log(0.5 * a1))


def p_wave_pole(params: ModelParams) -> PWaveBoundState:
    """
    p-to'lqin bog'langan holat qutbi: g_1(kappa1) = 0.

    g_1 minimumi kappa^2 = 2/a1 da; ildiz (0, sqrt(2/a1)) ichida va u
    faqat a1 > 2e bo'lganda mavjud.
    """
    if params.at_resonance:
        raise NoRootError(
            "Aniq rezonansda (inv_a1 = 0) p-to'lqin bog'langan holati yo'q:\n"
            "kappa1 -> 0, eps1 -> 0."
        )
    kappa_min = math.sqrt(2.0 * params.inv_a1)
    if inv_t1(kappa_min, params) >= 0:
        raise NoRootError(
            f"a1 = {params.a1:.6g} uchun g_1(kappa) = 0 yechimi yo'q.\n"
            f"Bog'langan holat faqat a1 > 2e = {2.0 * math.e:.6f} da mavjud."
        )
    kappa1 = brentq(
        lambda k: inv_t1(k, params),
        POLE_BRACKET_FRACTION * kappa_min,
        kappa_min,
        xtol=ROOT_XTOL,
        rtol=ROOT_RTOL,
        maxiter=ROOT_MAX_ITER,
    )
    state = PWaveBoundState.from_kappa(kappa1)
    logger.debug(f"p-to'lqin qutbi: a1 = {params.a1:.6g}, kappa1 = {kappa1:.12g}")
    return state
