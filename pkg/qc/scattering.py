"""
Atom-molekula sochilishi: A0 uzunligi, sigma0(k) kesimi va rezonanslar.
Atom-molecule scattering observables.

    A0      = R1 exp{ -(1/(2 beta)) pi N0 tan(pi N0) }
    sigma0  = (pi^2 / k) / [pi^2/4 + ln^2(k A0 e^gamma / 2)]
    a1^(n)  : N0(a1) = n + 1/2  =>  a1 = 2 exp[(pi^2 / (2 beta)) (n + 1/2)^2]

Moslash radiusi aniq R1 da olinadi, shuning uchun A0 ning mutlaq qiymati
O(1) konventsiya ko'paytuvchisiga ega; qutblar holati esa undan mustaqil.
"""

import math
import logging
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from qc.config import EULER_GAMMA, CROSS_SECTION_KR_WARN, POLE_COT_TOL, ROOT_RTOL
from qc.errors import DomainError, PoleError, NumericalError
from qc.twobody import ModelParams, p_wave_pole
from qc.adiabatic import range_r1_scale
from qc.heavy_dynamics import n0_estimate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ResonancePosition:
    """n-rezonans: aniq inversiya va katta-n asimptotikasi."""
    n: int
    a1_exact: float
    a1_asymptotic: float


@dataclass
class ScatteringObservables:
    n0: float
    a_molecule: float
    sigma_samples: List[Tuple[float, float]] = field(default_factory=list)
    resonances: List[Tuple[int, float]] = field(default_factory=list)

    def __post_init__(self):
        a1s = [a for _, a in self.resonances]
        if any(b <= a for a, b in zip(a1s, a1s[1:])):
            raise NumericalError(f"Rezonans pozitsiyalari o'smayapti: {a1s}")
        if any(not s > 0 for _, s in self.sigma_samples):
            raise NumericalError("sigma0 musbat bo'lishi kerak")


@dataclass
class ResonanceScan:
    """a1 to'ri bo'ylab N0, A0 jadvali; qutbda A0 = nan."""
    a1: np.ndarray
    n0: np.ndarray
    a_molecule: np.ndarray
    poles: List[Tuple[int, float]]

    def get_summary(self) -> dict:
        return {
            "points": int(self.a1.size),
            "poles": len(self.poles),
            "a1_range": (float(self.a1[0]), float(self.a1[-1])) if self.a1.size else None,
        }


def cross_section(k: float, a0_molecule: float) -> float:
    """Past energiyadagi to'liq atom-molekula kesimi."""
    if not k > 0:
        raise DomainError(f"k > 0 bo'lishi kerak: {k}")
    if not a0_molecule > 0:
        raise DomainError(f"A0 > 0 bo'lishi kerak: {a0_molecule}")
    if k > CROSS_SECTION_KR_WARN:
        logger.warning(f"k r1 = {k:.3g} > {CROSS_SECTION_KR_WARN}: past energiya yaqinlashuvi chegarasida")
    log_term = math.log(0.5 * k * a0_molecule * math.exp(EULER_GAMMA))
    return (math.pi ** 2 / k) / (math.pi ** 2 / 4.0 + log_term ** 2)


def _a0_from(r1: float, n0: float, beta: float) -> float:
    if abs(math.cos(math.pi * n0)) < POLE_COT_TOL:
        raise PoleError(
            f"N0 = {n0:.12g} yarim butun: A0 qutbida (atom-molekula rezonansi)."
        )
    return r1 * math.exp(-(1.0 / (2.0 * beta)) * math.pi * n0 * math.tan(math.pi * n0))


def atom_molecule_length(params: ModelParams) -> float:
    """A0 = R1 exp{-(1/(2 beta)) pi N0 / cot(pi N0)}."""
    r1 = range_r1_scale(params).numeric
    return _a0_from(r1, n0_estimate(params), params.beta)


def resonance_positions(params: ModelParams, n_list: Iterable[int]) -> List[ResonancePosition]:
    """N0(a1) = n + 1/2 ning aniq yechimi va exp[(pi^2/(2 beta)) n^2] bahosi."""
    c = math.pi ** 2 / (2.0 * params.beta)
    out = []
    for n in n_list:
        if int(n) != n or n < 1:
            raise DomainError(f"Rezonans raqami n >= 1 butun bo'lishi kerak: {n}")
        out.append(ResonancePosition(
            n=int(n),
            a1_exact=2.0 * math.exp(c * (n + 0.5) ** 2),
            a1_asymptotic=math.exp(c * n * n),
        ))
    return out


def resonance_scan(params_base: ModelParams, a1_grid) -> ResonanceScan:
    """a1 bo'ylab N0 va A0; N0 yarim butunni kesib o'tgan joylarda qutblar."""
    grid = np.asarray(a1_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise DomainError("a1 to'ri bo'sh bo'lmagan 1D massiv bo'lishi kerak")
    if np.any(np.diff(grid) <= 0):
        raise DomainError("a1 to'ri qat'iy o'suvchi bo'lishi kerak")
    if np.any(~np.isfinite(grid)) or grid[0] <= 2.0 * math.e:
        raise DomainError(
            f"a1 to'ri chekli va a1 > 2e = {2.0 * math.e:.4f} bo'lishi kerak "
            f"(p-to'lqin bog'langan holati mavjud)"
        )

    def params_at(a1):
        return ModelParams(alpha=params_base.alpha, inv_a1=1.0 / a1, a0=params_base.a0,
                           r0=params_base.r0, theta0=params_base.theta0)

    n0 = np.array([n0_estimate(params_at(a)) for a in grid])
    a_mol = np.empty_like(n0)
    for i, a in enumerate(grid):
        try:
            a_mol[i] = atom_molecule_length(params_at(a))
        except PoleError:
            a_mol[i] = np.nan

    poles: List[Tuple[int, float]] = []
    shifted = np.floor(n0 - 0.5)
    for i in np.nonzero(np.diff(shifted) > 0)[0]:
        for n in range(int(shifted[i]) + 1, int(shifted[i + 1]) + 1):
            target = n + 0.5
            x = brentq(lambda lx: n0_estimate(params_at(math.exp(lx))) - target,
                       math.log(grid[i]), math.log(grid[i + 1]), rtol=ROOT_RTOL)
            poles.append((n, math.exp(x)))
            logger.debug(f"A0 qutbi: n = {n}, a1 = {math.exp(x):.6g}")

    logger.info(f"Rezonans skaneri: {grid.size} nuqta, {len(poles)} ta qutb")
    return ResonanceScan(a1=grid, n0=n0, a_molecule=a_mol, poles=poles)


def incident_momentum(energy: float, params: ModelParams) -> float:
    """(hbar k)^2 / M = E - eps1  =>  k = sqrt(beta (E - eps1))."""
    eps1 = 0.0 if params.at_resonance else p_wave_pole(params).epsilon1
    if not energy > eps1:
        raise DomainError(f"E = {energy:.6g} ostona eps1 = {eps1:.6g} dan yuqori bo'lishi kerak")
    return math.sqrt(params.beta * (energy - eps1))


def scattering_observables(
    params: ModelParams,
    k_values: Iterable[float],
    n_list: Optional[Iterable[int]] = None,
) -> ScatteringObservables:
    """Berilgan parametrlar uchun N0, A0, sigma0(k) va rezonanslar."""
    n0 = n0_estimate(params)
    a_mol = atom_molecule_length(params)
    samples = [(float(k), cross_section(float(k), a_mol)) for k in k_values]
    if n_list is None:
        n_list = range(1, int(math.floor(n0)) + 2)
    resonances = [(r.n, r.a1_exact) for r in resonance_positions(params, n_list)]
    return ScatteringObservables(n0=n0, a_molecule=a_mol, sigma_samples=samples, resonances=resonances)
