"""
Og'ir zarralar juftligining bog'langan holatlari.
Bound-state spectrum of the heavy pair in an effective potential v(rho).

Nol burchak momentida radial tenglama:
    chi'' + chi'/rho + beta (E - v(rho)) chi = 0.

x = ln(rho) o'zgaruvchisida birinchi hosila yo'qoladi:
    chi_xx + q(x) chi = 0,   q = beta rho^2 (E - v),
va Numerov sxemasi shu to'rda ishlaydi. Chiqishda u = chi sqrt(rho).

WKB qismi: faza phi(R, R_E) = int sqrt(beta (E - v)) dR + theta_E,
kvantlash sharti phi(1, R_n) = pi n, E_n = v(R_n).
"""

import math
import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, NamedTuple, Optional, Tuple, Union

import numpy as np
from scipy.integrate import quad
from scipy import special
from scipy.optimize import brentq

from qc.config import (
    ROOT_RTOL,
    ROOT_XTOL,
    ROOT_MAX_ITER,
    WKB_ABS_TOL,
    WKB_QUAD_LIMIT,
    WKB_SEARCH_RHO_MAX,
    WKB_SEARCH_POINTS_PER_DECADE,
    NUMEROV_RHO_MIN,
    NUMEROV_RHO_MAX,
    NUMEROV_STEP,
    NUMEROV_MIN_STEPS_PER_WAVELENGTH,
    NUMEROV_DECAY_CUTOFF,
    NUMEROV_RENORM,
    NUMEROV_ENERGY_RTOL,
    NUMEROV_ENERGY_FLOOR,
    NUMEROV_BISECT_MAX_ITER,
    ZERO_ENERGY_START_Z,
    ZERO_ENERGY_TAIL_STEPS,
    FIT_MIN_LEVELS,
    DEFAULT_N_MIN,
    DEFAULT_N_MAX,
)
from qc.errors import (
    DomainError,
    NoRootError,
    NumericalError,
    GridTooCoarseError,
    LevelNotSupportedError,
    InsufficientLevelsError,
    ResonanceError,
)
from qc.twobody import ModelParams
from qc.adiabatic import (
    ASYMPTOTIC_KINDS,
    POTENTIAL_KINDS,
    PotentialCurve,
    asymptotic_potential,
    range_r1_scale,
    tabulate_potential,
)

logger = logging.getLogger(__name__)

Potential = Union[PotentialCurve, Callable]

METHODS = ("wkb_closed", "wkb_quadrature", "numerov")


# ─── Natija turlari / Result types ───

class SpectrumFit(NamedTuple):
    """ln(n^2 |E_n|) = ln E0 - slope n^2 modeli."""
    e0: float
    slope: float
    r_squared: float


@dataclass(frozen=True)
class BoundLevel:
    n: int
    energy: float
    outer_turning_point: float


@dataclass
class BoundSpectrum:
    """Tartiblangan sathlar, usul belgisi va (ixtiyoriy) model moslashi."""
    method: str
    levels: List[BoundLevel]
    fit: Optional[SpectrumFit] = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise DomainError(f"Noma'lum spektr usuli: {self.method}")
        energies = [lvl.energy for lvl in self.levels]
        if any(e >= 0 for e in energies):
            raise NumericalError(f"Bog'langan sath energiyasi manfiy bo'lishi kerak: {energies}")
        if any(b <= a for a, b in zip(energies, energies[1:])):
            raise NumericalError(f"Sathlar n bo'yicha o'smayapti: {energies}")

    @property
    def energies(self) -> np.ndarray:
        return np.array([lvl.energy for lvl in self.levels])

    @property
    def quantum_numbers(self) -> np.ndarray:
        return np.array([lvl.n for lvl in self.levels])


@dataclass
class RadialSolution:
    """Numerov yechimi: rho to'ri, u = chi sqrt(rho), tugunlar soni."""
    grid: np.ndarray
    u_values: np.ndarray
    node_count: int
    energy: float


# ─── Potensial yordamchilari / Potential helpers ───

def _scalar(potential: Potential, rho: float) -> float:
    return float(np.asarray(potential(rho), dtype=float))


def truncated_potential(potential: Potential, rho_cut: float) -> Callable:
    """rho > rho_cut da v = 0 (chekli chuqurlik)."""
    if not rho_cut > 0:
        raise DomainError(f"Kesish radiusi musbat bo'lishi kerak: {rho_cut}")

    def truncated(rho):
        r = np.asarray(rho, dtype=float)
        v = np.where(r > rho_cut, 0.0, np.asarray(potential(r), dtype=float))
        return float(v) if v.ndim == 0 else v

    truncated.__name__ = f"truncated_{getattr(potential, '__name__', 'potential')}"
    return truncated


def resolve_potential(params: ModelParams, kind: str, workers: int = 1) -> Potential:
    """
    Potensial turi bo'yicha chaqiriladigan v(rho).

    Asimptotik formulalar faqat R < R1 da o'rinli, shuning uchun rezonansdan
    tashqarida ular R1 da kesiladi.
    """
    if kind not in POTENTIAL_KINDS:
        raise DomainError(f"Noma'lum potensial turi: {kind}")
    if kind in ASYMPTOTIC_KINDS:
        potential = asymptotic_potential(kind)
        if not params.at_resonance:
            potential = truncated_potential(potential, range_r1_scale(params).numeric)
        return potential
    return tabulate_potential(kind, params, workers=workers)


def _domain_start(potential: Potential, rho_floor: float = 1.0) -> float:
    """rho >= rho_floor dan boshlab v chekli bo'lgan birinchi nuqta."""
    if isinstance(potential, PotentialCurve):
        return max(rho_floor, potential.rho_min)
    if _scalar(potential, rho_floor) < math.inf:
        return rho_floor
    grid = np.geomspace(rho_floor, WKB_SEARCH_RHO_MAX, 12 * WKB_SEARCH_POINTS_PER_DECADE)
    finite = np.isfinite(np.asarray(potential(grid), dtype=float))
    if not finite.any():
        raise DomainError("Potensial hamma joyda cheksiz")
    i = int(np.argmax(finite))
    if i == 0:
        return float(grid[0])
    return float(brentq(lambda r: 1.0 if math.isinf(_scalar(potential, r)) else -1.0,
                        grid[i - 1], grid[i], rtol=ROOT_RTOL, xtol=ROOT_XTOL)) * (1.0 + 1e-12)


def outer_turning_point(
    potential: Potential,
    energy: float,
    rho_start: float,
    rho_max: float = WKB_SEARCH_RHO_MAX,
) -> float:
    """rho_start dan o'ngda v(R_E) = E bo'lgan eng tashqi nuqta."""
    if not 0 < rho_start < rho_max:
        raise DomainError(f"Qidiruv oralig'i noto'g'ri: [{rho_start}, {rho_max}]")
    n_points = max(16, int(math.ceil(math.log10(rho_max / rho_start) * WKB_SEARCH_POINTS_PER_DECADE)))
    grid = np.geomspace(rho_start, rho_max, n_points)
    allowed = np.asarray(potential(grid), dtype=float) < energy
    if not allowed.any():
        raise NoRootError(f"E = {energy:.6g} da klassik ruxsat etilgan soha yo'q (rho >= {rho_start:.6g})")
    i = int(np.nonzero(allowed)[0][-1])
    if i == n_points - 1:
        raise NoRootError(
            f"E = {energy:.6g} uchun rho < {rho_max:.3g} da tashqi burilish nuqtasi yo'q"
        )
    return float(brentq(
        lambda r: _scalar(potential, r) - energy, grid[i], grid[i + 1],
        xtol=ROOT_XTOL, rtol=ROOT_RTOL, maxiter=ROOT_MAX_ITER,
    ))


# ─── WKB ───

def accumulated_phase(
    energy: float,
    rho_a: float,
    rho_b: float,
    potential: Potential,
    beta: float,
) -> float:
    """int_{rho_a}^{rho_b} sqrt(beta max(E - v, 0)) dR, ln(rho) bo'yicha."""
    if not 0 < rho_a <= rho_b:
        raise DomainError(f"Integral chegaralari noto'g'ri: [{rho_a}, {rho_b}]")
    if rho_a == rho_b:
        return 0.0

    def integrand(x):
        r = math.exp(x)
        return math.sqrt(max(beta * (energy - _scalar(potential, r)), 0.0)) * r

    value, _ = quad(integrand, math.log(rho_a), math.log(rho_b),
                    epsabs=WKB_ABS_TOL, limit=WKB_QUAD_LIMIT)
    return value


def wkb_phase_quadrature(
    energy: float,
    rho_lower: float,
    potential: Potential,
    beta: float,
    theta_e: float = 0.0,
    rho_turn: Optional[float] = None,
) -> float:
    """
    phi = int_{R}^{R_E} sqrt(beta (E - v)) dR + theta_E.

    Burilish nuqtasidagi ildiz singulyarligi x = x_E - (x_E - x_l) t^2
    almashtirishi bilan yo'qotiladi.
    """
    if energy > 0:
        raise DomainError(f"WKB fazasi E <= 0 uchun: E = {energy}")
    v_lower = _scalar(potential, rho_lower)
    if not v_lower < energy:
        if math.isclose(v_lower, energy, rel_tol=1e-12, abs_tol=0.0):
            return theta_e
        raise DomainError(
            f"rho = {rho_lower} klassik taqiqlangan sohada: v = {v_lower:.6g} >= E = {energy:.6g}"
        )
    if rho_turn is None:
        rho_turn = outer_turning_point(potential, energy, rho_lower)
    if rho_turn <= rho_lower:
        return theta_e

    x_turn = math.log(rho_turn)
    width = x_turn - math.log(rho_lower)

    def integrand(t):
        r = math.exp(x_turn - width * t * t)
        k2 = beta * (energy - _scalar(potential, r))
        return math.sqrt(max(k2, 0.0)) * r * 2.0 * width * t

    value, _ = quad(integrand, 0.0, 1.0, epsabs=WKB_ABS_TOL, limit=WKB_QUAD_LIMIT)
    return value + theta_e


def wkb_phase_closed(rho: float, rho_turn: float, beta: float, theta0: float = 0.0) -> float:
    """2 sqrt(beta) [sqrt(ln R_E) - sqrt(ln R)] + theta0, v = -1/(R^2 ln R) uchun."""
    if not rho > 1:
        raise DomainError(f"Yopiq faza R > 1 talab qiladi: R = {rho}")
    if rho_turn < rho:
        raise DomainError(f"R_E >= R bo'lishi kerak: R = {rho}, R_E = {rho_turn}")
    return 2.0 * math.sqrt(beta) * (math.sqrt(math.log(rho_turn)) - math.sqrt(math.log(rho))) + theta0


def closed_level_position(n: int, beta: float, theta0: float = 0.0) -> float:
    """2 sqrt(beta) sqrt(ln R_n) + theta0 = pi n  =>  R_n = exp((pi n - theta0)^2 / (4 beta))."""
    phase = math.pi * n - theta0
    if phase <= 0:
        raise LevelNotSupportedError(
            f"n = {n} sathi theta0 = {theta0:.6g} da qisqa masofa sohasida qoladi"
        )
    return math.exp(phase * phase / (4.0 * beta))


def calibrate_theta0(energy: float, n: int, beta: float) -> float:
    """v = -1/(R^2 ln R) dagi berilgan sath uchun theta0 = pi n - 2 sqrt(beta ln R_n)."""
    potential = asymptotic_potential("asympt_V")
    rho_n = outer_turning_point(potential, energy, 1.0 + 1e-9)
    return math.pi * n - 2.0 * math.sqrt(beta * math.log(rho_n))


def _quadrature_level(
    n: int,
    potential: Potential,
    beta: float,
    theta0: float,
    rho_lower: float,
    rho_top: float,
) -> BoundLevel:
    target = math.pi * n

    def mismatch(x):
        r = math.exp(x)
        return wkb_phase_quadrature(_scalar(potential, r), rho_lower, potential, beta, theta0, r) - target

    x_lo = math.log(rho_lower) + 1e-9
    x_hi = math.log(rho_top)
    if mismatch(x_hi) < 0:
        raise LevelNotSupportedError(
            f"n = {n} sathi uchun R_n > {rho_top:.6g}: potensial bu sathni ushlamaydi"
        )
    if mismatch(x_lo) > 0:
        raise LevelNotSupportedError(f"n = {n} sathi R = {rho_lower:.6g} dan ichkarida")
    x_n = brentq(mismatch, x_lo, x_hi, xtol=1e-12, rtol=ROOT_RTOL, maxiter=ROOT_MAX_ITER)
    rho_n = math.exp(x_n)
    return BoundLevel(n=n, energy=_scalar(potential, rho_n), outer_turning_point=rho_n)


def wkb_spectrum(
    params: ModelParams,
    n_min: int = DEFAULT_N_MIN,
    n_max: int = DEFAULT_N_MAX,
    potential_kind: str = "asympt_V",
    theta0: Optional[float] = None,
    potential: Optional[Potential] = None,
) -> BoundSpectrum:
    """
    WKB spektri: phi(1, R_n) = pi n, E_n = v(R_n).

    asympt_V uchun yopiq inversiya, boshqa turlar uchun kvadratura va
    R_n bo'yicha ikkiga bo'lish.
    """
    if not 1 <= n_min <= n_max:
        raise DomainError(f"1 <= n_min <= n_max bo'lishi kerak: n_min = {n_min}, n_max = {n_max}")
    beta = params.beta
    theta0 = params.theta0 if theta0 is None else theta0
    r1 = None if params.at_resonance else range_r1_scale(params).numeric

    levels: List[BoundLevel] = []
    if potential_kind == "asympt_V" and potential is None:
        v = asymptotic_potential("asympt_V")
        for n in range(n_min, n_max + 1):
            rho_n = closed_level_position(n, beta, theta0)
            if r1 is not None and rho_n > r1:
                raise LevelNotSupportedError(
                    f"n = {n}: R_n = {rho_n:.6g} > R1 = {r1:.6g}\n"
                    f"Rezonansdan tashqarida quasi-Kulon sathlari R1 gacha."
                )
            if rho_n <= 1.0:
                raise LevelNotSupportedError(f"n = {n}: R_n = {rho_n:.6g} <= 1")
            levels.append(BoundLevel(n=n, energy=float(v(rho_n)), outer_turning_point=rho_n))
        method = "wkb_closed"
    else:
        if potential is None:
            potential = (asymptotic_potential(potential_kind) if potential_kind in ASYMPTOTIC_KINDS
                         else tabulate_potential(potential_kind, params))
        rho_lower = _domain_start(potential)
        if isinstance(potential, PotentialCurve):
            rho_top = potential.rho_max if r1 is None else min(r1, potential.rho_max)
        else:
            rho_top = WKB_SEARCH_RHO_MAX if r1 is None else r1
        for n in range(n_min, n_max + 1):
            levels.append(_quadrature_level(n, potential, beta, theta0, rho_lower, rho_top))
        method = "wkb_quadrature"

    spectrum = BoundSpectrum(method=method, levels=levels)
    if len(levels) >= FIT_MIN_LEVELS:
        spectrum.fit = fit_spectrum_model(spectrum)
    logger.info(f"WKB spektri ({method}): {len(levels)} ta sath, n = {n_min}..{n_max}")
    return spectrum


# ─── Numerov ───

class NumerovSolver:
    """
    ln(rho) bo'yicha bir xil to'rda Numerov integratori.

    Potensial +inf bo'lgan boshlang'ich nuqtalar qattiq o'zak (devor);
    aks holda devor rho_min da, u(rho_min) = 0.
    """

    def __init__(
        self,
        potential: Potential,
        beta: float,
        rho_min: float = NUMEROV_RHO_MIN,
        rho_max: float = NUMEROV_RHO_MAX,
        points: Optional[int] = None,
    ):
        if not 0 < rho_min < rho_max:
            raise DomainError(f"Numerov oralig'i noto'g'ri: [{rho_min}, {rho_max}]")
        if not beta > 0:
            raise DomainError(f"beta > 0 bo'lishi kerak: {beta}")
        self.beta = beta
        self.x, self.h = self._log_grid(rho_min, rho_max, points)
        self.rho = np.exp(self.x)

        v = np.asarray(potential(self.rho), dtype=float) * np.ones_like(self.rho)
        if np.any(np.isnan(v)) or np.any(v == -np.inf):
            raise DomainError("Potensial to'rda NaN yoki -inf qiymat berdi")
        core = np.isinf(v)
        n_core = int(np.argmin(core)) if not core.all() else core.size
        if core[n_core:].any():
            raise DomainError("Potensial faqat ichki qattiq o'zakda +inf bo'lishi mumkin")
        self.hard_core = n_core > 0
        self.wall = max(n_core - 1, 0)
        if self.wall + 3 > self.rho.size:
            raise DomainError("Devordan keyin Numerov uchun nuqtalar yetarli emas")
        self.v = v

    @staticmethod
    def _log_grid(rho_min: float, rho_max: float, points: Optional[int]) -> Tuple[np.ndarray, float]:
        x0, x1 = math.log(rho_min), math.log(rho_max)
        intervals = int(math.ceil((x1 - x0) / NUMEROV_STEP)) if points is None else int(points) - 1
        if intervals < 2:
            raise DomainError(f"Numerov to'ri kamida 3 nuqta talab qiladi: points = {points}")
        h = (x1 - x0) / intervals
        # rho = 1 to'r nuqtasi bo'lsin
        if x0 < 0 < x1:
            h = -x0 / max(1, round(-x0 / h))
            intervals = int(math.ceil((x1 - x0) / h - 1e-9))
        return x0 + h * np.arange(intervals + 1), h

    def q(self, energy: float) -> np.ndarray:
        q = np.zeros_like(self.v)
        w = self.wall + 1 if self.hard_core else self.wall
        q[w:] = self.beta * self.rho[w:] ** 2 * (energy - self.v[w:])
        return q

    @property
    def v_min(self) -> float:
        return float(np.min(self.v[self.wall + 1:]))

    @property
    def v_tail(self) -> float:
        return float(self.v[-1])

    def integrate(self, energy: float, stop: Optional[int] = None) -> Tuple[np.ndarray, int]:
        """chi ni tashqariga integrallash. Returns (chi, oxirgi indeks)."""
        q = self.q(energy)
        h = self.h
        w = self.wall
        n = q.size
        c = h * h / 12.0

        allowed = np.nonzero(q[w + 1:] > 0)[0]
        last_allowed = w + 1 + int(allowed[-1]) if allowed.size else w + 1
        if allowed.size:
            worst = float(np.max(q[w + 1:last_allowed + 1])) * h * h
            if worst > (2.0 * math.pi / NUMEROV_MIN_STEPS_PER_WAVELENGTH) ** 2:
                raise GridTooCoarseError(
                    f"To'lqin uzunligi {NUMEROV_MIN_STEPS_PER_WAVELENGTH} qadamdan kichik "
                    f"(q h^2 = {worst:.3g}).\nKo'proq nuqta bering yoki NUMEROV_STEP ni kamaytiring."
                )

        f = (1.0 + c * q).tolist()
        ql = q.tolist()
        y = [0.0] * n
        y[w + 1] = h

        # devordagi q*chi limiti (Kulon tipidagi 1/x singulyarlik)
        if self.hard_core:
            g0 = 2.0 * ql[w + 1] * h - ql[w + 2] * 2.0 * h
            wall_term = c * g0 * (y[w + 1] / h)
        else:
            wall_term = 0.0

        end = n - 1 if stop is None else min(stop, n - 1)
        decay = 0.0
        for i in range(w + 1, end):
            prev = wall_term if i == w + 1 else f[i - 1] * y[i - 1]
            y[i + 1] = ((12.0 - 10.0 * f[i]) * y[i] - prev) / f[i + 1]
            if abs(y[i + 1]) > NUMEROV_RENORM:
                for j in range(w + 1, i + 2):
                    y[j] /= NUMEROV_RENORM
            if stop is None and i + 1 > last_allowed:
                decay += math.sqrt(-ql[i + 1]) * h
                if decay > NUMEROV_DECAY_CUTOFF:
                    end = i + 1
                    break
        return np.array(y[:end + 1]), end

    def node_count(self, chi: np.ndarray) -> int:
        inner = chi[self.wall + 1:]
        inner = inner[inner != 0]
        return int(np.count_nonzero(np.signbit(inner[1:]) != np.signbit(inner[:-1])))

    def solve(self, energy: float) -> RadialSolution:
        chi, end = self.integrate(energy)
        rho = self.rho[:end + 1]
        return RadialSolution(
            grid=rho,
            u_values=chi * np.sqrt(rho),
            node_count=self.node_count(chi),
            energy=energy,
        )


def numerov_integrate(
    potential: Potential,
    beta: float,
    energy: float,
    rho_min: float = NUMEROV_RHO_MIN,
    rho_max: float = NUMEROV_RHO_MAX,
    points: Optional[int] = None,
) -> RadialSolution:
    """Berilgan E <= 0 da radial tenglamani tashqariga integrallash."""
    if energy > 0:
        raise DomainError(f"numerov_integrate E <= 0 uchun: E = {energy}")
    return NumerovSolver(potential, beta, rho_min, rho_max, points).solve(energy)


def _bracket_level(
    solver: NumerovSolver,
    n: int,
    s_low: float,
    s_high: float,
    counts: Dict[float, int],
) -> Tuple[float, float]:
    """s = ln(-E) bo'yicha: N(E(s_deep)) = n - 1, N(E(s_shallow)) = n."""

    def count(s):
        if s not in counts:
            counts[s] = solver.node_count(solver.integrate(-math.exp(s))[0])
        return counts[s]

    deep, shallow = s_low, s_high   # deep: pastroq energiya (katta s)
    for _ in range(NUMEROV_BISECT_MAX_ITER):
        if count(deep) == n - 1 and count(shallow) == n:
            return deep, shallow
        mid = 0.5 * (deep + shallow)
        if count(mid) <= n - 1:
            deep = mid
        else:
            shallow = mid
    raise NumericalError(f"n = {n} sathi uchun tugunlar bo'yicha ajratish yaqinlashmadi")


def _refine_level(solver: NumerovSolver, e_deep: float, e_shallow: float) -> float:
    _, stop = solver.integrate(e_shallow)

    def tail(e):
        chi, _ = solver.integrate(e, stop=stop)
        return chi[-1]

    fa, fb = tail(e_deep), tail(e_shallow)
    if fa * fb < 0:
        return brentq(tail, e_deep, e_shallow, xtol=ROOT_XTOL, rtol=NUMEROV_ENERGY_RTOL,
                       maxiter=ROOT_MAX_ITER)

    # dum ishorasi o'zgarmadi: tugunlar bo'yicha bisektsiyani davom ettirish
    n_deep = solver.node_count(solver.integrate(e_deep)[0])
    lo, hi = e_deep, e_shallow
    for _ in range(NUMEROV_BISECT_MAX_ITER):
        if hi - lo <= NUMEROV_ENERGY_RTOL * abs(hi):
            break
        mid = 0.5 * (lo + hi)
        if solver.node_count(solver.integrate(mid)[0]) <= n_deep:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def numerov_spectrum(
    potential: Potential,
    beta: float,
    n_max: int,
    inner_bc: float = NUMEROV_RHO_MIN,
    rho_max: float = NUMEROV_RHO_MAX,
    points: Optional[int] = None,
    n_min: int = 1,
) -> BoundSpectrum:
    """
    Numerov spektri: n-sath n - 1 tugunga ega.

    inner_bc - ichki devor rho_min, u(rho_min) = 0 (qisqa masofa fizikasi).
    Potensial kamroq sath ushlasa, topilganlari qaytadi.
    """
    if not 1 <= n_min <= n_max:
        raise DomainError(f"1 <= n_min <= n_max bo'lishi kerak: {n_min}, {n_max}")
    solver = NumerovSolver(potential, beta, inner_bc, rho_max, points)

    if not solver.v_min < 0:
        logger.info("Potensial hamma joyda musbat: bog'langan sath yo'q")
        return BoundSpectrum(method="numerov", levels=[])
    threshold = min(solver.v_tail, 0.0)
    e_high = -NUMEROV_ENERGY_FLOOR if threshold == 0.0 else threshold * (1.0 + 1e-12)
    e_low = 0.99 * solver.v_min
    if not e_low < e_high:
        return BoundSpectrum(method="numerov", levels=[])

    s_low, s_high = math.log(-e_low), math.log(-e_high)
    counts: Dict[float, int] = {}
    counts[s_low] = solver.node_count(solver.integrate(e_low)[0])
    counts[s_high] = solver.node_count(solver.integrate(e_high)[0])
    available = counts[s_high]
    if counts[s_low] > 0:
        logger.warning(f"E = {e_low:.6g} dan pastda {counts[s_low]} ta sath bor, ular tashlab ketildi")

    levels: List[BoundLevel] = []
    for n in range(max(n_min, counts[s_low] + 1), min(n_max, available) + 1):
        deep, shallow = _bracket_level(solver, n, s_low, s_high, counts)
        energy = _refine_level(solver, -math.exp(deep), -math.exp(shallow))
        start = float(solver.rho[solver.wall + 1 + int(np.argmin(solver.v[solver.wall + 1:]))])
        turn = outer_turning_point(potential, energy, start, max(rho_max, WKB_SEARCH_RHO_MAX))
        levels.append(BoundLevel(n=n, energy=energy, outer_turning_point=turn))
        logger.debug(f"Numerov sathi n = {n}: E = {energy:.12g}, R_E = {turn:.6g}")

    if available < n_max:
        logger.info(f"Potensial faqat {available} ta sath ushlaydi (so'ralgan n_max = {n_max})")
    spectrum = BoundSpectrum(method="numerov", levels=levels)
    if len(levels) >= FIT_MIN_LEVELS:
        spectrum.fit = fit_spectrum_model(spectrum)
    return spectrum


# ─── Sathlar soni va model / Level count and spectrum model ───

def n0_estimate(params: ModelParams) -> float:
    """N0 = (1/pi) sqrt(2 beta ln(a1/2)); rezonansda +inf."""
    if params.at_resonance:
        return math.inf
    a1 = params.a1
    if a1 < 2.0:
        raise DomainError(f"N0 bahosi a1 >= 2 talab qiladi: a1 = {a1}")
    return math.sqrt(2.0 * params.beta * math.log(0.5 * a1)) / math.pi


def matching_radius(params: ModelParams) -> float:
    """
    R_N: yopiq nol energiya fazasi pi N0 ga teng bo'ladigan radius,
    2 sqrt(beta ln R_N) = pi N0  =>  R_N = sqrt(a1/2).
    """
    n0 = n0_estimate(params)
    return math.exp((math.pi * n0) ** 2 / (4.0 * params.beta))


def _zero_energy_start(beta: float, x: np.ndarray) -> np.ndarray:
    """theta0 = 0 fazali aniq yechim, chi ~ x^(1/4) sin(2 sqrt(beta x))."""
    z = 2.0 * np.sqrt(beta * x)
    return np.sqrt(x) * (special.jv(1, z) - special.yv(1, z)) / math.sqrt(2.0)


def bound_state_count(params: ModelParams, points: Optional[int] = None) -> int:
    """
    Nol energiya yechimining tugunlari: v = -1/(R^2 ln R), R_N da kesilgan.

    Yechim qisqa masofada theta0 = 0 fazasidan boshlanadi, shuning uchun
    yangi sath aynan N0 = n + 1/2 da (A0 qutbida) paydo bo'ladi.
    R_N dan tashqarida chi ln(rho) ga chiziqli; uning noli analitik qo'shiladi.
    """
    if params.at_resonance:
        raise ResonanceError("Aniq rezonansda sathlar soni cheksiz.")
    beta = params.beta
    rho_cut = matching_radius(params)
    x_cut = math.log(rho_cut)
    x_start = ZERO_ENERGY_START_Z ** 2 / (4.0 * beta)
    if x_cut <= x_start:
        return 0

    if points is None:
        intervals = max(2, int(math.ceil((x_cut - x_start) / NUMEROV_STEP)))
    else:
        intervals = int(points) - 1
    if intervals < 2:
        raise DomainError(f"Numerov to'ri kamida 3 nuqta talab qiladi: points = {points}")
    h = (x_cut - x_start) / intervals
    x = x_start + h * np.arange(intervals + 1 + ZERO_ENERGY_TAIL_STEPS)
    x[intervals] = x_cut
    potential = truncated_potential(asymptotic_potential("asympt_V"), rho_cut)
    q = np.where(x <= x_cut, -beta * np.exp(2.0 * x) * np.asarray(potential(np.exp(x)), dtype=float), 0.0)
    q[intervals] = beta / x_cut
    if float(np.max(q)) * h * h > (2.0 * math.pi / NUMEROV_MIN_STEPS_PER_WAVELENGTH) ** 2:
        raise GridTooCoarseError(f"Nol energiya to'ri juda siyrak: h = {h:.3g}, beta = {beta}")

    f = (1.0 + h * h * q / 12.0).tolist()
    y = [0.0] * x.size
    y[0], y[1] = (float(v) for v in _zero_energy_start(beta, x[:2]))
    for i in range(1, x.size - 1):
        y[i + 1] = ((12.0 - 10.0 * f[i]) * y[i] - f[i - 1] * y[i - 1]) / f[i + 1]

    chi = np.array(y)
    nonzero = chi[chi != 0]
    nodes = int(np.count_nonzero(np.signbit(nonzero[1:]) != np.signbit(nonzero[:-1])))
    # chiziqli dum nolga qarab ketsa, yana bitta tugun
    if chi[-1] * (chi[-1] - chi[-2]) < 0:
        nodes += 1
    logger.debug(f"Nol energiya tugunlari: {nodes} (R_N = {rho_cut:.6g}, N0 = {n0_estimate(params):.4f})")
    return nodes


def fit_spectrum_model(spectrum: Union[BoundSpectrum, List[BoundLevel]]) -> SpectrumFit:
    """Eng kichik kvadratlar: ln(n^2 |E_n|) = ln E0 - slope n^2."""
    levels = spectrum.levels if isinstance(spectrum, BoundSpectrum) else list(spectrum)
    if len(levels) < FIT_MIN_LEVELS:
        raise InsufficientLevelsError(
            f"Moslash uchun kamida {FIT_MIN_LEVELS} ta sath kerak, {len(levels)} ta berildi"
        )
    n2 = np.array([lvl.n for lvl in levels], dtype=float) ** 2
    y = np.log(n2 * np.abs([lvl.energy for lvl in levels]))
    p1, p0 = np.polyfit(n2, y, 1)
    residual = y - (p1 * n2 + p0)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r_squared = 1.0 if ss_tot == 0 else 1.0 - float(np.sum(residual ** 2)) / ss_tot
    return SpectrumFit(e0=float(math.exp(p0)), slope=float(-p1), r_squared=r_squared)
