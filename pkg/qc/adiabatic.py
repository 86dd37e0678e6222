"""
Yengil zarraning adiabatik bog'lanish egri chiziqlari.
Light-particle adiabatic binding curves xi(rho) and effective potentials.

Og'ir zarralar orasidagi masofa rho = R/r1 da yengil zarraning bog'lanish
impulsi xi = kappa r1 ikki transsendent tenglamadan topiladi:

    I  : K0(z) - K2(z) -+ L1(xi) = 0
    II : [K2(z) + K0(z) +- L1(xi)] [K0(z) -+ L0(xi)] - 2 K1(z)^2 = 0

bu yerda z = xi rho, L1 = 1/(a1 xi^2) + ln xi, L0 = ln(xi e^gamma a0 / 2).
Potensial v(rho) = -xi(rho)^2 / 2.

Diqqat: xi1/xi2 asimptotikalari ichida rho~ = exp(1/2 - gamma) rho
ishlatiladi. Ochiq API har doim oddiy rho = R/r1 qabul qiladi.
"""

import math
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from qc.config import (
    EULER_GAMMA,
    XI_MIN,
    XI_MAX,
    XI_RHO_MAX,
    SCAN_POINTS_MIN,
    SCAN_POINTS_PER_DECADE,
    ROOT_RTOL,
    ROOT_XTOL,
    ROOT_MAX_ITER,
    RESIDUAL_TOL,
    POTENTIAL_POINTS_PER_DECADE,
    POTENTIAL_RHO_MIN,
    POTENTIAL_RHO_MAX_RESONANCE,
    POTENTIAL_RANGE_FACTOR,
)
from qc.errors import DomainError, NoRootError, ResonanceError
from qc.specfun import bessel_k_sequence
from qc.twobody import ModelParams, p_wave_pole

logger = logging.getLogger(__name__)

BRANCHES = ("I", "II")
SIGNS = ("plus", "minus")
BRANCH_KINDS = ("branch_I_plus", "branch_I_minus", "branch_II_plus", "branch_II_minus")
ASYMPTOTIC_KINDS = ("asympt_I0", "asympt_II0", "asympt_V")
POTENTIAL_KINDS = BRANCH_KINDS + ASYMPTOTIC_KINDS

# exp(1/2 - gamma): rho~ = RHO_SCALE * rho
RHO_SCALE = math.exp(0.5 - EULER_GAMMA)


# ─── Natija turlari / Result types ───

@dataclass(frozen=True)
class BranchRoot:
    """Bitta rho da tarmoq tenglamasining bitta ildizi."""
    rho: float
    xi: float
    branch: str
    sign: str
    converged: bool
    residual: float

    @property
    def energy(self) -> float:
        return -0.5 * self.xi * self.xi


@dataclass(frozen=True)
class RangeScale:
    """R1 = 1/kappa1 (sonli) va yopiq ko'rinish sqrt((a1/2) ln(a1/2))."""
    numeric: float
    closed_form: float


@dataclass(frozen=True, eq=False)
class PotentialCurve:
    """
    Jadvallangan effektiv potensial v(rho).

    Oraliqda ln(rho) bo'yicha kubik splayn. Birinchi nuqtadan chapda +inf
    (qattiq o'zak). Oxirgi nuqtadan o'ngda: rezonansda -1/(rho^2 ln rho)
    dumi, aks holda oxirgi qiymat (v -> eps1).
    """
    rho: np.ndarray
    v: np.ndarray
    kind: str
    params: ModelParams
    _spline: CubicSpline = field(init=False, repr=False)

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=float)
        v = np.asarray(self.v, dtype=float)
        if self.kind not in POTENTIAL_KINDS:
            raise DomainError(f"Noma'lum potensial turi: {self.kind}")
        if rho.ndim != 1 or rho.size < 2 or rho.shape != v.shape:
            raise DomainError(
                f"PotentialCurve kamida 2 ta (rho, v) juftlik talab qiladi: {rho.size} berildi"
            )
        if not np.all(np.diff(rho) > 0):
            raise DomainError("PotentialCurve: rho qat'iy o'suvchi bo'lishi kerak")
        if self.kind in BRANCH_KINDS and not np.all(v < 0):
            raise DomainError("Bog'langan tarmoq uchun v(rho) < 0 bo'lishi kerak")
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "_spline", CubicSpline(np.log(rho), v))

    @property
    def samples(self) -> List[Tuple[float, float]]:
        return list(zip(self.rho.tolist(), self.v.tolist()))

    @property
    def rho_min(self) -> float:
        return float(self.rho[0])

    @property
    def rho_max(self) -> float:
        return float(self.rho[-1])

    def __call__(self, rho):
        r = np.asarray(rho, dtype=float)
        out = np.full(r.shape, np.inf)
        inside = (r >= self.rho[0]) & (r <= self.rho[-1])
        out[inside] = self._spline(np.log(r[inside]))

        outside = r > self.rho[-1]
        if np.any(outside):
            r_last, v_last = self.rho[-1], self.v[-1]
            if self.params.at_resonance and r_last > 1:
                ro = r[outside]
                out[outside] = v_last * (r_last / ro) ** 2 * math.log(r_last) / np.log(ro)
            else:
                out[outside] = v_last
        return float(out) if out.ndim == 0 else out


# ─── Tarmoq tenglamalari / Branch equations ───

def _sign_value(sign: str) -> float:
    if sign == "plus":
        return 1.0
    if sign == "minus":
        return -1.0
    raise DomainError(f"sign 'plus' yoki 'minus' bo'lishi kerak: {sign}")


def _bessel_terms(xi: np.ndarray, rho: float) -> np.ndarray:
    z = xi * rho
    return bessel_k_sequence(2, z, scaled=True) * np.exp(-z)


def _check_args(xi, rho) -> np.ndarray:
    x = np.asarray(xi, dtype=float)
    if not np.all(x > 0):
        raise DomainError(f"xi > 0 bo'lishi kerak: {xi}")
    if not rho > 0:
        raise DomainError(f"rho > 0 bo'lishi kerak: {rho}")
    return x


def _l1(xi: np.ndarray, params: ModelParams) -> np.ndarray:
    return params.inv_a1 / (xi * xi) + np.log(xi)


def _l0(xi: np.ndarray, params: ModelParams) -> np.ndarray:
    return np.log(0.5 * xi * math.exp(EULER_GAMMA) * params.a0)


def branch1_residual(xi, rho: float, sign: str, params: ModelParams):
    """K0(xi rho) - K2(xi rho) -+ (1/(a1 xi^2) + ln xi)."""
    s = _sign_value(sign)
    x = _check_args(xi, rho)
    k = _bessel_terms(x, rho)
    res = k[0] - k[2] - s * _l1(x, params)
    return float(res) if res.ndim == 0 else res


def branch2_residual(xi, rho: float, sign: str, params: ModelParams):
    """[K2 + K0 +- L1] [K0 -+ L0] - 2 K1^2, z = xi rho."""
    s = _sign_value(sign)
    x = _check_args(xi, rho)
    k = _bessel_terms(x, rho)
    res = (k[2] + k[0] + s * _l1(x, params)) * (k[0] - s * _l0(x, params)) - 2.0 * k[1] ** 2
    return float(res) if res.ndim == 0 else res


_RESIDUALS = {"I": branch1_residual, "II": branch2_residual}


def _xi_window(rho: float, hint: Optional[Tuple[float, float]]) -> Tuple[float, float]:
    if hint is not None:
        lo, hi = float(hint[0]), float(hint[1])
        if not (0 < lo < hi):
            raise DomainError(f"xi oralig'i noto'g'ri: {hint}")
        return lo, hi
    return XI_MIN, min(XI_MAX, XI_RHO_MAX / rho)


def solve_branch(
    branch: str,
    sign: str,
    rho: float,
    params: ModelParams,
    xi_bracket_hint: Optional[Tuple[float, float]] = None,
) -> List[BranchRoot]:
    """
    Berilgan rho da tarmoq tenglamasining barcha ildizlari.

    Log to'rda ishora almashishini qidiradi va har bir oraliqni brentq bilan
    aniqlaydi. Ildiz bo'lmasa bo'sh ro'yxat qaytadi.
    """
    if branch not in _RESIDUALS:
        raise DomainError(f"branch 'I' yoki 'II' bo'lishi kerak: {branch}")
    _sign_value(sign)
    if not rho > 0:
        raise DomainError(f"rho > 0 bo'lishi kerak: {rho}")

    residual = _RESIDUALS[branch]
    lo, hi = _xi_window(rho, xi_bracket_hint)
    if hi <= lo:
        return []

    decades = math.log10(hi / lo)
    n_points = max(SCAN_POINTS_MIN, int(math.ceil(decades * SCAN_POINTS_PER_DECADE)))
    grid = np.geomspace(lo, hi, n_points)
    values = residual(grid, rho, sign, params)

    roots: List[BranchRoot] = []
    for i in range(n_points - 1):
        fa, fb = values[i], values[i + 1]
        if not (np.isfinite(fa) and np.isfinite(fb)):
            continue
        if fa == 0.0:
            xi, ok = grid[i], True
        elif fa * fb < 0:
            xi, info = brentq(
                residual, grid[i], grid[i + 1],
                args=(rho, sign, params),
                xtol=ROOT_XTOL, rtol=ROOT_RTOL, maxiter=ROOT_MAX_ITER,
                full_output=True, disp=False,
            )
            ok = info.converged
        else:
            continue
        res = residual(xi, rho, sign, params)
        converged = bool(ok and abs(res) < RESIDUAL_TOL)
        if not converged:
            logger.warning(
                f"Ildiz yaqinlashmadi: branch {branch}{sign[0]}, rho = {rho:.6g}, "
                f"xi = {xi:.6g}, residual = {res:.3e}"
            )
        roots.append(BranchRoot(
            rho=float(rho), xi=float(xi), branch=branch, sign=sign,
            converged=converged, residual=float(res),
        ))

    logger.debug(f"branch {branch} {sign}, rho = {rho:.6g}: {len(roots)} ta ildiz")
    return roots


# ─── Asimptotik formulalar / Closed-form asymptotics ───

def _scaled_rho(rho: float) -> float:
    if not rho > 0:
        raise DomainError(f"rho > 0 bo'lishi kerak: {rho}")
    return RHO_SCALE * rho


def xi1_asympt(rho: float) -> float:
    """xi1^2 = 2 e^{1-2gamma} / (rho~^2 ln(rho~ ln rho~))."""
    rt = _scaled_rho(rho)
    if rt <= 1.0 or rt * math.log(rt) <= 1.0:
        raise DomainError(
            f"xi1 asimptotikasi rho~ ln rho~ > 1 talab qiladi: rho = {rho}, rho~ = {rt:.6g}"
        )
    return math.sqrt(2.0 * math.exp(1.0 - 2.0 * EULER_GAMMA)
                     / (rt * rt * math.log(rt * math.log(rt))))


def xi2_asympt(rho: float) -> float:
    """xi2^2 = 2 e^{1-2gamma} / (rho~^2 (ln rho~ + 2gamma + 1 - ln 2))."""
    rt = _scaled_rho(rho)
    denom = math.log(rt) + 2.0 * EULER_GAMMA + 1.0 - math.log(2.0)
    if denom <= 0:
        raise DomainError(f"xi2 asimptotikasi aniqlanmagan: rho = {rho}")
    return math.sqrt(2.0 * math.exp(1.0 - 2.0 * EULER_GAMMA) / (rt * rt * denom))


def _log_denominator(kind: str, rho: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Asimptotik potensial maxraji va uning aniqlanish sohasi."""
    with np.errstate(divide="ignore", invalid="ignore"):
        if kind == "asympt_V":
            valid = rho > 1.0
            denom = np.log(rho)
        elif kind == "asympt_I0":
            big_l = np.log(rho) - EULER_GAMMA + 0.5
            valid = big_l > 1.0
            denom = big_l + np.log(np.where(valid, big_l, 1.0))
        elif kind == "asympt_II0":
            denom = np.log(0.5 * rho) + EULER_GAMMA + 1.5
            valid = denom > 0
        else:
            raise DomainError(f"Noma'lum asimptotik potensial: {kind}")
    return denom, valid & (rho > 0)


def _strict_asympt(kind: str, rho):
    r = np.asarray(rho, dtype=float)
    denom, valid = _log_denominator(kind, r)
    if not np.all(valid):
        bad = r[~valid].ravel()[0] if r.ndim else float(r)
        raise DomainError(
            f"{kind} potensiali rho = {bad} da aniqlanmagan\n"
            f"(logarifmik maxraj musbat bo'lishi kerak)."
        )
    v = -1.0 / (r * r * denom)
    return float(v) if v.ndim == 0 else v


def v_I0_asympt(rho):
    """-(1/rho^2) / [L + ln L], L = ln rho - gamma + 1/2 > 1."""
    return _strict_asympt("asympt_I0", rho)


def v_II0_asympt(rho):
    """-(1/rho^2) / [ln(rho/2) + gamma + 3/2]."""
    return _strict_asympt("asympt_II0", rho)


def v_asympt(rho):
    """-1 / (rho^2 ln rho), rho > 1."""
    return _strict_asympt("asympt_V", rho)


def asymptotic_potential(kind: str) -> Callable:
    """Vektorlashgan asimptotik potensial; soha tashqarisida +inf."""
    _log_denominator(kind, np.ones(1) * 2.0)

    def potential(rho):
        r = np.asarray(rho, dtype=float)
        denom, valid = _log_denominator(kind, r)
        with np.errstate(divide="ignore", invalid="ignore"):
            v = np.where(valid, -1.0 / (r * r * np.where(valid, denom, 1.0)), np.inf)
        return float(v) if v.ndim == 0 else v

    potential.__name__ = kind
    return potential


def range_r1_scale(params: ModelParams) -> RangeScale:
    """p-to'lqin bog'langan holat o'lchami R1 = 1/sqrt(2|eps1|)."""
    if params.at_resonance:
        raise ResonanceError("Aniq rezonansda R1 cheksiz (inv_a1 = 0).")
    a1 = params.a1
    if a1 <= 2.0:
        raise DomainError(f"R1 yopiq ko'rinishi a1 > 2 talab qiladi: a1 = {a1}")
    pole = p_wave_pole(params)
    return RangeScale(
        numeric=1.0 / pole.kappa1,
        closed_form=math.sqrt(0.5 * a1 * math.log(0.5 * a1)),
    )


# ─── Jadvallash / Tabulation ───

def split_kind(kind: str) -> Tuple[str, str]:
    """'branch_I_plus' -> ('I', 'plus')."""
    if kind not in BRANCH_KINDS:
        raise DomainError(f"Tarmoq turi emas: {kind}")
    _, branch, sign = kind.split("_")
    return branch, sign


def potential_grid(
    params: ModelParams,
    points_per_decade: int = POTENTIAL_POINTS_PER_DECADE,
    rho_min: float = POTENTIAL_RHO_MIN,
    rho_max: Optional[float] = None,
) -> np.ndarray:
    """Log-bir xil to'r: [1, 10 R1], rezonansda [1, 1e8]."""
    if rho_max is None:
        if params.at_resonance:
            rho_max = POTENTIAL_RHO_MAX_RESONANCE
        else:
            try:
                rho_max = POTENTIAL_RANGE_FACTOR * range_r1_scale(params).numeric
            except NoRootError:
                logger.warning(
                    f"a1 = {params.a1:.6g} da p-to'lqin bog'langan holati yo'q, "
                    f"to'r rho_max = {POTENTIAL_RHO_MAX_RESONANCE:g} gacha"
                )
                rho_max = POTENTIAL_RHO_MAX_RESONANCE
    if not (0 < rho_min < rho_max):
        raise DomainError(f"Potensial to'ri noto'g'ri: [{rho_min}, {rho_max}]")
    if points_per_decade < 1:
        raise DomainError(f"points_per_decade >= 1 bo'lishi kerak: {points_per_decade}")
    n = max(2, int(math.ceil(math.log10(rho_max / rho_min) * points_per_decade)) + 1)
    return np.geomspace(rho_min, rho_max, n)


def potential_at(kind: str, rho: float, params: ModelParams) -> Optional[BranchRoot]:
    """Eng kichik xi li yaqinlashgan ildiz (potensial ustuni uchun)."""
    branch, sign = split_kind(kind)
    roots = [r for r in solve_branch(branch, sign, rho, params) if r.converged]
    if not roots:
        return None
    return min(roots, key=lambda r: r.xi)


def tabulate_potential(
    kind: str,
    params: ModelParams,
    rho_grid: Optional[np.ndarray] = None,
    workers: int = 1,
) -> PotentialCurve:
    """
    Potensial egri chizig'ini qurish.

    Tarmoq turlari uchun ildizi yo'q nuqtalar tashlab yuboriladi; asimptotik
    turlar uchun esa soha tashqarisidagi nuqtalar.
    """
    if kind not in POTENTIAL_KINDS:
        raise DomainError(f"Noma'lum potensial turi: {kind}")
    grid = potential_grid(params) if rho_grid is None else np.asarray(rho_grid, dtype=float)

    if kind in ASYMPTOTIC_KINDS:
        values = asymptotic_potential(kind)(grid)
        keep = np.isfinite(values)
        rho, v = grid[keep], values[keep]
    else:
        def _solve(r):
            return potential_at(kind, float(r), params)

        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                roots = list(pool.map(_solve, grid))
        else:
            roots = [_solve(r) for r in grid]
        found = [r for r in roots if r is not None]
        rho = np.array([r.rho for r in found])
        v = np.array([r.energy for r in found])

    if rho.size < 2:
        raise NoRootError(
            f"{kind} uchun [{grid[0]:.4g}, {grid[-1]:.4g}] oralig'ida yechim yo'q\n"
            f"(topilgan nuqtalar: {rho.size})."
        )
    logger.info(f"Potensial jadvali tayyor: {kind}, {rho.size}/{grid.size} nuqta")
    return PotentialCurve(rho=rho, v=v, kind=kind, params=params)
