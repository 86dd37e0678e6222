"""
Kesilgan chiziqli tenglamalar sistemasi determinanti (|m| <= m_max).
Determinant of the truncated linear system for the coefficients C_m^(+-).

Mavhum o'qda H_n^(1)(ix) = (2/pi) (-i)^{n+1} K_|n|(x) va T_m haqiqiy.
Qatorlarni (pi/2) g_m ga ko'paytirib va C_m = (-i)^m D_m almashtirib,
sistema aniq haqiqiy ko'rinishga keladi:

    [ diag(h)   -A      ] [D+]
    [ -S A S    diag(h) ] [D-] = 0,

    h_m = (pi/2) g_m,  A_{mm'} = K_|m-m'|(xi rho),  S = diag((-1)^m).

Og'ir markazlar almashinuvi sistemani ikki blokka ajratadi:
    symmetric     = diag(h) - A S
    antisymmetric = diag(h) + A S

Har bir sektor ichida m <-> -m juftligi tarmoqni ajratadi:
    symmetric,     toq  -> (I, minus)     antisymmetric, toq  -> (I, plus)
    symmetric,     juft -> (II, plus)     antisymmetric, juft -> (II, minus)
"""

import math
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np
from scipy import linalg
from scipy.optimize import brentq

from qc.config import (
    XI_MIN,
    XI_MAX,
    XI_RHO_MAX,
    SCAN_POINTS_MIN,
    SCAN_POINTS_PER_DECADE,
    ROOT_RTOL,
    ROOT_XTOL,
    ROOT_MAX_ITER,
    RESIDUAL_TOL,
    M_MAX_DEFAULT,
    M_MAX_LIMIT,
    SECTORS,
    BLOCK_CHECK_TOL,
)
from qc.errors import DomainError, PoleError, NumericalError
from qc.specfun import bessel_k, bessel_k_sequence
from qc.twobody import ModelParams, inv_t
from qc.adiabatic import BranchRoot

logger = logging.getLogger(__name__)

# (sektor, juftlik) -> (tarmoq, ishora)
SECTOR_BRANCH_MAP = {
    ("symmetric", "odd"): ("I", "minus"),
    ("symmetric", "even"): ("II", "plus"),
    ("antisymmetric", "odd"): ("I", "plus"),
    ("antisymmetric", "even"): ("II", "minus"),
}


@dataclass
class DeterminantGrid:
    """Berilgan rho da xi bo'yicha determinant qiymatlari."""
    rho: float
    m_max: int
    sector: str
    xi_samples: List[Tuple[float, float]]


def hankel_imag_as_k(m: int, x: float) -> Tuple[float, int]:
    """
    H_m^(1)(ix) ni (kattalik, chorak burilishlar) juftligi sifatida.

    H_m^(1)(ix) = (2/pi) K_|m|(x) * (-i)^q,  q = (m + 1) mod 4.
    Manfiy m uchun H_{-m} = (-1)^m H_m avtomatik bajariladi.
    """
    if not x > 0:
        raise DomainError(f"Hankel argumenti x > 0 bo'lishi kerak: {x}")
    m = int(m)
    return (2.0 / math.pi) * bessel_k(abs(m), x), (m + 1) % 4


def _check_m_max(m_max: int) -> int:
    if int(m_max) != m_max or not (1 <= m_max <= M_MAX_LIMIT):
        raise DomainError(f"m_max [1, {M_MAX_LIMIT}] oralig'ida butun son bo'lishi kerak: {m_max}")
    return int(m_max)


def _check_sector(sector: str) -> str:
    if sector not in SECTORS:
        raise DomainError(f"Sektor {SECTORS} dan biri bo'lishi kerak: {sector}")
    return sector


def _diagonal(xi: float, params: ModelParams, m_max: int) -> np.ndarray:
    """h_m = (pi/2) g_m, m = -m_max..m_max."""
    h = np.empty(2 * m_max + 1)
    for i, m in enumerate(range(-m_max, m_max + 1)):
        g = inv_t(m, xi, params)
        if g == 0:
            raise PoleError(
                f"T_{m} qutbida: xi = {xi} da g_{m} = 0.\n"
                f"Determinant bu nuqtada aniqlanmagan."
            )
        h[i] = 0.5 * math.pi * g
    return h


def _coupling(xi: float, rho: float, m_max: int) -> Tuple[np.ndarray, np.ndarray]:
    """A_{mm'} = K_|m-m'|(xi rho) va S = diag((-1)^m)."""
    size = 2 * m_max + 1
    k = bessel_k_sequence(2 * m_max, xi * rho)
    idx = np.arange(size)
    a = k[np.abs(idx[:, None] - idx[None, :])]
    s = np.diag([(-1.0) ** m for m in range(-m_max, m_max + 1)])
    return a, s


@lru_cache(maxsize=None)
def residual_phases(m_max: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Qayta masshtablashdan keyin har bir element uchun qolgan chorak burilishlar.

    i pi T_m -> 3, H_{m-m'} -> (m - m' + 1), C_m' -> +m', qator -> -m.
    Natija faqat 0 yoki 2 bo'lishi mumkin (haqiqiy matritsa).
    """
    ms = np.arange(-m_max, m_max + 1)
    m, mp = ms[:, None], ms[None, :]
    plus = (3 + (m - mp + 1) % 4 + mp - m) % 4
    minus = (3 + (mp - m + 1) % 4 + mp - m) % 4
    for name, phases in (("C+", plus), ("C-", minus)):
        if np.any((phases != 0) & (phases != 2)):
            raise NumericalError(f"{name} bloki haqiqiy emas: chorak burilishlar {np.unique(phases)}")
    return plus, minus


def _phase_sign(phases: np.ndarray) -> np.ndarray:
    # (-i)^0 = 1, (-i)^2 = -1
    return np.where(phases == 0, 1.0, -1.0)


def assemble_system(xi: float, rho: float, params: ModelParams, m_max: int = M_MAX_DEFAULT) -> np.ndarray:
    """To'liq 2(2 m_max + 1) o'lchamli haqiqiy matritsa."""
    if not (xi > 0 and rho > 0):
        raise DomainError(f"xi, rho > 0 bo'lishi kerak: xi = {xi}, rho = {rho}")
    m_max = _check_m_max(m_max)
    h = np.diag(_diagonal(xi, params, m_max))
    a, _ = _coupling(xi, rho, m_max)
    plus, minus = residual_phases(m_max)
    return np.block([[h, -a * _phase_sign(plus)], [-a * _phase_sign(minus), h]])


def sector_matrix(
    xi: float,
    rho: float,
    params: ModelParams,
    m_max: int = M_MAX_DEFAULT,
    sector: str = "symmetric",
) -> np.ndarray:
    """Almashinuv sektori matritsasi (2 m_max + 1 o'lchamli)."""
    if sector not in ("symmetric", "antisymmetric"):
        raise DomainError(f"Sektor 'symmetric' yoki 'antisymmetric' bo'lishi kerak: {sector}")
    if not (xi > 0 and rho > 0):
        raise DomainError(f"xi, rho > 0 bo'lishi kerak: xi = {xi}, rho = {rho}")
    m_max = _check_m_max(m_max)
    h = np.diag(_diagonal(xi, params, m_max))
    a, s = _coupling(xi, rho, m_max)
    return h - a @ s if sector == "symmetric" else h + a @ s


def exchange_transform(m_max: int) -> Tuple[np.ndarray, np.ndarray]:
    """T = (1/sqrt2) [[I, I], [S, -S]] va uning teskarisi."""
    size = 2 * m_max + 1
    eye = np.eye(size)
    s = np.diag([(-1.0) ** m for m in range(-m_max, m_max + 1)])
    t = np.block([[eye, eye], [s, -s]]) / math.sqrt(2.0)
    t_inv = np.block([[eye, s], [eye, -s]]) / math.sqrt(2.0)
    return t, t_inv


def check_block_structure(
    xi: float,
    rho: float,
    params: ModelParams,
    m_max: int = M_MAX_DEFAULT,
) -> float:
    """
    T^-1 M T blok-diagonal ekanini tekshirish.
    Returns: nisbiy nodiagonal blok normasi.
    """
    full = assemble_system(xi, rho, params, m_max)
    t, t_inv = exchange_transform(m_max)
    reduced = t_inv @ full @ t
    size = 2 * m_max + 1
    off = max(np.abs(reduced[:size, size:]).max(), np.abs(reduced[size:, :size]).max())
    scale = max(np.abs(full).max(), 1.0)
    ratio = off / scale
    if ratio > BLOCK_CHECK_TOL:
        raise NumericalError(
            f"Almashinuv bloklari ajralmadi: nodiagonal norma {ratio:.3e} "
            f"(chegara {BLOCK_CHECK_TOL:g}), xi = {xi}, rho = {rho}"
        )
    sym = sector_matrix(xi, rho, params, m_max, "symmetric")
    anti = sector_matrix(xi, rho, params, m_max, "antisymmetric")
    diff = max(np.abs(reduced[:size, :size] - sym).max(), np.abs(reduced[size:, size:] - anti).max())
    if diff / scale > BLOCK_CHECK_TOL:
        raise NumericalError(f"Sektor matritsalari mos kelmadi: farq {diff / scale:.3e}")
    return ratio


def _matrix(xi, rho, params, m_max, sector) -> np.ndarray:
    if sector == "full":
        return assemble_system(xi, rho, params, m_max)
    return sector_matrix(xi, rho, params, m_max, sector)


def slog_determinant(matrix: np.ndarray) -> Tuple[float, float]:
    """LU (qisman tanlash) orqali (ishora, ln|det|)."""
    lu, piv = linalg.lu_factor(matrix, check_finite=False)
    diag = np.diag(lu)
    if np.any(diag == 0):
        return 0.0, -math.inf
    swaps = int(np.count_nonzero(piv != np.arange(piv.size)))
    sign = (-1.0) ** swaps * float(np.prod(np.sign(diag)))
    return sign, float(np.sum(np.log(np.abs(diag))))


def build_determinant(
    xi: float,
    rho: float,
    params: ModelParams,
    m_max: int = M_MAX_DEFAULT,
    sector: str = "full",
) -> float:
    """Sektor determinanti (haqiqiy son). full = symmetric * antisymmetric."""
    _check_sector(sector)
    sign, logabs = slog_determinant(_matrix(xi, rho, params, m_max, sector))
    if sign == 0:
        return 0.0
    return sign * math.exp(logabs) if logabs < 709.0 else sign * math.inf


def normalized_determinant(
    xi: float,
    rho: float,
    params: ModelParams,
    m_max: int = M_MAX_DEFAULT,
    sector: str = "full",
) -> float:
    """Qatorlari birlik normaga keltirilgan determinant: nollari va ishorasi bir xil."""
    matrix = _matrix(xi, rho, params, m_max, sector)
    norms = np.linalg.norm(matrix, axis=1)
    sign, logabs = slog_determinant(matrix / norms[:, None])
    return 0.0 if sign == 0 else sign * math.exp(logabs)


def determinant_grid(
    rho: float,
    params: ModelParams,
    m_max: int = M_MAX_DEFAULT,
    sector: str = "full",
    xi_values: Optional[np.ndarray] = None,
) -> DeterminantGrid:
    _check_sector(sector)
    if xi_values is None:
        xi_values = _scan_grid(rho, None)
    samples = [(float(x), build_determinant(float(x), rho, params, m_max, sector)) for x in xi_values]
    return DeterminantGrid(rho=float(rho), m_max=int(m_max), sector=sector, xi_samples=samples)


def _scan_grid(rho: float, hint: Optional[Tuple[float, float]]) -> np.ndarray:
    if hint is not None:
        lo, hi = float(hint[0]), float(hint[1])
        if not (0 < lo < hi):
            raise DomainError(f"xi oralig'i noto'g'ri: {hint}")
    else:
        lo, hi = XI_MIN, min(XI_MAX, XI_RHO_MAX / rho)
    if hi <= lo:
        return np.array([])
    n_points = max(SCAN_POINTS_MIN, int(math.ceil(math.log10(hi / lo) * SCAN_POINTS_PER_DECADE)))
    return np.geomspace(lo, hi, n_points)


def classify_root(
    xi: float,
    rho: float,
    params: ModelParams,
    m_max: int = M_MAX_DEFAULT,
) -> Tuple[str, str, str]:
    """
    Ildizni (sektor, tarmoq, ishora) bo'yicha aniqlash.

    Eng kichik singulyar qiymatli sektor tanlanadi, uning nol vektorining
    m <-> -m juftligi tarmoqni beradi.
    """
    best = None
    for sector in ("symmetric", "antisymmetric"):
        matrix = sector_matrix(xi, rho, params, m_max, sector)
        matrix = matrix / np.linalg.norm(matrix, axis=1)[:, None]
        _, sv, vh = np.linalg.svd(matrix)
        if best is None or sv[-1] < best[1]:
            best = (sector, sv[-1], vh[-1])
    sector, _, vec = best
    reflected = vec[::-1]
    parity = "odd" if np.linalg.norm(vec + reflected) < np.linalg.norm(vec - reflected) else "even"
    branch, sign = SECTOR_BRANCH_MAP[(sector, parity)]
    return sector, branch, sign


def find_det_roots(
    rho: float,
    params: ModelParams,
    m_max: int = M_MAX_DEFAULT,
    sector: str = "full",
    xi_bracket_hint: Optional[Tuple[float, float]] = None,
) -> List[BranchRoot]:
    """Determinant nollari; solve_branch bilan bir xil skanerlash usuli."""
    _check_sector(sector)
    m_max = _check_m_max(m_max)
    if not rho > 0:
        raise DomainError(f"rho > 0 bo'lishi kerak: {rho}")

    grid = _scan_grid(rho, xi_bracket_hint)

    def f(x):
        return normalized_determinant(x, rho, params, m_max, sector)

    values = np.array([f(x) for x in grid])
    roots: List[BranchRoot] = []
    for i in range(grid.size - 1):
        fa, fb = values[i], values[i + 1]
        if fa == 0.0:
            xi, ok = float(grid[i]), True
        elif fa * fb < 0:
            xi, info = brentq(
                f, grid[i], grid[i + 1],
                xtol=ROOT_XTOL, rtol=ROOT_RTOL, maxiter=ROOT_MAX_ITER,
                full_output=True, disp=False,
            )
            ok = info.converged
        else:
            continue
        res = f(xi)
        _, branch, sign = classify_root(xi, rho, params, m_max)
        converged = bool(ok and abs(res) < RESIDUAL_TOL)
        if not converged:
            logger.warning(f"Determinant ildizi yaqinlashmadi: rho = {rho:.6g}, xi = {xi:.6g}")
        roots.append(BranchRoot(
            rho=float(rho), xi=float(xi), branch=branch, sign=sign,
            converged=converged, residual=float(res),
        ))

    logger.debug(f"det({sector}, m_max = {m_max}), rho = {rho:.6g}: {len(roots)} ta ildiz")
    return roots
