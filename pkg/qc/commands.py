"""
CLI buyruqlari: potential, spectrum, scattering, detcheck.
Command implementations, table writers and the run manifest.

Ma'lumot fayllarida vaqt belgisi yo'q: bir xil konfiguratsiya bir xil
baytlarni beradi. Vaqt faqat run_manifest.json da.
"""

import csv
import json
import math
import hashlib
import logging
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from qc import __version__
from qc.config import (
    SIGNIFICANT_DIGITS,
    DETCHECK_THRESHOLD,
    MANIFEST_NAME,
    ROW_FLUSH_BLOCK,
    NUMEROV_ENERGY_FLOOR,
)
from qc.errors import (
    NumericalError,
    NoRootError,
    LevelNotSupportedError,
    PoleError,
    InsufficientLevelsError,
)
from qc.runconfig import RunConfig
from qc.adiabatic import (
    ASYMPTOTIC_KINDS,
    BRANCH_KINDS,
    asymptotic_potential,
    potential_grid,
    solve_branch,
    split_kind,
)
from qc.truncated_system import SECTOR_BRANCH_MAP, check_block_structure, find_det_roots
from qc.heavy_dynamics import (
    NumerovSolver,
    bound_state_count,
    fit_spectrum_model,
    n0_estimate,
    numerov_spectrum,
    resolve_potential,
    wkb_spectrum,
)
from qc.scattering import (
    atom_molecule_length,
    cross_section,
    resonance_positions,
    resonance_scan,
)

logger = logging.getLogger(__name__)

POTENTIAL_COLUMNS = [
    "rho",
    "v_branchI_plus", "v_branchI_minus", "v_branchII_plus", "v_branchII_minus",
    "v_I0_asympt", "v_II0_asympt", "v_asympt",
]
SPECTRUM_COLUMNS = ["n", "E_wkb", "E_numerov", "R_n"]
SCATTERING_COLUMNS = ["a1", "N0", "A0", "is_pole"]
SIGMA_COLUMNS = ["k", "sigma0"]
DETCHECK_COLUMNS = ["rho", "sector", "m_max", "xi_root", "xi_branch", "rel_diff"]


# ─── Formatlash / Formatting ───

def _is_missing(value: Any) -> bool:
    return value is None or (isinstance(value, float) and not math.isfinite(value))


def format_cell(value: Any) -> str:
    """12 ta muhim raqam, nuqta ajratgich, yo'q qiymat -> bo'sh katak."""
    if _is_missing(value):
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.{SIGNIFICANT_DIGITS}g}"
    return str(value)


def json_value(value: Any) -> Any:
    """JSON uchun: cheksiz/yo'q -> null, float -> 12 raqamgacha yaxlitlangan."""
    if _is_missing(value):
        return None
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(f"{float(value):.{SIGNIFICANT_DIGITS}g}")
    if isinstance(value, dict):
        return {k: json_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_value(v) for v in value]
    return value


def write_json(path: Path, payload: Dict[str, Any]) -> Path:
    path.write_text(json.dumps(json_value(payload), sort_keys=True, indent=2) + "\n", encoding="utf-8")
    return path


class TableWriter:
    """
    Jadvalni CSV yoki JSON ga yozish.
    CSV har ROW_FLUSH_BLOCK qatordan keyin diskka tushiriladi.
    """

    def __init__(self, out_dir: Path, stem: str, columns: Sequence[str], fmt: str):
        self.columns = list(columns)
        self.fmt = fmt
        self.path = out_dir / f"{stem}.{fmt}"
        self._rows: List[List[Any]] = []
        self._count = 0
        self._file = None
        self._csv = None
        if fmt == "csv":
            self._file = open(self.path, "w", encoding="utf-8", newline="")
            self._csv = csv.writer(self._file, lineterminator="\n")
            self._csv.writerow(self.columns)

    def write_row(self, row: Sequence[Any]) -> None:
        self._count += 1
        if self._csv is not None:
            self._csv.writerow([format_cell(v) for v in row])
            if self._count % ROW_FLUSH_BLOCK == 0:
                self._file.flush()
        else:
            self._rows.append(list(row))

    def close(self) -> Path:
        if self._file is not None:
            self._file.close()
        else:
            write_json(self.path, {"columns": self.columns, "rows": self._rows})
        return self.path

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def _ordered_map(func: Callable, items: Iterable, threads: int) -> Iterable:
    """Ishchi iplar bo'ylab, natijalar kirish tartibida."""
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            yield from pool.map(func, items)
    else:
        for item in items:
            yield func(item)


def write_diagnostics(out_dir: Path, command: str, lines: List[str]) -> Path:
    path = out_dir / f"{command}_diagnostics.log"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def _fail_on_diagnostics(out_dir: Path, command: str, lines: List[str]) -> None:
    if lines:
        path = write_diagnostics(out_dir, command, lines)
        raise NumericalError(
            f"{command}: {len(lines)} ta qatorda yaqinlashish muammosi.\n"
            f"Batafsil: {path}"
        )


def write_manifest(out_dir: Path, command: str, config: RunConfig, outputs: List[Path]) -> Path:
    """Muvaffaqiyatli ishdan keyingina yoziladi."""
    manifest = {
        "version": __version__,
        "command": command,
        "config_hash": config.config_hash,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "outputs": {p.name: hashlib.sha256(p.read_bytes()).hexdigest() for p in outputs},
    }
    path = out_dir / MANIFEST_NAME
    path.write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    return path


def _prepare_out(config: RunConfig) -> Path:
    out_dir = Path(config.output.dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = out_dir / MANIFEST_NAME
    if manifest.exists():
        manifest.unlink()
    return out_dir


# ─── potential ───

def _potential_row(rho: float, params) -> Tuple[List[Any], List[str]]:
    row: List[Any] = [rho]
    notes: List[str] = []
    for kind in BRANCH_KINDS:
        branch, sign = split_kind(kind)
        roots = solve_branch(branch, sign, rho, params)
        good = [r for r in roots if r.converged]
        notes += [
            f"rho={rho:.12g} {kind} xi={r.xi:.12g} residual={r.residual:.3e}"
            for r in roots if not r.converged
        ]
        row.append(min(good, key=lambda r: r.xi).energy if good else None)
    for kind in ASYMPTOTIC_KINDS:
        row.append(asymptotic_potential(kind)(rho))
    return row, notes


def cmd_potential(config: RunConfig) -> List[Path]:
    """Barcha tarmoqlar va asimptotik potensiallar jadvali."""
    out_dir = _prepare_out(config)
    params = config.params
    settings = config.potential
    grid = potential_grid(params, settings.points_per_decade, settings.rho_min, settings.rho_max)
    logger.info(f"potential: {grid.size} nuqta, rho = [{grid[0]:.4g}, {grid[-1]:.4g}]")

    diagnostics: List[str] = []
    with TableWriter(out_dir, "potential", POTENTIAL_COLUMNS, config.output.format) as writer:
        for row, notes in _ordered_map(lambda r: _potential_row(float(r), params), grid,
                                       config.output.threads):
            writer.write_row(row)
            diagnostics += notes
    _fail_on_diagnostics(out_dir, "potential", diagnostics)
    return [writer.path]


# ─── spectrum ───

def _wkb_levels(config: RunConfig, potential) -> Dict[int, Any]:
    params = config.params
    spc = config.spectrum
    levels = {}
    for n in range(spc.n_min, spc.n_max + 1):
        try:
            if spc.potential_kind == "asympt_V":
                result = wkb_spectrum(params, n, n, "asympt_V")
            else:
                result = wkb_spectrum(params, n, n, spc.potential_kind, potential=potential)
        except (LevelNotSupportedError, NoRootError) as e:
            logger.info(f"WKB n = {n}: {e}")
            continue
        levels[n] = result.levels[0]
    return levels


def _zero_energy_nodes(config: RunConfig, potential) -> int:
    params = config.params
    spc = config.spectrum
    if not params.at_resonance:
        return bound_state_count(params)
    solver = NumerovSolver(potential, params.beta, spc.rho_min, spc.rho_max, spc.points)
    return solver.node_count(solver.integrate(-NUMEROV_ENERGY_FLOOR)[0])


def _fit_or_none(levels):
    try:
        return fit_spectrum_model(levels)
    except InsufficientLevelsError:
        return None


def cmd_spectrum(config: RunConfig) -> List[Path]:
    """WKB va Numerov spektrlari, model moslashi va N0."""
    out_dir = _prepare_out(config)
    params = config.params
    spc = config.spectrum
    potential = resolve_potential(params, spc.potential_kind, workers=config.output.threads)

    wkb = _wkb_levels(config, potential)
    numerov = numerov_spectrum(potential, params.beta, spc.n_max, inner_bc=spc.rho_min,
                               rho_max=spc.rho_max, points=spc.points)
    numerov_levels = {lvl.n: lvl for lvl in numerov.levels if lvl.n >= spc.n_min}

    with TableWriter(out_dir, "spectrum", SPECTRUM_COLUMNS, config.output.format) as writer:
        for n in range(spc.n_min, spc.n_max + 1):
            w, m = wkb.get(n), numerov_levels.get(n)
            r_n = w.outer_turning_point if w is not None else (m.outer_turning_point if m else None)
            writer.write_row([
                n,
                w.energy if w is not None else None,
                m.energy if m is not None else None,
                r_n,
            ])

    fit_numerov = _fit_or_none(list(numerov_levels.values()))
    fit_wkb = _fit_or_none([wkb[n] for n in sorted(wkb)])
    slope_theory = math.pi ** 2 / (2.0 * params.beta)
    summary = {
        "beta": params.beta,
        "potential_kind": spc.potential_kind,
        "E0_fit": fit_numerov.e0 if fit_numerov else None,
        "slope_fit": fit_numerov.slope if fit_numerov else None,
        "r_squared": fit_numerov.r_squared if fit_numerov else None,
        "slope_wkb": fit_wkb.slope if fit_wkb else None,
        "slope_theory": slope_theory,
        "slope_ratio": fit_numerov.slope / slope_theory if fit_numerov else None,
        "n0_estimate": n0_estimate(params),
        "numerov_node_count": _zero_energy_nodes(config, potential),
        "levels_wkb": len(wkb),
        "levels_numerov": len(numerov_levels),
    }
    summary_path = write_json(out_dir / "spectrum_summary.json", summary)
    logger.info(f"spectrum: slope_fit = {summary['slope_fit']}, nazariy {slope_theory:.6g}")
    return [writer.path, summary_path]


# ─── scattering ───

def cmd_scattering(config: RunConfig) -> List[Path]:
    """a1 bo'ylab N0, A0 va qutblar; rezonansdan tashqarida sigma0(k)."""
    out_dir = _prepare_out(config)
    params = config.params
    scat = config.scattering
    decades = math.log10(scat.a1_max / scat.a1_min)
    grid = np.geomspace(scat.a1_min, scat.a1_max, int(math.ceil(decades * scat.points_per_decade)) + 1)
    scan = resonance_scan(params, grid)

    rows = [(float(a), float(n0), float(a0), 0) for a, n0, a0 in zip(scan.a1, scan.n0, scan.a_molecule)]
    rows += [(a1, n + 0.5, None, 1) for n, a1 in scan.poles]
    rows.sort(key=lambda r: (r[0], r[3]))
    with TableWriter(out_dir, "scattering", SCATTERING_COLUMNS, config.output.format) as writer:
        for row in rows:
            writer.write_row(row)
    outputs = [writer.path]

    expected = []
    n = 1
    while True:
        pos = resonance_positions(params, [n])[0]
        if pos.a1_exact > scat.a1_max:
            break
        if pos.a1_exact >= scat.a1_min:
            expected.append(pos)
        n += 1

    if not params.at_resonance and scat.k_values:
        try:
            a_mol = atom_molecule_length(params)
        except PoleError as e:
            logger.warning(f"sigma0 hisoblanmadi: {e}")
        else:
            with TableWriter(out_dir, "sigma0", SIGMA_COLUMNS, config.output.format) as sigma_writer:
                for k in scat.k_values:
                    sigma_writer.write_row([k, cross_section(k, a_mol)])
            outputs.append(sigma_writer.path)

    summary = {
        "beta": params.beta,
        "pole_count": len(scan.poles),
        "expected_pole_count": len(expected),
        "poles": [{"n": n, "a1": a1} for n, a1 in scan.poles],
        "resonance_positions": [
            {"n": p.n, "a1_exact": p.a1_exact, "a1_asymptotic": p.a1_asymptotic} for p in expected
        ],
    }
    outputs.append(write_json(out_dir / "scattering_summary.json", summary))
    logger.info(f"scattering: {len(scan.poles)} ta qutb (kutilgan {len(expected)})")
    return outputs


# ─── detcheck ───

def _detcheck_task(task, params) -> Tuple[List[List[Any]], List[str], float]:
    rho, m_max, sector = task
    rows: List[List[Any]] = []
    notes: List[str] = []
    block = 0.0
    det_roots = find_det_roots(rho, params, m_max, sector)
    matched = set()
    for root in det_roots:
        if not root.converged:
            notes.append(f"rho={rho:.12g} {sector} m_max={m_max} xi={root.xi:.12g} residual={root.residual:.3e}")
        block = max(block, check_block_structure(root.xi, rho, params, m_max))
        refs = [r for r in solve_branch(root.branch, root.sign, rho, params) if r.converged]
        if not refs:
            rows.append([rho, sector, m_max, root.xi, None, None])
            continue
        ref = min(refs, key=lambda r: abs(r.xi - root.xi))
        matched.add((root.branch, root.sign, ref.xi))
        rows.append([rho, sector, m_max, root.xi, ref.xi, abs(root.xi - ref.xi) / ref.xi])

    # m_max = 1 da har bir tarmoq ildizi determinant nolini topishi kerak
    if m_max == 1:
        for (sec, _), (branch, sign) in SECTOR_BRANCH_MAP.items():
            if sec != sector:
                continue
            for ref in solve_branch(branch, sign, rho, params):
                if ref.converged and (branch, sign, ref.xi) not in matched:
                    rows.append([rho, sector, m_max, None, ref.xi, None])
    return rows, notes, block


def cmd_detcheck(config: RunConfig) -> List[Path]:
    """Determinant nollari va tarmoq ildizlarining mosligi."""
    out_dir = _prepare_out(config)
    params = config.params
    det = config.detcheck
    tasks = [(float(rho), int(m), sector)
             for rho in det.rho_values for m in det.m_max_values for sector in det.sectors]

    diagnostics: List[str] = []
    max_by_m: Dict[str, Optional[float]] = {}
    block_max = 0.0
    passed = True
    with TableWriter(out_dir, "detcheck", DETCHECK_COLUMNS, config.output.format) as writer:
        for (rho, m_max, sector), (rows, notes, block) in zip(
            tasks, _ordered_map(lambda t: _detcheck_task(t, params), tasks, config.output.threads)
        ):
            diagnostics += notes
            block_max = max(block_max, block)
            for row in rows:
                writer.write_row(row)
                diff = row[5]
                key = str(m_max)
                if diff is not None:
                    max_by_m[key] = max(max_by_m.get(key) or 0.0, diff)
                if m_max == 1 and (diff is None or diff >= DETCHECK_THRESHOLD):
                    passed = False

    summary = {
        "pass": passed,
        "threshold": DETCHECK_THRESHOLD,
        "max_rel_diff_m1": max_by_m.get("1"),
        "max_rel_diff_by_m_max": max_by_m,
        "block_check_max": block_max,
    }
    summary_path = write_json(out_dir / "detcheck_summary.json", summary)
    _fail_on_diagnostics(out_dir, "detcheck", diagnostics)
    logger.info(f"detcheck: {'PASS' if passed else 'FAIL'}, max rel_diff (m_max=1) = {summary['max_rel_diff_m1']}")
    if not passed:
        raise NumericalError(
            f"detcheck: m_max = 1 determinant nollari tarmoq ildizlaridan {DETCHECK_THRESHOLD:g} dan ko'proq farq qiladi.\n"
            f"Batafsil: {summary_path}"
        )
    return [writer.path, summary_path]


COMMANDS = {
    "potential": cmd_potential,
    "spectrum": cmd_spectrum,
    "scattering": cmd_scattering,
    "detcheck": cmd_detcheck,
}
