"""
Ishga tushirish konfiguratsiyasi (JSON fayl + CLI bayroqlari).
Run configuration: parsing, validation and hashing.

Ustuvorlik: standart qiymatlar < konfiguratsiya fayli < CLI bayroqlari.
Noma'lum bo'lim yoki kalit -> ConfigError.
"""

import json
import math
import hashlib
import logging
from dataclasses import dataclass, field, asdict, fields
from pathlib import Path
from typing import Any, Dict, List, Optional

from qc.config import (
    DEFAULT_BETA,
    DEFAULT_A0,
    DEFAULT_R0,
    DEFAULT_THETA0,
    POTENTIAL_POINTS_PER_DECADE,
    POTENTIAL_RHO_MIN,
    NUMEROV_RHO_MIN,
    NUMEROV_RHO_MAX,
    DEFAULT_N_MIN,
    DEFAULT_N_MAX,
    M_MAX_LIMIT,
    DEFAULT_OUTPUT_DIR,
    OUTPUT_FORMATS,
)
from qc.errors import ConfigError
from qc.twobody import ModelParams
from qc.adiabatic import POTENTIAL_KINDS

logger = logging.getLogger(__name__)


# ─── Bo'limlar / Sections ───

@dataclass
class PotentialSettings:
    rho_min: float = POTENTIAL_RHO_MIN
    rho_max: Optional[float] = None          # None: 10 R1 yoki rezonansda 1e8
    points_per_decade: int = POTENTIAL_POINTS_PER_DECADE


@dataclass
class SpectrumSettings:
    n_min: int = DEFAULT_N_MIN
    n_max: int = DEFAULT_N_MAX
    potential_kind: str = "asympt_V"
    rho_min: float = NUMEROV_RHO_MIN         # Numerov ichki devori
    rho_max: float = NUMEROV_RHO_MAX
    points: Optional[int] = None


@dataclass
class ScatteringSettings:
    a1_min: float = 10.0
    a1_max: float = 1e6
    points_per_decade: int = 64
    k_values: List[float] = field(default_factory=lambda: [1e-4, 1e-3, 1e-2])


@dataclass
class DetcheckSettings:
    rho_values: List[float] = field(default_factory=lambda: [10.0, 100.0, 1000.0])
    m_max_values: List[int] = field(default_factory=lambda: [1, 2])
    sectors: List[str] = field(default_factory=lambda: ["symmetric", "antisymmetric"])


@dataclass
class OutputSettings:
    dir: str = DEFAULT_OUTPUT_DIR
    format: str = "csv"
    threads: int = 1


@dataclass
class RunConfig:
    params: ModelParams
    potential: PotentialSettings = field(default_factory=PotentialSettings)
    spectrum: SpectrumSettings = field(default_factory=SpectrumSettings)
    scattering: ScatteringSettings = field(default_factory=ScatteringSettings)
    detcheck: DetcheckSettings = field(default_factory=DetcheckSettings)
    output: OutputSettings = field(default_factory=OutputSettings)

    def to_dict(self) -> Dict[str, Any]:
        """To'liq hal qilingan konfiguratsiya (xesh uchun)."""
        return {
            "params": {
                "alpha": self.params.alpha,
                "inv_a1": self.params.inv_a1,
                "a0": self.params.a0,
                "r0": self.params.r0,
                "theta0": self.params.theta0,
            },
            "potential": asdict(self.potential),
            "spectrum": asdict(self.spectrum),
            "scattering": asdict(self.scattering),
            "detcheck": asdict(self.detcheck),
            "output": asdict(self.output),
        }

    @property
    def config_hash(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


_SECTIONS = {
    "potential": PotentialSettings,
    "spectrum": SpectrumSettings,
    "scattering": ScatteringSettings,
    "detcheck": DetcheckSettings,
    "output": OutputSettings,
}
_PARAM_KEYS = {"beta", "alpha", "a1", "inv_a1", "a0", "r0", "theta0"}


# ─── Tahlil / Parsing ───

def _number(section: str, key: str, value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"[{section}] {key}: son kutilgan, berilgan {value!r}")
    if not math.isfinite(value):
        raise ConfigError(f"[{section}] {key}: chekli son bo'lishi kerak: {value!r}")
    return float(value)


def _integer(section: str, key: str, value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"[{section}] {key}: butun son kutilgan, berilgan {value!r}")
    return value


def parse_params(block: Dict[str, Any]) -> ModelParams:
    """params bo'limi: beta yoki alpha, a1 (son yoki "inf") yoki inv_a1."""
    if not isinstance(block, dict):
        raise ConfigError("[params] bo'limi obyekt bo'lishi kerak")
    unknown = set(block) - _PARAM_KEYS
    if unknown:
        raise ConfigError(f"[params] noma'lum kalitlar: {sorted(unknown)}")
    if "beta" in block and "alpha" in block:
        raise ConfigError("[params] beta va alpha dan faqat bittasini bering")
    if "a1" in block and "inv_a1" in block:
        raise ConfigError("[params] a1 va inv_a1 dan faqat bittasini bering")

    inv_a1 = 0.0
    if "a1" in block:
        a1 = block["a1"]
        if a1 == "inf":
            inv_a1 = 0.0
        else:
            a1 = _number("params", "a1", a1)
            if a1 <= 0:
                raise ConfigError(f"[params] a1 musbat bo'lishi kerak: {a1}")
            inv_a1 = 1.0 / a1
    elif "inv_a1" in block:
        inv_a1 = _number("params", "inv_a1", block["inv_a1"])

    common = dict(
        inv_a1=inv_a1,
        a0=_number("params", "a0", block.get("a0", DEFAULT_A0)),
        r0=_number("params", "r0", block.get("r0", DEFAULT_R0)),
        theta0=_number("params", "theta0", block.get("theta0", DEFAULT_THETA0)),
    )
    if "alpha" in block:
        return ModelParams(alpha=_number("params", "alpha", block["alpha"]), **common)
    return ModelParams.from_beta(beta=_number("params", "beta", block.get("beta", DEFAULT_BETA)), **common)


def _parse_section(name: str, block: Dict[str, Any]):
    cls = _SECTIONS[name]
    if not isinstance(block, dict):
        raise ConfigError(f"[{name}] bo'limi obyekt bo'lishi kerak")
    allowed = {f.name for f in fields(cls)}
    unknown = set(block) - allowed
    if unknown:
        raise ConfigError(f"[{name}] noma'lum kalitlar: {sorted(unknown)}")
    defaults = cls()
    values = {}
    for key, value in block.items():
        default = getattr(defaults, key)
        if value is None and key in ("rho_max", "points"):
            values[key] = None
        elif isinstance(default, str):
            if not isinstance(value, str):
                raise ConfigError(f"[{name}] {key}: satr kutilgan, berilgan {value!r}")
            values[key] = value
        elif isinstance(default, list):
            if not isinstance(value, list):
                raise ConfigError(f"[{name}] {key}: ro'yxat kutilgan, berilgan {value!r}")
            values[key] = value
        elif isinstance(default, int) or key == "points":
            values[key] = _integer(name, key, value)
        else:
            values[key] = _number(name, key, value)
    return cls(**values)


def _validate(config: RunConfig) -> None:
    pot, spc, scat, det, out = (config.potential, config.spectrum, config.scattering,
                                 config.detcheck, config.output)
    if not pot.rho_min > 0 or (pot.rho_max is not None and pot.rho_max <= pot.rho_min):
        raise ConfigError(f"[potential] rho oralig'i noto'g'ri: [{pot.rho_min}, {pot.rho_max}]")
    if pot.points_per_decade < 1:
        raise ConfigError("[potential] points_per_decade >= 1 bo'lishi kerak")
    if not 1 <= spc.n_min <= spc.n_max:
        raise ConfigError(f"[spectrum] 1 <= n_min <= n_max bo'lishi kerak: {spc.n_min}, {spc.n_max}")
    if spc.potential_kind not in POTENTIAL_KINDS:
        raise ConfigError(f"[spectrum] potential_kind {POTENTIAL_KINDS} dan biri bo'lishi kerak")
    if not 0 < spc.rho_min < spc.rho_max:
        raise ConfigError(f"[spectrum] rho oralig'i noto'g'ri: [{spc.rho_min}, {spc.rho_max}]")
    if spc.points is not None and spc.points < 3:
        raise ConfigError("[spectrum] points >= 3 bo'lishi kerak")
    if not 2.0 * math.e < scat.a1_min < scat.a1_max:
        raise ConfigError(
            f"[scattering] 2e < a1_min < a1_max bo'lishi kerak: [{scat.a1_min}, {scat.a1_max}]"
        )
    if scat.points_per_decade < 1:
        raise ConfigError("[scattering] points_per_decade >= 1 bo'lishi kerak")
    for k in scat.k_values:
        if _number("scattering", "k_values", k) <= 0:
            raise ConfigError(f"[scattering] k > 0 bo'lishi kerak: {k}")
    for rho in det.rho_values:
        if _number("detcheck", "rho_values", rho) <= 0:
            raise ConfigError(f"[detcheck] rho > 0 bo'lishi kerak: {rho}")
    for m_max in det.m_max_values:
        if not 1 <= _integer("detcheck", "m_max_values", m_max) <= M_MAX_LIMIT:
            raise ConfigError(f"[detcheck] m_max [1, {M_MAX_LIMIT}] oralig'ida: {m_max}")
    for sector in det.sectors:
        if sector not in ("symmetric", "antisymmetric"):
            raise ConfigError(f"[detcheck] sektor noma'lum: {sector}")
    if out.format not in OUTPUT_FORMATS:
        raise ConfigError(f"[output] format {OUTPUT_FORMATS} dan biri bo'lishi kerak: {out.format}")
    if out.threads < 1:
        raise ConfigError(f"[output] threads >= 1 bo'lishi kerak: {out.threads}")


def build_run_config(data: Dict[str, Any], overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """Lug'atdan RunConfig; overrides = CLI dan output bo'limi qiymatlari."""
    if not isinstance(data, dict):
        raise ConfigError("Konfiguratsiya ildizi JSON obyekt bo'lishi kerak")
    unknown = set(data) - set(_SECTIONS) - {"params"}
    if unknown:
        raise ConfigError(f"Noma'lum bo'limlar: {sorted(unknown)}")

    sections = {name: _parse_section(name, data.get(name, {})) for name in _SECTIONS}
    for key, value in (overrides or {}).items():
        if value is not None:
            setattr(sections["output"], key, value)

    config = RunConfig(params=parse_params(data.get("params", {})), **sections)
    _validate(config)
    return config


def load_run_config(path: Optional[str], overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """JSON faylni o'qish (path None bo'lsa standart qiymatlar)."""
    data: Dict[str, Any] = {}
    if path is not None:
        file = Path(path)
        if not file.exists():
            raise ConfigError(f"Konfiguratsiya fayli topilmadi: {path}")
        try:
            data = json.loads(file.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise ConfigError(
                f"Konfiguratsiya JSON xatosi: {path}\n"
                f"  {e.msg} (qator {e.lineno}, ustun {e.colno})"
            ) from e
        logger.info(f"Konfiguratsiya yuklandi: {path}")
    return build_run_config(data, overrides)
