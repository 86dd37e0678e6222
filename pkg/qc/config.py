"""
Kvazi-Kulon tizimi konfiguratsiyasi.
Quasi-Coulomb toolkit configuration.

Birliklar / Units: hbar = 1, mu = 1, r1 = 1.
Uzunliklar r1 da, a1 esa r1^2 da, energiyalar hbar^2/(mu r1^2) da.
"""

import math

# ─── Fizik doimiylar / Physical constants ───
EULER_GAMMA = 0.57721566490153286061    # Eyler doimiysi
R0_MIN = 2.0 * math.exp(-EULER_GAMMA)   # r1 <= (1/2) e^gamma r0  =>  r0 >= 1.1229

# ─── Standart model parametrlari / Default model parameters ───
DEFAULT_BETA = 20.0          # M/mu
DEFAULT_INV_A1 = 0.0         # 1/a1 = 0 -> aniq p-to'lqin rezonansi
DEFAULT_A0 = 1.0             # s-to'lqin sochilish uzunligi (r1)
DEFAULT_R0 = 1.2             # potensial radiusi (r1)
DEFAULT_THETA0 = 0.0         # qisqa masofa WKB fazasi
NEAR_RESONANCE_INV_A1 = 1e-2 # 1/a1 bundan kichik -> a1 >> r1^2 rejimi

# ─── Maxsus funksiyalar / Special functions ───
BESSEL_SERIES_SPLIT = 2.0    # x <= 2: qator, x > 2: Steed zanjirli kasri
BESSEL_SERIES_TERMS = 24
BESSEL_CF_MAX_ITER = 10000
BESSEL_CF_EPS = 1e-16

# ─── Ildiz qidirish / Root scanning ───
XI_MIN = 1e-12               # xi skanerining pastki chegarasi
XI_MAX = 0.75                # effektiv radius yoyilmasining amal qilish oynasi
XI_RHO_MAX = 50.0            # xi*rho yuqori chegarasi
SCAN_POINTS_MIN = 400
SCAN_POINTS_PER_DECADE = 48
ROOT_RTOL = 4.0 * 2.220446049250313e-16
ROOT_XTOL = 1e-300
ROOT_MAX_ITER = 200
RESIDUAL_TOL = 1e-10

# ─── p-to'lqin qutbi / p-wave pole ───
POLE_BRACKET_FRACTION = 1e-6     # pastki chegara = 1e-6 * sqrt(2/a1)

# ─── Potensial to'ri / Potential tabulation ───
POTENTIAL_POINTS_PER_DECADE = 256
POTENTIAL_RHO_MIN = 1.0
POTENTIAL_RHO_MAX_RESONANCE = 1e8
POTENTIAL_RANGE_FACTOR = 10.0        # off-resonance: [1, 10 R1]

# ─── Kesilgan tizim / Truncated system ───
M_MAX_DEFAULT = 1
M_MAX_LIMIT = 6
SECTORS = ("symmetric", "antisymmetric", "full")
BLOCK_CHECK_TOL = 1e-12

# ─── WKB ───
WKB_ABS_TOL = 1e-8
WKB_QUAD_LIMIT = 200
WKB_SEARCH_RHO_MAX = 1e12            # burilish nuqtasini qidirish chegarasi
WKB_SEARCH_POINTS_PER_DECADE = 64

# ─── Numerov ───
NUMEROV_RHO_MIN = 0.5                # ichki devor
NUMEROV_RHO_MAX = 1e5
NUMEROV_STEP = 0.001                 # ln(rho) bo'yicha qadam
NUMEROV_MIN_STEPS_PER_WAVELENGTH = 8
NUMEROV_DECAY_CUTOFF = 50.0          # taqiqlangan sohada integrallashni to'xtatish
NUMEROV_RENORM = 1e150
NUMEROV_ENERGY_RTOL = 1e-10
NUMEROV_ENERGY_FLOOR = 1e-30         # |E| bundan kichik sathlar qidirilmaydi
NUMEROV_BISECT_MAX_ITER = 400
ZERO_ENERGY_START_Z = 1.0            # z = 2 sqrt(beta ln rho) dan boshlab integrallash
ZERO_ENERGY_TAIL_STEPS = 4           # kesishdan keyingi v = 0 sohasidagi qadamlar

# ─── Spektr moslash / Spectrum fit ───
FIT_MIN_LEVELS = 4
DEFAULT_N_MIN = 4
DEFAULT_N_MAX = 8

# ─── Sochilish / Scattering ───
CROSS_SECTION_KR_WARN = 0.1          # k*r1 > 0.1 da ogohlantirish
POLE_COT_TOL = 1e-12

# ─── CLI ───
LOG_LEVEL_ENV = "QC_LOG_LEVEL"
LOG_LEVELS = {
    "error": "ERROR",
    "warn":  "WARNING",
    "info":  "INFO",
    "debug": "DEBUG",
}
DEFAULT_LOG_LEVEL = "info"
DEFAULT_OUTPUT_DIR = "out"
OUTPUT_FORMATS = ("csv", "json")
SIGNIFICANT_DIGITS = 12
DETCHECK_THRESHOLD = 1e-8
MANIFEST_NAME = "run_manifest.json"
ROW_FLUSH_BLOCK = 64

# ─── Chiqish kodlari / Exit codes ───
EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_NUMERICAL_ERROR = 3
