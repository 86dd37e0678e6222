"""
Kutubxona xatolari.
Library exception hierarchy.

ConfigError -> CLI exit 2, boshqa QCError -> CLI exit 3.
"""


class QCError(Exception):
    """Barcha kutubxona xatolari uchun asos."""


class ConfigError(QCError, ValueError):
    """Konfiguratsiya fayli yoki CLI parametrlari noto'g'ri."""


class ParameterError(ConfigError):
    """ModelParams invariantlari buzilgan."""


class DomainError(QCError, ValueError):
    """Argument funksiya aniqlanish sohasidan tashqarida."""


class PoleError(QCError, ArithmeticError):
    """T-matritsa yoki A0 qutbida hisoblash."""


class ResonanceError(QCError, ArithmeticError):
    """Aniq rezonansda kattalik cheksiz (R1, p-to'lqin qutbi)."""


class NumericalError(QCError, RuntimeError):
    """Sonli usul yaqinlashmadi."""


class NoRootError(NumericalError):
    """Tenglamaning ildizi topilmadi."""


class GridTooCoarseError(NumericalError):
    """Numerov to'ri de Broyl to'lqin uzunligi uchun juda siyrak."""


class LevelNotSupportedError(QCError, ValueError):
    """So'ralgan sath potensial chegarasidan tashqarida."""


class InsufficientLevelsError(QCError, ValueError):
    """Moslash (fit) uchun sathlar yetarli emas."""
