"""
Kvazi-Kulon uch jism hisoblagichi.
Asosiy ishga tushirish fayli.

Foydalanish:
    # Adiabatik potensiallar jadvali:
    python main.py potential --config configs/potential_resonance.json

    # Spektr va model moslashi:
    python main.py spectrum --config configs/spectrum_beta20.json --out natija

    # Determinant tekshiruvi, 4 ta ip bilan:
    python main.py detcheck --threads 4
"""

import os
import sys
import argparse
import logging

from qc import __version__
from qc.config import (
    LOG_LEVEL_ENV,
    LOG_LEVELS,
    DEFAULT_LOG_LEVEL,
    OUTPUT_FORMATS,
    EXIT_OK,
    EXIT_CONFIG_ERROR,
    EXIT_NUMERICAL_ERROR,
)
from qc.errors import QCError, ConfigError

logger = logging.getLogger("qc")


def setup_logging() -> None:
    """Log darajasi QC_LOG_LEVEL dan (error, warn, info, debug)."""
    requested = os.environ.get(LOG_LEVEL_ENV, DEFAULT_LOG_LEVEL).strip().lower()
    level_name = LOG_LEVELS.get(requested, LOG_LEVELS[DEFAULT_LOG_LEVEL])
    logging.basicConfig(
        level=getattr(logging, level_name),
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        datefmt="%H:%M:%S",
    )
    if requested not in LOG_LEVELS:
        logger.warning(f"{LOG_LEVEL_ENV}={requested!r} noma'lum, '{DEFAULT_LOG_LEVEL}' ishlatiladi")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Kvazi-Kulon og'ir-og'ir-yengil uch jism tizimi (2D)",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Misollar:
  python main.py potential                         # Rezonansdagi potensiallar
  python main.py spectrum --config c.json          # Spektr, WKB va Numerov
  python main.py scattering --format json          # a1 bo'ylab A0 va qutblar
  python main.py detcheck --out tekshiruv -t 4     # Determinant tekshiruvi
        """,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config", "-c",
        type=str,
        help="JSON konfiguratsiya fayli (default: standart qiymatlar)",
    )
    common.add_argument(
        "--out", "-o",
        type=str,
        help="Natijalar papkasi (konfiguratsiyadagi output.dir ni almashtiradi)",
    )
    common.add_argument(
        "--format", "-f",
        choices=OUTPUT_FORMATS,
        help="Jadval formati: csv yoki json",
    )
    common.add_argument(
        "--threads", "-t",
        type=int,
        help="Ishchi iplar soni (natija tartibi o'zgarmaydi)",
    )

    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True
    sub.add_parser("potential", parents=[common],
                   help="Adiabatik potensiallar jadvali (4 tarmoq + asimptotikalar)")
    sub.add_parser("spectrum", parents=[common],
                   help="Og'ir zarracha spektri: WKB, Numerov, model moslashi")
    sub.add_parser("scattering", parents=[common],
                   help="Atom-molekula A0 uzunligi, qutblar va sigma0")
    sub.add_parser("detcheck", parents=[common],
                   help="Kesilgan determinant va tarmoq tenglamalari mosligi")
    return parser


def run(argv=None) -> int:
    """CLI ni bajarish; chiqish kodini qaytaradi."""
    args = build_parser().parse_args(argv)
    setup_logging()

    from qc.runconfig import load_run_config
    from qc.commands import COMMANDS, write_manifest

    overrides = {"dir": args.out, "format": args.format, "threads": args.threads}
    try:
        config = load_run_config(args.config, overrides)
        logger.info(f"{args.command}: config_hash = {config.config_hash[:12]}")
        outputs = COMMANDS[args.command](config)
        manifest = write_manifest(outputs[0].parent, args.command, config, outputs)
    except ConfigError as e:
        logger.error(f"Konfiguratsiya xatosi:\n{e}")
        return EXIT_CONFIG_ERROR
    except QCError as e:
        logger.error(f"Hisoblash xatosi ({type(e).__name__}):\n{e}")
        return EXIT_NUMERICAL_ERROR

    for path in outputs:
        print(f"  {path}")
    print(f"  {manifest}")
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
