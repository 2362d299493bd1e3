"""
Configuración de entbound (tolerancias, límites de capacidad, ascenso, barridos).
"""

import os
from pathlib import Path

from dotenv import load_dotenv, find_dotenv

# Buscar .env hacia arriba desde el directorio de trabajo.
_ENV_FILE = find_dotenv(usecwd=True)
if _ENV_FILE:
    load_dotenv(_ENV_FILE)
else:
    _BASE_DIR = Path(__file__).resolve().parent.parent.parent.parent
    if (_BASE_DIR / ".env").exists():
        load_dotenv(_BASE_DIR / ".env")

# Versión del paquete (única fuente de verdad)
VERSION = "0.1.0"


def _flag(name: str, default: str) -> bool:
    return os.getenv(name, default).lower() in ("1", "true", "yes")


# Solver SDP (punto interior)
SDP_TOLERANCE = float(os.getenv("ENTBOUND_SDP_TOLERANCE", "3e-8"))
SDP_MAX_ITERATIONS = int(os.getenv("ENTBOUND_SDP_MAX_ITERATIONS", "200"))

# Dimensión máxima de un bloque extendido o purificado
SDP_DIMENSION_CAP = int(os.getenv("ENTBOUND_SDP_DIMENSION_CAP", "256"))

# Conjunto de cortes PPT en el caso multipartito: "single" | "all"
PPT_CUT_MODE = os.getenv("ENTBOUND_PPT_CUTS", "single")

# Umbral relativo de rango numérico (purificación, soporte de rho)
RANK_THRESHOLD = float(os.getenv("ENTBOUND_RANK_THRESHOLD", "1e-12"))

# Ascenso (cotas superiores)
ASCENT_TOLERANCE = float(os.getenv("ENTBOUND_ASCENT_TOLERANCE", "1e-10"))
ASCENT_MAX_ITERATIONS = int(os.getenv("ENTBOUND_ASCENT_MAX_ITERATIONS", "5000"))
ASCENT_RESTARTS_PURE = int(os.getenv("ENTBOUND_ASCENT_RESTARTS_PURE", "10"))
ASCENT_RESTARTS_MIXED = int(os.getenv("ENTBOUND_ASCENT_RESTARTS_MIXED", "5"))
ASCENT_INNER_SWEEPS = int(os.getenv("ENTBOUND_ASCENT_INNER_SWEEPS", "3"))

# Holgura permitida entre cota inferior y superior antes de reconciliar
BRACKET_SLACK = float(os.getenv("ENTBOUND_BRACKET_SLACK", "1e-7"))
RECONCILE_ATTEMPTS = int(os.getenv("ENTBOUND_RECONCILE_ATTEMPTS", "2"))

# Factor de precisión del estimador puro: "m-1" -> 4(M-1), "m-2" -> 4(M-2)
PURE_ACCURACY = os.getenv("ENTBOUND_PURE_ACCURACY", "m-1")

# Barridos
SWEEP_WORKERS = int(os.getenv("ENTBOUND_WORKERS", "1"))
DEFAULT_SEED = int(os.getenv("ENTBOUND_SEED", "0"))
WIN_TIE_TOLERANCE = float(os.getenv("ENTBOUND_WIN_TIE", "3e-8"))

# Logging: nivel (DEBUG activa trazas por iteración) y formato
LOG_LEVEL = os.getenv("ENTBOUND_LOG", "WARNING")
LOG_JSON = _flag("ENTBOUND_LOG_JSON", "true")
