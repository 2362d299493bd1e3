"""
Logging estructurado en JSON para entbound.

Cada línea es un objeto JSON con timestamp, level, logger, message, el contexto
activo (experimento, punto del barrido, cota) y los `extra_fields` del registro.
Las trazas por iteración del solver y del ascenso salen a nivel DEBUG.
"""

import json
import logging
import math
import sys
from contextlib import contextmanager
from contextvars import ContextVar
from datetime import datetime, timezone
from typing import Any, Dict, Iterator

import numpy as np

try:
    from ..config import config as app_config
except ImportError:
    from entbound.config import config as app_config

# asyncio.to_thread copia el contexto: cada punto de un barrido conserva el suyo.
_CONTEXT: ContextVar[Dict[str, Any]] = ContextVar("entbound_log_context", default={})


def _plain(value: Any) -> Any:
    """Valores numéricos a JSON estricto: NaN/inf como texto, complejos como [re, im]."""
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float):
        return value if math.isfinite(value) else str(value)
    if isinstance(value, complex):
        return [_plain(value.real), _plain(value.imag)]
    if isinstance(value, np.ndarray):
        return {"shape": list(value.shape), "dtype": str(value.dtype)}
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


class JsonFormatter(logging.Formatter):
    """Formatea cada registro como una línea JSON."""

    def format(self, record: logging.LogRecord) -> str:
        log_obj: Dict[str, Any] = {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }
        log_obj.update(_CONTEXT.get())
        if record.exc_info:
            log_obj["exception"] = self.formatException(record.exc_info)
        # logger.debug(..., extra={"extra_fields": {"iter": 3, "gap": 1e-6}})
        if isinstance(getattr(record, "extra_fields", None), dict):
            log_obj.update(record.extra_fields)
        return json.dumps(_plain(log_obj), ensure_ascii=False, default=str)


@contextmanager
def log_context(**fields: Any) -> Iterator[None]:
    """Añade campos (experiment, point, method, ...) a todos los registros del bloque."""
    token = _CONTEXT.set({**_CONTEXT.get(), **fields})
    try:
        yield
    finally:
        _CONTEXT.reset(token)


def setup_logging(level: str = "WARNING", stream=None, use_json: bool = True) -> None:
    """
    Configura el logger raíz `entbound`, a stderr por defecto: stdout queda para
    los resultados. Si ya hay handler, solo se actualiza el nivel.
    """
    root = logging.getLogger("entbound")
    root.setLevel(getattr(logging, level.upper(), logging.WARNING))
    if not root.handlers:
        handler = logging.StreamHandler(stream or sys.stderr)
        handler.setFormatter(
            JsonFormatter() if use_json else logging.Formatter("%(levelname)s %(name)s: %(message)s")
        )
        root.addHandler(handler)
    root.propagate = False


def get_logger(name: str) -> logging.Logger:
    if not name.startswith("entbound."):
        name = f"entbound.{name}"
    return logging.getLogger(name)


try:
    setup_logging(level=app_config.LOG_LEVEL, use_json=app_config.LOG_JSON)
except Exception as e:
    print(f"Warning: Error configurando logging: {e}", file=sys.stderr)

__all__ = ["get_logger", "setup_logging", "log_context", "JsonFormatter"]
