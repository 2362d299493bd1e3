"""Interfaz de línea de comandos (typer)."""

try:
    from .main import app, main
except ImportError:
    from entbound.cli.main import app, main

__all__ = ["app", "main"]
