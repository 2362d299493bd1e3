"""
Salida de barridos: CSV con columnas fijas o JSON validado contra sweep_schema.json.
"""

import csv
import io
import json
from pathlib import Path
from typing import Any, Dict, List, Optional

import jsonschema
from cachetools import LRUCache, cached

try:
    from ..config.models import SCHEMA_VERSION, SweepRow, SweepSpec
    from ..core.errors import UsageError
except ImportError:
    from entbound.config.models import SCHEMA_VERSION, SweepRow, SweepSpec
    from entbound.core.errors import UsageError

SCHEMA_PATH = Path(__file__).with_name("sweep_schema.json")
COLUMNS = list(SweepRow.model_fields)


@cached(LRUCache(maxsize=1))
def load_schema() -> Dict[str, Any]:
    return json.loads(SCHEMA_PATH.read_text(encoding="utf-8"))


def _prepare(rows: List[SweepRow], no_timings: bool) -> List[Dict[str, Any]]:
    out = []
    for row in rows:
        data = row.model_dump(mode="json")
        if no_timings:
            data["wall_time_seconds"] = 0.0
        out.append(data)
    return out


def rows_to_csv(rows: List[SweepRow], no_timings: bool = False) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=COLUMNS, lineterminator="\n")
    writer.writeheader()
    for data in _prepare(rows, no_timings):
        data["extras"] = json.dumps(data["extras"], sort_keys=True)
        writer.writerow({k: "" if v is None else v for k, v in data.items()})
    return buffer.getvalue()


def sweep_document(rows: List[SweepRow], spec: SweepSpec, no_timings: bool = False) -> Dict[str, Any]:
    document = {
        "schema_version": SCHEMA_VERSION,
        "experiment": spec.experiment,
        "spec": spec.model_dump(mode="json", exclude={"out"}),
        "rows": _prepare(rows, no_timings),
    }
    validate_document(document)
    return document


def validate_document(document: Dict[str, Any]) -> None:
    try:
        jsonschema.validate(document, load_schema())
    except jsonschema.ValidationError as e:
        raise UsageError(f"salida de barrido inválida: {e.message}")


def render(rows: List[SweepRow], spec: SweepSpec, fmt: Optional[str] = None, no_timings: bool = False) -> str:
    fmt = fmt or spec.format
    if fmt == "csv":
        return rows_to_csv(rows, no_timings)
    if fmt == "json":
        return json.dumps(sweep_document(rows, spec, no_timings), indent=2, sort_keys=True) + "\n"
    raise UsageError(f"formato desconocido: {fmt!r}")


def write_output(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")


__all__ = ["COLUMNS", "SCHEMA_PATH", "load_schema", "rows_to_csv", "sweep_document", "validate_document", "render", "write_output"]
