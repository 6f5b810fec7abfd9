"""CSV helpers: one optional ``#`` provenance line, then a header row, then data."""

from __future__ import annotations

import csv
import hashlib
import io
import json
from pathlib import Path

import numpy as np

__all__ = ["write_csv", "read_csv", "provenance_line", "config_hash"]


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def provenance_line(command: str, seed=None, config: dict | None = None) -> str:
    parts = [f"logitprior {command}"]
    if seed is not None:
        parts.append(f"seed={seed}")
    if config is not None:
        parts.append(f"config={config_hash(config)}")
    return " ".join(parts)


def _format(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def csv_text(columns, rows, provenance: str | None = None) -> str:
    buf = io.StringIO()
    if provenance:
        buf.write(f"# {provenance}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_format(v) for v in row])
    return buf.getvalue()


def write_csv(path, columns, rows, provenance: str | None = None) -> None:
    text = csv_text(columns, rows, provenance)
    if path is None or str(path) == "-":
        print(text, end="")
        return
    Path(path).write_text(text)


def read_csv(path) -> tuple[list[str], np.ndarray, str | None]:
    """Return (columns, float matrix, provenance-or-None)."""
    provenance = None
    lines = Path(path).read_text().splitlines()
    body = []
    for line in lines:
        if line.startswith("#"):
            if provenance is None and not body:
                provenance = line[1:].strip()
            continue
        if line.strip():
            body.append(line)
    reader = csv.reader(body)
    columns = next(reader)
    data = np.array([[float(v) for v in row] for row in reader], dtype=float)
    return columns, data.reshape(-1, len(columns)), provenance
