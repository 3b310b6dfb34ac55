"""Deterministic CSV and JSON emission.

Numbers are written with 17 significant digits so parsing them back recovers
the exact float64; every artifact embeds the config hash it was produced from.
"""

from __future__ import annotations

import json
import math
import os

import numpy as np


def format_number(value) -> str:
    """17-significant-digit decimal rendering; round-trips float64 exactly."""
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, ".17g")


def _format_cell(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int,)) and not isinstance(value, bool):
        return str(value)
    return format_number(value)


def emit_csv(path, header, rows, config_hash: str | None = None) -> None:
    """Write a CSV table: optional hash comment, header row, data rows."""
    lines = []
    if config_hash is not None:
        lines.append(f"# config_hash={config_hash}")
    lines.append(",".join(str(name) for name in header))
    for row in rows:
        lines.append(",".join(_format_cell(cell) for cell in row))
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")


def read_csv(path):
    """Parse a CSV written by emit_csv: returns (header, rows-of-floats-or-str)."""
    header = None
    rows = []
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            cells = line.split(",")
            if header is None:
                header = cells
                continue
            parsed = []
            for cell in cells:
                try:
                    parsed.append(float(cell))
                except ValueError:
                    parsed.append(cell)
            rows.append(parsed)
    return header, rows


def emit_json(path, payload: dict, config_hash: str, version: str) -> None:
    """Write metadata JSON with the config hash and tool version embedded."""
    document = {"config_hash": config_hash, "version": version}
    document.update(payload)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(document, handle, indent=2, sort_keys=True,
                  default=_json_default)
        handle.write("\n")


def _json_default(value):
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    raise TypeError(f"not JSON serializable: {value!r}")


def ensure_directory(path) -> str:
    os.makedirs(path, exist_ok=True)
    return path
