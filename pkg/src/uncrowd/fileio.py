"""Batch I/O: CSV datasets, binary field dumps, metric and encoding exports."""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .errors import FormatError, ParseError
from .metrics import MetricRecord
from .model import DeformationField, ScatterDataset, validate_dataset

FIELD_MAGIC = b"INIMFLD\x00"
GRID_MAGIC = b"INIMGRD\x00"
_HEADER = struct.Struct("<4x4xII")  # magic handled separately; k, index


def parse_csv_lines(lines, normalize: bool = True) -> ScatterDataset:
    """Parse `x,y` or `x,y,label` rows into a validated dataset."""
    rows, labels = [], []
    iterator = iter(lines)
    header = next(iterator, "").strip().lower()
    columns = [c.strip() for c in header.split(",")]
    if columns not in (["x", "y"], ["x", "y", "label"]):
        raise ParseError(1, f"expected header 'x,y' or 'x,y,label', got {header!r}")
    labeled = len(columns) == 3
    for lineno, line in enumerate(iterator, start=2):
        line = line.strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != len(columns):
            raise ParseError(lineno, f"expected {len(columns)} fields, got {len(parts)}")
        try:
            rows.append((float(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise ParseError(lineno, str(exc)) from None
        if labeled:
            labels.append(parts[2])
    return validate_dataset(rows, labels=labels if labels else None,
                            normalize=normalize)


def load_csv(path, normalize: bool = True) -> ScatterDataset:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_csv_lines(handle, normalize=normalize)


def save_csv(dataset: ScatterDataset, path):
    with open(path, "w", encoding="utf-8") as handle:
        if dataset.labels is not None:
            handle.write("x,y,label\n")
            for (x, y), lab in zip(dataset.positions, dataset.labels):
                handle.write(f"{float(x)!r},{float(y)!r},{lab}\n")
        else:
            handle.write("x,y\n")
            for x, y in dataset.positions:
                handle.write(f"{float(x)!r},{float(y)!r}\n")


def export_field(field: DeformationField, path, iteration: int = 0):
    """Binary dump: magic, little-endian u32 k and iteration index, then
    2 * 2**2k float32 target coordinates, row-major, x before y per pixel."""
    payload = field.targets.astype("<f4").tobytes()
    with open(path, "wb") as handle:
        handle.write(FIELD_MAGIC)
        handle.write(struct.pack("<II", field.k, iteration))
        handle.write(payload)


def read_field(path):
    """Inverse of export_field; returns (DeformationField, iteration)."""
    blob = Path(path).read_bytes()
    if blob[:8] != FIELD_MAGIC:
        raise FormatError(f"bad magic in {path}")
    k, iteration = struct.unpack_from("<II", blob, 8)
    size = 1 << k
    expected = 16 + 2 * size * size * 4
    if len(blob) != expected:
        raise FormatError(f"expected {expected} bytes for k={k}, got {len(blob)}")
    targets = np.frombuffer(blob, dtype="<f4", offset=16).astype(np.float64)
    field = DeformationField(targets=targets.reshape(size, size, 2), k=k)
    return field, iteration


def export_grid(values: np.ndarray, path, k: int, index: int = 0):
    """Debug dump of a single scalar table in the field-dump layout."""
    with open(path, "wb") as handle:
        handle.write(GRID_MAGIC)
        handle.write(struct.pack("<II", k, index))
        handle.write(np.asarray(values).astype("<f4").tobytes())


def read_grid(path):
    blob = Path(path).read_bytes()
    if blob[:8] != GRID_MAGIC:
        raise FormatError(f"bad magic in {path}")
    k, index = struct.unpack_from("<II", blob, 8)
    size = 1 << k
    if len(blob) != 16 + size * size * 4:
        raise FormatError("payload size does not match header")
    values = np.frombuffer(blob, dtype="<f4", offset=16).astype(np.float64)
    return values.reshape(size, size), index


def write_metrics(records, path):
    """Line-delimited records, one per iteration, stable key order."""
    with open(path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(record.to_json_line() + "\n")


def read_metrics(path) -> list:
    with open(path, "r", encoding="utf-8") as handle:
        return [MetricRecord.from_json_line(line) for line in handle if line.strip()]


def write_polylines(polylines, metadata: dict, path):
    """Structured vector export: metadata plus one coordinate list per line."""
    doc = dict(metadata)
    doc["polylines"] = [np.asarray(line).tolist() for line in polylines]
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(doc, handle)
        handle.write("\n")
