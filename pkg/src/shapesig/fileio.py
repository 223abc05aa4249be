"""Point, annotation, and signature-table file formats.

Points: text CSV ``x,y,z[,intensity]`` one point per line, or raw
little-endian float32 quadruples (x, y, z, intensity), chosen by extension.
Annotations: a JSON list of records with fields id, label, center, size
(w, l, h), yaw, frame. Signature tables share the embedding CSV schema with
an optional trailing ``source`` column (computed | prototype).
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass

import numpy as np

from .analysis import embedding_header
from .errors import PointParseError, SchemaError, ValidationError
from .geometry import Box3D, Frame, PointCloud3, normalize_yaw

BIN_RECORD_BYTES = 16  # four little-endian float32 per point


def parse_points(path) -> PointCloud3:
    """Load a sensor-frame cloud from a .csv or .bin file."""
    ext = os.path.splitext(os.fspath(path))[1].lower()
    if ext == ".csv":
        return _parse_points_csv(path)
    if ext == ".bin":
        return _parse_points_bin(path)
    raise PointParseError(f"unknown point file extension {ext!r} (want .csv or .bin)")


def _parse_points_csv(path) -> PointCloud3:
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            fields = line.split(",")
            if len(fields) not in (3, 4):
                raise PointParseError(
                    f"{path}: line {lineno}: expected 3 or 4 fields, got {len(fields)}")
            try:
                x, y, z = (float(fields[i]) for i in range(3))
            except ValueError as exc:
                raise PointParseError(f"{path}: line {lineno}: {exc}") from exc
            if not all(map(math.isfinite, (x, y, z))):
                raise ValidationError(f"{path}: line {lineno}: non-finite coordinate")
            rows.append((x, y, z))
    pts = np.array(rows, dtype=np.float64) if rows else np.empty((0, 3))
    return PointCloud3(pts, Frame.SENSOR)


def _parse_points_bin(path) -> PointCloud3:
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) % BIN_RECORD_BYTES:
        raise PointParseError(
            f"{path}: length {len(blob)} not a multiple of {BIN_RECORD_BYTES} bytes")
    data = np.frombuffer(blob, dtype="<f4").reshape(-1, 4)
    xyz = data[:, :3].astype(np.float64)
    if xyz.size and not np.isfinite(xyz).all():
        bad = int(np.argwhere(~np.isfinite(xyz).all(axis=1))[0, 0])
        raise ValidationError(
            f"{path}: non-finite coordinate in record at byte {bad * BIN_RECORD_BYTES}")
    return PointCloud3(xyz, Frame.SENSOR)


def write_points(path, cloud: PointCloud3) -> None:
    """Store a cloud; CSV keeps 9 significant digits, .bin is exact float32."""
    ext = os.path.splitext(os.fspath(path))[1].lower()
    if ext == ".csv":
        with open(path, "w", encoding="utf-8", newline="") as fh:
            for x, y, z in cloud.points:
                fh.write(f"{x:.9g},{y:.9g},{z:.9g}\n")
    elif ext == ".bin":
        quads = np.zeros((len(cloud), 4), dtype="<f4")
        quads[:, :3] = cloud.points
        with open(path, "wb") as fh:
            fh.write(quads.tobytes())
    else:
        raise PointParseError(f"unknown point file extension {ext!r} (want .csv or .bin)")


@dataclass(frozen=True, eq=False)
class AnnotationRecord:
    """One annotated object: id, class label, box, and source frame id."""

    object_id: str
    label: str
    box: Box3D
    frame_id: str


_ANN_FIELDS = ("id", "label", "center", "size", "yaw", "frame")


def parse_annotations(path) -> list[AnnotationRecord]:
    """Load the canonical JSON annotation schema; yaw is wrapped to [-pi, pi)."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(doc, list):
        raise SchemaError(f"{path}: top level must be a list of records")
    records = []
    for i, rec in enumerate(doc):
        name = f"record {i}" + (f" (id={rec.get('id')!r})" if isinstance(rec, dict) else "")
        if not isinstance(rec, dict):
            raise SchemaError(f"{path}: {name}: not an object")
        for fieldname in _ANN_FIELDS:
            if fieldname not in rec:
                raise SchemaError(f"{path}: {name}: missing field {fieldname!r}")
        label = str(rec["label"])
        if not label:
            raise SchemaError(f"{path}: {name}: empty class label")
        center = rec["center"]
        size = rec["size"]
        if not (isinstance(center, list) and len(center) == 3):
            raise SchemaError(f"{path}: {name}: center must be [x, y, z]")
        if not (isinstance(size, list) and len(size) == 3):
            raise SchemaError(f"{path}: {name}: size must be [w, l, h]")
        try:
            box = Box3D(np.array([float(v) for v in center]),
                        tuple(float(v) for v in size),
                        normalize_yaw(float(rec["yaw"])))
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"{path}: {name}: {exc}") from exc
        records.append(AnnotationRecord(str(rec["id"]), label, box, str(rec["frame"])))
    return records


def write_annotations(path, records) -> None:
    doc = [
        {
            "id": r.object_id,
            "label": r.label,
            "center": [float(v) for v in r.box.center],
            "size": [r.box.w, r.box.l, r.box.h],
            "yaw": r.box.yaw,
            "frame": r.frame_id,
        }
        for r in records
    ]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)


@dataclass(frozen=True, eq=False)
class SignatureTable:
    """Rows of a signature table file."""

    labels: tuple[str, ...]
    buckets: tuple[str, ...]
    vectors: np.ndarray
    sources: tuple[str, ...] | None = None


def write_signature_table(path, labels, buckets, vectors, sources=None) -> int:
    """Write the embedding CSV schema (plus a source column when given)."""
    vectors = np.asarray(vectors, dtype=np.float64)
    if vectors.ndim != 2 or vectors.shape[1] % 3:
        raise ValidationError(f"vectors must be (n, 3k), got {vectors.shape}")
    header = embedding_header(vectors.shape[1] // 3)
    if sources is not None:
        header = header + ["source"]
    rows = 0
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for i in range(vectors.shape[0]):
            vals = ",".join(format(v, ".9g") for v in vectors[i])
            tail = f",{sources[i]}" if sources is not None else ""
            fh.write(f"{labels[i]},{buckets[i]},{vals}{tail}\n")
            rows += 1
    return rows


def read_signature_table(path) -> SignatureTable:
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    if not lines:
        raise SchemaError(f"{path}: empty table")
    header = lines[0].split(",")
    if header[:2] != ["label", "dist_bucket"]:
        raise SchemaError(f"{path}: unexpected header {header[:2]}")
    has_source = header[-1] == "source"
    value_cols = len(header) - 2 - (1 if has_source else 0)
    if value_cols < 3 or value_cols % 3:
        raise SchemaError(f"{path}: expected 3k value columns, got {value_cols}")
    labels, buckets, sources, rows = [], [], [], []
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split(",")
        if len(fields) != len(header):
            raise SchemaError(f"{path}: line {lineno}: expected {len(header)} fields")
        labels.append(fields[0])
        buckets.append(fields[1])
        try:
            rows.append([float(v) for v in fields[2:2 + value_cols]])
        except ValueError as exc:
            raise SchemaError(f"{path}: line {lineno}: {exc}") from exc
        if has_source:
            sources.append(fields[-1])
    vectors = np.array(rows, dtype=np.float64) if rows else np.empty((0, value_cols))
    return SignatureTable(tuple(labels), tuple(buckets), vectors,
                          tuple(sources) if has_source else None)
