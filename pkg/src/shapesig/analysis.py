"""Class-separation and robustness analysis of signature sets.

Embeddings are exported as CSV for external plotting; separation is
quantified with the mean silhouette coefficient on raw signature vectors.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ExportError, ValidationError
from .geometry import Box3D, PointCloud3
from .signature import SignatureConfig, compute_signature

NEAR_FAR_SPLIT_M = 40.0

EMBEDDING_VIEW_PREFIXES = ("b", "s", "f")


@dataclass(frozen=True, eq=False)
class LabeledSignatureSet:
    """Signature vectors with class labels and optional sensor distances."""

    vectors: np.ndarray
    labels: tuple[str, ...]
    distances: np.ndarray | None = None

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=np.float64)
        if v.ndim != 2:
            raise ValidationError(f"vectors must be 2D, got shape {v.shape}")
        labels = tuple(str(x) for x in self.labels)
        if len(labels) != v.shape[0]:
            raise ValidationError("labels and vectors must have equal length")
        d = self.distances
        if d is not None:
            d = np.asarray(d, dtype=np.float64).reshape(-1)
            if d.size != v.shape[0]:
                raise ValidationError("distances must match sample count")
        object.__setattr__(self, "vectors", v)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "distances", d)

    def __len__(self) -> int:
        return self.vectors.shape[0]

    @classmethod
    def from_signatures(cls, signatures, labels, distances=None):
        mat = np.stack([np.asarray(getattr(s, "values", s), dtype=np.float64)
                        for s in signatures])
        return cls(mat, tuple(labels), distances)


@dataclass(frozen=True)
class PerturbationSpec:
    """Gaussian jitter plus random point dropout, seeded for reproducibility."""

    gaussian_sigma: float = 0.0
    drop_fraction: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.gaussian_sigma < 0:
            raise ValidationError("gaussian_sigma must be >= 0")
        if not (0.0 <= self.drop_fraction < 1.0):
            raise ValidationError("drop_fraction must be in [0, 1)")


def silhouette_separation(sset: LabeledSignatureSet) -> float:
    """Mean silhouette coefficient under Euclidean distance.

    Requires at least two classes with two samples each. If every pairwise
    distance is zero the clustering is meaningless; returns 0 with a warning.
    """
    n = len(sset)
    labels = np.array(sset.labels)
    classes, counts = np.unique(labels, return_counts=True)
    if classes.size < 2:
        raise ValidationError("silhouette needs at least two classes")
    if (counts < 2).any():
        small = classes[counts < 2][0]
        raise ValidationError(f"class {small!r} needs at least two samples")

    diff = sset.vectors[:, None, :] - sset.vectors[None, :, :]
    dist = np.sqrt((diff * diff).sum(axis=2))
    if not dist.any():
        warnings.warn("all signatures identical; silhouette undefined, returning 0")
        return 0.0

    scores = np.empty(n)
    masks = {c: labels == c for c in classes}
    for i in range(n):
        own = masks[labels[i]]
        a = dist[i, own].sum() / (own.sum() - 1)
        b = min(dist[i, masks[c]].mean() for c in classes if c != labels[i])
        denom = max(a, b)
        scores[i] = 0.0 if denom == 0 else (b - a) / denom
    return float(scores.mean())


def perturbation_sensitivity(cloud: PointCloud3, box: Box3D, config: SignatureConfig,
                             spec: PerturbationSpec, trials: int) -> tuple[float, float]:
    """Relative signature change ||s' - s|| / ||s|| under jitter-then-drop.

    Returns (mean, 99th percentile) over ``trials`` seeded perturbations.
    """
    if trials < 1:
        raise ValidationError("need at least one trial")
    base = compute_signature(cloud, box, config)
    if base is None:
        raise ValidationError("base object is degenerate; nothing to perturb")
    base_norm = float(np.linalg.norm(base.values))
    if base_norm == 0:
        raise ValidationError("base signature has zero norm")

    seeds = np.random.SeedSequence(spec.seed).spawn(trials)
    changes = np.empty(trials)
    pts = cloud.points
    n = len(pts)
    for t in range(trials):
        rng = np.random.default_rng(seeds[t])
        jittered = pts
        if spec.gaussian_sigma > 0:
            jittered = pts + rng.normal(0.0, spec.gaussian_sigma, pts.shape)
        if spec.drop_fraction > 0:
            keep = n - int(round(spec.drop_fraction * n))
            idx = np.sort(rng.choice(n, size=keep, replace=False))
            jittered = jittered[idx]
        sig = compute_signature(PointCloud3(jittered, cloud.frame), box, config)
        if sig is None:
            raise ValidationError(f"trial {t}: perturbation left too few points")
        changes[t] = np.linalg.norm(sig.values - base.values) / base_norm
    return float(changes.mean()), float(np.percentile(changes, 99))


def _bucket(distance: float | None) -> str:
    if distance is None or not math.isfinite(distance):
        return ""
    return "near" if distance < NEAR_FAR_SPLIT_M else "far"


def embedding_header(k: int) -> list[str]:
    cols = ["label", "dist_bucket"]
    for prefix in EMBEDDING_VIEW_PREFIXES:
        cols.extend(f"{prefix}{i}" for i in range(k))
    return cols


def export_embedding(sset: LabeledSignatureSet, sink) -> int:
    """Write one CSV row per sample: label, near/far bucket, then the
    signature components at 9 significant digits. Returns rows written."""
    dim = sset.vectors.shape[1]
    if dim % len(EMBEDDING_VIEW_PREFIXES):
        raise ValidationError(f"signature length {dim} is not three view blocks")
    k = dim // len(EMBEDDING_VIEW_PREFIXES)

    own = isinstance(sink, (str, bytes)) or hasattr(sink, "__fspath__")
    fh = open(sink, "w", encoding="utf-8", newline="") if own else sink
    rows = 0
    try:
        fh.write(",".join(embedding_header(k)) + "\n")
        for i in range(len(sset)):
            d = None if sset.distances is None else float(sset.distances[i])
            vals = ",".join(format(v, ".9g") for v in sset.vectors[i])
            fh.write(f"{sset.labels[i]},{_bucket(d)},{vals}\n")
            rows += 1
    except OSError as exc:
        raise ExportError(f"embedding export failed after {rows} rows: {exc}", rows) from exc
    finally:
        if own:
            fh.close()
    return rows
