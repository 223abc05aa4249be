"""End-to-end shape signature pipeline and class-prototype fallback.

Per view the pipeline is: project the symmetrized canonical cloud, take the
convex hull, evaluate the angle-radius function exactly at the fit-node
angles, and Chebyshev-fit the ascending order statistics of those radii.
Sorting makes the fitted curve a smooth radius-quantile function, so the few
leading coefficients carry nearly all of it and small pose errors cannot
shuffle the encoding.
"""
from __future__ import annotations

import concurrent.futures
import json
from dataclasses import dataclass

import numpy as np

from .chebyshev import FitConfig, cheb_fit, node_angles, truncate
from .errors import UnresolvableClassError, ValidationError
from .geometry import (Box3D, PointCloud3, SymmetryMode, canonicalize, centro_symmetrize,
                       clip_to_box)
from .hull import View, convex_hull, project, radii_at_angles

DEFAULT_VIEWS = (View.BIRD, View.SIDE, View.FRONT)


@dataclass(frozen=True)
class SignatureConfig:
    """Everything that fixes a signature's meaning; keep it identical between
    prototype building and inference."""

    symmetry: SymmetryMode = SymmetryMode.PLANAR
    fit: FitConfig = FitConfig()
    n_angles: int = 360
    min_points: int = 5
    views: tuple[View, ...] = DEFAULT_VIEWS
    clip_to_box: bool = False
    clip_margin: float = 0.1

    def __post_init__(self):
        if self.min_points < 0:
            raise ValidationError("min_points must be >= 0")
        if self.n_angles < 1:
            raise ValidationError("n_angles must be >= 1")
        if not self.views:
            raise ValidationError("need at least one view")


DEFAULT_CONFIG = SignatureConfig()


@dataclass(frozen=True, eq=False)
class Signature:
    """Concatenated per-view coefficient blocks, ``k`` values per view."""

    values: np.ndarray
    k: int

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64).reshape(-1)
        if self.k < 1 or v.size == 0 or v.size % self.k:
            raise ValidationError(f"signature length {v.size} not a multiple of k={self.k}")
        if not np.isfinite(v).all():
            raise ValidationError("signature values must be finite")
        object.__setattr__(self, "values", v)

    def view_block(self, index: int) -> np.ndarray:
        return self.values[index * self.k:(index + 1) * self.k]


def compute_signature(cloud: PointCloud3, box: Box3D,
                      config: SignatureConfig = DEFAULT_CONFIG) -> Signature | None:
    """Signature of one annotated object, or None when the box is degenerate
    (too few points to model shape; resolve via prototypes)."""
    canon = canonicalize(cloud, box)
    if config.clip_to_box:
        canon = clip_to_box(canon, box, config.clip_margin)
    if len(canon) <= config.min_points:
        return None
    sym = centro_symmetrize(canon, config.symmetry)
    thetas = node_angles(config.fit.degree)
    parts = []
    for view in config.views:
        poly = convex_hull(project(sym, view))
        radii = radii_at_angles(poly, thetas)
        fit = cheb_fit(np.sort(radii), config.fit.degree)
        parts.append(truncate(fit, config.fit.top_k))
    return Signature(np.concatenate(parts), config.fit.top_k)


@dataclass(frozen=True, eq=False)
class PrototypeTable:
    """Per-class mean signatures and how many samples went into each."""

    signatures: dict[str, Signature]
    counts: dict[str, int]

    def __post_init__(self):
        if set(self.signatures) != set(self.counts):
            raise ValidationError("signatures and counts must cover the same classes")
        if any(c < 1 for c in self.counts.values()):
            raise ValidationError("prototype counts must be >= 1")

    def classes(self) -> list[str]:
        return sorted(self.signatures)

    def get(self, label: str) -> Signature | None:
        return self.signatures.get(label)

    def save(self, path) -> None:
        doc = {
            "classes": {
                label: {"count": self.counts[label], "k": sig.k,
                        "values": sig.values.tolist()}
                for label, sig in self.signatures.items()
            }
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=1)

    @classmethod
    def load(cls, path) -> "PrototypeTable":
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        sigs, counts = {}, {}
        for label, entry in doc["classes"].items():
            sigs[label] = Signature(np.array(entry["values"]), int(entry["k"]))
            counts[label] = int(entry["count"])
        return cls(sigs, counts)


def _signature_task(args):
    cloud, box, config = args
    return compute_signature(cloud, box, config)


def _map_signatures(pairs, config: SignatureConfig, n_jobs: int):
    if n_jobs <= 1 or len(pairs) < 2:
        return [compute_signature(c, b, config) for c, b in pairs]
    tasks = [(c, b, config) for c, b in pairs]
    chunk = max(1, len(tasks) // (n_jobs * 4))
    with concurrent.futures.ProcessPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(_signature_task, tasks, chunksize=chunk))


def build_prototypes(dataset, config: SignatureConfig = DEFAULT_CONFIG,
                     n_jobs: int = 1) -> PrototypeTable:
    """Average the non-degenerate signatures of each class.

    Classes whose samples are all degenerate are omitted. Sums run in dataset
    order so the result does not depend on n_jobs.
    """
    items = list(dataset)
    if not items:
        raise ValidationError("cannot build prototypes from an empty dataset")
    sigs = _map_signatures([(c, b) for c, b, _ in items], config, n_jobs)
    stacks: dict[str, list[np.ndarray]] = {}
    for (_, _, label), sig in zip(items, sigs):
        if sig is not None:
            stacks.setdefault(label, []).append(sig.values)
    table = {
        label: Signature(np.mean(np.stack(vals), axis=0), config.fit.top_k)
        for label, vals in stacks.items()
    }
    counts = {label: len(vals) for label, vals in stacks.items()}
    return PrototypeTable(table, counts)


def resolve_signature(cloud: PointCloud3, box: Box3D, label: str,
                      prototypes: PrototypeTable,
                      config: SignatureConfig = DEFAULT_CONFIG) -> Signature:
    """compute_signature, falling back to the class prototype when degenerate."""
    sig = compute_signature(cloud, box, config)
    if sig is not None:
        return sig
    proto = prototypes.get(label) if prototypes is not None else None
    if proto is None:
        raise UnresolvableClassError(
            f"degenerate object of class {label!r} has no prototype")
    return proto


def batch_resolve(dataset, prototypes: PrototypeTable | None = None,
                  config: SignatureConfig = DEFAULT_CONFIG, n_jobs: int = 1):
    """resolve_signature over a dataset; returns [(Signature, used_prototype)].

    Signatures are computed in a worker pool but substituted and returned in
    dataset order, so output is independent of n_jobs.
    """
    items = list(dataset)
    sigs = _map_signatures([(c, b) for c, b, _ in items], config, n_jobs)
    out = []
    for row, ((_, _, label), sig) in enumerate(zip(items, sigs)):
        if sig is not None:
            out.append((sig, False))
            continue
        proto = prototypes.get(label) if prototypes is not None else None
        if proto is None:
            raise UnresolvableClassError(
                f"degenerate object at row {row} of class {label!r} has no prototype")
        out.append((proto, True))
    return out
