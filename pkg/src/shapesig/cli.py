"""Command-line surface: compute, batch, prototypes, eval-separation,
sensitivity, export-embedding, and loss reference evaluation.

Exit codes: 0 success, 1 validation error, 2 I/O error, 64 usage error.
Set SHAPESIG_LOG to DEBUG/INFO/WARNING/ERROR to control logging.
"""
from __future__ import annotations

import argparse
import logging
import math
import os
import sys

import numpy as np

from .analysis import (LabeledSignatureSet, PerturbationSpec, perturbation_sensitivity,
                       silhouette_separation)
from .chebyshev import FitConfig
from .errors import ShapeSigError, ValidationError
from .fileio import (parse_annotations, parse_points, read_signature_table,
                     write_signature_table)
from .geometry import SymmetryMode
from .losses import FocalParams, LossWeights, focal_loss, smooth_l1, total_loss
from .signature import (PrototypeTable, SignatureConfig, batch_resolve, build_prototypes,
                        compute_signature, resolve_signature)

log = logging.getLogger("shapesig")

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_USAGE = 64


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--sym", choices=["planar", "full3d"], default="planar")
    p.add_argument("--degree", type=int, default=179, metavar="N")
    p.add_argument("--k", type=int, default=3, metavar="K")
    p.add_argument("--min-points", type=int, default=5, metavar="M")
    p.add_argument("--clip-to-box", action="store_true")


def _config(args) -> SignatureConfig:
    return SignatureConfig(
        symmetry=SymmetryMode(args.sym),
        fit=FitConfig(degree=args.degree, top_k=args.k),
        min_points=args.min_points,
        clip_to_box=args.clip_to_box,
    )


def build_parser() -> _Parser:
    parser = _Parser(prog="shapesig", description=__doc__)
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("compute", help="signature of one object, printed as 3k floats")
    p.add_argument("--points", required=True)
    p.add_argument("--ann", required=True)
    p.add_argument("--id", required=True)
    p.add_argument("--prototypes")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_compute)

    p = sub.add_parser("batch", help="signature table for a whole dataset")
    p.add_argument("--points", required=True, help="directory of <id>.csv/.bin files")
    p.add_argument("--ann", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--prototypes")
    p.add_argument("--jobs", type=int, default=1, metavar="J")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_batch)

    p = sub.add_parser("prototypes", help="build the per-class prototype table")
    p.add_argument("--points", required=True, help="directory of <id>.csv/.bin files")
    p.add_argument("--ann", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1, metavar="J")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_prototypes)

    p = sub.add_parser("eval-separation", help="silhouette report for a signature table")
    p.add_argument("--table", required=True)
    p.set_defaults(func=_cmd_eval_separation)

    p = sub.add_parser("sensitivity", help="signature change under jitter and dropout")
    p.add_argument("--points", required=True)
    p.add_argument("--ann", required=True)
    p.add_argument("--id", required=True)
    p.add_argument("--sigma", type=float, default=0.02)
    p.add_argument("--drop", type=float, default=0.0)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0, metavar="S")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_sensitivity)

    p = sub.add_parser("export-embedding", help="rewrite a table as plot-ready CSV")
    p.add_argument("--table", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_export)

    p = sub.add_parser("loss", help="reference loss arithmetic")
    loss_sub = p.add_subparsers(dest="loss_kind")
    q = loss_sub.add_parser("focal")
    q.add_argument("--p", type=float, required=True)
    q.add_argument("--alpha", type=float, default=0.25)
    q.add_argument("--gamma", type=float, default=2.0)
    q.add_argument("--clamp", action="store_true")
    q.set_defaults(func=_cmd_loss_focal)
    q = loss_sub.add_parser("smooth-l1")
    q.add_argument("--x", type=float, required=True)
    q.set_defaults(func=_cmd_loss_smooth)
    q = loss_sub.add_parser("total")
    q.add_argument("--cls", type=float, required=True)
    q.add_argument("--loc", type=float, required=True)
    q.add_argument("--shape", type=float, required=True)
    q.add_argument("--b1", type=float, default=1.0)
    q.add_argument("--b2", type=float, default=1.0)
    q.add_argument("--b3", type=float, default=0.5)
    q.set_defaults(func=_cmd_loss_total)

    return parser


def _find_record(records, object_id: str):
    for rec in records:
        if rec.object_id == str(object_id):
            return rec
    raise ValidationError(f"no annotation with id {object_id!r}")


def _cloud_for(points_dir: str, object_id: str):
    for ext in (".csv", ".bin"):
        path = os.path.join(points_dir, object_id + ext)
        if os.path.exists(path):
            return parse_points(path)
    raise FileNotFoundError(f"no {object_id}.csv or {object_id}.bin under {points_dir}")


def _load_dataset(points_dir: str, ann_path: str):
    records = parse_annotations(ann_path)
    return [( _cloud_for(points_dir, r.object_id), r.box, r.label) for r in records], records


def _print_signature(sig) -> None:
    print(" ".join(repr(float(v)) for v in sig.values))


def _cmd_compute(args) -> int:
    cfg = _config(args)
    rec = _find_record(parse_annotations(args.ann), args.id)
    cloud = parse_points(args.points)
    if args.prototypes:
        sig = resolve_signature(cloud, rec.box, rec.label, PrototypeTable.load(args.prototypes), cfg)
    else:
        sig = compute_signature(cloud, rec.box, cfg)
        if sig is None:
            raise ValidationError(
                f"degenerate: object {rec.object_id} has <= {cfg.min_points} points "
                f"(class {rec.label!r}); pass --prototypes to substitute the class mean")
    _print_signature(sig)
    return EXIT_OK


def _cmd_batch(args) -> int:
    cfg = _config(args)
    dataset, records = _load_dataset(args.points, args.ann)
    table = PrototypeTable.load(args.prototypes) if args.prototypes else None
    results = batch_resolve(dataset, table, cfg, n_jobs=args.jobs)
    labels = [r.label for r in records]
    buckets = ["near" if math.hypot(r.box.center[0], r.box.center[1]) < 40.0 else "far"
               for r in records]
    if results:
        vectors = np.stack([sig.values for sig, _ in results])
    else:
        vectors = np.empty((0, 3 * cfg.fit.top_k))
    sources = ["prototype" if used else "computed" for _, used in results]
    rows = write_signature_table(args.out, labels, buckets, vectors, sources)
    n_proto = sum(1 for _, used in results if used)
    print(f"wrote {rows} signatures to {args.out} ({n_proto} prototype substitutions)")
    return EXIT_OK


def _cmd_prototypes(args) -> int:
    cfg = _config(args)
    dataset, records = _load_dataset(args.points, args.ann)
    table = build_prototypes(dataset, cfg, n_jobs=args.jobs)
    requested = {r.label for r in records}
    omitted = sorted(requested - set(table.classes()))
    for label in omitted:
        log.warning("class %r had no non-degenerate samples; omitted", label)
    table.save(args.out)
    print(f"wrote prototypes for {len(table.classes())} classes to {args.out} "
          f"({len(omitted)} omitted)")
    return EXIT_OK


def _cmd_eval_separation(args) -> int:
    table = read_signature_table(args.table)
    sset = LabeledSignatureSet(table.vectors, table.labels)
    value = silhouette_separation(sset)
    classes, counts = np.unique(np.array(table.labels), return_counts=True)
    print("classes " + " ".join(f"{c}={n}" for c, n in zip(classes, counts)))
    print(f"silhouette {value:.9g}")
    return EXIT_OK


def _cmd_sensitivity(args) -> int:
    cfg = _config(args)
    rec = _find_record(parse_annotations(args.ann), args.id)
    cloud = parse_points(args.points)
    spec = PerturbationSpec(gaussian_sigma=args.sigma, drop_fraction=args.drop,
                            seed=args.seed)
    mean, p99 = perturbation_sensitivity(cloud, rec.box, cfg, spec, args.trials)
    print(f"trials {args.trials}")
    print(f"mean {mean:.9g}")
    print(f"p99 {p99:.9g}")
    return EXIT_OK


def _cmd_export(args) -> int:
    table = read_signature_table(args.table)
    rows = write_signature_table(args.out, table.labels, table.buckets, table.vectors)
    print(f"wrote {rows} rows to {args.out}")
    return EXIT_OK


def _cmd_loss_focal(args) -> int:
    loss, grad = focal_loss(args.p, FocalParams(args.alpha, args.gamma), clamp=args.clamp)
    print(repr(loss), repr(grad))
    return EXIT_OK


def _cmd_loss_smooth(args) -> int:
    loss, grad = smooth_l1(args.x)
    print(repr(loss), repr(grad))
    return EXIT_OK


def _cmd_loss_total(args) -> int:
    value = total_loss(args.cls, args.loc, args.shape, LossWeights(args.b1, args.b2, args.b3))
    print(repr(value))
    return EXIT_OK


def main(argv=None) -> int:
    level = os.environ.get("SHAPESIG_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    func = getattr(args, "func", None)
    if func is None:
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    try:
        return func(args)
    except ShapeSigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
