"""shapesig: compact, noise-robust 3D shape signatures from lidar object clouds.

The pipeline canonicalizes an annotated object's points, completes the
partial scan by symmetry, projects to bird/side/front views, takes convex
hulls, and Chebyshev-fits each view's angle-radius function; the leading
coefficients of the three views form the signature vector.
"""

from .analysis import (LabeledSignatureSet, PerturbationSpec, export_embedding,
                       perturbation_sensitivity, silhouette_separation)
from .chebyshev import (ChebyshevFit, FitConfig, cheb_eval, cheb_fit, cheb_nodes,
                        cheb_reconstruct, node_angles, truncate)
from .errors import (EmptyViewError, ExportError, FrameError, PointParseError,
                     SchemaError, ShapeSigError, UnresolvableClassError, ValidationError)
from .fileio import (AnnotationRecord, SignatureTable, parse_annotations, parse_points,
                     read_signature_table, write_annotations, write_points,
                     write_signature_table)
from .geometry import (Box3D, Frame, PointCloud3, SymmetryMode, canonicalize,
                       centro_symmetrize, clip_to_box, normalize_yaw, yaw_rotation)
from .hull import (ConvexPolygon, RadialProfile, View, convex_hull, project,
                   radial_profile, radial_profile_at, radii_at_angles)
from .losses import (FocalParams, LossWeights, focal_loss, localization_loss,
                     shape_loss, smooth_l1, total_loss)
from .signature import (PrototypeTable, Signature, SignatureConfig, batch_resolve,
                        build_prototypes, compute_signature, resolve_signature)

__version__ = "0.1.0"
