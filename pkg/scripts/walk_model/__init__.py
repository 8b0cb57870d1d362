"""
Walk model core: weighted step sets, characteristic polynomials and symmetry classes.
"""

from scripts.walk_model.laurent import LaurentPoly
from scripts.walk_model.model import (
    WalkModel,
    char_poly,
    fingerprint,
    load_model_file,
    model_to_dict,
    parse_and_validate,
    permute_axes,
    reflect_axis,
    scale_weights,
)
from scripts.walk_model.symmetry import (
    AxisDecomposition,
    DriftSign,
    HighlySymmetric,
    ModelClass,
    MostlySymmetric,
    Unsupported,
    canonicalize,
    classify,
    decompose,
)

__all__ = [
    "AxisDecomposition",
    "DriftSign",
    "HighlySymmetric",
    "LaurentPoly",
    "ModelClass",
    "MostlySymmetric",
    "Unsupported",
    "WalkModel",
    "canonicalize",
    "char_poly",
    "classify",
    "decompose",
    "fingerprint",
    "load_model_file",
    "model_to_dict",
    "parse_and_validate",
    "permute_axes",
    "reflect_axis",
    "scale_weights",
]
