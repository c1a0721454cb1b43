"""Exact affine actions on Lambda-trees and affine Lyndon length functions."""

from .oag import (
    Elem,
    Half,
    IntLex,
    Laurent,
    LexPair,
    LinearHom,
    Localized,
    MonomialShift,
    PositiveScale,
    Triangular,
    UnipotentInt,
    compose_aut,
    identity_aut,
    invert_aut,
    solve_displacement,
)
from .trees import LinearTree, OrbitSpace, StarPoint, StarTree, certify_zero_hyperbolic
from .affine import AffineMap, StarMap, classify, fixed_points, is_rigid
from .words import FpWord, enumerate_ball, fmt, parse
from .lyndon import (
    ActionContext,
    ActionLength,
    LengthFunction,
    ancillary,
    base_change,
    orbit_pseudometric,
    verify_axioms,
    verify_length_props,
)
from .combinators import FreeProductLength, certify_free, fp_ancillary_c, fp_length

__version__ = "0.1.0"

__all__ = [
    "Elem",
    "Half",
    "IntLex",
    "Laurent",
    "LexPair",
    "LinearHom",
    "Localized",
    "MonomialShift",
    "PositiveScale",
    "Triangular",
    "UnipotentInt",
    "compose_aut",
    "identity_aut",
    "invert_aut",
    "solve_displacement",
    "LinearTree",
    "OrbitSpace",
    "StarPoint",
    "StarTree",
    "certify_zero_hyperbolic",
    "AffineMap",
    "StarMap",
    "classify",
    "fixed_points",
    "is_rigid",
    "FpWord",
    "enumerate_ball",
    "fmt",
    "parse",
    "ActionContext",
    "ActionLength",
    "LengthFunction",
    "ancillary",
    "base_change",
    "orbit_pseudometric",
    "verify_axioms",
    "verify_length_props",
    "FreeProductLength",
    "certify_free",
    "fp_ancillary_c",
    "fp_length",
]
