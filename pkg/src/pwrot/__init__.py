"""Exact piecewise rotations of the plane: codings, first returns, substitutions, attractors."""

from .cyclotomic import Cyclo, approx, cyclo_new, field_for_angle, format_cyclo, parse_cyclo, sign_re_im, zeta
from .dynamics import PiecewiseMap, build_map, classify, code_orbit
from .geometry import ConvexRegion, HalfPlane, Isometry, Similarity
from .induction import Substitution, base_cone, extract_substitution, first_return, induced_map

__version__ = "0.1.0"

__all__ = [
    "Cyclo",
    "approx",
    "cyclo_new",
    "field_for_angle",
    "format_cyclo",
    "parse_cyclo",
    "sign_re_im",
    "zeta",
    "PiecewiseMap",
    "build_map",
    "classify",
    "code_orbit",
    "ConvexRegion",
    "HalfPlane",
    "Isometry",
    "Similarity",
    "Substitution",
    "base_cone",
    "extract_substitution",
    "first_return",
    "induced_map",
]
