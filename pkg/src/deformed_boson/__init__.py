"""Deformed boson (Weyl) algebras ``[A, A+] = f(N)`` on a truncated Fock space."""
from .aso import ASOElement, SigmaCoeffs, bullet_deformed, bullet_undeformed, safe_window, sigma, sigma_inverse
from .deformation import DeformationSpec, LadderTable, build_ladder_table, eval_f, scale_coefficients
from .eigenstate import (
    EigenElement,
    apply_ladder,
    conjugate,
    generator,
    inner_product,
    pi_matrix,
    sigma_hom,
    star,
)
from .equivalence import EquivalenceMap, bosonisation_map, build_map, compose, inverse, transform_generators
from .errors import (
    DegenerateDeformationError,
    DeformedBosonError,
    IncompatibleError,
    LevelCapError,
    SpecError,
    TruncationError,
    UnsupportedKindError,
)
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = [
    "ASOElement",
    "BACKEND",
    "DeformationSpec",
    "DeformedBosonError",
    "DegenerateDeformationError",
    "EigenElement",
    "EquivalenceMap",
    "IncompatibleError",
    "LadderTable",
    "LevelCapError",
    "SigmaCoeffs",
    "SpecError",
    "TruncationError",
    "UnsupportedKindError",
    "apply_ladder",
    "bosonisation_map",
    "build_ladder_table",
    "build_map",
    "bullet_deformed",
    "bullet_undeformed",
    "compose",
    "conjugate",
    "eval_f",
    "generator",
    "inner_product",
    "inverse",
    "pi_matrix",
    "safe_window",
    "scale_coefficients",
    "sigma",
    "sigma_hom",
    "sigma_inverse",
    "star",
    "transform_generators",
]
