"""A-infinity model on Ext of a connected graded algebra, with checkers,
Massey products and recovery of the algebra from the model."""
from __future__ import annotations

from .exact_linear import Field
from .presentation import AlgebraPresentation, GradedAlgebra, PresentationError, TruncationError, load_presentation, parse_presentation
from .cobar import CobarComplex
from .merkulov import AInftyModel
from .verify import verify_model
from .massey import MasseyNotDefined, compare_with_mn, massey_product
from .recovery import check_relation_matrices, ext_oracle, recover_presentation, roundtrip_check
from .cli import load_model, save_model

__all__ = [
    "AInftyModel", "AlgebraPresentation", "CobarComplex", "Field", "GradedAlgebra", "MasseyNotDefined",
    "PresentationError", "TruncationError", "check_relation_matrices", "compare_with_mn", "ext_oracle",
    "load_model", "load_presentation", "massey_product", "parse_presentation", "recover_presentation",
    "roundtrip_check", "save_model", "verify_model",
]
