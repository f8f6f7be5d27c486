"""Exact Hom/Ext computations for holonomic modules over the Weyl algebra."""

from .weyl import (WeylAlgebra, WeylElement, FreeVector, OperatorMatrix,
                   box_embed, apply_operator, parse_operator)
from .errors import (DmodError, ContextMismatch, NotHolonomic,
                     LocalizationRequired, LiftCapExceeded, NotInImage,
                     NotChainMap, NotStrict, NotSpecializable,
                     ContainmentViolated, NotAProduct, ParseError)

__version__ = "0.1.0"
