"""Exact-arithmetic homological computations over filtered finite
dimensional algebras: boundary operators, homology, completion class
groups, connecting homomorphisms and Chern character cycles."""

__version__ = "0.1.0"

from .errors import HomolocalError
from .algebra import build_algebra, check_localisation_axioms
from .chains import Chain

__all__ = [
    "HomolocalError",
    "build_algebra",
    "check_localisation_axioms",
    "Chain",
    "__version__",
]
