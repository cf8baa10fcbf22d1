"""Casson-Lin invariant of braid closures via trace-free SU(2) representations."""

from .braid import BraidWord, parse_braid
from .fixedpoints import SolverOptions, casson_lin, find_classes
from .signature import determinant_of, signature_of

__all__ = ["BraidWord", "parse_braid", "SolverOptions", "casson_lin", "find_classes",
           "signature_of", "determinant_of"]
