"""Dehn twist words on surfaces with boundary, exact relation checking and long positive factorizations."""
from .words import MappingClassWord, SurfaceSpec, TwistLetter, word
from .dsl import format_word, parse_word
from .surface import standard_registry
from .twist import PositiveFactorization, equal, realize, verify_equal

__version__ = "0.1.0"

__all__ = [
    "MappingClassWord", "PositiveFactorization", "SurfaceSpec", "TwistLetter", "equal",
    "format_word", "parse_word", "realize", "standard_registry", "verify_equal", "word",
]
