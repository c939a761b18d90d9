"""F-pure thresholds of Legendre-form elliptic cubics over finite fields."""

from .elliptic import LegendreCurve, Tag, classify, make_curve, supersingular_values
from .ff import make_char2_extension, make_prime_field, make_quadratic_extension
from .fpt import FtResult, NuRecord, cross_check, ft_closed_form, ft_estimate, nu

__all__ = [
    "FtResult",
    "LegendreCurve",
    "NuRecord",
    "Tag",
    "classify",
    "cross_check",
    "ft_closed_form",
    "ft_estimate",
    "make_char2_extension",
    "make_curve",
    "make_prime_field",
    "make_quadratic_extension",
    "nu",
    "supersingular_values",
]
