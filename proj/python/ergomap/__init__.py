"""Exact piecewise-affine Lebesgue-preserving interval maps."""

from fractions import Fraction

from ._core import *  # noqa: F401,F403
from ._core import Rational


def fraction(r: Rational) -> Fraction:
    """Convert an exact Rational to fractions.Fraction."""
    return Fraction(str(r))
