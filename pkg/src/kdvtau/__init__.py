"""Exact computation of KdV tau-function correlators.

Matrix-resolvent and wave-function-kernel routes to n-point logarithmic
derivatives of KdV tau-functions, specialized to the Airy (psi-class
intersection numbers), Bessel (generalized BGW / Theta-class, parameter C)
and elliptic (Lame) solution families.  All arithmetic is exact over
rationals or parametric polynomial rings.
"""

from .rings import QQ, PolyRing, ParamPoly, rat, rat_str, double_factorial
from .diffpoly import DPOLY, DiffPoly
from .series import Mat2, TruncSeries, XSeries, TruncationError
from .multiseries import MultiSeries, expand_inverse_difference

__all__ = [
    "QQ", "PolyRing", "ParamPoly", "rat", "rat_str", "double_factorial",
    "DPOLY", "DiffPoly", "Mat2", "TruncSeries", "XSeries", "TruncationError",
    "MultiSeries", "expand_inverse_difference",
]

__version__ = "0.1.0"
