"""Genus-2 curves with split Jacobians, glued from two Legendre curves along 2-torsion."""

from .ec import EllipticCurve, frobenius_isogeny, velu_isogeny
from .errors import Genus2GlueError
from .ff import extension, field_create
from .g2 import CoverSpec, Genus2Curve, cover_degree, pgl2_iso_test, split_check
from .glue import GluedCurve, glue_construct
from .poly import Polynomial

__version__ = "0.1.0"

__all__ = [
    "EllipticCurve", "frobenius_isogeny", "velu_isogeny", "Genus2GlueError", "extension",
    "field_create", "CoverSpec", "Genus2Curve", "cover_degree", "pgl2_iso_test", "split_check",
    "GluedCurve", "glue_construct", "Polynomial",
]
