"""Regularity of Rees algebras, associated graded rings and fiber cones of good filtrations."""
from .arith import PolyRing, Polynomial, RingDescriptor
from .groebner import IdealHandle

__version__ = "0.1.0"

__all__ = ["PolyRing", "Polynomial", "RingDescriptor", "IdealHandle", "__version__"]
