"""Numerical toolkit for horizontal loops in the standard Engel space.

Planar fronts, their Legendrian lifts to contact R^3, the further lift
to curves tangent to the Engel plane field on R^4, rotation numbers,
embedding certificates, front moves, and verified front homotopies.
"""

__version__ = "0.1.0"
