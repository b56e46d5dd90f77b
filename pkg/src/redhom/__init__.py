"""redhom: exact homological algebra over finite-dimensional local GF(p)-algebras.

Computes syzygies, Auslander transposes, Ext tables, torsionfree
classifications, G-dimension reports, and bounded searches for reducing
and upper reducing projective/Gorenstein dimensions, entirely in exact
arithmetic over a prime field.
"""

__version__ = "0.1.0"
