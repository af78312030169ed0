"""Symplectic criteria for p-torsion of elliptic curves and the Frey-curve chain for x^3 + y^3 = z^p."""

__version__ = "0.1.0"
