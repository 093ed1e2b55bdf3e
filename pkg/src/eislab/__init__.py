"""Numerical Eisenstein series, renormalized integrals and Rankin-Selberg
transforms on the modular surface, with principal-series growth probes and a
verification CLI.

Points on the hyperbolic plane are plain ``complex`` numbers z = x + iy with
y > 0 throughout the package.
"""

__version__ = "0.1.0"

from .lattice import psl2z_model  # noqa: E402,F401
