"""Finite-precision (phi, Gamma)-modules over the Robba ring at p.

Submodules: padic, series, phigamma, herr, pairing, iwasawa, fildmod,
homalg, parsing, cli, acceptance.
"""

from .errors import RobbaError
from .padic import PadicScalar
from .series import LaurentSeries, Window

__version__ = "0.1.0"
__all__ = ["LaurentSeries", "PadicScalar", "RobbaError", "Window", "__version__"]
