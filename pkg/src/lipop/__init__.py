"""Analytic Lipschitz spaces of vector-valued functions and weighted
composition operators between them: norms, boundedness and compactness
criteria, and operator-norm lower bounds."""

from .errors import LipopError

__version__ = "0.1.0"

__all__ = ["LipopError", "__version__"]
