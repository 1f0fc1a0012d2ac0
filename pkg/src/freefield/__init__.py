"""freefield: exact free-field realizations and their BRST complexes.

Everything is computed over the field Q(kappa) of rational functions in a
formal parameter kappa, with no floating point anywhere.
"""

__version__ = "0.1.0"

from .scalar import Scalar, kappa, delta_weight  # noqa: F401
