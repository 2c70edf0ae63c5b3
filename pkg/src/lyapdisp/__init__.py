"""Lyapunov exponents and dispersion of random nonnegative matrix products.

The package computes, for matrix pairs whose zero-digit matrix has a rank-1
power (the built-in families count odd coefficients in powers of small GF(2)
polynomials):

* the Lyapunov exponent lambda and dispersion sigma^2 by exact corner-value
  series with Wynn acceleration (`gle.exponents`),
* moment exponents L(t) by generating-function root finding and, for integer
  t, the Kronecker-power spectral radius (`gle.l_of_t`, `gle.replica_exponent`),
* Monte Carlo cross-checks (`mcsim.simulate`), and
* digital-sum companions: exact fluctuation functions, linear count
  representations and empirical dispersion (`digitsum`).
"""

from . import catalog, conjugate, digitsum, exactmat, gle, mcsim, words
from .catalog import get_family, load_family_file
from .gle import exponents, l_of_t, replica_exponent

__version__ = "0.1.0"

__all__ = [
    "catalog",
    "conjugate",
    "digitsum",
    "exactmat",
    "gle",
    "mcsim",
    "words",
    "get_family",
    "load_family_file",
    "exponents",
    "l_of_t",
    "replica_exponent",
    "__version__",
]
