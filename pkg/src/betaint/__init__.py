"""betaint: numerical verification of Cauchy-type beta integrals.

Scalar identities are verified by adaptive/oscillatory quadrature against
gamma-ratio closed forms; their matrix-cone extensions by Monte Carlo over
symmetric matrices and by eigenvalue quadrature with Vandermonde weight.
"""

from .errors import (BetaIntError, ConvergenceError, DegenerateProposalError,
                     DivergentHintError, DomainError, EndpointSingularityError,
                     OverflowRangeError, PoleError, UnsupportedCombinationError)
from .quadrature import (DecayHint, IntegralEstimate, integrate_finite,
                         integrate_half_line, integrate_real_line)
from .special import (bessel_j, bessel_k, beta_fn, gamma_fn, gauss_2f1,
                      kummer_1f1, log_gamma, log_multivariate_gamma,
                      multivariate_gamma, pochhammer, principal_power)

__version__ = "0.1.0"
