"""Exact threshold-detector and photon-number statistics for linear optics.

Core objects:

- `matfunc`: permanent-based and determinant-based matrix functions
  (Bristolian, unitary Bristolian, Torontonian, loop Torontonian, loop
  hafnian) with compensated inclusion/exclusion summation.
- `fock`: Fock inputs through lossy or unitary channels, threshold
  probabilities and marginals, generating functions, distributions.
- `gaussian`: Gaussian states (Husimi covariance + means), constructors,
  channels, threshold and photon-number probabilities.
- `oracles`: brute-force reference implementations for everything above.
- `cli`: `clickstats` command line entry point.
"""

from .errors import (
    CapExceeded,
    ClickStatsError,
    DimensionMismatch,
    InvalidChannel,
    InvalidInput,
    NotHermitian,
    NotPositiveDefinite,
    SpecFormatError,
    UnphysicalState,
)
from .fock import (
    FockExperiment,
    fock_amplitude,
    fock_distribution,
    generating_function,
    marginal_threshold_prob_fock,
    marginal_vacuum_prob,
    threshold_prob_fock,
)
from .gaussian import (
    GaussianState,
    ReducedForm,
    apply_channel,
    displace,
    gaussian_distribution,
    photon_number_prob,
    reduce,
    scattershot_O,
    single_mode_squeezed,
    threshold_prob_gaussian,
    two_mode_squeezed,
    vacuum_prob_marginal,
    vacuum_state,
)
from .linalg import haar_random_unitary, permanent, unitary_dilation
from .matfunc import brs, lhaf, ltor, ltor_parallel, tor, ubrs

__version__ = "0.1.0"

__all__ = [
    "CapExceeded",
    "ClickStatsError",
    "DimensionMismatch",
    "FockExperiment",
    "GaussianState",
    "InvalidChannel",
    "InvalidInput",
    "NotHermitian",
    "NotPositiveDefinite",
    "ReducedForm",
    "SpecFormatError",
    "UnphysicalState",
    "__version__",
    "apply_channel",
    "brs",
    "displace",
    "fock_amplitude",
    "fock_distribution",
    "gaussian_distribution",
    "generating_function",
    "haar_random_unitary",
    "lhaf",
    "ltor",
    "ltor_parallel",
    "marginal_threshold_prob_fock",
    "marginal_vacuum_prob",
    "permanent",
    "photon_number_prob",
    "reduce",
    "scattershot_O",
    "single_mode_squeezed",
    "threshold_prob_fock",
    "threshold_prob_gaussian",
    "tor",
    "two_mode_squeezed",
    "ubrs",
    "unitary_dilation",
    "vacuum_prob_marginal",
    "vacuum_state",
]
