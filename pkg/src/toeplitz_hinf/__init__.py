"""How well do finite Toeplitz sections approximate the H-infinity norm?

The operator norm of the n x n section ``T_n(g)`` of a stable system's
convolution operator increases to ``||G||_inf``.  This package certifies
bounds on the gap between the two and simulates the data-driven estimators
that compete on it, time-reversal power iteration and FIR least squares.
"""

from .bounds import (
    C1,
    C2,
    BoundBreakdown,
    GapBoundReport,
    SmoothnessCertificate,
    bg_lower_bound,
    optimize_gamma,
    required_length,
    smoothness_exact_fir,
    smoothness_from_decay,
    theorem1_gap_bound,
)
from .errors import (
    BoundTooWeakError,
    DomainError,
    InvalidArgumentError,
    ResourceError,
    UnstableSystemError,
)
from .protocols import (
    QueryOracle,
    fir_least_squares,
    gap_experiment,
    oracle_query,
    wahlberg_power_method,
)
from .systems import (
    DecayCertificate,
    Fir,
    HinfResult,
    ImpulseSequence,
    SinglePole,
    StateSpace,
    decay_certificate,
    frequency_response,
    hinf_norm,
    impulse_response,
    scaled_hinf_norm,
    stability_radius,
)
from .toeplitz import (
    NormEstimate,
    ToeplitzSection,
    adjoint_matvec,
    operator_norm_dense,
    operator_norm_power,
    toeplitz_matvec,
    tridiag_lambda_max,
    trig_poly,
    trig_poly_l2_check,
    widom_residual,
)

__version__ = "0.1.0"
