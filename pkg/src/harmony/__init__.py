"""Harmony, concurrence and related two-qubit entanglement measures."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .measures import (LambdaSpectrum, MeasureReport, binary_entropy, concurrence,
                       concurrence_via_r, disharmony_poly, disharmony_routes,
                       entanglement_of_formation, harmony, harmony_bounds, lambda_spectrum,
                       measure_report, pure_harmony, r_spectrum, spin_flip)
from .monogamy import (decomposition_min_upper_bound, harmony_x_yz, marginal_harmonies,
                       monogamy_report, pure_monogamy_residual)
from .states import (Bell, DensityMatrix, PureState, RandomSpec, basis_state, bell_diagonal,
                     bell_state, from_pure, ghz_state, nonconvexity_family, partial_trace,
                     random_mixed, random_pure, w_state)
from .tolerances import DEFAULT as DEFAULT_TOLERANCES, Tolerances
