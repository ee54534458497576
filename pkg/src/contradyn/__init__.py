"""Contrarian averaging dynamics on toral lattices.

Simulation, closed-form spectral analysis, limiting-orbit prediction,
randomly mixed networks, and equidistribution diagnostics for the update

    x(t+1, v) = p x(t, v) + (1 - p)/|C| sum_{c in C} x(t, v + c)

on (Z/nZ)^m, where each agent weights itself p and averages its neighbors
with the complementary weight.
"""

from .dynamics import Trajectory, diameter, init_state, mass_center, run, step
from .equidist import (
    DiscrepancyEstimate,
    dependence_scan,
    empirical_discrepancy,
    etk_bound,
    etk_parameters,
    monotonicity_scan,
    phase_sequence,
    rotation_angle,
    rotation_vector,
    speed_log_lower_bound,
)
from .errors import ConfigError, ContradynError, DegenerateMixtureError, InvalidModelError
from .lattice import ConvolutionSet, GroupParams, inner_product, spans
from .mixing import (
    MixedSpectrum,
    MixtureSpec,
    find_transition_q,
    mixed_attractor_dimension,
    mixed_run,
    mixed_spectrum,
    ratio_decay,
)
from .orbit import (
    AttractorSample,
    OrbitModel,
    attractor_dimension,
    error_series,
    fit_error_slope,
    sample_attractor,
)
from .spectrum import (
    RegularityVerdict,
    SpectrumReport,
    eigenvalue,
    eigenvalue_grid,
    full_spectrum,
    regularity,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "ConfigError",
    "ContradynError",
    "DegenerateMixtureError",
    "InvalidModelError",
    "ConvolutionSet",
    "GroupParams",
    "inner_product",
    "spans",
    "RegularityVerdict",
    "SpectrumReport",
    "eigenvalue",
    "eigenvalue_grid",
    "full_spectrum",
    "regularity",
    "Trajectory",
    "diameter",
    "init_state",
    "mass_center",
    "run",
    "step",
    "AttractorSample",
    "OrbitModel",
    "attractor_dimension",
    "error_series",
    "fit_error_slope",
    "sample_attractor",
    "MixedSpectrum",
    "MixtureSpec",
    "find_transition_q",
    "mixed_attractor_dimension",
    "mixed_run",
    "mixed_spectrum",
    "ratio_decay",
    "DiscrepancyEstimate",
    "dependence_scan",
    "empirical_discrepancy",
    "etk_bound",
    "etk_parameters",
    "monotonicity_scan",
    "phase_sequence",
    "rotation_angle",
    "rotation_vector",
    "speed_log_lower_bound",
]
