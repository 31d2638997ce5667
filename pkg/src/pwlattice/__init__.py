"""Discrete Paley-Wiener spaces of discrete entire functions on Z^2."""
from .errors import *  # noqa: F401,F403
from .lattice import (
    BandParameters,
    DiscreteContour,
    GridFunction,
    LatticePoint,
    contour_integral,
    discrete_exponential,
    extend_layer,
    holomorphicity_residual,
    max_holomorphicity_residual,
    phi,
    square_contour,
    torus_grid,
)
from .sampling import (
    ReconstructionReport,
    SamplingSet,
    approx_A,
    bernstein_check,
    beurling_lower_density,
    gaps,
    interpolate_T,
    necessary_condition,
    reconstruct,
    sampling_inequality_check,
    sufficient_condition,
    wirtinger_check,
)
from .spectral import (
    CheckResult,
    KernelQuery,
    PWFunction,
    SpectralFunction,
    analyze,
    kernel,
    kernel_closed_form,
    project,
    reproduce,
    synthesize,
)

__version__ = "0.1.0"
