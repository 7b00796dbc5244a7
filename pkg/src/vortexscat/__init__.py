"""Scattering of charged waves on a finite-radius magnetic vortex."""

from importlib.metadata import PackageNotFoundError, version

from .asymptotics import (
    KernelParams,
    ab_amplitude,
    chi_phase,
    delta_kernel,
    fc_shortwave,
    fpeak_closed,
    fraunhofer_kernel,
    gamma_kernel,
    psi0_transition,
)
from .errors import (
    BesselOverflowError,
    DomainError,
    GridTooCoarseError,
    PoleError,
    QuadratureError,
    TruncationError,
    ValidityGateError,
    VortexScatError,
)
from .observables import (
    CrossSectionProfile,
    DoubleSlitSetup,
    VisibilityReport,
    central_areas,
    dcs_exact,
    dcs_shortwave,
    doubleslit_intensity,
    flux_zeros,
    optical_residual,
    sigma_classical,
    visibility_scattering,
)
from .partial_wave import (
    AmplitudeProfile,
    PartialWaveCoefficient,
    exact_fc,
    exact_psi0,
    exact_wavefunction,
    fc_decomposition,
    solve,
    uniform_grid,
    upsilon_penetrable,
    upsilon_robin,
)
from .specfun import CylValue, cyl_eval, erfc_ray, hankel1, hankel2
from .vortex import (
    FluxProfile,
    Impenetrable,
    Penetrable,
    RadialSolution,
    VortexSpec,
    interior_logderiv,
    uniform_field_profile,
)

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # pragma: no cover
    __version__ = "0.0.0"
