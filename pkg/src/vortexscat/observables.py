"""Cross sections, the optical theorem, fringe visibility and the double-slit
reference pattern.

Lengths carry whatever unit ``r_c`` (or ``L, D, lambda``) is given in; the
cross sections are per unit length of the vortex, so they have the
dimension of length.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .asymptotics import SHORTWAVE_GATE, fraunhofer_kernel
from .errors import DomainError, GridTooCoarseError, QuadratureError, ValidityGateError
from .partial_wave import AmplitudeProfile, DEFAULT_TOL, _as_grid, solve
from .vortex import VortexSpec

_A = 4.0 / np.pi ** 2


# -- quadrature ---------------------------------------------------------------


def panel_quadrature(func: Callable, a: float, b: float, panel_width: float,
                     nodes: int = 16, tol: float = 1e-12, max_nodes: int = 512):
    """Composite Gauss-Legendre quadrature on panels of at most ``panel_width``.

    The node count per panel is doubled until two successive estimates agree
    to ``tol`` (relative to the integral, absolute below unit size).
    Returns ``(value, error_estimate)``.
    """
    if b <= a:
        return 0.0, 0.0
    n_panels = max(1, int(np.ceil((b - a) / panel_width - 1e-12)))
    edges = np.linspace(a, b, n_panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])[:, None]
    half = 0.5 * (edges[1:] - edges[:-1])[:, None]

    def rule(m):
        t, w = np.polynomial.legendre.leggauss(m)
        vals = func((mid + half * t).ravel()).reshape(n_panels, m)
        return float(np.sum(half * (vals @ w)[:, None]))

    prev = rule(nodes)
    m = nodes
    while m < max_nodes:
        m *= 2
        cur = rule(m)
        err = abs(cur - prev)
        if err <= tol * max(1.0, abs(cur)):
            return cur, err
        prev = cur
    raise QuadratureError(f"panel quadrature did not reach {tol:g} (last change {err:.3g})")


# -- cross sections -----------------------------------------------------------


@dataclass(frozen=True)
class CrossSectionProfile:
    """Differential cross section on a grid, split into diffraction and
    classical contributions.

    For ``source == "shortwave"`` the split is additive.  For exact profiles
    ``dcs_diffraction`` and ``dcs_classical`` are ``|f_peak|^2`` and
    ``|f_class|^2``, which do not add up to the total (interference and the
    residual channels make up the difference).
    """

    grid: np.ndarray
    dcs_total: np.ndarray
    dcs_diffraction: np.ndarray
    dcs_classical: np.ndarray
    sigma_total: float
    period_delta: float
    source: str
    forward_value: float = float("nan")
    meta: dict = field(default_factory=dict)


def fringe_period(k: float, r_c: float) -> float:
    """Angular period ``2 lambda / d`` of the diffraction fringes."""
    return 2.0 * (2.0 * np.pi / k) / (2.0 * r_c)


def diffraction_dcs(k: float, phi, spec: VortexSpec):
    """Flux-gated Fraunhofer term ``2d Delta_{d pi/2lambda}(phi) cos^2[(phi d/2lambda + Phi/Phi0) pi]``."""
    phi = np.asarray(phi, dtype=float)
    x = k * spec.r_c
    return 2.0 * spec.d * fraunhofer_kernel(0.5 * x, phi) * np.cos(0.5 * x * phi + spec.mu * np.pi) ** 2


def diffraction_dcs_expanded(k: float, phi, spec: VortexSpec):
    """The same diffraction term written with kernels of width ``k r_c`` and
    ``k r_c / 2``; algebraically identical to :func:`diffraction_dcs`."""
    phi = np.asarray(phi, dtype=float)
    x, mu = k * spec.r_c, spec.mu
    c2, s2 = np.cos(2 * mu * np.pi), np.sin(2 * mu * np.pi)
    return 2.0 * spec.r_c * (
        c2 * fraunhofer_kernel(x, phi)
        + (1.0 - c2 - s2 * np.sin(x * phi)) * fraunhofer_kernel(0.5 * x, phi)
    )


def classical_dcs_impenetrable(phi, r_c: float):
    """Ray-optics reflection ``(d/4)|sin(phi/2)|``."""
    return 0.5 * r_c * np.abs(np.sin(0.5 * np.asarray(phi, dtype=float)))


MAX_PANELS = 2_000_000


def _shortwave_sigma(k, spec, sigma_class):
    delta = fringe_period(k, spec.r_c)
    if 2.0 * np.pi / (0.5 * delta) > MAX_PANELS:
        # integral of the gated kernel over the full circle is d up to O(lambda/d)
        return spec.d + sigma_class, float("nan")
    val, err = panel_quadrature(lambda p: diffraction_dcs(k, p, spec), -np.pi, np.pi,
                                0.5 * delta, nodes=8, tol=1e-10)
    return val + sigma_class, err


def dcs_shortwave(k: float, grid, spec: VortexSpec, gate: float = SHORTWAVE_GATE,
                  tol: float = DEFAULT_TOL) -> CrossSectionProfile:
    """Short-wavelength differential cross section (diffraction + classical)."""
    x = k * spec.r_c
    if x < gate:
        raise ValidityGateError(f"k r_c = {x:g} below the short-wavelength gate {gate:g}")
    phi = _as_grid(grid)
    diff = diffraction_dcs(k, phi, spec)
    if spec.penetrable:
        sol = solve(k, spec, tol)
        cls = np.abs(sol.amplitude(phi, "classical")) ** 2
        sigma_cls = sol.parseval("classical")
    else:
        cls = classical_dcs_impenetrable(phi, spec.r_c)
        sigma_cls = spec.d
    sigma, err = _shortwave_sigma(k, spec, sigma_cls)
    forward = float(diffraction_dcs(k, 0.0, spec))
    return CrossSectionProfile(
        grid=phi, dcs_total=diff + cls, dcs_diffraction=diff, dcs_classical=cls,
        sigma_total=sigma, period_delta=fringe_period(k, spec.r_c), source="shortwave",
        forward_value=forward, meta={"sigma_error": err, "k_rc": x},
    )


def dcs_exact(k: float, grid, spec: VortexSpec, tol: float = DEFAULT_TOL) -> CrossSectionProfile:
    """``|f_c|^2`` from the exact partial-wave amplitude.

    ``sigma_total`` comes from panel quadrature keyed to the fringe period
    (at least 16 samples per period).
    """
    phi = _as_grid(grid)
    sol = solve(k, spec, tol)
    f = sol.amplitude(phi)
    if _scatters(sol):
        peak = sol.amplitude(phi, "peak")
        cls = sol.amplitude(phi, "classical")
    else:
        # a core that scatters nothing has no diffraction or classical part
        peak = cls = np.zeros_like(f)
    delta = fringe_period(k, spec.r_c)
    width = min(0.5 * delta, np.pi / 8)
    sigma, err = panel_quadrature(lambda p: np.abs(sol.amplitude(p)) ** 2, -np.pi, np.pi,
                                  width, nodes=8, tol=1e-11)
    return CrossSectionProfile(
        grid=phi, dcs_total=np.abs(f) ** 2, dcs_diffraction=np.abs(peak) ** 2,
        dcs_classical=np.abs(cls) ** 2, sigma_total=sigma, period_delta=delta, source="exact",
        forward_value=float(abs(sol.amplitude(0.0)) ** 2),
        meta={"sigma_error": err, "k_rc": k * spec.r_c, "n_max": sol.n_max,
              "n_range": sol.n_range, "tail_estimate": sol.tail_estimate,
              "truncation_constant": sol.truncation_constant},
    )


def _scatters(sol) -> bool:
    return bool(np.any(sol.upper.upsilon != 0) or np.any(sol.lower.upsilon != 0))


def exact_central_area(k: float, spec: VortexSpec, window: float = 1.0,
                       tol: float = DEFAULT_TOL) -> float:
    """``(1/2d) int |f_c|^2 dphi`` over ``|phi| <= window * delta`` for the exact amplitude."""
    sol = solve(k, spec, tol)
    delta = fringe_period(k, spec.r_c)
    half = min(window * delta, np.pi)
    val, _ = panel_quadrature(lambda p: np.abs(sol.amplitude(p)) ** 2, -half, half,
                              min(0.5 * delta, half), nodes=16, tol=1e-11)
    return val / (2.0 * spec.d)


def sigma_classical(spec: VortexSpec, k: float, tol: float = DEFAULT_TOL) -> float:
    """Integrated classical cross section.

    ``2 r_c`` exactly for an impenetrable core; for a penetrable core the
    integral of ``|f_class|^2``, done by Parseval over the channel window.
    """
    if not spec.penetrable:
        return spec.d
    if spec.mu == 0.0:
        return 0.0
    return solve(k, spec, tol).parseval("classical")


# -- optical theorem ----------------------------------------------------------


def _periodic_spacing(phi):
    n = phi.size
    h = 2.0 * np.pi / n
    expected = -np.pi + (np.arange(n) + 0.5) * h
    if np.max(np.abs(phi - expected)) > 1e-12:
        return None
    return h


def optical_residual(profile: AmplitudeProfile, mu: Optional[float] = None,
                     r_c: Optional[float] = None, tol: float = 1e-12) -> float:
    """Relative mismatch of the flux-modified optical theorem.

    ``|LHS - RHS| / RHS`` with
    ``LHS = 2 sqrt(2pi/k) cos(mu pi) Im f_c(0) + 4 r_c sin^2(mu pi)`` and
    ``RHS = int |f_c|^2``.  The integral uses the periodic trapezoid rule on
    the profile's own samples, which must form a full-circle midpoint grid.
    """
    mu = profile.mu if mu is None else mu
    r_c = profile.r_c if r_c is None else r_c
    phi = np.asarray(profile.phi)
    h = _periodic_spacing(phi)
    if h is None:
        raise GridTooCoarseError("optical_residual needs a full-circle uniform midpoint grid")
    dens = np.abs(profile.f) ** 2
    rhs = h * float(np.sum(dens))
    n = phi.size
    if profile.n_range is not None:
        # |f|^2 is a trigonometric polynomial of this degree
        degree = profile.n_range[1] - profile.n_range[0]
        err = 0.0 if n > degree else np.inf
    elif n % 3 == 0:
        err = abs(rhs - 3.0 * h * float(np.sum(dens[1::3])))
    else:
        err = np.inf
    if err > tol * abs(rhs):
        raise GridTooCoarseError(f"quadrature error estimate {err:.3g} exceeds tolerance")
    f0 = profile.value_at(0.0)
    lhs = (2.0 * np.sqrt(2.0 * np.pi / profile.k) * np.cos(mu * np.pi) * f0.imag
           + 4.0 * r_c * np.sin(mu * np.pi) ** 2)
    if rhs == 0.0:
        # nothing scattered: the identity holds iff the forward side vanishes too
        return 0.0 if lhs == 0.0 else np.inf
    return abs(lhs - rhs) / rhs


# -- visibility ---------------------------------------------------------------


@dataclass(frozen=True)
class VisibilityReport:
    V: float
    resolution: float
    flux: float


def visibility_scattering(flux: float, d_over_lambda: Optional[float] = None) -> VisibilityReport:
    """Central-point visibility of the diffraction pattern at detector
    resolution of half a fringe period; ``flux`` in units of ``Phi_0``."""
    c = np.cos(2.0 * np.pi * flux)
    v = abs(1.0 - _A + (1.0 + _A) * c) / (1.0 + _A + (1.0 - _A) * c)
    res = 1.0 / d_over_lambda if d_over_lambda else float("nan")
    return VisibilityReport(V=float(v), resolution=res, flux=flux)


def visibility_from_dcs(dcs: Callable, delta: float) -> float:
    """Visibility from any cross-section callable, comparing ``phi = 0`` with
    ``phi = delta/2``."""
    a, b = float(dcs(0.0)), float(dcs(0.5 * delta))
    return abs(a - b) / (a + b)


def flux_zeros(n: int):
    """Fluxes ``(Phi_{n+}, Phi_{n-})`` / ``Phi_0`` where the visibility vanishes."""
    shift = 0.25 + np.arcsin((1.0 - _A) / (1.0 + _A)) / (2.0 * np.pi)
    return n + shift, n - shift


# -- Fig. 1 normalisation -----------------------------------------------------


def normalized_curve(flux: float, d_over_lambda: float, x, include_classical: bool = False):
    """``delta dsigma/dphi / sigma_tot`` against ``x = phi/delta`` with ``sigma_tot = 2d``."""
    spec = VortexSpec(0.5, flux)
    k = 2.0 * np.pi * d_over_lambda
    delta = fringe_period(k, spec.r_c)
    phi = np.asarray(x, dtype=float) * delta
    y = diffraction_dcs(k, phi, spec)
    if include_classical:
        y = y + classical_dcs_impenetrable(phi, spec.r_c)
    return delta * y / (2.0 * spec.d)


def central_areas(flux: float, d_over_lambda: float, window: float = 1.0,
                  include_classical: bool = False, tol: float = 1e-12) -> float:
    """Area under the normalised curve over ``|phi/delta| <= window``.

    The classical floor is left out by default: it adds ``~delta^2/16`` to
    the area, below 1e-5 only for ``d/lambda >= 10^3``.
    """
    if d_over_lambda < 100:
        raise ValidityGateError("central_areas needs d/lambda >= 100")
    # 64 or more nodes per oscillation
    val, _ = panel_quadrature(
        lambda x: normalized_curve(flux, d_over_lambda, x, include_classical),
        -window, window, 0.5, nodes=32, tol=tol,
    )
    return val


def outer_fraction(flux: float, d_over_lambda: float) -> float:
    """Diffraction area outside ``|phi| < delta`` relative to the area inside."""
    inner = central_areas(flux, d_over_lambda)
    delta = 2.0 / d_over_lambda
    outer, _ = panel_quadrature(
        lambda x: normalized_curve(flux, d_over_lambda, x), 1.0, np.pi / delta, 0.5,
        nodes=16, tol=1e-10,
    )
    left, _ = panel_quadrature(
        lambda x: normalized_curve(flux, d_over_lambda, x), -np.pi / delta, -1.0, 0.5,
        nodes=16, tol=1e-10,
    )
    return (outer + left) / inner


# -- double slit --------------------------------------------------------------


@dataclass(frozen=True)
class DoubleSlitSetup:
    """Two-beam interference past an impenetrable vortex.

    ``L`` screen distance, ``D`` slit separation, ``wavelength`` and the
    flux ``Phi_over_Phi0``.  The single-beam envelope is a Gaussian
    ``I0 exp(-y^2 / 2 w^2)`` with ``w = envelope_width`` (default twice the
    fringe period).
    """

    L: float
    D: float
    wavelength: float
    Phi_over_Phi0: float = 0.0
    envelope_width: Optional[float] = None
    I0: float = 1.0

    def __post_init__(self):
        if min(self.L, self.D, self.wavelength) <= 0:
            raise DomainError("L, D and wavelength must be positive")

    @property
    def paraxial(self) -> bool:
        """Whether ``L >> D`` and ``L >> lambda`` (factor 100)."""
        return self.L >= 100.0 * self.D and self.L >= 100.0 * self.wavelength

    def period(self) -> float:
        return self.wavelength * self.L / self.D

    def angular_period(self) -> float:
        return self.wavelength / self.D

    def envelope(self, y):
        w = self.envelope_width or 2.0 * self.period()
        y = np.asarray(y, dtype=float)
        return self.I0 * np.exp(-0.5 * (y / w) ** 2)

    def intensity(self, y):
        y = np.asarray(y, dtype=float)
        phase = (y * self.D / (self.wavelength * self.L) + self.Phi_over_Phi0) * np.pi
        return 4.0 * self.envelope(y) * np.cos(phase) ** 2

    def visibility(self) -> float:
        """Central visibility in closed form from ``I0(0)`` and ``I0(Delta/2)``."""
        a, b = float(self.envelope(0.0)), float(self.envelope(0.5 * self.period()))
        c = np.cos(2.0 * np.pi * self.Phi_over_Phi0)
        return abs(a - b + (a + b) * c) / (a + b + (a - b) * c)

    def visibility_direct(self) -> float:
        i0, ih = float(self.intensity(0.0)), float(self.intensity(0.5 * self.period()))
        return abs(i0 - ih) / (i0 + ih)


def doubleslit_intensity(setup: DoubleSlitSetup, y):
    if not setup.paraxial:
        warnings.warn("double-slit setup violates L >> D, lambda; angular formulas are approximate",
                      stacklevel=2)
    return setup.intensity(y)
