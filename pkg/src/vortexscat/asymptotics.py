"""Closed-form asymptotics: the Aharonov-Bohm amplitude, the large-distance
form of the core-independent wave, the Fraunhofer kernels and the
short-wavelength core amplitude.

Kernel windows are the integer channels with ``|n - mu| <= x``, i.e.
``n`` in ``[ceil(mu - x), floor(mu + x)]`` with ties included.  Sums over the
window are evaluated as finite geometric progressions; ``phi = 0`` always
uses the analytic limit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ValidityGateError
from .partial_wave import AmplitudeProfile, _as_grid
from .specfun import erfc_ray
from .vortex import VortexSpec

SHORTWAVE_GATE = 100.0
PSI0_GATE = 50.0


def _sgn(phi):
    return np.where(phi > 0, 1.0, np.where(phi < 0, -1.0, 0.0))


@dataclass(frozen=True)
class KernelParams:
    """Width ``x`` and flux ``mu`` of a channel window."""

    x: float
    mu: float

    def __post_init__(self):
        if not (self.x > 0):
            raise DomainError("kernel width must be positive")

    @property
    def mu_floor(self) -> int:
        return int(np.floor(self.mu))

    @property
    def window(self) -> tuple:
        return int(np.ceil(self.mu - self.x)), int(np.floor(self.mu + self.x))


def _geometric(a, b, phi):
    """``sum_{n=a}^{b} exp(i n phi)`` in closed form (zero when ``b < a``)."""
    phi = np.asarray(phi, dtype=float)
    count = b - a + 1
    if count <= 0:
        return np.zeros(phi.shape, dtype=complex)
    half = 0.5 * phi
    s = np.sin(half)
    small = np.abs(s) < 1e-300
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(small, count, np.sin(count * half) / np.where(small, 1.0, s))
    return np.exp(1j * 0.5 * (a + b) * phi) * ratio


def delta_kernel(params: KernelParams, phi):
    """``(1/2pi) sum_{|n-mu|<=x} exp(i n phi)``.

    Complex in general: it is real only when the window is symmetric about
    ``n = 0``.
    """
    lo, hi = params.window
    return _geometric(lo, hi, phi) / (2.0 * np.pi)


def gamma_kernel(params: KernelParams, phi):
    """``(1/2pi i) sum_{|n-mu|<=x} sgn(n - mu) exp(i n phi)``; an ``n = mu``
    channel (integer flux) has weight zero."""
    lo, hi = params.window
    mu = params.mu
    above = _geometric(max(lo, int(np.floor(mu)) + 1), hi, phi)
    below = _geometric(lo, min(hi, int(np.ceil(mu)) - 1), phi)
    return (above - below) / (2j * np.pi)


def fraunhofer_kernel(x: float, phi):
    """``sin^2(x phi) / (4 pi x sin^2(phi/2))``, equal to ``x/pi`` at ``phi = 0``."""
    phi = np.asarray(phi, dtype=float)
    if not (x > 0):
        raise DomainError("kernel width must be positive")
    tiny = np.abs(phi) * x < 1e-8
    safe = np.where(tiny, 1.0, phi)
    val = np.sin(x * safe) ** 2 / (4.0 * np.pi * x * np.sin(0.5 * safe) ** 2)
    return np.where(tiny, x / np.pi, val)


def ab_amplitude(k: float, phi, mu: float):
    """Aharonov-Bohm amplitude ``i e^{i([mu]+1/2)phi} sin(mu pi) / (sqrt(2 pi k) sin(phi/2))``."""
    phi = np.asarray(phi, dtype=float)
    s_mu = np.sin(mu * np.pi)
    if mu == np.round(mu):
        return np.zeros(phi.shape, dtype=complex)
    if np.any(phi == 0):
        raise DomainError("the AB amplitude diverges in the forward direction; use psi0_transition")
    return (1j * np.exp(1j * (np.floor(mu) + 0.5) * phi) * s_mu
            / (np.sqrt(2.0 * np.pi * k) * np.sin(0.5 * phi)))


def psi0_transition(r: float, phi, k: float, mu: float):
    """Large-distance form of the core-independent wave, uniform across the
    forward shadow boundary (erfc transition)."""
    if not (k * r > PSI0_GATE):
        raise ValidityGateError(f"psi0_transition needs k r > {PSI0_GATE}")
    phi = np.asarray(phi, dtype=float)
    arg = np.sqrt(2.0 * k * r) * np.abs(np.sin(0.5 * phi))
    bracket = 1.0 - np.exp(1j * (0.5 + np.floor(mu) - mu) * phi) * erfc_ray(arg)
    return np.exp(1j * (k * r * np.cos(phi) + mu * phi)) * (
        np.cos(mu * np.pi) - 1j * _sgn(phi) * np.sin(mu * np.pi) * bracket
    )


def psi0_far(r: float, phi, k: float, mu: float):
    """Away from the forward direction: distorted plane wave plus AB wave."""
    phi = np.asarray(phi, dtype=float)
    plane = np.exp(1j * k * r * np.cos(phi)) * np.exp(1j * mu * (phi - _sgn(phi) * np.pi))
    return plane + ab_amplitude(k, phi, mu) * np.exp(1j * (k * r + np.pi / 4)) / np.sqrt(r)


def psi0_forward(r: float, phi, k: float, mu: float):
    """Inside the forward shadow region: plane wave damped by ``cos(mu pi)``."""
    return np.exp(1j * k * r * np.cos(np.asarray(phi, dtype=float))) * np.cos(mu * np.pi)


def chi_phase(rho: float, x: float, phi):
    """Boundary phase of the reflected wave for a Robin wall.

    ``arctan[2x|sin^3(phi/2)| / (2 cot(rho pi) sin^2(phi/2) - 1)]`` on the
    branch continuous in ``phi`` on each half-axis and vanishing at
    ``phi -> 0``.  The Dirichlet wall (``rho = 0``) gives identically zero.
    """
    phi = np.asarray(phi, dtype=float)
    if not (0.0 <= rho < 1.0):
        raise DomainError("Robin parameter must lie in [0, 1)")
    if rho == 0.0:
        return np.zeros(phi.shape)
    s = np.abs(np.sin(0.5 * phi))
    sr, cr = np.sin(rho * np.pi), np.cos(rho * np.pi)
    if rho == 0.5:
        cr = 0.0
    # numerator and denominator multiplied by sin(rho pi) > 0
    num = 2.0 * x * s ** 3 * sr
    den = 2.0 * cr * s * s - sr
    return np.arctan2(num, den) - np.pi


def fpeak_closed(k: float, grid, mu: float, x: float) -> AmplitudeProfile:
    """Fraunhofer peak ``i sqrt(2pi/k) [cos(mu pi) Delta - sin(mu pi) Gamma]``
    with kernel width ``x = k r_c``."""
    if not (x > 0):
        raise DomainError("k r_c must be positive")
    phi = _as_grid(grid)
    params = KernelParams(x, mu)
    f = 1j * np.sqrt(2.0 * np.pi / k) * (
        np.cos(mu * np.pi) * delta_kernel(params, phi) - np.sin(mu * np.pi) * gamma_kernel(params, phi)
    )
    lo, hi = params.window
    return AmplitudeProfile(k=k, phi=phi, f=f, n_max=max(hi, -lo), n_range=(lo, hi),
                            r_c=x / k, mu=mu, source="peak")


def reflection_term(k: float, phi, spec: VortexSpec):
    """Geometric-optics reflection off a Robin wall."""
    phi = np.asarray(phi, dtype=float)
    x = k * spec.r_c
    s = np.abs(np.sin(0.5 * phi))
    chi = chi_phase(spec.core.rho, x, phi)
    phase = -2.0 * x * s + spec.mu * (phi - _sgn(phi) * np.pi) - 2.0 * chi - np.pi / 4
    return -np.sqrt(0.5 * spec.r_c * s) * np.exp(1j * phase)


def fc_shortwave(k: float, grid, spec: VortexSpec, gate: float = SHORTWAVE_GATE) -> AmplitudeProfile:
    """Short-wavelength core amplitude: Fraunhofer peak plus geometric
    reflection.  The ``sqrt(r_c) (k r_c)^(-1/6)`` remainder is reported as
    ``uncertainty`` rather than computed."""
    if spec.penetrable:
        raise DomainError("fc_shortwave covers impenetrable cores; use fc_decomposition")
    x = k * spec.r_c
    if x < gate:
        raise ValidityGateError(f"k r_c = {x:g} below the short-wavelength gate {gate:g}")
    peak = fpeak_closed(k, grid, spec.mu, x)
    refl = reflection_term(k, peak.phi, spec)
    return AmplitudeProfile(
        k=k, phi=peak.phi, f=peak.f + refl, parts={"peak": peak.f, "reflection": refl},
        n_range=None, r_c=spec.r_c, mu=spec.mu, source="shortwave",
        uncertainty=np.sqrt(spec.r_c) * x ** (-1.0 / 6.0),
    )
