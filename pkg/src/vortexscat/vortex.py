"""Vortex configuration and the interior radial problem of penetrable cores.

Inside a penetrable core the channel-``n`` radial function obeys

    kappa'' + kappa'/r + [k^2 - (n - mu(r))^2 / r^2] kappa = 0,

where ``mu(r)`` is the flux enclosed by the circle of radius ``r`` in units
of the flux quantum.  In the log variable ``t = ln(kr)`` this becomes
``kappa_tt = -Q kappa`` with ``Q = (kr)^2 - (n - mu(r))^2``.  We integrate it
in scaled Prufer form

    kappa = R sin(theta),   kappa_t = s R cos(theta),   s = (Q^2 + F^2)^(1/4),

so the quantity we need, the log-derivative ``kappa_t / kappa = s cot(theta)``,
is read off a smooth phase that never passes through a pole.  The floor
``F = (2 nu^2 + 1)^(2/3)`` is the Airy scale of the channel's turning point;
without it ``s`` would collapse over a t-interval far shorter than the scale
on which the solution itself varies.  All channels are integrated together
as one vector ODE.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import PchipInterpolator

from .errors import DomainError

START_FRACTION = 1e-6
ODE_RTOL = 1e-12
ODE_ATOL = 1e-13
POLE_TOL = 1e-10


@dataclass(frozen=True)
class FluxProfile:
    """Enclosed flux ``mu(r)`` inside the core.

    ``kind`` is ``"uniform"`` (constant field, ``mu(r) = mu (r/r_c)^2``) or
    ``"tabulated"``, in which case ``nodes`` holds ``(r/r_c, mu(r)/mu)``
    pairs, interpolated monotone-cubically.
    """

    mu: float = 0.0
    kind: str = "uniform"
    nodes: tuple = ()
    _interp: object = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in ("uniform", "tabulated"):
            raise DomainError(f"unknown flux profile kind {self.kind!r}")
        if self.kind == "tabulated":
            rho, frac = np.asarray(self.nodes, dtype=float).T
            if rho[0] != 0.0 or rho[-1] != 1.0 or np.any(np.diff(rho) <= 0):
                raise DomainError("profile radii must increase strictly from 0 to 1")
            if frac[0] != 0.0 or not np.isclose(frac[-1], 1.0):
                raise DomainError("profile must enclose 0 at the axis and 1 at the edge")
            object.__setattr__(self, "_interp", PchipInterpolator(rho, frac))

    @classmethod
    def from_file(cls, path: Union[str, Path], mu: float = 0.0) -> "FluxProfile":
        """Read a two-column ``r/r_c, mu(r)/mu`` text table (``#`` comments)."""
        data = np.loadtxt(path, comments="#", delimiter=None, ndmin=2)
        if data.shape[1] != 2:
            raise DomainError(f"{path}: expected two columns, got {data.shape[1]}")
        return cls(mu=mu, kind="tabulated", nodes=tuple(map(tuple, data)))

    def with_flux(self, mu: float) -> "FluxProfile":
        return FluxProfile(mu=mu, kind=self.kind, nodes=self.nodes)

    def fraction(self, rho):
        rho = np.asarray(rho, dtype=float)
        if self.kind == "uniform":
            return rho * rho
        return self._interp(np.clip(rho, 0.0, 1.0))

    def __call__(self, rho):
        """Enclosed flux at ``r = rho * r_c``."""
        return self.mu * self.fraction(rho)

    def log_slope(self, rho):
        """``r d mu / d r`` at ``r = rho * r_c``."""
        rho = np.asarray(rho, dtype=float)
        if self.kind == "uniform":
            return 2.0 * self.mu * rho * rho
        return self.mu * rho * self._interp(np.clip(rho, 0.0, 1.0), 1)


@dataclass(frozen=True)
class Impenetrable:
    """Robin wall ``cos(rho pi) psi + r_c sin(rho pi) d_r psi = 0``."""

    rho: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.rho < 1.0):
            raise DomainError("Robin parameter must lie in [0, 1)")

    @property
    def label(self) -> str:
        if self.rho == 0.0:
            return "dirichlet"
        if self.rho == 0.5:
            return "neumann"
        return f"robin:{self.rho!r}"


@dataclass(frozen=True)
class Penetrable:
    """Core threaded by a cylindrically symmetric field; ``profile=None`` means uniform."""

    profile: FluxProfile = None

    @property
    def label(self) -> str:
        if self.profile is None or self.profile.kind == "uniform":
            return "penetrable:uniform"
        return "penetrable:tabulated"


CoreModel = Union[Impenetrable, Penetrable]


@dataclass(frozen=True)
class VortexSpec:
    """A vortex of radius ``r_c`` carrying ``mu = Phi/Phi_0`` flux quanta."""

    r_c: float
    mu: float
    core: CoreModel = field(default_factory=Impenetrable)

    def __post_init__(self):
        if not (np.isfinite(self.r_c) and self.r_c > 0):
            raise DomainError("vortex radius must be positive")
        if not np.isfinite(self.mu):
            raise DomainError("flux must be finite")

    @property
    def d(self) -> float:
        return 2.0 * self.r_c

    @property
    def penetrable(self) -> bool:
        return isinstance(self.core, Penetrable)

    def flux_profile(self) -> FluxProfile:
        if not self.penetrable:
            raise DomainError("impenetrable cores have no interior flux profile")
        shape = self.core.profile or FluxProfile()
        return shape.with_flux(self.mu)


def uniform_field_profile(spec: VortexSpec) -> FluxProfile:
    """Uniform interior field: ``mu(r) = mu (r/r_c)^2``."""
    return FluxProfile(mu=spec.mu, kind="uniform")


@dataclass(frozen=True)
class RadialSolution:
    """Boundary log-derivative ``u d ln kappa_n / du`` at ``u = k r_c``.

    ``sin_theta``/``cos_theta`` hold the Prufer phase at the edge, with
    ``logderiv = scale * cos/sin``; ``pole`` marks channels where
    ``kappa_n(k r_c)`` vanishes to within tolerance, in which case
    ``logderiv`` is reported as ``inf``.
    """

    n: np.ndarray
    logderiv: np.ndarray
    sin_theta: np.ndarray
    cos_theta: np.ndarray
    scale: np.ndarray
    pole: np.ndarray
    log_amplitude: np.ndarray = None


def _floor(n, mu_edge):
    nu = np.maximum(np.abs(n), np.abs(n - mu_edge))
    return (2.0 * nu * nu + 1.0) ** (2.0 / 3.0)


def _scale(q, floor):
    return np.sqrt(np.sqrt(q * q + floor * floor))


def _integrate(n, x, profile, t_eval=None):
    """Integrate Prufer phase and log-amplitude for channels ``n`` from the
    Frobenius start to ``u = x``; returns the scipy solution object."""
    n = np.asarray(n, dtype=float)
    m = n.size
    an = np.abs(n)
    t0 = np.log(START_FRACTION * x)
    t1 = np.log(x)
    floor = _floor(n, profile(1.0))

    def q_and_dq(t):
        u = np.exp(t)
        rho = u / x
        nu = n - profile(rho)
        q = u * u - nu * nu
        dq = 2.0 * u * u + 2.0 * nu * profile.log_slope(rho)
        return q, dq

    def rhs(t, y):
        theta = y[:m]
        q, dq = q_and_dq(t)
        s4 = q * q + floor * floor
        s = np.sqrt(np.sqrt(s4))
        ds_s = q * dq / (2.0 * s4)
        sn, cs = np.sin(theta), np.cos(theta)
        dtheta = s * cs * cs + (q / s) * sn * sn + ds_s * sn * cs
        dlogr = (s - q / s) * sn * cs - ds_s * cs * cs
        return np.concatenate([dtheta, dlogr])

    # two-term Frobenius start kappa ~ u^|n| (1 + c u^2)
    q0, _ = q_and_dq(t0)
    corr = -(q0 + n * n) / (2.0 * an + 2.0)
    w0 = an + corr
    s0 = _scale(q0, floor)
    theta0 = np.arctan2(s0, w0)
    logr0 = np.zeros(m)
    return solve_ivp(
        rhs, (t0, t1), np.concatenate([theta0, logr0]), method="DOP853",
        rtol=ODE_RTOL, atol=ODE_ATOL, t_eval=t_eval, dense_output=t_eval is not None,
    )


def interior_logderivs(n, k: float, spec: VortexSpec) -> RadialSolution:
    """Boundary log-derivatives for an array of channels ``n``."""
    if not spec.penetrable:
        raise DomainError("interior solutions exist only for penetrable cores")
    x = k * spec.r_c
    if not (x > 0):
        raise DomainError("k r_c must be positive")
    n = np.atleast_1d(np.asarray(n, dtype=int))
    profile = spec.flux_profile()
    sol = _integrate(n, x, profile)
    if not sol.success:
        raise RuntimeError(f"interior integration failed: {sol.message}")
    return _edge(n, x, profile, sol.y[: n.size, -1], sol.y[n.size:, -1])


def _edge(n, x, profile, theta, logr):
    q_edge = x * x - (n - profile(1.0)) ** 2
    s = _scale(q_edge, _floor(n, profile(1.0)))
    sn, cs = np.sin(theta), np.cos(theta)
    pole = np.abs(sn) < POLE_TOL
    with np.errstate(divide="ignore", invalid="ignore"):
        logderiv = np.where(pole, np.inf, s * cs / sn)
    return RadialSolution(n, logderiv, sn, cs, s, pole, log_amplitude=logr)


def interior_logderiv(n: int, k: float, spec: VortexSpec) -> RadialSolution:
    """Single-channel convenience wrapper around :func:`interior_logderivs`."""
    return interior_logderivs([n], k, spec)


def interior_radial(n, k: float, spec: VortexSpec, r):
    """``kappa_n(k r) / kappa_n(k r_c)`` structure for interior points.

    Returns ``(sin_theta(r), log R(r) - log R(r_c), edge)`` where ``edge`` is
    the :class:`RadialSolution` at the boundary; the normalised radial
    function is ``exp(dlogR) * sin_theta`` in units of ``R(r_c)``.
    """
    x = k * spec.r_c
    n = np.atleast_1d(np.asarray(n, dtype=int))
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(r <= 0) or np.any(r > spec.r_c):
        raise DomainError("interior points must satisfy 0 < r <= r_c")
    profile = spec.flux_profile()
    t0 = np.log(START_FRACTION * x)
    t_pts = np.log(np.maximum(k * r, START_FRACTION * x))
    sol = _integrate(n, x, profile, t_eval=np.unique(np.append(t_pts, np.log(x))))
    if not sol.success:
        raise RuntimeError(f"interior integration failed: {sol.message}")
    dense = sol.sol
    y_edge = dense(np.log(x))
    y_pts = dense(t_pts)
    m = n.size
    theta_r, logr_r = y_pts[:m], y_pts[m:]
    # below the start radius use the power law kappa ~ u^|n|
    below = (k * r) < START_FRACTION * x
    extra = np.where(below, np.abs(n)[:, None] * (np.log(k * r) - t0), 0.0)
    edge = _edge(n, x, profile, y_edge[:m], y_edge[m:])
    return np.sin(theta_r), logr_r + extra - y_edge[m:, None], edge
