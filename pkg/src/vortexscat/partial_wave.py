"""Exact partial-wave solution of scattering on a finite-radius vortex.

Channel ``n`` carries Bessel order ``alpha = |n - mu|``.  Outside the core
the radial function is ``J_alpha(kr) - Upsilon_n H1_alpha(kr)``; the
scattering coefficient ``Upsilon_n`` follows from the Robin wall condition
or, for penetrable cores, from matching log-derivatives with the interior
solution.  The far-field core amplitude is

    f_c(phi) = i sqrt(2/(pi k)) sum_n exp(i n phi) exp(i pi (|n| - |n - mu|)) Upsilon_n.

Channel sums are truncated at ``|n - mu| ~ k r_c + C (k r_c)^(1/3)`` and the
neglected tail is bounded from the geometric decay of ``|Upsilon_n|`` past
the turning point.  Sums run over channels paired symmetrically about ``mu``
with Neumaier-compensated accumulation, so results do not depend on how
the channel work was scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError, PoleError, TruncationError
from .specfun import bessel_arrays
from .vortex import VortexSpec, interior_logderivs, interior_radial

TRUNCATION_CONSTANTS = (6.0, 8.0, 10.0)
TRUNCATION_MARGIN = 10
DEFAULT_TOL = 1e-12


# -- channel bookkeeping ------------------------------------------------------


def channel_phase(n, mu):
    """``exp(i pi (|n| - |n - mu|))``, the far-field phase of channel ``n``."""
    n = np.asarray(n, dtype=float)
    return np.exp(1j * np.pi * (np.abs(n) - np.abs(n - mu)))


def paired_channels(mu: float, j_max: int):
    """Channels above and below ``mu`` in summation order.

    Returns ``(upper, lower)`` with ``upper[j] = floor(mu) + 1 + j`` and
    ``lower[j] = floor(mu) - j``; together they cover every integer with
    ``|n - mu| <= j_max`` exactly once (an integer ``mu`` sits in ``lower``).
    """
    base = int(np.floor(mu))
    j = np.arange(j_max + 1)
    return base + 1 + j, base - j


def channel_budget(x: float, c: float) -> int:
    return int(np.ceil(x + c * np.cbrt(x) + TRUNCATION_MARGIN))


def compensated_sum(terms):
    """Neumaier summation of an iterable of equally shaped complex arrays."""
    total = None
    comp = None
    for t in terms:
        t = np.asarray(t, dtype=complex)
        if total is None:
            total = t.copy()
            comp = np.zeros_like(total)
            continue
        s = total + t
        # real and imaginary parts are compensated independently
        for part in ("real", "imag"):
            a, b, ss = getattr(total, part), getattr(t, part), getattr(s, part)
            big = np.abs(a) >= np.abs(b)
            err = np.where(big, (a - ss) + b, (b - ss) + a)
            if part == "real":
                comp = comp + err
            else:
                comp = comp + 1j * err
        total = s
    if total is None:
        return 0.0
    return total + comp


def _geometric_tail(mags) -> float:
    """Bound on ``sum_{j > J} |c_j|`` from the last two magnitudes."""
    last, prev = float(mags[-1]), float(mags[-2])
    if last == 0.0:
        return 0.0
    if prev == 0.0 or last >= prev:
        return np.inf
    q = last / prev
    return last * q / (1.0 - q)


# -- scattering coefficients --------------------------------------------------


def _robin_ab(alpha, rho, u):
    j, y, jp, yp = bessel_arrays(alpha, u)
    if rho == 0.0:
        return j, y
    if rho == 0.5:
        return u * jp, u * yp
    c, s = np.cos(rho * np.pi), np.sin(rho * np.pi)
    with np.errstate(invalid="ignore"):
        return c * j + s * u * jp, c * y + s * u * yp


def _ratio(a, b):
    """``(a / (a + ib), (a - ib) / (a + ib))`` with overflow of ``b`` mapped to
    ``(0, -1)``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    finite = np.isfinite(b)
    bb = np.where(finite, b, 1.0)
    den = a + 1j * bb
    with np.errstate(invalid="ignore", divide="ignore"):
        ups = np.where(finite, a / den, 0.0)
        til = np.where(finite, (a - 1j * bb) / den, -1.0)
    return ups, til, den


def upsilon_robin(alpha, rho: float, u: float):
    """Robin-wall coefficient ``Upsilon_alpha^(rho)(u)``.

    ``(cos(rho pi) J + sin(rho pi) u J') / (cos(rho pi) H1 + sin(rho pi) u H1')``,
    which is the ratio ``J/H1`` times the ratio of ``cot(rho pi)`` shifted
    log-derivatives; ``rho = 0`` is the Dirichlet limit ``J/H1``.
    """
    if not (0.0 <= rho < 1.0):
        raise DomainError("Robin parameter must lie in [0, 1)")
    a, b = _robin_ab(alpha, rho, u)
    ups, _, den = _ratio(a, b)
    if np.any(den == 0):
        raise PoleError("Robin denominator vanishes")
    return complex(ups) if np.ndim(ups) == 0 else ups


@dataclass(frozen=True)
class PartialWaveCoefficient:
    """Scattering data of one angular-momentum channel."""

    n: int
    alpha: float
    upsilon: complex
    upsilon_tilde: complex
    tail_bound: float = 0.0
    pole: bool = False


@dataclass(frozen=True)
class ChannelTable:
    """Vectorised :class:`PartialWaveCoefficient` data for many channels."""

    n: np.ndarray
    alpha: np.ndarray
    upsilon: np.ndarray
    upsilon_tilde: np.ndarray
    pole: np.ndarray

    def __getitem__(self, i) -> PartialWaveCoefficient:
        return PartialWaveCoefficient(
            int(self.n[i]), float(self.alpha[i]), complex(self.upsilon[i]),
            complex(self.upsilon_tilde[i]), pole=bool(self.pole[i]),
        )


def channel_table(n, k: float, spec: VortexSpec) -> ChannelTable:
    """Scattering coefficients ``Upsilon_n`` and ``Upsilon~_n`` for channels ``n``."""
    n = np.atleast_1d(np.asarray(n, dtype=int))
    alpha = np.abs(n - spec.mu)
    x = k * spec.r_c
    if not (x > 0):
        raise DomainError("k r_c must be positive")
    if not spec.penetrable:
        a, b = _robin_ab(alpha, spec.core.rho, x)
        ups, til, den = _ratio(a, b)
        if np.any(den == 0):
            raise PoleError("Robin denominator vanishes")
        return ChannelTable(n, alpha, ups, til, np.zeros(n.size, dtype=bool))
    if spec.mu == 0.0:
        # free interior: kappa_n = J_|n| and every channel decouples exactly
        z = np.zeros(n.size, dtype=complex)
        return ChannelTable(n, alpha, z, z - 1.0, np.zeros(n.size, dtype=bool))
    edge = interior_logderivs(n, k, spec)
    j, y, jp, yp = bessel_arrays(alpha, x)
    # Upsilon = (L J - u J') / (L H - u H') with L = s cos/sin, multiplied through by sin
    a = edge.scale * edge.cos_theta * j - x * jp * edge.sin_theta
    b = edge.scale * edge.cos_theta * y - x * yp * edge.sin_theta
    ups, til, _ = _ratio(a, b)
    return ChannelTable(n, alpha, ups, til, edge.pole)


def upsilon_penetrable(n: int, k: float, spec: VortexSpec) -> PartialWaveCoefficient:
    """Matching coefficient of one channel of a penetrable core.

    Pole-flagged channels (interior solution vanishing at the edge) come out
    as the Dirichlet value ``J/H1`` automatically, since the matching formula
    is evaluated in Prufer form.
    """
    if not spec.penetrable:
        raise DomainError("upsilon_penetrable needs a penetrable core")
    return channel_table([n], k, spec)[0]


# -- certified channel solution -----------------------------------------------


@dataclass(frozen=True)
class PartialWaveSolution:
    """Channel coefficients of ``f_c`` for one ``(k, spec)``, truncated with a
    certified tail.  Evaluate with :meth:`amplitude`."""

    k: float
    spec: VortexSpec
    upper: ChannelTable
    lower: ChannelTable
    tail_estimate: float
    truncation_constant: float

    @property
    def x(self) -> float:
        return self.k * self.spec.r_c

    @property
    def n_max(self) -> int:
        return int(max(self.upper.n[-1], -self.lower.n[-1]))

    @property
    def n_range(self) -> tuple:
        return int(self.lower.n[-1]), int(self.upper.n[-1])

    def _prefactor(self) -> complex:
        return 1j * np.sqrt(2.0 / (np.pi * self.k))

    def coefficients(self, part: str = "total"):
        """``(n_up, c_up, n_lo, c_lo)``: amplitude coefficients of ``exp(i n phi)``.

        ``part`` is one of ``total``, ``peak``, ``classical``, ``residual``.
        """
        mu, x = self.spec.mu, self.x
        pre = self._prefactor()
        out = []
        for tab in (self.upper, self.lower):
            ph = channel_phase(tab.n, mu)
            inside = tab.alpha <= x
            if part == "total":
                c = pre * ph * tab.upsilon
            elif part == "peak":
                c = np.where(inside, 0.5 * pre * ph, 0.0)
            elif part == "classical":
                c = np.where(inside, 0.5 * pre * ph * tab.upsilon_tilde, 0.0)
            elif part == "residual":
                c = np.where(inside, 0.0, pre * ph * tab.upsilon)
            else:
                raise ValueError(f"unknown amplitude part {part!r}")
            out.extend([tab.n, c])
        return tuple(out)

    def amplitude(self, phi, part: str = "total"):
        phi = np.asarray(phi, dtype=float)
        n_up, c_up, n_lo, c_lo = self.coefficients(part)
        terms = (
            c_up[j] * np.exp(1j * n_up[j] * phi) + c_lo[j] * np.exp(1j * n_lo[j] * phi)
            for j in range(n_up.size)
        )
        return compensated_sum(terms)

    def parseval(self, part: str = "total") -> float:
        """``int_{-pi}^{pi} |f|^2 dphi`` from the coefficients."""
        _, c_up, _, c_lo = self.coefficients(part)
        return 2.0 * np.pi * float(np.sum(np.abs(c_up) ** 2) + np.sum(np.abs(c_lo) ** 2))


def _extend(table: Optional[ChannelTable], n, k, spec) -> ChannelTable:
    if table is not None and table.n.size >= len(n):
        return ChannelTable(*(getattr(table, f)[: len(n)] for f in
                              ("n", "alpha", "upsilon", "upsilon_tilde", "pole")))
    start = 0 if table is None else table.n.size
    new = channel_table(n[start:], k, spec)
    if table is None:
        return new
    return ChannelTable(*(np.concatenate([getattr(table, f), getattr(new, f)]) for f in
                          ("n", "alpha", "upsilon", "upsilon_tilde", "pole")))


def solve(k: float, spec: VortexSpec, tol: float = DEFAULT_TOL) -> PartialWaveSolution:
    """Compute channel coefficients until the tail bound drops below ``tol``.

    ``tol`` and the reported ``tail_estimate`` bound ``sup_phi |f_c - f_c^trunc|``
    in units of ``sqrt(r_c)``.
    """
    if not (tol > 0):
        raise DomainError("tolerance must be positive")
    if not (k > 0):
        raise DomainError("wavenumber must be positive")
    x = k * spec.r_c
    pre = np.sqrt(2.0 / (np.pi * k)) / np.sqrt(spec.r_c)
    up = lo = None
    tail = np.inf
    for c in TRUNCATION_CONSTANTS:
        j_max = channel_budget(x, c)
        n_up, n_lo = paired_channels(spec.mu, j_max)
        up = _extend(up, n_up, k, spec)
        lo = _extend(lo, n_lo, k, spec)
        tail = pre * (_geometric_tail(np.abs(up.upsilon)) + _geometric_tail(np.abs(lo.upsilon)))
        if tail < tol:
            return PartialWaveSolution(k, spec, up, lo, tail, c)
    raise TruncationError(
        f"tail bound {tail:.3g} above tolerance {tol:.3g} after {len(up.n)} channel pairs"
    )


# -- far-field profiles -------------------------------------------------------


@dataclass(frozen=True)
class AmplitudeProfile:
    """Complex amplitude sampled on an angular grid strictly inside ``(-pi, pi)``.

    ``parts`` (when present) maps ``peak``, ``classical`` and ``residual`` to
    arrays summing to ``f``.  ``n_range`` is the inclusive channel window of
    an exact profile, i.e. the Fourier support of ``f``; ``uncertainty`` is
    the size of the unresolved remainder of asymptotic profiles.
    """

    k: float
    phi: np.ndarray
    f: np.ndarray
    n_max: int = 0
    tail_estimate: float = 0.0
    parts: Optional[dict] = None
    n_range: Optional[tuple] = None
    r_c: float = 1.0
    mu: float = 0.0
    source: str = "exact"
    uncertainty: float = 0.0
    solution: Optional[PartialWaveSolution] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        phi = np.asarray(self.phi, dtype=float)
        if phi.ndim != 1 or np.any(np.diff(phi) <= 0):
            raise DomainError("angular grid must be one-dimensional and strictly increasing")
        if phi[0] <= -np.pi or phi[-1] >= np.pi:
            raise DomainError("angular grid must lie strictly inside (-pi, pi)")

    @property
    def dcs(self):
        return np.abs(self.f) ** 2

    def value_at(self, phi0: float = 0.0) -> complex:
        hit = np.flatnonzero(self.phi == phi0)
        if hit.size:
            return complex(self.f[hit[0]])
        if self.solution is not None:
            return complex(self.solution.amplitude(phi0))
        raise DomainError(f"profile has no sample at phi = {phi0}")


def uniform_grid(n_points: int, half_width: float = np.pi):
    """Midpoint grid of ``n_points`` on ``(-half_width, half_width)``.

    For odd ``n_points`` it contains ``phi = 0``; on the full circle it is a
    periodic trapezoid grid, exact for trigonometric polynomials of degree
    below ``n_points``.
    """
    if n_points < 1:
        raise DomainError("grid needs at least one point")
    if not (0 < half_width <= np.pi):
        raise DomainError("grid half-width must lie in (0, pi]")
    h = 2.0 * half_width / n_points
    return -half_width + (np.arange(n_points) + 0.5) * h


def _as_grid(grid):
    if np.isscalar(grid):
        return uniform_grid(int(grid))
    return np.asarray(grid, dtype=float)


def exact_fc(k: float, grid, spec: VortexSpec, tol: float = DEFAULT_TOL) -> AmplitudeProfile:
    """Exact core amplitude ``f_c`` on ``grid`` (an array, or a point count
    for :func:`uniform_grid`)."""
    phi = _as_grid(grid)
    sol = solve(k, spec, tol)
    return AmplitudeProfile(
        k=k, phi=phi, f=sol.amplitude(phi), n_max=sol.n_max, tail_estimate=sol.tail_estimate,
        n_range=sol.n_range, r_c=spec.r_c, mu=spec.mu, source="exact", solution=sol,
    )


def fc_decomposition(k: float, grid, spec: VortexSpec, tol: float = DEFAULT_TOL) -> AmplitudeProfile:
    """:func:`exact_fc` with the peak / classical / residual split.

    Channels with ``|n - mu| <= k r_c`` contribute ``(1 + Upsilon~_n)/2`` to
    the peak (first term) and classical (second term) parts; the remaining
    channels form the residual.  For impenetrable cores ``Upsilon~ = 2 Upsilon - 1``.
    """
    phi = _as_grid(grid)
    sol = solve(k, spec, tol)
    parts = {p: sol.amplitude(phi, p) for p in ("peak", "classical", "residual")}
    return AmplitudeProfile(
        k=k, phi=phi, f=sol.amplitude(phi), n_max=sol.n_max, tail_estimate=sol.tail_estimate,
        parts=parts, n_range=sol.n_range, r_c=spec.r_c, mu=spec.mu, source="exact", solution=sol,
    )


# -- wave function ------------------------------------------------------------


def _radial_terms(alpha, kr, table: Optional[ChannelTable]):
    """Exterior radial functions ``J_alpha(kr) - Upsilon H1_alpha(kr)``."""
    j, y, _, _ = bessel_arrays(alpha, kr)
    j = np.where(np.isfinite(j), j, 0.0)
    if table is None:
        return j.astype(complex)
    yfin = np.isfinite(y)
    scat = np.where(yfin, table.upsilon * (j + 1j * np.where(yfin, y, 0.0)), 0.0)
    return j - scat


def exact_wavefunction(r, phi, k: float, spec: Optional[VortexSpec], tol: float = DEFAULT_TOL):
    """Full scattering state ``psi(r, phi)`` (incident wave from ``phi = pi``).

    ``spec=None`` gives the flux-free plane wave; use :func:`exact_psi0` for
    the pure Aharonov-Bohm state without a core.  Points may be broadcast
    arrays; ``r`` must be a scalar.
    """
    return _wavefunction(r, phi, k, spec, tol, with_core=True)


def exact_psi0(r: float, phi, k: float, mu: float, tol: float = DEFAULT_TOL):
    """The core-independent part ``psi_0``: the partial-wave sum with ``Upsilon = 0``."""
    return _wavefunction(r, phi, k, VortexSpec(1.0, mu), tol, with_core=False)


def _wavefunction(r, phi, k, spec, tol, with_core):
    if spec is None:
        spec = VortexSpec(1.0, 0.0)
        with_core = False
    r = float(r)
    if not (r > 0):
        raise DomainError("radius must be positive")
    if with_core and not spec.penetrable and r < spec.r_c * (1 - 1e-14):
        raise DomainError("impenetrable core: wave function exists only for r >= r_c")
    phi = np.asarray(phi, dtype=float)
    mu = spec.mu
    kr, x = k * r, k * spec.r_c
    interior = with_core and spec.penetrable and r < spec.r_c
    scale = max(kr, x) if with_core else kr
    for c in TRUNCATION_CONSTANTS:
        j_max = channel_budget(scale, c)
        n_up, n_lo = paired_channels(mu, j_max)
        n = np.concatenate([n_up, n_lo])
        alpha = np.abs(n - mu)
        if interior:
            sin_r, dlogr, edge = interior_radial(n, k, spec, r)
            jx, yx, jpx, ypx = bessel_arrays(alpha, x)
            den = edge.scale * edge.cos_theta * (jx + 1j * yx) - x * (jpx + 1j * ypx) * edge.sin_theta
            with np.errstate(over="ignore", invalid="ignore"):
                radial = -(2j / np.pi) * np.exp(dlogr[:, 0]) * sin_r[:, 0] / den
            radial = np.where(np.isfinite(radial), radial, 0.0)
        else:
            table = channel_table(n, k, spec) if with_core else None
            radial = _radial_terms(alpha, kr, table)
        weight = np.exp(1j * np.pi * (np.abs(n) - 0.5 * alpha)) * radial
        m = n_up.size
        mags_up, mags_lo = np.abs(weight[:m]), np.abs(weight[m:])
        tail = _geometric_tail(mags_up) + _geometric_tail(mags_lo)
        if tail < tol:
            terms = (
                weight[j] * np.exp(1j * n_up[j] * phi) + weight[m + j] * np.exp(1j * n_lo[j] * phi)
                for j in range(m)
            )
            out = compensated_sum(terms)
            return complex(out) if np.ndim(out) == 0 else out
    raise TruncationError(f"wave-function tail {tail:.3g} above tolerance {tol:.3g}")
