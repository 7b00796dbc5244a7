import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vortexscat import partial_wave as pw
from vortexscat.errors import DomainError, TruncationError
from vortexscat.partial_wave import (
    AmplitudeProfile,
    channel_phase,
    channel_table,
    compensated_sum,
    exact_fc,
    exact_psi0,
    exact_wavefunction,
    fc_decomposition,
    paired_channels,
    solve,
    uniform_grid,
    upsilon_penetrable,
    upsilon_robin,
)
from vortexscat.specfun import bessel_arrays
from vortexscat.vortex import Impenetrable, Penetrable, RadialSolution, VortexSpec

# mpmath: J0(1) / (J0(1) + i Y0(1)) at 40 digits
UPS_DIRICHLET_0_1 = 0.98687161420763724268 - 0.11382456360052361306j


def test_dirichlet_reference_value():
    assert upsilon_robin(0.0, 0.0, 1.0) == pytest.approx(UPS_DIRICHLET_0_1, rel=1e-13)


def test_neumann_is_derivative_ratio():
    alpha = np.array([0.0, 0.4, 3.5, 20.2])
    u = 7.3
    j, y, jp, yp = bessel_arrays(alpha, u)
    np.testing.assert_allclose(upsilon_robin(alpha, 0.5, u), jp / (jp + 1j * yp), rtol=1e-13)


@settings(max_examples=300, deadline=None)
@given(st.floats(0, 300), st.floats(0, 0.999), st.floats(0.05, 300))
def test_robin_unitarity(alpha, rho, u):
    ups = upsilon_robin(alpha, rho, u)
    assert abs(abs(1 - 2 * ups) - 1) < 1e-10


def test_robin_parameter_range():
    with pytest.raises(DomainError):
        upsilon_robin(1.0, 1.0, 1.0)


def test_overflowing_channels_vanish():
    assert upsilon_robin(600.0, 0.0, 1.0) == 0
    assert upsilon_robin(600.0, 0.5, 1.0) == 0


def test_phase_identity():
    rng = np.random.default_rng(7)
    for mu in rng.uniform(-6, 6, 50):
        n = np.arange(-40, 41)
        n = n[n != mu]
        np.testing.assert_allclose(channel_phase(n, mu), np.exp(1j * np.pi * mu * np.sign(n - mu)),
                                   atol=1e-13)


def test_pairing_covers_window_once():
    for mu in (-2.0, -0.5, 0.0, 0.3, 4.0):
        up, lo = paired_channels(mu, 12)
        both = np.concatenate([up, lo])
        assert len(set(both)) == both.size
        assert set(n for n in range(-30, 31) if abs(n - mu) <= 12) <= set(both)


def test_compensated_sum():
    vals = [np.array([1e16]), np.array([1.0]), np.array([-1e16]), np.array([1e-3])]
    assert compensated_sum(vals)[0] == pytest.approx(1.001, rel=1e-15)


def test_penetrable_identities():
    spec = VortexSpec(1.0, 1.7, Penetrable())
    tab = channel_table(np.arange(-40, 45), 25.0, spec)
    np.testing.assert_allclose(np.abs(tab.upsilon_tilde), 1.0, atol=1e-10)
    np.testing.assert_allclose(tab.upsilon, 0.5 * (1 + tab.upsilon_tilde), atol=1e-12)
    np.testing.assert_allclose(np.abs(1 - 2 * tab.upsilon), 1.0, atol=1e-10)


def test_penetrable_zero_flux_is_free():
    c = upsilon_penetrable(3, 10.0, VortexSpec(1.0, 0.0, Penetrable()))
    assert c.upsilon == 0 and c.upsilon_tilde == -1


def test_pole_channel_takes_dirichlet_limit(monkeypatch):
    x = 6.0
    n = np.array([2])

    def fake(n, k, spec):
        return RadialSolution(n, np.array([np.inf]), np.array([0.0]), np.array([1.0]),
                              np.array([3.0]), np.array([True]))

    monkeypatch.setattr(pw, "interior_logderivs", fake)
    c = upsilon_penetrable(2, x, VortexSpec(1.0, 0.4, Penetrable()))
    assert c.pole
    assert c.upsilon == pytest.approx(upsilon_robin(abs(n[0] - 0.4), 0.0, x), rel=1e-14)


def test_flux_periodicity():
    x = 30.0
    for core in (Impenetrable(0.0), Impenetrable(0.3)):
        a = channel_table(np.arange(-50, 50), x, VortexSpec(1.0, 0.37, core))
        b = channel_table(np.arange(-49, 51), x, VortexSpec(1.0, 1.37, core))
        np.testing.assert_allclose(a.upsilon, b.upsilon, rtol=1e-12, atol=1e-300)
        grid = uniform_grid(301)
        fa = exact_fc(x, grid, VortexSpec(1.0, 0.37, core)).dcs
        fb = exact_fc(x, grid, VortexSpec(1.0, 1.37, core)).dcs
        np.testing.assert_allclose(fa, fb, rtol=1e-12, atol=1e-12 * fa.max())


def test_plane_wave_reduction():
    phi = np.linspace(-np.pi, np.pi, 37)
    for r, k in ((0.3, 2.0), (5.0, 3.0), (40.0, 2.5)):
        ref = np.exp(1j * k * r * np.cos(phi))
        assert np.max(np.abs(exact_wavefunction(r, phi, k, None) - ref)) < 1e-10
        assert np.max(np.abs(exact_psi0(r, phi, k, 0.0) - ref)) < 1e-10
    # a free penetrable core leaves the plane wave untouched, inside and out
    spec = VortexSpec(1.0, 0.0, Penetrable())
    for r in (0.4, 3.0):
        got = exact_wavefunction(r, phi, 4.0, spec)
        assert np.max(np.abs(got - np.exp(4j * r * np.cos(phi)))) < 1e-10


def test_dirichlet_wall():
    phi = np.linspace(-np.pi, np.pi, 25)
    psi = exact_wavefunction(1.0, phi, 8.0, VortexSpec(1.0, 0.4))
    assert np.max(np.abs(psi)) < 1e-9
    with pytest.raises(DomainError):
        exact_wavefunction(0.5, phi, 8.0, VortexSpec(1.0, 0.4))


def test_penetrable_continuity_across_edge():
    phi = np.linspace(-3, 3, 13)
    spec = VortexSpec(1.0, 0.8, Penetrable())
    inside = exact_wavefunction(1 - 1e-9, phi, 6.0, spec)
    outside = exact_wavefunction(1.0, phi, 6.0, spec)
    np.testing.assert_allclose(inside, outside, atol=1e-7)


def test_incident_side_far_field():
    # e^{ikr} psi -> 1 at phi = pi, with corrections of order (kr)^(-1/2)
    spec = VortexSpec(1.0, 0.3)
    devs = []
    for r in (250.0, 1000.0, 4000.0):
        psi = exact_wavefunction(r, np.pi, 1.0, spec)
        devs.append(abs(np.exp(1j * r) * psi - 1))
        assert devs[-1] < 2.0 / np.sqrt(r)
    assert devs[0] > devs[1] > devs[2]


def test_free_core_amplitude_vanishes():
    prof = exact_fc(40.0, 101, VortexSpec(1.0, 0.0, Penetrable()))
    assert np.all(prof.f == 0)


def test_parts_sum_to_total():
    for spec in (VortexSpec(1.0, 0.45), VortexSpec(1.0, 1.6, Penetrable())):
        prof = fc_decomposition(60.0, uniform_grid(401), spec)
        total = prof.parts["peak"] + prof.parts["classical"] + prof.parts["residual"]
        assert np.max(np.abs(total - prof.f)) < 1e-12 * max(1.0, np.max(np.abs(prof.f)))


def test_truncation_certificate():
    sol = solve(50.0, VortexSpec(1.0, 0.3))
    assert sol.tail_estimate < 1e-12
    assert sol.truncation_constant in pw.TRUNCATION_CONSTANTS
    with pytest.raises(TruncationError):
        solve(50.0, VortexSpec(1.0, 0.3), tol=1e-300)


def test_profile_grid_validation():
    with pytest.raises(DomainError):
        AmplitudeProfile(k=1.0, phi=np.array([-np.pi, 0.0]), f=np.zeros(2))
    with pytest.raises(DomainError):
        AmplitudeProfile(k=1.0, phi=np.array([0.2, 0.1]), f=np.zeros(2))
    with pytest.raises(DomainError):
        uniform_grid(0)


def test_forward_classical_estimate_strong_field():
    # classically deflecting cores (field growing with k r_c) keep sqrt(k r_c) |f_class(0)| / sqrt(r_c) of order one
    vals = []
    for x in (50.0, 100.0, 200.0):
        sol = solve(x, VortexSpec(1.0, x / 4, Penetrable()))
        vals.append(abs(sol.amplitude(0.0, "classical")) * np.sqrt(x))
    assert max(vals) < 10.0
