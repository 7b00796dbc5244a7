import numpy as np
import pytest

from vortexscat.asymptotics import (
    KernelParams,
    ab_amplitude,
    chi_phase,
    delta_kernel,
    fc_shortwave,
    fpeak_closed,
    fraunhofer_kernel,
    gamma_kernel,
    psi0_far,
    psi0_forward,
    psi0_transition,
)
from vortexscat.errors import DomainError, ValidityGateError
from vortexscat.partial_wave import exact_fc, exact_psi0, uniform_grid
from vortexscat.vortex import Impenetrable, Penetrable, VortexSpec


def direct_delta(x, mu, phi):
    n = np.arange(int(np.ceil(mu - x)), int(np.floor(mu + x)) + 1)
    return np.exp(1j * np.outer(phi, n)).sum(axis=1) / (2 * np.pi)


def direct_gamma(x, mu, phi):
    n = np.arange(int(np.ceil(mu - x)), int(np.floor(mu + x)) + 1)
    w = np.sign(n - mu)
    return (np.exp(1j * np.outer(phi, n)) * w).sum(axis=1) / (2j * np.pi)


def test_fraunhofer_forward_value():
    assert fraunhofer_kernel(10.0, 0.0) == pytest.approx(3.18310, abs=5e-6)
    assert fraunhofer_kernel(10.0, 0.0) == 10.0 / np.pi


def test_fraunhofer_unit_width():
    phi = np.linspace(-3, 3, 61)
    np.testing.assert_allclose(fraunhofer_kernel(1.0, phi), np.cos(phi / 2) ** 2 / np.pi, rtol=1e-13)


def test_halving_identity():
    phi = np.linspace(-3.1, 3.1, 301)
    for x in (0.7, 13.0, 250.5):
        lhs = fraunhofer_kernel(x, phi)
        rhs = 2 * fraunhofer_kernel(x / 2, phi) * np.cos(x * phi / 2) ** 2
        assert np.max(np.abs(lhs - rhs)) <= 1e-13 * x


def test_kernel_special_values():
    p = KernelParams(7.3, 0.4)
    lo, hi = p.window
    assert delta_kernel(p, 0.0) == pytest.approx((hi - lo + 1) / (2 * np.pi), rel=1e-15)
    assert abs(gamma_kernel(KernelParams(9.0, 0.5), 0.0)) < 1e-15
    assert KernelParams(3.0, -1.2).mu_floor == -2
    with pytest.raises(DomainError):
        KernelParams(0.0, 0.0)


def test_window_includes_ties():
    # |n - mu| = x exactly is inside the window
    assert KernelParams(2.0, 0.0).window == (-2, 2)


def test_kernels_match_direct_sums():
    rng = np.random.default_rng(11)
    for _ in range(200):
        x, mu = rng.uniform(0.5, 120), rng.uniform(-5, 5)
        phi = rng.uniform(-np.pi, np.pi, 7)
        p = KernelParams(x, mu)
        assert np.max(np.abs(delta_kernel(p, phi) - direct_delta(x, mu, phi))) < 1e-12
        assert np.max(np.abs(gamma_kernel(p, phi) - direct_gamma(x, mu, phi))) < 1e-12


def test_integer_flux_channel_weight():
    # n = mu has weight zero in Gamma
    phi = np.array([0.3, -1.1])
    np.testing.assert_allclose(gamma_kernel(KernelParams(4.0, 2.0), phi), direct_gamma(4.0, 2.0, phi),
                               atol=1e-14)


def test_ab_amplitude():
    phi = np.linspace(-3, 3, 40)
    assert np.all(ab_amplitude(2.0, phi, 3.0) == 0)
    f = ab_amplitude(2.0, phi, 0.3)
    np.testing.assert_allclose(np.abs(f) ** 2, np.sin(0.3 * np.pi) ** 2 / (4 * np.pi * np.sin(phi / 2) ** 2),
                               rtol=1e-13)
    np.testing.assert_allclose(np.abs(f), np.abs(ab_amplitude(2.0, -phi, 0.3)), rtol=1e-13)
    np.testing.assert_allclose(np.abs(f), np.abs(ab_amplitude(2.0, phi, 1.3)), rtol=1e-12)
    with pytest.raises(DomainError):
        ab_amplitude(2.0, 0.0, 0.3)


def test_psi0_zero_flux_is_plane_wave():
    phi = np.linspace(-3, 3, 31)
    np.testing.assert_allclose(psi0_transition(80.0, phi, 1.0, 0.0), np.exp(80j * np.cos(phi)), atol=1e-14)
    with pytest.raises(ValidityGateError):
        psi0_transition(10.0, phi, 1.0, 0.3)


def test_psi0_regimes():
    k, mu = 1.0, 0.3
    for r in (1e4, 1e6):
        far = np.array([0.5, 1.5, -2.0])
        got = psi0_transition(r, far, k, mu)
        assert np.max(np.abs(got - psi0_far(r, far, k, mu))) < 3.0 / np.sqrt(k * r)
        near = np.array([0.01, -0.02]) / np.sqrt(k * r)
        got = psi0_transition(r, near, k, mu)
        assert np.max(np.abs(got - psi0_forward(r, near, k, mu))) < 0.05


def test_psi0_transition_converges_to_exact():
    mu = 0.3
    phi = np.linspace(-0.4, 0.4, 41)
    errs = []
    for kr in (100.0, 400.0, 1600.0):
        errs.append(np.max(np.abs(psi0_transition(kr, phi, 1.0, mu) - exact_psi0(kr, phi, 1.0, mu))))
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 0.01


def test_chi_phase_reductions():
    phi = np.linspace(-3, 3, 41)
    x = 150.0
    assert np.all(chi_phase(0.0, x, phi) == 0)
    s = np.abs(np.sin(phi / 2))
    np.testing.assert_allclose(chi_phase(0.5, x, phi), np.arctan(-2 * x * s ** 3), atol=1e-13)
    assert abs(chi_phase(0.3, x, np.array([1e-9]))[0]) < 1e-12
    # continuity on each half-axis
    fine = np.linspace(1e-4, 3.1, 20001)
    assert np.max(np.abs(np.diff(chi_phase(0.8, x, fine)))) < 0.1


def test_shortwave_gate_and_core():
    with pytest.raises(ValidityGateError):
        fc_shortwave(50.0, 11, VortexSpec(1.0, 0.3))
    with pytest.raises(DomainError):
        fc_shortwave(500.0, 11, VortexSpec(1.0, 0.3, Penetrable()))


def test_reflection_modulus_and_rho_invariance():
    grid = uniform_grid(1001)
    x = 300.0
    profs = [fc_shortwave(x, grid, VortexSpec(1.0, 0.3, Impenetrable(r))) for r in (0.0, 0.25, 0.5)]
    mod = np.sqrt(0.5 * np.abs(np.sin(grid / 2)))
    for p in profs:
        np.testing.assert_allclose(np.abs(p.parts["reflection"]), mod, rtol=1e-13)
        incoherent = np.abs(p.parts["peak"]) ** 2 + np.abs(p.parts["reflection"]) ** 2
        ref = np.abs(profs[0].parts["peak"]) ** 2 + np.abs(profs[0].parts["reflection"]) ** 2
        assert np.max(np.abs(incoherent - ref)) < 1e-12 * ref.max()
        assert p.uncertainty == pytest.approx(x ** (-1 / 6))


def test_coherent_rho_dependence_shrinks():
    grid = uniform_grid(2001)
    rel = []
    for x in (100.0, 400.0, 1600.0):
        a = fc_shortwave(x, grid, VortexSpec(1.0, 0.3, Impenetrable(0.0))).dcs
        b = fc_shortwave(x, grid, VortexSpec(1.0, 0.3, Impenetrable(0.5))).dcs
        rel.append(np.max(np.abs(a - b)) / a.max())
    assert rel[0] > rel[1] > rel[2]


def test_integer_flux_peak_has_no_gamma():
    x = 150.0
    phi = uniform_grid(201)
    f = fpeak_closed(x, phi, 2.0, x).f
    ref = 1j * np.sqrt(2 * np.pi / x) * delta_kernel(KernelParams(x, 2.0), phi)
    np.testing.assert_allclose(f, ref, atol=1e-13)


def test_peak_flux_shift_by_two():
    x = 80.0
    phi = uniform_grid(401)
    a = np.abs(fpeak_closed(x, phi, 0.3, x).f) ** 2
    b = np.abs(fpeak_closed(x, phi, 2.3, x).f) ** 2
    # the windows coincide up to relabelling, so only rounding separates them
    assert np.max(np.abs(a - b)) <= 1e-12 * a.max()


def test_shortwave_tracks_exact():
    errs = []
    for x in (100.0, 200.0, 400.0):
        delta = 2 * np.pi / x
        grid = uniform_grid(201, 2 * delta)
        spec = VortexSpec(1.0, 0.3)
        sw = fc_shortwave(x, grid, spec).dcs
        ex = exact_fc(x, grid, spec).dcs
        errs.append(np.sum(np.abs(sw - ex)) / np.sum(ex))
    assert errs[0] > errs[1] > errs[2]
