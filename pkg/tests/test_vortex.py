import numpy as np
import pytest
from scipy.special import i0, i1

from vortexscat.errors import DomainError
from vortexscat.specfun import bessel_arrays
from vortexscat.vortex import (
    FluxProfile,
    Impenetrable,
    Penetrable,
    VortexSpec,
    interior_logderiv,
    interior_logderivs,
    interior_radial,
    uniform_field_profile,
)

# Confluent-hypergeometric oracle for the uniform field: kappa = r^|n| e^{-z/2} M(a, |n|+1, z),
# z = mu r^2 / r_c^2, evaluated with mpmath.hyp1f1 at 40 digits (r_c = 1).
KUMMER = {
    (1, 0.5, 5.0): 1.230437576407972711295457,
    (-2, 3.3, 7.0): 9.348188308491477643187603,
    (4, -1.7, 3.0): 4.666747263888983032355816,
}


def test_uniform_profile():
    prof = uniform_field_profile(VortexSpec(2.0, 1.0, Penetrable()))
    assert prof(0.0) == 0.0
    assert prof(1.0) == 1.0
    assert prof(0.5) == 0.25


def test_spec_validation():
    with pytest.raises(DomainError):
        VortexSpec(0.0, 1.0)
    with pytest.raises(DomainError):
        VortexSpec(1.0, np.inf)
    with pytest.raises(DomainError):
        Impenetrable(1.0)
    assert VortexSpec(0.5, 0.0).d == 1.0
    assert Impenetrable(0.5).label == "neumann"


@pytest.mark.parametrize("key", sorted(KUMMER))
def test_kummer_oracle(key):
    n, mu, x = key
    got = interior_logderiv(n, x, VortexSpec(1.0, mu, Penetrable())).logderiv[0]
    assert got == pytest.approx(KUMMER[key], rel=1e-9)


def test_free_interior_matches_bessel():
    n = np.arange(-30, 31)
    x = 12.0
    spec = VortexSpec(1.0, 0.0, Penetrable())
    got = interior_logderivs(n, x, spec)
    j, _, jp, _ = bessel_arrays(np.abs(n), x)
    free = x * jp / j
    ok = ~got.pole
    np.testing.assert_allclose(got.logderiv[ok], free[ok], rtol=1e-9)
    # channel symmetry at zero flux
    np.testing.assert_allclose(got.logderiv[ok], got.logderiv[::-1][ok], rtol=1e-12)


def test_s_wave_long_wavelength_limit():
    # free core: kappa ~ const, the log-derivative vanishes like -u^2/2
    r = interior_logderiv(0, 1e-3, VortexSpec(1.0, 0.0, Penetrable()))
    assert abs(r.logderiv[0]) < 1e-6
    # threaded core: at k = 0 the s-wave is I_0(mu r^2 / 2 r_c^2), so the limit is mu I_1/I_0 at mu/2
    mu = 0.7
    r = interior_logderiv(0, 1e-4, VortexSpec(1.0, mu, Penetrable()))
    assert r.logderiv[0] == pytest.approx(mu * i1(mu / 2) / i0(mu / 2), rel=1e-7)


def test_radial_solution_normalisation_independent():
    spec = VortexSpec(1.0, 1.4, Penetrable())
    s, dlog, edge = interior_radial([3], 6.0, spec, np.array([0.3, 0.7, 1.0]))
    # kappa is known up to a constant; its ratio to the edge value reproduces the log-derivative
    h = 1e-5
    s2, d2, _ = interior_radial([3], 6.0, spec, np.array([1.0 - h, 1.0]))
    kappa = np.exp(d2[0]) * s2[0]
    numeric = (kappa[1] - kappa[0]) / h / kappa[1]
    assert numeric == pytest.approx(edge.logderiv[0], rel=1e-4)
    assert dlog[0, -1] == pytest.approx(0.0, abs=1e-12)


def test_tabulated_profile_file(tmp_path):
    rho = np.linspace(0, 1, 41)
    path = tmp_path / "profile.txt"
    np.savetxt(path, np.column_stack([rho, rho ** 2]), header="r/r_c mu(r)/mu")
    prof = FluxProfile.from_file(path)
    spec_tab = VortexSpec(1.0, 0.5, Penetrable(prof))
    spec_uni = VortexSpec(1.0, 0.5, Penetrable())
    a = interior_logderiv(1, 5.0, spec_tab).logderiv[0]
    b = interior_logderiv(1, 5.0, spec_uni).logderiv[0]
    assert a == pytest.approx(b, rel=1e-5)
    assert spec_tab.core.label == "penetrable:tabulated"


def test_tabulated_profile_validation(tmp_path):
    with pytest.raises(DomainError):
        FluxProfile(kind="tabulated", nodes=((0.0, 0.0), (0.5, 0.6), (0.4, 1.0)))
    with pytest.raises(DomainError):
        FluxProfile(kind="tabulated", nodes=((0.1, 0.0), (1.0, 1.0)))
    bad = tmp_path / "bad.txt"
    bad.write_text("0 0 1\n1 1 1\n")
    with pytest.raises(DomainError):
        FluxProfile.from_file(bad)


def test_impenetrable_has_no_interior():
    with pytest.raises(DomainError):
        interior_logderiv(0, 1.0, VortexSpec(1.0, 0.5))
