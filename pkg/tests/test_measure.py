import math

import numpy as np
import pytest

from compdiff.measure import (
    CarlesonWindow,
    ModelRegion,
    QuadratureGrid,
    carleson_ratio,
    carleson_sup,
    carleson_table,
    dirichlet_seminorm_sq,
    disk_integral,
    hs_integral,
    involution_integral,
    model_integral,
    model_ratio,
    monte_carlo_integral,
    pullback_integral,
)
from compdiff.series import Monomial, Polynomial


def one(w):
    return np.ones_like(w, dtype=float)


def lens_area(R, h):
    """Area of the intersection of |w| < R and |w - 1| < h (centre distance 1)."""
    d = 1.0
    if h + R <= d:
        return 0.0
    if d + R <= h:
        return math.pi * R**2
    a1 = R**2 * math.acos((d**2 + R**2 - h**2) / (2 * d * R))
    a2 = h**2 * math.acos((d**2 + h**2 - R**2) / (2 * d * h))
    a3 = 0.5 * math.sqrt((-d + R + h) * (d + R - h) * (d - R + h) * (d + R + h))
    return a1 + a2 - a3


@pytest.mark.parametrize("g", [QuadratureGrid(8, 4), QuadratureGrid(512, 1024), QuadratureGrid(3, 7)])
def test_grid_total_weight(g):
    assert g.total_weight() == pytest.approx(1.0, abs=1e-15)


def test_disk_integral_moments():
    g = QuadratureGrid(1024, 64)
    # int |z|^2 dA = 1/2 and int z dA = 0
    assert disk_integral(lambda z: np.abs(z) ** 2, g).real == pytest.approx(0.5, abs=1e-6)
    assert abs(disk_integral(lambda z: z, g)) < 1e-14


def test_pullback_examples():
    r = pullback_integral(Monomial(0.5, 1), one)
    assert r.value.real == pytest.approx(0.25, rel=1e-12)
    win = CarlesonWindow(0.0, 0.25)
    r = pullback_integral(Monomial(0.5, 1), lambda w: win.contains(w).astype(float), smooth=False)
    assert r.value == 0


@pytest.mark.parametrize("phi", [
    Polynomial((0.1, 0.3, -0.2j, 0.1)),
    Polynomial((0, 0.5, 0.25)),
    Monomial(0.7, 3),
    Polynomial((0.2j, 0, 0, 0.6)),
])
def test_pullback_mass_is_dirichlet_seminorm(phi):
    r = pullback_integral(phi, one)
    exact = dirichlet_seminorm_sq(phi)
    assert abs(r.value.real - exact) <= 1e-8 * exact


def test_pullback_error_estimate_is_honest():
    phi = Polynomial((0, 0.5, 0.25))
    r = pullback_integral(phi, one, grid=(64, 128), smooth=False)
    assert abs(r.value.real - dirichlet_seminorm_sq(phi)) <= r.error


def test_carleson_examples():
    assert carleson_ratio(Monomial(0.5, 1), CarlesonWindow(0.0, 0.25)).value == 0
    phi = Monomial(0.8, 2)
    r = carleson_ratio(phi, CarlesonWindow(1.0, 1.0), grid=(512, 1024))
    assert r.value <= dirichlet_seminorm_sq(phi)


@pytest.mark.parametrize("a, h", [(0.8, 0.5), (0.9, 0.25), (0.6, 1.0), (0.95, 0.125)])
def test_carleson_ratio_matches_lens_area(a, h):
    # mu for a z is area measure restricted to |w| < a
    exact = lens_area(a, h) / math.pi / h**4
    r = carleson_ratio(Monomial(a, 1), CarlesonWindow(0.0, h), grid=(1024, 2048))
    assert abs(r.value - exact) <= max(3 * r.error, 2e-3 * exact)


def test_carleson_table_matches_ratio():
    phi = Monomial(0.85, 2)
    thetas, hs = [0.0, 1.3], [0.5, 0.25]
    tab = carleson_table(phi, thetas, hs, grid=(256, 512))
    for i, t in enumerate(thetas):
        for j, h in enumerate(hs):
            r = carleson_ratio(phi, CarlesonWindow(t, h), grid=(256, 512))
            assert tab[i, j] == pytest.approx(r.value, rel=1e-12, abs=1e-15)


def test_carleson_sup_finite_for_small_sup():
    phi = Monomial(0.9, 2)
    s = carleson_sup(phi, grid=(256, 512))
    assert np.isfinite(s)
    # windows with h <= 0.1 miss the image disk entirely
    tab = carleson_table(phi, hs=[2.0**-k for k in range(4, 11)], grid=(256, 512))
    assert np.all(tab == 0)


def test_carleson_rotation_invariance():
    phi = Monomial(0.9, 3)
    # rotating the window by 2 pi / 3 is an exact symmetry of the grid-free measure
    thetas = [0.3, 0.3 + 2 * math.pi / 3, 0.3 + 4 * math.pi / 3, 1.1]
    tab = carleson_table(phi, thetas, [0.5, 0.25], grid=(1024, 2048))
    assert np.allclose(tab, tab[0], rtol=5e-3)


def test_window_validation():
    with pytest.raises(ValueError):
        CarlesonWindow(0.0, 0.0)
    with pytest.raises(ValueError):
        CarlesonWindow(0.0, 1.5)


def test_involution_examples():
    assert involution_integral(Monomial(0.5, 1), 0).value.real == pytest.approx(0.25, rel=1e-12)
    phi = Polynomial((0.1, 0.35, 0.2))
    rho = phi.sup_bound
    assert rho <= 0.7
    vals = [involution_integral(phi, a).value.real for a in (0.5, 0.9, 0.99)]
    assert vals[0] > vals[1] > vals[2]
    bound = 16 * (1 - rho) ** -4 * dirichlet_seminorm_sq(phi)
    for a in (0.3, 0.5j, -0.9, 0.99):
        assert involution_integral(phi, a).value.real <= bound


def test_involution_rejects_boundary_parameter():
    with pytest.raises(ValueError):
        involution_integral(Monomial(0.5, 1), 1.0)


def test_involution_against_monte_carlo():
    phi, a = Polynomial((0.1, 0.4, 0.2)), 0.6
    ac = np.conj(a)
    q = involution_integral(phi, a).value.real
    mc, se = monte_carlo_integral(phi, lambda w: (1 - abs(a) ** 2) ** 4 / np.abs(1 - ac * w) ** 8)
    assert abs(q - mc) <= 5 * se


def test_monte_carlo_deterministic():
    phi = Monomial(0.5, 2)
    assert monte_carlo_integral(phi, one, samples=4096) == monte_carlo_integral(phi, one, samples=4096)


@pytest.mark.parametrize("a", [0.3, 0.5, 0.7])
def test_hs_integral_closed_form(a):
    x = a * a
    exact = ((1 - x) ** -3 - 1) / 3
    # the same value from sum C(n+3, 3) x^(n+1) / (n+1)
    n = np.arange(0, 4000)
    series = float(np.sum((n + 3) * (n + 2) * (n + 1) / 6 * x ** (n + 1) / (n + 1)))
    assert series == pytest.approx(exact, rel=1e-12)
    assert hs_integral(Monomial(a, 1)).value.real == pytest.approx(exact, rel=1e-6)


def test_hs_integral_small_map():
    v = hs_integral(Monomial(0.1, 1)).value.real
    assert v == pytest.approx(0.01, rel=0.03)


def test_model_ratio_examples():
    assert model_ratio(3, 1.0) == 0.05
    assert model_ratio(ModelRegion(3), 1.0) == 0.05
    assert model_ratio(4, 0.01) < model_ratio(4, 0.1)
    assert model_ratio(4, 0.001) < 0.01 * model_ratio(4, 0.1)


def test_model_ratio_p2_diverges():
    r = [model_ratio(2, h) for h in (0.1, 0.01, 0.001, 1e-4)]
    assert all(b > a for a, b in zip(r, r[1:]))
    assert r[2] > 10 * r[0]
    # the leading behaviour is 1/(12 h)
    assert r[3] * 12e-4 == pytest.approx(1.0, rel=1e-2)


def test_model_ratio_p3_increasing():
    h = np.linspace(1e-3, 1.0, 1000)
    vals = np.array([model_ratio(3, x) for x in h])
    assert np.all(np.diff(vals) > 0)


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("h", [1.0, 0.5, 0.1, 0.01])
def test_closed_forms_match_numeric_integral(p, h):
    assert model_ratio(p, h) == pytest.approx(model_integral(p, h) / h**4, rel=1e-10)


def test_model_region_validation():
    with pytest.raises(ValueError):
        ModelRegion(5)
    with pytest.raises(ValueError):
        model_ratio(3, 0.0)


def test_non_finite_samples_reported():
    def spike(w):
        return np.where(np.abs(w) < 0.1, np.inf, 1.0)

    with pytest.raises(FloatingPointError):
        pullback_integral(Monomial(0.5, 1), spike, grid=(16, 16))
