import math

import mpmath as mp
import numpy as np
import pytest
from scipy.special import zeta

from casimir_plasma.config import DEFAULT_CONFIG
from casimir_plasma.errors import ConvergenceError, DomainError
from casimir_plasma.optics import SpectralPoint
from casimir_plasma.spectral import loop_integrand, spectral_density
from casimir_plasma.units import (
    C,
    HBAR,
    MICRON,
    NANOMETER,
    CavityGeometry,
    material_preset,
    perfect_mirror,
    plasma_mirror,
    thermal_state,
)


def test_perfect_loop_integrand():
    L = 1 * MICRON
    pt = SpectralPoint(0.0, 0.5 / L)
    assert loop_integrand(pt, perfect_mirror(), L) == pytest.approx(2 / (math.e - 1), rel=1e-15)
    assert loop_integrand(SpectralPoint(0.0, 300 / L), perfect_mirror(), L) < 1e-250
    assert loop_integrand(SpectralPoint(0.0, 1e4 / L), perfect_mirror(), L) == 0.0


def test_loop_integrand_arbitrary_precision():
    L, xi, kappa = 1 * MICRON, 1e15, 5e6
    al = material_preset("Al")
    with mp.workdps(50):
        c = mp.mpf(C)
        wp = 2 * mp.pi * c / mp.mpf(107e-9)
        x, k = mp.mpf(xi), mp.mpf(kappa)
        eps = 1 + (wp / x) ** 2
        kt = mp.sqrt(k**2 + (eps - 1) * x**2 / c**2)
        rs = [((k - kt) / (k + kt)) ** 2, ((eps * k - kt) / (eps * k + kt)) ** 2]
        ref = float(sum(r / (mp.exp(2 * k * mp.mpf(L)) - r) for r in rs))
    assert loop_integrand(SpectralPoint(xi, kappa), al, L) == pytest.approx(ref, rel=1e-13)


def test_loop_integrand_rejects_zero_kappa():
    with pytest.raises(DomainError):
        loop_integrand(SpectralPoint(0.0, 0.0), perfect_mirror(), 1e-6)


@pytest.mark.parametrize("L_um", [0.1, 1.0, 10.0])
def test_zeta3_oracle(L_um):
    g = CavityGeometry(L_um * MICRON)
    d = spectral_density(0.0, perfect_mirror(), g)
    exact = HBAR * g.A * float(zeta(3)) / (4 * math.pi**2 * g.L**3)
    assert d.value == pytest.approx(exact, rel=DEFAULT_CONFIG.rel_tol)
    assert abs(d.value - exact) <= d.error_estimate + 1e-15 * exact


def test_trapezoid_oracle():
    al = material_preset("Al")
    L = 0.5 * MICRON
    xi = thermal_state(300.0).omega_T
    k0 = xi / C
    kappa = np.linspace(k0, k0 + 60.0 / (2 * L), 100_000)
    f = np.array([loop_integrand(SpectralPoint(xi, k), al, L) for k in kappa])
    ref = HBAR / (2 * math.pi**2) * np.trapezoid(kappa**2 * f, kappa)
    d = spectral_density(xi, al, CavityGeometry(L))
    assert d.value == pytest.approx(ref, rel=1e-6)


@pytest.mark.parametrize("mirror", [perfect_mirror(), material_preset("Al"), plasma_mirror(500 * NANOMETER)],
                         ids=lambda m: m.name)
@pytest.mark.parametrize("xi", [0.0, 1e14, 1e15, 1e16])
def test_substitution_independence(mirror, xi):
    g = CavityGeometry(0.7 * MICRON)
    a = spectral_density(xi, mirror, g, substitution="shift").value
    b = spectral_density(xi, mirror, g, substitution="rational").value
    assert a == pytest.approx(b, rel=10 * DEFAULT_CONFIG.rel_tol)


def test_monotone_decreasing_and_dominated():
    g = CavityGeometry(1 * MICRON)
    xis = [0.0, 1e13, 1e14, 3e14, 1e15, 3e15]
    for mirror in (material_preset("Al"), plasma_mirror(500 * NANOMETER)):
        vals = [spectral_density(x, mirror, g).value for x in xis]
        perfect = [spectral_density(x, perfect_mirror(), g).value for x in xis]
        assert all(v >= 0 for v in vals)
        assert all(a >= b for a, b in zip(vals, vals[1:]))
        assert all(v <= p for v, p in zip(vals, perfect))


def test_errors():
    g = CavityGeometry(1 * MICRON)
    with pytest.raises(DomainError):
        spectral_density(-1.0, perfect_mirror(), g)
    with pytest.raises(DomainError):
        spectral_density(0.0, perfect_mirror(), g, substitution="tanh")
    starved = DEFAULT_CONFIG.replace(rel_tol=1e-15, max_panels=8)
    with pytest.raises(ConvergenceError) as info:
        spectral_density(0.0, plasma_mirror(4 * math.pi * g.L), g, starved)
    assert info.value.error_estimate > 0
