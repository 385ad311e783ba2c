import math

import pytest
from scipy.special import zeta

from casimir_plasma.config import DEFAULT_CONFIG
from casimir_plasma.errors import ConvergenceError, DomainError, RedirectError
from casimir_plasma.spectral import plasma_parameter
from casimir_plasma.thermal import (
    CosineTransform,
    Representation,
    casimir_force,
    force_matsubara,
    force_perfect_thermal,
    force_poisson,
    force_vacuum,
    vacuum_prefactor,
)
from casimir_plasma.units import (
    K_B,
    MICRON,
    NANOMETER,
    CavityGeometry,
    ideal_force,
    perfect_mirror,
    plasma_mirror,
    thermal_state,
)

ZETA3 = float(zeta(3))


def test_vacuum_perfect_is_ideal():
    g = CavityGeometry(1 * MICRON, 1e-4)
    F = force_vacuum(g, perfect_mirror()).force
    assert F == pytest.approx(1.30e-7, rel=0.005)
    assert F == pytest.approx(ideal_force(g), rel=1e-9)


def test_vacuum_perfect_conductor_limit():
    g = CavityGeometry(1 * MICRON)
    eta = [force_vacuum(g, plasma_mirror(lp * g.L)).force / ideal_force(g) for lp in (1e-2, 1e-3, 1e-4)]
    assert eta[0] < eta[1] < eta[2] < 1.0
    assert 1.0 - eta[2] == pytest.approx(8 / (3 * math.pi) * 1e-4, rel=0.02)


def test_matsubara_redirects_at_zero_temperature():
    with pytest.raises(RedirectError) as info:
        force_matsubara(CavityGeometry(1e-6), perfect_mirror(), thermal_state(0.0))
    assert info.value.target == "force_vacuum"
    with pytest.raises(DomainError):
        force_poisson(CavityGeometry(1e-6), perfect_mirror(), thermal_state(0.0))


def test_poisson_matches_matsubara_al_3um(al, room):
    g = CavityGeometry(3 * MICRON)
    a = force_matsubara(g, al, room)
    b = force_poisson(g, al, room)
    assert a.representation is Representation.MATSUBARA and b.representation is Representation.POISSON
    assert abs(a.force - b.force) <= a.error_estimate + b.error_estimate


def test_poisson_zeroth_term_is_vacuum(al):
    g = CavityGeometry(2 * MICRON)
    transform = CosineTransform(plasma_parameter(al, g.L))
    vac = force_vacuum(g, al)
    zeroth = transform(0.0) * vacuum_prefactor(g)
    assert abs(zeroth - vac.force) <= vac.error_estimate + transform.error_bound * vacuum_prefactor(g)


def test_poisson_cold_limit(al):
    g = CavityGeometry(1 * MICRON)
    vac = force_vacuum(g, al).force
    assert force_poisson(g, al, thermal_state(3.0)).force == pytest.approx(vac, rel=1e-8)


def test_matsubara_cold_limit_chain(al):
    g = CavityGeometry(1 * MICRON)
    vac = force_vacuum(g, al)
    gaps = [abs(force_matsubara(g, al, thermal_state(T)).force - vac.force) / vac.force
            for T in (100.0, 30.0, 10.0, 3.0)]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-8


def test_perfect_thermal_short_distance():
    th = thermal_state(300.0)
    g = CavityGeometry(th.lambda_T / 100)
    assert force_perfect_thermal(g, th).force / ideal_force(g) == pytest.approx(1.0, abs=1e-3)


def test_perfect_thermal_high_temperature():
    th = thermal_state(300.0)
    g = CavityGeometry(5 * th.lambda_T)
    F = force_perfect_thermal(g, th).force
    assert F == pytest.approx(ZETA3 * K_B * th.T * g.A / (4 * math.pi * g.L**3), rel=0.01)
    assert F / ideal_force(g) == pytest.approx(60 * ZETA3 / math.pi**3 * g.L / th.lambda_T, rel=0.01)


@pytest.mark.parametrize("L_um", [0.05, 0.3, 1.0, 3.0, 10.0, 30.0])
def test_perfect_thermal_factor_at_least_one(L_um, room):
    g = CavityGeometry(L_um * MICRON)
    assert force_perfect_thermal(g, room).force >= ideal_force(g)


def test_monotone_in_temperature(al):
    g = CavityGeometry(2 * MICRON)
    forces = [force_matsubara(g, al, thermal_state(T)).force for T in (50, 100, 200, 300, 600, 1200)]
    assert all(b >= a for a, b in zip(forces, forces[1:]))


def test_monotone_in_plasma_wavelength(room):
    g = CavityGeometry(1 * MICRON)
    forces = [force_matsubara(g, plasma_mirror(lp * NANOMETER), room).force for lp in (50, 107, 136, 300, 500)]
    assert all(b <= a for a, b in zip(forces, forces[1:]))


@pytest.mark.parametrize("L_um", [0.2, 2.0, 8.0])
def test_truncation_honesty(L_um, al, room):
    """Error estimates cover the change under 10x tighter thresholds."""
    g = CavityGeometry(L_um * MICRON)
    tight = DEFAULT_CONFIG.tightened(10.0)
    for compute in (lambda c: force_matsubara(g, al, room, c),
                    lambda c: force_vacuum(g, al, c),
                    lambda c: force_poisson(g, al, room, c)):
        loose, ref = compute(DEFAULT_CONFIG), compute(tight)
        assert abs(loose.force - ref.force) <= loose.error_estimate
        assert loose.relative_error < 1e-6


def test_casimir_force_dispatch(al, room):
    g = CavityGeometry(1 * MICRON)
    assert casimir_force(g, al, thermal_state(0.0)).representation is Representation.VACUUM
    assert casimir_force(g, al, room, representation="poisson").representation is Representation.POISSON
    assert casimir_force(g, al, room, representation="Matsubara").representation is Representation.MATSUBARA
    with pytest.raises(DomainError):
        casimir_force(g, al, room, representation="fourier")
    with pytest.raises(DomainError):
        casimir_force(g, al, room, representation=Representation.VACUUM)


def test_term_cap_raises(al, room):
    capped = DEFAULT_CONFIG.replace(k_max=3)
    with pytest.raises(ConvergenceError) as info:
        force_matsubara(CavityGeometry(0.1 * MICRON), al, room, capped)
    assert info.value.context["terms"] == 4
    with pytest.raises(ConvergenceError, match="m=2"):
        force_poisson(CavityGeometry(0.1 * MICRON), al, room, DEFAULT_CONFIG.replace(m_max=2))
