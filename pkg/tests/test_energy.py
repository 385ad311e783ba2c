import math

import pytest
from scipy.integrate import quad
from scipy.special import zeta

from casimir_plasma.config import DEFAULT_CONFIG
from casimir_plasma.energy import eta_energy, free_energy, free_energy_profile
from casimir_plasma.errors import ConvergenceError, DomainError
from casimir_plasma.optics import SpectralPoint, reflectivities
from casimir_plasma.thermal import force_matsubara
from casimir_plasma.units import (
    C,
    K_B,
    MICRON,
    CavityGeometry,
    ideal_energy,
    perfect_mirror,
    thermal_state,
)


def lifshitz_log_energy(L, mirror, thermal):
    """Free energy per area from the log form of the Matsubara sum (independent of the force path)."""
    total = 0.0
    k = 0
    while True:
        xi = k * thermal.omega_T
        k0 = xi / C

        def integrand(u):
            kappa = k0 + u / (2 * L)
            pair = reflectivities(SpectralPoint(xi, kappa), mirror)
            e = math.exp(-2 * kappa * L)
            return kappa * (math.log1p(-pair.r2_perp * e) + math.log1p(-pair.r2_par * e))

        val, _ = quad(integrand, 0.0, 80.0, epsabs=0.0, epsrel=1e-12, limit=200)
        term = -val / (2 * L) * (0.5 if k == 0 else 1.0)
        total += term
        if k > 0 and abs(term) < 1e-14 * abs(total):
            break
        k += 1
    return K_B * thermal.T / (2 * math.pi) * total


@pytest.mark.parametrize("L_um", [0.3, 1.0, 4.0])
def test_log_formula_oracle(L_um, al, room):
    L = L_um * MICRON
    e = free_energy(CavityGeometry(L), al, room)
    assert e.energy == pytest.approx(lifshitz_log_energy(L, al, room), rel=1e-7)


def test_perfect_vacuum_is_ideal():
    g = CavityGeometry(1 * MICRON, 1e-4)
    e = free_energy(g, perfect_mirror(), thermal_state(0.0))
    assert e.energy == pytest.approx(4.33e-14, rel=0.005)
    assert eta_energy(g, perfect_mirror(), thermal_state(0.0)) == pytest.approx(1.0, abs=1e-9)


def test_high_temperature_asymptote(room):
    g = CavityGeometry(5 * room.lambda_T)
    eta = eta_energy(g, perfect_mirror(), room)
    assert eta == pytest.approx(90 * float(zeta(3)) / math.pi**3 * g.L / room.lambda_T, rel=0.01)


def test_bracketing_al_2um(al, room):
    g = CavityGeometry(2 * MICRON)
    eta = eta_energy(g, al, room)
    eta_P = eta_energy(g, al, thermal_state(0.0))
    eta_T = eta_energy(g, perfect_mirror(), room)
    assert eta_P <= eta <= eta_P * eta_T * 1.05


def test_short_distance_conductivity_regime(al, room):
    assert eta_energy(CavityGeometry(0.15 * MICRON), al, room) < 1.0


def test_force_energy_consistency(al, room):
    for L_um in (0.3, 1.0, 3.0):
        L = L_um * MICRON
        h = 1e-3 * L
        dE = (free_energy(CavityGeometry(L - h), al, room).energy
              - free_energy(CavityGeometry(L + h), al, room).energy) / (2 * h)
        assert dE == pytest.approx(force_matsubara(CavityGeometry(L), al, room).force, rel=1e-3)


def test_profile_matches_single_points(al, room):
    Ls = [0.2 * MICRON, 1.5 * MICRON, 0.7 * MICRON]
    profile = free_energy_profile(Ls, al, room)
    assert [p.L for p in profile] == Ls
    for p in profile:
        single = free_energy(CavityGeometry(p.L), al, room)
        assert p.energy == pytest.approx(single.energy, rel=1e-9)
        assert p.energy > 0
        assert p.upper_limit_used >= DEFAULT_CONFIG.energy_range_factor * p.L
        assert p.convergence_delta < 1e-7 and abs(p.raw_extension_delta) < 1e-7


def test_area_scaling(al, room):
    a = free_energy(CavityGeometry(1 * MICRON, 1.0), al, room).energy
    b = free_energy(CavityGeometry(1 * MICRON, 2.5e-3), al, room).energy
    assert b == pytest.approx(2.5e-3 * a, rel=1e-14)


def test_convergence_postcondition_enforced(al, room):
    strict = DEFAULT_CONFIG.replace(energy_convergence_limit=1e-30)
    with pytest.raises(ConvergenceError) as info:
        free_energy(CavityGeometry(1 * MICRON), al, room, strict)
    assert info.value.context["convergence_delta"] >= 0.0


def test_bad_separations(al, room):
    with pytest.raises(DomainError):
        free_energy_profile([], al, room)
    with pytest.raises(DomainError):
        free_energy_profile([1e-6, -1e-6], al, room)


def test_ideal_energy_helper_consistency():
    g = CavityGeometry(0.5 * MICRON)
    assert ideal_energy(g) * 3 / g.L == pytest.approx(math.pi**2 * 1.0545718176461565e-34 * C / (240 * g.L**4), rel=1e-12)
