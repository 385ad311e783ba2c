"""Cavity integrand and the spectral force density at one imaginary frequency.

The wavevector integral is evaluated in the shifted variable
``u = 2L (kappa - xi/c)``, which puts the lower bound at 0 and the decay
scale at 1, so that

    F[xi] = hbar A / (16 pi^2 L^3) * int_0^inf du s^2 f(s),   s = 2 kappa L.
"""
from __future__ import annotations

import math
from dataclasses import dataclass


from . import _fallback
from ._core import describe_status, kernels
from .config import DEFAULT_CONFIG, QuadratureConfig
from .errors import ConvergenceError, DomainError
from .optics import SpectralPoint, reflectivities
from .units import C, HBAR, CavityGeometry, Mirror


@dataclass(frozen=True)
class SpectralDensity:
    """Force per unit angular frequency (N s/rad) at imaginary frequency ``xi``."""

    value: float
    xi: float
    error_estimate: float


def plasma_parameter(mirror: Mirror, L: float) -> float:
    """``2 omega_P L / c = 4 pi L / lambda_P``; ``inf`` for a perfect reflector."""
    if mirror.is_perfect:
        return math.inf
    return 4.0 * math.pi * L / mirror.lambda_P


def density_prefactor(geometry: CavityGeometry) -> float:
    return HBAR * geometry.A / (16.0 * math.pi**2 * geometry.L**3)


def loop_integrand(point: SpectralPoint, mirror: Mirror, L: float) -> float:
    """``f = sum_pol r^2 / (exp(2 kappa L) - r^2)`` over both polarisations."""
    if not L > 0.0:
        raise DomainError("L must be > 0")
    if not point.kappa > 0.0:
        raise DomainError("loop integrand is singular at kappa = 0")
    pair = reflectivities(point, mirror)
    s = 2.0 * point.kappa * L
    total = 0.0
    if s > 1.0:
        # r^2 e^-s / (1 - r^2 e^-s): no overflow at large s
        e = math.exp(-s)
        for r2 in (pair.r2_perp, pair.r2_par):
            total += r2 * e / (1.0 - r2 * e)
        return total
    em = math.expm1(s)
    for r2 in (pair.r2_perp, pair.r2_par):
        # exp(s) - r^2 == expm1(s) + (1 - r^2)
        total += r2 / (em + (1.0 - r2))
    return total


def _rational_integral(a0: float, p: float, config: QuadratureConfig):
    # u = t / (1 - t) maps [0, inf) onto [0, 1)
    def g(t):
        u = t / (1.0 - t)
        s = a0 + u
        return s * s * _fallback.loop_f(s, a0, p) / (1.0 - t) ** 2

    return _fallback.adaptive(g, [0.0, 0.25, 0.5, 0.75, 0.9, 1.0], config.rel_tol,
                              config.abs_tol, config.max_panels)


def spectral_density(
    xi: float,
    mirror: Mirror,
    geometry: CavityGeometry,
    config: QuadratureConfig = DEFAULT_CONFIG,
    substitution: str = "shift",
) -> SpectralDensity:
    """``hbar A / (2 pi^2) * int_{xi/c}^inf dkappa kappa^2 f``.

    ``substitution="rational"`` integrates the same density through
    ``u = t/(1-t)`` on ``[0, 1)`` instead of the truncated shifted variable;
    it exists to cross-check the default path.
    """
    if not xi >= 0.0:
        raise DomainError(f"xi must be >= 0, got {xi!r}")
    a0 = 2.0 * xi * geometry.L / C
    p = plasma_parameter(mirror, geometry.L)
    abs_tol = config.abs_tol / density_prefactor(geometry)
    if substitution == "shift":
        val, err, status = kernels.kappa_integral(
            a0, p, config.rel_tol, abs_tol, config.u_max, config.max_panels
        )
    elif substitution == "rational":
        val, err, status = _rational_integral(a0, p, config.replace(abs_tol=abs_tol))
    else:
        raise DomainError(f"unknown substitution {substitution!r}")
    pref = density_prefactor(geometry)
    if status:
        raise ConvergenceError(
            f"wavevector integral at xi={xi:g} rad/s did not converge ({describe_status(status)})",
            error_estimate=err * pref,
            xi=xi,
        )
    return SpectralDensity(value=val * pref, xi=xi, error_estimate=err * pref)
