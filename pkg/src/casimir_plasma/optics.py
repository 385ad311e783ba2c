"""Plasma dielectric function and thick-mirror reflectivities at imaginary frequency.

A frequency argument ``xi`` always means the imaginary frequency ``omega = i xi``.
Only squared reflection amplitudes are exposed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, UnsupportedInputError
from .units import C, Mirror


@dataclass(frozen=True)
class SpectralPoint:
    """Imaginary frequency ``xi`` (rad/s) and longitudinal wavevector ``kappa`` (1/m)."""

    xi: float
    kappa: float

    def __post_init__(self):
        if not self.xi >= 0.0:
            raise DomainError(f"xi must be >= 0, got {self.xi!r}")
        # relative slack: kappa == xi/c must survive the round trip through floats
        if not self.kappa >= self.xi / C * (1.0 - 1e-15):
            raise DomainError(
                f"kappa={self.kappa!r} lies below xi/c={self.xi / C!r} (evanescent sector excluded)"
            )


@dataclass(frozen=True)
class ReflectivityPair:
    r2_perp: float
    r2_par: float


def epsilon_plasma(xi: float, mirror: Mirror) -> float:
    """``1 + omega_P^2 / xi^2``; ``xi == 0`` must go through :func:`zero_frequency_reflectivities`."""
    if mirror.is_perfect:
        raise UnsupportedInputError("a perfect reflector has no plasma dielectric function")
    if not xi > 0.0:
        raise DomainError("epsilon_plasma needs xi > 0; use the zero-frequency limit at xi = 0")
    return 1.0 + (mirror.omega_P / xi) ** 2


def _transmitted_kappa(kappa: float, excess: float) -> float:
    # kappa_t = sqrt(kappa^2 + excess), factored for excess << kappa^2
    if excess < kappa * kappa:
        return kappa * math.sqrt(1.0 + excess / (kappa * kappa))
    return math.sqrt(kappa * kappa + excess)


def zero_frequency_reflectivities(kappa: float, mirror: Mirror) -> ReflectivityPair:
    """Closed-form ``xi -> 0`` limit: TM tends to 1, TE to ``((q - kappa)/(q + kappa))^2``."""
    if mirror.is_perfect:
        return ReflectivityPair(1.0, 1.0)
    if not kappa > 0.0:
        raise DomainError("kappa must be > 0 at zero frequency")
    q = _transmitted_kappa(kappa, (mirror.omega_P / C) ** 2)
    # (q - kappa)/(q + kappa) without cancellation
    r = (mirror.omega_P / C) ** 2 / (q + kappa) ** 2
    return ReflectivityPair(r * r, 1.0)


def reflectivities(point: SpectralPoint, mirror: Mirror) -> ReflectivityPair:
    """Squared TE (perp) and TM (par) reflectivities of a vacuum-metal interface."""
    if mirror.is_perfect:
        return ReflectivityPair(1.0, 1.0)
    if point.xi == 0.0:
        return zero_frequency_reflectivities(point.kappa, mirror)
    xi, kappa = point.xi, point.kappa
    # eps - 1 directly, not via epsilon_plasma, to keep it exact when eps ~ 1
    e1 = (mirror.omega_P / xi) ** 2
    excess = (mirror.omega_P / C) ** 2
    kt = _transmitted_kappa(kappa, excess)
    r_perp = excess / (kt + kappa) ** 2
    # eps kappa - kt = (eps-1) ((eps-1) kappa^2 + 2 kappa^2 - xi^2/c^2) / (eps kappa + kt),
    # all terms >= 0 for kappa >= xi/c, so nothing cancels as eps -> 1
    den = (1.0 + e1) * kappa + kt
    r_par = e1 * (e1 * kappa * kappa + 2.0 * kappa * kappa - (xi / C) ** 2) / (den * den)
    return ReflectivityPair(r_perp * r_perp, r_par * r_par)
