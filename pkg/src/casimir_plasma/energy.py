"""Casimir free energy by integrating the force over the plate separation.

``E(L) = int_L^X F(x) dx + tail(X)`` with ``X >= 1e4 L``. The integral runs
over ``ln x`` panels (one per decade to start) with adaptive G10/K21
refinement. Beyond ``X`` the force is replaced by its asymptote:
``zeta(3) k_B T A / (4 pi x^3)`` at ``T > 0`` and the ideal ``x^-4`` law at
``T = 0``. Every result is checked by pushing ``X`` out by
``energy_extension_factor`` and requiring the relative change to stay below
``energy_convergence_limit``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import zeta

from . import _fallback
from ._core import describe_status
from .config import DEFAULT_CONFIG, QuadratureConfig
from .errors import ConvergenceError, DomainError
from .thermal import force_matsubara, force_vacuum
from .units import C, HBAR, K_B, CavityGeometry, Mirror, ThermalState, ideal_energy

ZETA3 = float(zeta(3))


@dataclass(frozen=True)
class EnergyResult:
    energy: float
    upper_limit_used: float
    convergence_delta: float
    error_estimate: float
    L: float
    # relative weight of int_X^{extension*X} F dx alone, i.e. the change
    # without any tail model
    raw_extension_delta: float = 0.0


class _ForcePerArea:
    """``x -> F(x)/A`` for one mirror and temperature; tracks the worst relative error."""

    def __init__(self, mirror: Mirror, thermal: ThermalState, config: QuadratureConfig):
        self.mirror = mirror
        self.thermal = thermal
        self.config = config
        self.worst_rel_err = 0.0
        self.calls = 0

    def __call__(self, x: float) -> float:
        g = CavityGeometry(float(x), 1.0)
        if self.thermal.is_vacuum:
            res = force_vacuum(g, self.mirror, self.config)
        else:
            res = force_matsubara(g, self.mirror, self.thermal, self.config)
        self.calls += 1
        self.worst_rel_err = max(self.worst_rel_err, res.error_estimate / res.force)
        return res.force

    def tail(self, X: float) -> float:
        """``int_X^inf F/A dx`` from the large-distance asymptote."""
        if self.thermal.is_vacuum:
            return HBAR * C * math.pi**2 / (720.0 * X**3)
        return ZETA3 * K_B * self.thermal.T / (8.0 * math.pi * X**2)


def _integrate_log(force: _ForcePerArea, lo: float, hi: float, rel_tol: float,
                   max_panels: int, per_decade: bool = True) -> tuple[float, float]:
    s_lo, s_hi = math.log(lo), math.log(hi)
    if per_decade:
        n = max(1, math.ceil((s_hi - s_lo) / math.log(10.0)))
        breaks = list(np.linspace(s_lo, s_hi, n + 1))
    else:
        breaks = [s_lo, s_hi]

    def g(s):
        x = np.exp(s)
        return np.array([force(xi) for xi in x]) * x

    val, err, status = _fallback.adaptive(g, breaks, rel_tol, 0.0, max_panels)
    if status:
        raise ConvergenceError(
            f"distance integral over [{lo:g}, {hi:g}] m did not converge ({describe_status(status)})",
            error_estimate=err, lower=lo, upper=hi,
        )
    return val, err


def free_energy_profile(
    L_values: Sequence[float],
    mirror: Mirror,
    thermal: ThermalState,
    config: QuadratureConfig = DEFAULT_CONFIG,
    A: float = 1.0,
) -> list[EnergyResult]:
    """Free energies at several separations sharing one distance integral.

    The largest separation is integrated out to ``X = energy_range_factor * L_max``;
    smaller ones add the force integral between consecutive separations, so
    ``X >= energy_range_factor * L`` holds for every point. Results come back in
    the order of ``L_values``.
    """
    Ls = sorted({float(L) for L in L_values}, reverse=True)
    if not Ls or Ls[-1] <= 0.0:
        raise DomainError("separations must be > 0")
    force = _ForcePerArea(mirror, thermal, config)
    top = Ls[0]
    X = config.energy_range_factor * top
    X_ext = config.energy_extension_factor * X
    core, core_err = _integrate_log(force, top, X, config.energy_rel_tol, config.max_panels)
    ext, ext_err = _integrate_log(force, X, X_ext, config.energy_rel_tol, config.max_panels)
    energy = core + force.tail(X)
    extended = core + ext + force.tail(X_ext)
    shift = abs(extended - energy)
    err = core_err + shift

    per_L = {}
    prev = top
    for L in Ls:
        if L != prev:
            seg, seg_err = _integrate_log(force, L, prev, config.energy_rel_tol,
                                          config.max_panels, per_decade=prev / L > 10.0)
            energy += seg
            err += seg_err
            prev = L
        delta = shift / energy
        if not delta < config.energy_convergence_limit:
            raise ConvergenceError(
                f"energy at L={L:g} m changed by {delta:.3g} under range extension",
                error_estimate=shift * A, L=L, convergence_delta=delta,
            )
        per_L[L] = EnergyResult(
            energy=energy * A,
            upper_limit_used=X,
            convergence_delta=delta,
            error_estimate=(err + force.worst_rel_err * energy) * A,
            L=L,
            raw_extension_delta=ext / energy,
        )
    return [per_L[float(L)] for L in L_values]


def free_energy(
    geometry: CavityGeometry,
    mirror: Mirror,
    thermal: ThermalState,
    config: QuadratureConfig = DEFAULT_CONFIG,
) -> EnergyResult:
    """Free energy ``int_L^inf F(x) dx`` at constant temperature (``T = 0`` allowed)."""
    return free_energy_profile([geometry.L], mirror, thermal, config, geometry.A)[0]


def eta_energy(
    geometry: CavityGeometry,
    mirror: Mirror,
    thermal: ThermalState,
    config: QuadratureConfig = DEFAULT_CONFIG,
) -> float:
    """``E / E_Cas``."""
    return free_energy(geometry, mirror, thermal, config).energy / ideal_energy(geometry)
