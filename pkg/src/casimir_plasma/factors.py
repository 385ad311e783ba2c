"""Correction factors of force and energy and their product-approximation error.

For a quantity Q (force F or energy E):

* ``eta   = Q / Q_Cas``              plasma mirrors at temperature T
* ``eta_P = Q^P / Q_Cas``            plasma mirrors at T = 0
* ``eta_T = Q^T / Q_Cas``            perfect mirrors at temperature T
* ``delta = eta / (eta_P eta_T) - 1``
* ``Delta = (lambda_T / lambda_P) delta``

``Delta`` is compared with its first-order form
``c (lambda_T/L) (eta_T - 1)/eta_T + (lambda_T/L) phi / eta_T`` where
``c = 8/(3 pi)`` for the force and ``2/pi`` for the energy. ``phi`` is
obtained by solving that relation for the numerically computed ``Delta``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .config import DEFAULT_CONFIG, QuadratureConfig
from .energy import free_energy, free_energy_profile
from .errors import DomainError, UnsupportedInputError
from .thermal import force_matsubara, force_vacuum
from .units import (
    CavityGeometry,
    Mirror,
    ThermalState,
    ideal_energy,
    ideal_force,
    perfect_mirror,
    plasma_mirror,
    thermal_state,
)

LEADING_COEFFICIENT = {"force": 8.0 / (3.0 * math.pi), "energy": 2.0 / math.pi}


@dataclass(frozen=True)
class CorrectionReport:
    """All correction factors at one separation (``delta``, ``Delta``, ``phi`` are NaN
    where undefined: perfect mirrors, or ``Delta``/``phi`` at ``T = 0``)."""

    L: float
    eta_F: float
    eta_F_P: float
    eta_F_T: float
    delta_F: float
    Delta_F: float
    eta_E: float
    eta_E_P: float
    eta_E_T: float
    delta_E: float
    Delta_E: float
    phi_F: float
    phi_E: float

    def as_dict(self) -> dict:
        return asdict(self)


def delta_rescaled_analytic(
    L: float,
    thermal: ThermalState,
    which: str,
    phi: float = 0.0,
    eta_T: float | None = None,
    config: QuadratureConfig = DEFAULT_CONFIG,
) -> float:
    """First-order ``Delta`` for ``which`` in {"force", "energy"}; ``phi = 0`` gives the leading term.

    ``eta_T`` (perfect mirrors at ``T``) is computed when not supplied.
    """
    if which not in LEADING_COEFFICIENT:
        raise DomainError(f"which must be 'force' or 'energy', got {which!r}")
    if thermal.is_vacuum:
        raise DomainError("the rescaled deviation needs T > 0")
    if eta_T is None:
        g = CavityGeometry(L)
        if which == "force":
            eta_T = force_matsubara(g, perfect_mirror(), thermal, config).force / ideal_force(g)
        else:
            eta_T = free_energy(g, perfect_mirror(), thermal, config).energy / ideal_energy(g)
    ratio = thermal.lambda_T / L
    return LEADING_COEFFICIENT[which] * ratio * (eta_T - 1.0) / eta_T + ratio * phi / eta_T


def extract_phi(Delta: float, L: float, thermal: ThermalState, which: str, eta_T: float) -> float:
    """Invert the first-order relation: ``phi = (Delta - leading) eta_T L / lambda_T``."""
    lead = delta_rescaled_analytic(L, thermal, which, 0.0, eta_T)
    return (Delta - lead) * eta_T * L / thermal.lambda_T


class PerfectThermalCache:
    """Perfect-mirror ``eta_T`` factors, shared between mirrors in a sweep."""

    def __init__(self, thermal: ThermalState, config: QuadratureConfig = DEFAULT_CONFIG):
        self.thermal = thermal
        self.config = config
        self._force: dict[float, float] = {}
        self._energy: dict[float, float] = {}

    def prepare(self, L_values: Iterable[float]) -> None:
        missing = sorted({float(L) for L in L_values} - set(self._energy))
        if not missing:
            return
        if self.thermal.is_vacuum:
            for L in missing:
                self._force[L] = self._energy[L] = 1.0
            return
        mirror = perfect_mirror()
        energies = free_energy_profile(missing, mirror, self.thermal, self.config)
        for L, e in zip(missing, energies):
            g = CavityGeometry(L)
            self._energy[L] = e.energy / ideal_energy(g)
            self._force[L] = force_matsubara(g, mirror, self.thermal, self.config).force / ideal_force(g)

    def force(self, L: float) -> float:
        self.prepare([L])
        return self._force[float(L)]

    def energy(self, L: float) -> float:
        self.prepare([L])
        return self._energy[float(L)]


def correction_reports(
    L_values: Sequence[float],
    mirror: Mirror,
    thermal: ThermalState,
    config: QuadratureConfig = DEFAULT_CONFIG,
    strict: bool = True,
    cache: PerfectThermalCache | None = None,
) -> list[CorrectionReport]:
    """:func:`correction_report` at many separations, sharing the energy integrals."""
    if strict and mirror.is_perfect:
        raise UnsupportedInputError(
            "delta and Delta are undefined for perfect mirrors; pass strict=False for eta only"
        )
    if cache is None:
        cache = PerfectThermalCache(thermal, config)
    elif cache.thermal != thermal:
        raise DomainError("cache was built for a different temperature")
    cache.prepare(L_values)
    vacuum = thermal_state(0.0)
    E_full = free_energy_profile(L_values, mirror, thermal, config)
    E_vac = free_energy_profile(L_values, mirror, vacuum, config)

    reports = []
    for L, e_full, e_vac in zip(L_values, E_full, E_vac):
        g = CavityGeometry(L)
        F_cas, E_cas = ideal_force(g), ideal_energy(g)
        eta_F_P = force_vacuum(g, mirror, config).force / F_cas
        eta_F = eta_F_P if thermal.is_vacuum else force_matsubara(g, mirror, thermal, config).force / F_cas
        eta_F_T, eta_E_T = cache.force(L), cache.energy(L)
        eta_E, eta_E_P = e_full.energy / E_cas, e_vac.energy / E_cas
        nan = math.nan
        delta_F = delta_E = Delta_F = Delta_E = phi_F = phi_E = nan
        if not mirror.is_perfect:
            delta_F = eta_F / (eta_F_P * eta_F_T) - 1.0
            delta_E = eta_E / (eta_E_P * eta_E_T) - 1.0
            if not thermal.is_vacuum:
                scale = thermal.lambda_T / mirror.lambda_P
                Delta_F, Delta_E = scale * delta_F, scale * delta_E
                phi_F = extract_phi(Delta_F, L, thermal, "force", eta_F_T)
                phi_E = extract_phi(Delta_E, L, thermal, "energy", eta_E_T)
        reports.append(CorrectionReport(
            L=float(L), eta_F=eta_F, eta_F_P=eta_F_P, eta_F_T=eta_F_T,
            delta_F=delta_F, Delta_F=Delta_F,
            eta_E=eta_E, eta_E_P=eta_E_P, eta_E_T=eta_E_T,
            delta_E=delta_E, Delta_E=Delta_E, phi_F=phi_F, phi_E=phi_E,
        ))
    return reports


def correction_report(
    L: float,
    mirror: Mirror,
    thermal: ThermalState,
    config: QuadratureConfig = DEFAULT_CONFIG,
    strict: bool = True,
) -> CorrectionReport:
    """Correction factors, deviation and rescaled deviation at separation ``L``.

    Perfect mirrors raise :class:`UnsupportedInputError` unless ``strict`` is
    false, in which case only the ``eta`` fields are filled.
    """
    return correction_reports([L], mirror, thermal, config, strict)[0]


@dataclass(frozen=True)
class CollapseResult:
    """Largest pairwise spread of ``Delta`` curves, relative to the largest ``|Delta|``."""

    statistic: float
    L_at_max: float
    pair: tuple[float, float] | None
    quantity: str
    per_quantity: dict


def scaling_collapse(
    L_grid: Sequence[float],
    lambda_P_list: Sequence[float],
    thermal: ThermalState,
    config: QuadratureConfig = DEFAULT_CONFIG,
    which: str = "both",
    reports: dict[float, list[CorrectionReport]] | None = None,
) -> CollapseResult:
    """How well ``Delta(L)`` curves for different plasma wavelengths coincide.

    Every ``lambda_P`` must satisfy ``lambda_P <= lambda_T / 10``. Precomputed
    ``reports`` (keyed by ``lambda_P``, aligned with ``L_grid``) are reused.
    """
    if thermal.is_vacuum:
        raise DomainError("scaling collapse needs T > 0")
    for lp in lambda_P_list:
        if lp > thermal.lambda_T / 10.0:
            raise DomainError(
                f"lambda_P={lp:g} m is not small against lambda_T={thermal.lambda_T:g} m; "
                "the scaling law does not apply"
            )
    quantities = {"both": ("force", "energy"), "force": ("force",), "energy": ("energy",)}[which]
    if reports is None:
        reports = {}
    cache = PerfectThermalCache(thermal, config)
    curves = {}
    for lp in lambda_P_list:
        if lp not in reports:
            reports[lp] = correction_reports(L_grid, plasma_mirror(lp), thermal, config, cache=cache)
        curves[lp] = reports[lp]

    per_quantity = {}
    best = CollapseResult(0.0, float(L_grid[0]), None, quantities[0], per_quantity)
    for q in quantities:
        field = "Delta_F" if q == "force" else "Delta_E"
        peak = max(abs(getattr(r, field)) for lp in lambda_P_list for r in curves[lp])
        stat, where, pair = 0.0, float(L_grid[0]), None
        for l1, l2 in combinations(lambda_P_list, 2):
            for r1, r2 in zip(curves[l1], curves[l2]):
                spread = abs(getattr(r1, field) - getattr(r2, field)) / peak
                if spread > stat:
                    stat, where, pair = spread, r1.L, (l1, l2)
        per_quantity[q] = {"statistic": stat, "L_at_max": where, "pair": pair}
        if stat >= best.statistic:
            best = CollapseResult(stat, where, pair, q, per_quantity)
    return best


@dataclass(frozen=True)
class SpherePlaneForce:
    force: float
    energy_per_area: float
    pfa_valid: bool


def sphere_plane_force_pfa(
    R: float,
    L: float,
    mirror: Mirror,
    thermal: ThermalState,
    config: QuadratureConfig = DEFAULT_CONFIG,
) -> SpherePlaneForce:
    """Proximity-force estimate ``2 pi R E(L)/A`` for a sphere of radius ``R`` at closest distance ``L``.

    ``pfa_valid`` is false when ``R < 100 L``.
    """
    if not R > 0.0:
        raise DomainError("sphere radius must be > 0")
    e = free_energy(CavityGeometry(L), mirror, thermal, config).energy
    return SpherePlaneForce(force=2.0 * math.pi * R * e, energy_per_area=e, pfa_valid=R >= 100.0 * L)
