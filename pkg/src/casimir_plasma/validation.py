"""Self-validation checks with measured values and thresholds.

Each ``check_*`` returns a :class:`CheckResult`; :func:`run_all` runs them in
order. Oracles are closed forms (``zeta(3)``, ideal Casimir laws) or a second
numerical route, never the path under test.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from scipy.special import zeta

from .config import DEFAULT_CONFIG, QuadratureConfig
from .energy import free_energy
from .factors import PerfectThermalCache, correction_reports, scaling_collapse
from .report import SweepSpec
from .thermal import force_matsubara, force_poisson, force_vacuum
from .units import (
    K_B,
    MICRON,
    NANOMETER,
    CavityGeometry,
    ideal_energy,
    ideal_force,
    material_preset,
    perfect_mirror,
    plasma_mirror,
    thermal_state,
)

ZETA3 = float(zeta(3))
EQUIVALENCE_GRID = {
    "L_um": (0.3, 1.0, 3.0, 7.0),
    "lambda_P_nm": (107.0, 136.0, 500.0),
    "T": (300.0, 600.0),
}


@dataclass(frozen=True)
class CheckResult:
    criterion: int
    name: str
    measured: float
    threshold: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" ({self.detail})" if self.detail else ""
        return f"[{status}] {self.criterion:>2}. {self.name}: measured {self.measured:.6g}, required {self.threshold}{extra}"


def check_thermal_wavelength(config: QuadratureConfig = DEFAULT_CONFIG) -> CheckResult:
    lam = thermal_state(300.0).lambda_T / MICRON
    return CheckResult(1, "thermal wavelength at 300 K (um)", lam, "7.63 +/- 0.01",
                       abs(lam - 7.63) <= 0.01)


def check_ideal_limits(config: QuadratureConfig = DEFAULT_CONFIG) -> CheckResult:
    vac = thermal_state(0.0)
    worst = 0.0
    for L in (0.1, 1.0, 10.0):
        g = CavityGeometry(L * MICRON)
        worst = max(worst,
                    abs(force_vacuum(g, perfect_mirror(), config).force / ideal_force(g) - 1.0),
                    abs(free_energy(g, perfect_mirror(), vac, config).energy / ideal_energy(g) - 1.0))
    return CheckResult(2, "perfect mirrors at T=0, max |eta - 1|", worst, "<= 1e-6", worst <= 1e-6)


def check_representation_equivalence(config: QuadratureConfig = DEFAULT_CONFIG) -> CheckResult:
    worst, within = 0.0, 0
    n = 0
    for T in EQUIVALENCE_GRID["T"]:
        th = thermal_state(T)
        for L in EQUIVALENCE_GRID["L_um"]:
            for lp in EQUIVALENCE_GRID["lambda_P_nm"]:
                g, m = CavityGeometry(L * MICRON), plasma_mirror(lp * NANOMETER)
                a = force_matsubara(g, m, th, config)
                b = force_poisson(g, m, th, config)
                diff = abs(a.force - b.force)
                worst = max(worst, diff / a.force)
                within += diff <= a.error_estimate + b.error_estimate
                n += 1
    return CheckResult(3, "max |F_Matsubara - F_Poisson| / F over 24 points", worst, "<= 1e-4",
                       worst <= 1e-4, f"{within}/{n} inside combined error estimates")


def check_conductivity_slope(config: QuadratureConfig = DEFAULT_CONFIG) -> CheckResult:
    target = 8.0 / (3.0 * math.pi)
    values = []
    for name in ("Al", "CuAu"):
        m = material_preset(name)
        g = CavityGeometry(200.0 * m.lambda_P)
        eta = force_vacuum(g, m, config).force / ideal_force(g)
        values.append((1.0 - eta) * g.L / m.lambda_P)
    worst = max(values, key=lambda v: abs(v - target))
    ok = all(0.832 <= v <= 0.866 for v in values)
    return CheckResult(4, "(1 - eta_F^P) L/lambda_P at L = 200 lambda_P", worst, "in [0.832, 0.866]", ok,
                       "Al, CuAu: " + ", ".join(f"{v:.5f}" for v in values))


def check_high_temperature(config: QuadratureConfig = DEFAULT_CONFIG) -> CheckResult:
    th = thermal_state(300.0)
    g = CavityGeometry(5.0 * th.lambda_T)
    F = force_matsubara(g, perfect_mirror(), th, config).force
    F_asym = ZETA3 * K_B * th.T * g.A / (4.0 * math.pi * g.L**3)
    eta_E = free_energy(g, perfect_mirror(), th, config).energy / ideal_energy(g)
    eta_asym = 90.0 * ZETA3 / math.pi**3 * g.L / th.lambda_T
    dev_F, dev_E = abs(F / F_asym - 1.0), abs(eta_E / eta_asym - 1.0)
    return CheckResult(5, "perfect mirrors at L = 5 lambda_T, max rel. deviation from asymptotes",
                       max(dev_F, dev_E), "<= 0.01", max(dev_F, dev_E) <= 0.01,
                       f"force {dev_F:.2e}, eta_E {dev_E:.2e}")


class DeviationSweep:
    """Default 0.1-10 um sweep at 300 K for 107, 136 and 500 nm, computed once."""

    def __init__(self, config: QuadratureConfig = DEFAULT_CONFIG, points_per_decade: int = 50):
        spec = SweepSpec(points_per_decade=points_per_decade)
        self.grid = list(spec.grid())
        th = thermal_state(300.0)
        cache = PerfectThermalCache(th, config)
        self.reports = {
            lp: correction_reports(self.grid, plasma_mirror(lp * NANOMETER), th, config, cache=cache)
            for lp in (107.0, 136.0, 500.0)
        }

    def max_delta(self, lp: float) -> tuple[float, float]:
        rs = self.reports[lp]
        return max(r.delta_F for r in rs), max(r.delta_E for r in rs)


def check_deviation_magnitude(sweep: DeviationSweep) -> CheckResult:
    parts, ok = [], True
    for lp in (107.0, 136.0):
        dF, dE = sweep.max_delta(lp)
        ok &= 0.0 < dF <= 0.02 and 0.0 < dE <= 0.02
        parts.append(f"{lp:g}nm F {dF:.4f} E {dE:.4f}")
    dF5, dE5 = sweep.max_delta(500.0)
    ok &= 0.02 <= dF5 <= 0.06 and 0.02 <= dE5 <= 0.06
    parts.append(f"500nm F {dF5:.4f} E {dE5:.4f}")
    measured = max(max(sweep.max_delta(107.0)), max(sweep.max_delta(136.0)))
    return CheckResult(6, "max delta for Al and CuAu", measured,
                       "in (0, 0.02]; 500 nm in [0.02, 0.06]", ok, "; ".join(parts))


def check_deviation_sign(sweep: DeviationSweep) -> CheckResult:
    smallest = min(min(r.delta_F, r.delta_E) for rs in sweep.reports.values() for r in rs)
    n = sum(len(rs) for rs in sweep.reports.values())
    return CheckResult(7, "min delta_F, delta_E over every sweep point", smallest, "> 0", smallest > 0.0,
                       f"{n} points")


def check_regime_ordering(sweep: DeviationSweep) -> CheckResult:
    worst = math.inf
    for lp in (107.0, 136.0):
        for r in sweep.reports[lp]:
            worst = min(worst,
                        (1.0 - r.eta_F_P) - (1.0 - r.eta_E_P),
                        (r.eta_E_T - 1.0) - (r.eta_F_T - 1.0))
    return CheckResult(11, "min margin of conductivity/thermal ordering (Al, CuAu)", worst, ">= 0",
                       worst >= 0.0)


def check_scaling_collapse(config: QuadratureConfig = DEFAULT_CONFIG, points_per_decade: int = 50) -> CheckResult:
    spec = SweepSpec(L_min=0.5 * MICRON, L_max=10.0 * MICRON, points_per_decade=points_per_decade)
    res = scaling_collapse(list(spec.grid()), [107 * NANOMETER, 136 * NANOMETER, 200 * NANOMETER],
                           thermal_state(300.0), config)
    pq = res.per_quantity
    return CheckResult(8, "Delta collapse statistic for 107/136/200 nm", res.statistic, "<= 0.05",
                       res.statistic <= 0.05,
                       f"force {pq['force']['statistic']:.4f}, energy {pq['energy']['statistic']:.4f}")


def check_energy_convergence(config: QuadratureConfig = DEFAULT_CONFIG) -> CheckResult:
    th = thermal_state(300.0)
    m = material_preset("Al")
    worst = 0.0
    for L in (0.1, 0.3, 1.0, 3.0, 10.0):
        e = free_energy(CavityGeometry(L * MICRON), m, th, config)
        worst = max(worst, e.convergence_delta, abs(e.raw_extension_delta))
    return CheckResult(9, "relative change of E under x100 range extension (5 points)", worst, "< 1e-7",
                       worst < 1e-7)


def check_thermodynamic_consistency(config: QuadratureConfig = DEFAULT_CONFIG) -> CheckResult:
    th = thermal_state(300.0)
    m = material_preset("Al")
    worst = 0.0
    for L in (0.3, 1.0, 3.0):
        L = L * MICRON
        h = 1e-3 * L
        e_lo = free_energy(CavityGeometry(L - h), m, th, config).energy
        e_hi = free_energy(CavityGeometry(L + h), m, th, config).energy
        F = force_matsubara(CavityGeometry(L), m, th, config).force
        worst = max(worst, abs((e_lo - e_hi) / (2.0 * h) / F - 1.0))
    return CheckResult(10, "-dE/dL vs F, Al at 300 K", worst, "<= 1e-3", worst <= 1e-3)


def run_all(config: QuadratureConfig = DEFAULT_CONFIG,
            progress: Callable[[CheckResult], None] | None = None) -> list[CheckResult]:
    results = []

    def record(res):
        results.append(res)
        if progress:
            progress(res)

    for check in (check_thermal_wavelength, check_ideal_limits, check_representation_equivalence,
                  check_conductivity_slope, check_high_temperature):
        record(check(config))
    sweep = DeviationSweep(config)
    record(check_deviation_magnitude(sweep))
    record(check_deviation_sign(sweep))
    record(check_scaling_collapse(config))
    record(check_energy_convergence(config))
    record(check_thermodynamic_consistency(config))
    record(check_regime_ordering(sweep))
    return results
