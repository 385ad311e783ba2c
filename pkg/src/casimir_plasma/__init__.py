"""Casimir force and free energy between plasma-model mirrors at finite temperature.

Quick start::

    from casimir_plasma import material_preset, thermal_state, correction_report, MICRON
    r = correction_report(1 * MICRON, material_preset("Al"), thermal_state(300.0))
    r.eta_F, r.delta_F
"""
from ._core import BACKEND
from .config import DEFAULT_CONFIG, QuadratureConfig
from .energy import EnergyResult, eta_energy, free_energy, free_energy_profile
from .errors import (
    CasimirError,
    ConvergenceError,
    DomainError,
    RedirectError,
    ReportError,
    UnknownMaterialError,
    UnsupportedInputError,
)
from .factors import (
    CollapseResult,
    CorrectionReport,
    correction_report,
    correction_reports,
    delta_rescaled_analytic,
    extract_phi,
    scaling_collapse,
    sphere_plane_force_pfa,
)
from .optics import ReflectivityPair, SpectralPoint, epsilon_plasma, reflectivities
from .spectral import SpectralDensity, loop_integrand, spectral_density
from .thermal import (
    ForceResult,
    Representation,
    casimir_force,
    force_matsubara,
    force_perfect_thermal,
    force_poisson,
    force_vacuum,
)
from .units import (
    CODATA_2018,
    MICRON,
    NANOMETER,
    CavityGeometry,
    Mirror,
    MirrorModel,
    ThermalState,
    ideal_energy,
    ideal_force,
    material_preset,
    perfect_mirror,
    plasma_mirror,
    thermal_state,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
