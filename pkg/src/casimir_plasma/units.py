"""Physical constants, thermal and plasma scales, and the ideal Casimir results.

Everything is SI. Lengths handed in by the CLI in µm or nm are converted at
the boundary with :data:`MICRON` and :data:`NANOMETER`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .errors import DomainError, UnknownMaterialError

MICRON = 1e-6
NANOMETER = 1e-9


@dataclass(frozen=True)
class PhysicalConstants:
    """Frozen constant table (CODATA 2018; all three are exact in the 2019 SI)."""

    hbar: float
    c: float
    k_B: float
    version: str

    def __post_init__(self):
        if min(self.hbar, self.c, self.k_B) <= 0.0:
            raise DomainError("physical constants must be strictly positive")


CODATA_2018 = PhysicalConstants(
    hbar=6.62607015e-34 / (2.0 * math.pi),
    c=299792458.0,
    k_B=1.380649e-23,
    version="CODATA 2018",
)
CONSTANTS = CODATA_2018

HBAR = CONSTANTS.hbar
C = CONSTANTS.c
K_B = CONSTANTS.k_B


@dataclass(frozen=True)
class ThermalState:
    """Temperature with its thermal angular frequency and thermal wavelength.

    ``T == 0`` is the vacuum case: ``omega_T`` is 0 and ``lambda_T`` is ``inf``.
    """

    T: float
    omega_T: float
    lambda_T: float

    @property
    def is_vacuum(self) -> bool:
        return self.T == 0.0


def thermal_state(T: float) -> ThermalState:
    """Build the thermal scales for temperature ``T`` in kelvin.

    ``omega_T = 2 pi k_B T / hbar`` and ``lambda_T = hbar c / (k_B T)``, so that
    ``lambda_T * omega_T == 2 pi c``.
    """
    T = float(T)
    if not T >= 0.0 or math.isinf(T):
        raise DomainError(f"temperature must be finite and >= 0 K, got {T!r}")
    if T == 0.0:
        return ThermalState(T=0.0, omega_T=0.0, lambda_T=math.inf)
    return ThermalState(
        T=T,
        omega_T=2.0 * math.pi * K_B * T / HBAR,
        lambda_T=HBAR * C / (K_B * T),
    )


class MirrorModel(str, Enum):
    PERFECT = "PerfectReflector"
    PLASMA = "PlasmaMetal"


@dataclass(frozen=True)
class Mirror:
    """Reflectivity model of one plate.

    Use :func:`perfect_mirror`, :func:`plasma_mirror` or :func:`material_preset`
    rather than the constructor.
    """

    model: MirrorModel
    lambda_P: float | None = None
    name: str = ""
    omega_P: float | None = field(init=False, default=None)

    def __post_init__(self):
        if self.model is MirrorModel.PLASMA:
            if self.lambda_P is None or not (0.0 < self.lambda_P < math.inf):
                raise DomainError(f"plasma wavelength must be > 0, got {self.lambda_P!r}")
            object.__setattr__(self, "omega_P", 2.0 * math.pi * C / self.lambda_P)
        elif self.lambda_P is not None:
            raise DomainError("a perfect reflector has no plasma wavelength")
        if not self.name:
            label = "Perfect" if self.is_perfect else f"lambdaP={self.lambda_P / NANOMETER:g}nm"
            object.__setattr__(self, "name", label)

    @property
    def is_perfect(self) -> bool:
        return self.model is MirrorModel.PERFECT


def perfect_mirror() -> Mirror:
    return Mirror(MirrorModel.PERFECT, name="Perfect")


def plasma_mirror(lambda_P: float, name: str = "") -> Mirror:
    """Plasma-model metal with plasma wavelength ``lambda_P`` in metres."""
    return Mirror(MirrorModel.PLASMA, lambda_P=float(lambda_P), name=name)


# plasma wavelengths in nm
PRESETS = {"Al": 107.0, "CuAu": 136.0}


def material_preset(name: str | float) -> Mirror:
    """Look up a mirror by preset name (``Al``, ``CuAu``, ``Perfect``).

    A number is taken as a custom plasma wavelength in metres.
    """
    if isinstance(name, (int, float)) and not isinstance(name, bool):
        return plasma_mirror(float(name))
    if name == "Perfect":
        return perfect_mirror()
    try:
        lam_nm = PRESETS[name]
    except KeyError:
        valid = ", ".join([*PRESETS, "Perfect"])
        raise UnknownMaterialError(f"unknown material {name!r}; valid presets: {valid}") from None
    return plasma_mirror(lam_nm * NANOMETER, name=name)


@dataclass(frozen=True)
class CavityGeometry:
    """Plate separation ``L`` (m) and plate area ``A`` (m^2)."""

    L: float
    A: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.L < math.inf):
            raise DomainError(f"separation must be > 0, got {self.L!r}")
        if not (0.0 < self.A < math.inf):
            raise DomainError(f"area must be > 0, got {self.A!r}")

    def at(self, L: float) -> "CavityGeometry":
        return CavityGeometry(L, self.A)


def ideal_force(geometry: CavityGeometry) -> float:
    """Casimir force between perfect mirrors at T = 0, ``hbar c A pi^2 / (240 L^4)``."""
    return HBAR * C * geometry.A * math.pi**2 / (240.0 * geometry.L**4)


def ideal_energy(geometry: CavityGeometry) -> float:
    """Casimir energy between perfect mirrors at T = 0, ``hbar c A pi^2 / (720 L^3)``."""
    return HBAR * C * geometry.A * math.pi**2 / (720.0 * geometry.L**3)
