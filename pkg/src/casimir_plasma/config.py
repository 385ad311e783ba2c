"""Tolerances and truncation rules shared by every integral and sum."""
from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class QuadratureConfig:
    """Numerical settings.

    Attributes
    ----------
    rel_tol, abs_tol
        Target for every wavevector integral (one spectral density).
    u_max
        Cut-off of the shifted wavevector variable ``u = 2L(kappa - xi/c)``;
        the neglected remainder is bounded analytically and added to the
        error estimate.
    max_panels
        Subdivision budget of each adaptive Gauss-Kronrod integration.
    matsubara_rel_tol, k_max
        Stop the Matsubara sum when a term drops below ``matsubara_rel_tol``
        times the partial sum; hard cap on the number of terms.
    xi_max
        Cut-off of the dimensionless frequency ``2 xi L / c`` for the
        zero-temperature frequency integral and the cosine transforms.
    poisson_rel_tol, m_max, poisson_order
        Truncation of the Poisson series, its hard cap, and the number of
        Gauss-Legendre samples per panel of the cosine-transform interpolant.
    energy_rel_tol, energy_range_factor, energy_extension_factor, energy_convergence_limit
        Distance integration of the force: relative target, upper limit as a
        multiple of ``L``, range-extension factor of the convergence check,
        and the largest accepted relative change under that extension.
    """

    rel_tol: float = 1e-9
    abs_tol: float = 0.0
    u_max: float = 60.0
    max_panels: int = 400
    matsubara_rel_tol: float = 1e-10
    k_max: int = 100_000
    xi_max: float = 80.0
    poisson_rel_tol: float = 1e-9
    m_max: int = 20_000
    poisson_order: int = 24
    energy_rel_tol: float = 1e-9
    energy_range_factor: float = 1e4
    energy_extension_factor: float = 100.0
    energy_convergence_limit: float = 1e-7

    def __post_init__(self):
        for name in ("rel_tol", "matsubara_rel_tol", "poisson_rel_tol", "energy_rel_tol"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise DomainError(f"{name} must lie in (0, 1), got {value!r}")
        if self.abs_tol < 0.0:
            raise DomainError("abs_tol must be >= 0")
        if self.u_max <= 0.0 or self.xi_max <= 0.0:
            raise DomainError("cut-offs must be positive")
        if self.max_panels < 8 or self.k_max < 1 or self.m_max < 1 or self.poisson_order < 4:
            raise DomainError("integer budgets too small")
        if self.energy_range_factor < 1e4:
            raise DomainError("energy upper limit must be at least 1e4 * L")
        if self.energy_extension_factor <= 1.0:
            raise DomainError("energy_extension_factor must exceed 1")

    def replace(self, **changes) -> "QuadratureConfig":
        return dataclasses.replace(self, **changes)

    def tightened(self, factor: float = 10.0) -> "QuadratureConfig":
        """Every tolerance divided by ``factor``."""
        return self.replace(
            rel_tol=self.rel_tol / factor,
            abs_tol=self.abs_tol / factor,
            matsubara_rel_tol=self.matsubara_rel_tol / factor,
            poisson_rel_tol=self.poisson_rel_tol / factor,
            energy_rel_tol=self.energy_rel_tol / factor,
        )

    def digest(self) -> str:
        blob = json.dumps(dataclasses.asdict(self), sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


DEFAULT_CONFIG = QuadratureConfig()
