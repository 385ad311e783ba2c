"""Total Casimir force: Matsubara sum, Poisson-resummed series, vacuum part.

With ``a = 2 xi L / c`` and the dimensionless wavevector integral ``I(a)``
computed by the kernels, the three representations read

    Matsubara:  F   = k_B T A / (8 pi L^3) * [I(0)/2 + sum_k I(k * 4 pi L / lambda_T)]
    vacuum:     F^P = hbar c A / (32 pi^2 L^4) * int_0^inf I(a) da
    Poisson:    F   = hbar c A / (32 pi^2 L^4) * [J(0) + 2 sum_m J(m lambda_T / 2L)]

where ``J(w) = int_0^inf cos(w a) I(a) da``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np
from scipy.special import eval_legendre, spherical_jn

from ._core import describe_status, kernels
from .config import DEFAULT_CONFIG, QuadratureConfig
from .errors import ConvergenceError, DomainError, RedirectError
from .spectral import plasma_parameter
from .units import C, HBAR, K_B, CavityGeometry, Mirror, ThermalState, perfect_mirror


class Representation(str, Enum):
    MATSUBARA = "Matsubara"
    POISSON = "Poisson"
    VACUUM = "VacuumOnly"


@dataclass(frozen=True)
class ForceResult:
    force: float
    representation: Representation
    terms_used: int
    error_estimate: float

    @property
    def relative_error(self) -> float:
        return self.error_estimate / self.force


def matsubara_prefactor(geometry: CavityGeometry, thermal: ThermalState) -> float:
    return K_B * thermal.T * geometry.A / (8.0 * math.pi * geometry.L**3)


def vacuum_prefactor(geometry: CavityGeometry) -> float:
    return HBAR * C * geometry.A / (32.0 * math.pi**2 * geometry.L**4)


def _check_status(status: int, err: float, what: str, **context) -> None:
    if status:
        raise ConvergenceError(f"{what} did not converge ({describe_status(status)})",
                               error_estimate=err, **context)


def force_matsubara(
    geometry: CavityGeometry,
    mirror: Mirror,
    thermal: ThermalState,
    config: QuadratureConfig = DEFAULT_CONFIG,
) -> ForceResult:
    """Force as the parity-folded Matsubara sum; the ``k = 0`` term has weight 1/2."""
    if thermal.is_vacuum:
        raise RedirectError("T = 0 has no Matsubara sum; use force_vacuum", target="force_vacuum")
    L = geometry.L
    pref = matsubara_prefactor(geometry, thermal)
    step = 4.0 * math.pi * L / thermal.lambda_T
    total, err, used, status = kernels.matsubara_sum(
        step, plasma_parameter(mirror, L), config.rel_tol, config.abs_tol / pref,
        config.u_max, config.max_panels, config.matsubara_rel_tol, config.k_max,
    )
    _check_status(status, err * pref, "Matsubara sum", L=L, T=thermal.T, terms=used)
    return ForceResult(total * pref, Representation.MATSUBARA, used, err * pref)


def force_vacuum(
    geometry: CavityGeometry,
    mirror: Mirror,
    config: QuadratureConfig = DEFAULT_CONFIG,
) -> ForceResult:
    """Zero-temperature force ``int_0^inf dxi F[xi]``."""
    pref = vacuum_prefactor(geometry)
    val, err, status = kernels.xi_integral(
        plasma_parameter(mirror, geometry.L), config.rel_tol, config.abs_tol / pref,
        config.u_max, config.max_panels, config.xi_max,
    )
    _check_status(status, err * pref, "frequency integral", L=geometry.L)
    return ForceResult(val * pref, Representation.VACUUM, 1, err * pref)


def force_perfect_thermal(
    geometry: CavityGeometry,
    thermal: ThermalState,
    config: QuadratureConfig = DEFAULT_CONFIG,
) -> ForceResult:
    """Force between perfect reflectors at temperature ``T``."""
    return force_matsubara(geometry, perfect_mirror(), thermal, config)


class CosineTransform:
    """Cosine transforms ``J(w)`` of the sampled density ``I(a)`` on ``[0, a_max]``.

    ``I`` is interpolated panel-wise by Legendre series through Gauss nodes;
    each panel is integrated against ``cos(w a)`` exactly using
    ``int_{-1}^{1} P_n(t) exp(i z t) dt = 2 i^n j_n(z)``, so the same samples
    serve every frequency. Panels are bisected until the two highest Legendre
    coefficients are negligible.
    """

    def __init__(self, p: float, config: QuadratureConfig = DEFAULT_CONFIG):
        self.p = p
        self.config = config
        n = config.poisson_order
        t, w = np.polynomial.legendre.leggauss(n)
        orders = np.arange(n)
        self._nodes = t
        self._weights = w
        # node values -> Legendre coefficients
        self._to_coeffs = (orders[:, None] + 0.5) * w[None, :] * eval_legendre(orders[:, None], t[None, :])
        self._orders = orders
        self._ipow = 1j ** orders
        self._build()

    def _sample(self, a: np.ndarray):
        rel = max(1e-3 * self.config.poisson_rel_tol, 1e-13)
        vals, errs, status = kernels.kappa_integral_many(
            np.ascontiguousarray(a), self.p, rel, 0.0, self.config.u_max, self.config.max_panels
        )
        if status:
            raise ConvergenceError(f"cosine-transform sampling failed ({describe_status(status)})",
                                   error_estimate=float(errs.max()))
        return vals, errs

    def _build(self):
        a_max = self.config.xi_max
        i0, _ = self._sample(np.array([0.0]))
        scale = float(i0[0])
        coef_tol = 0.05 * self.config.poisson_rel_tol * scale / a_max
        todo = [(a, b) for a, b in zip(
            [0.0, 0.5, 2.0, 6.0, 15.0, 35.0], [0.5, 2.0, 6.0, 15.0, 35.0, a_max]) if a < a_max]
        todo[-1] = (todo[-1][0], a_max)
        centers, halves, coeffs = [], [], []
        interp_err = 0.0
        sample_err = 0.0
        while todo:
            a, b = todo.pop()
            c0, h = 0.5 * (a + b), 0.5 * (b - a)
            vals, errs = self._sample(c0 + h * self._nodes)
            cf = self._to_coeffs @ vals
            tail = abs(cf[-1]) + abs(cf[-2])
            if tail > coef_tol and len(centers) + len(todo) < self.config.max_panels and h > 1e-6:
                todo.extend([(a, c0), (c0, b)])
                continue
            centers.append(c0)
            halves.append(h)
            coeffs.append(cf)
            interp_err += 2.0 * h * tail
            sample_err += h * float(self._weights @ errs)
        order = np.argsort(centers)
        self.centers = np.array(centers)[order]
        self.halves = np.array(halves)[order]
        self.coeffs = np.array(coeffs)[order]
        self.interp_error = interp_err
        self.sample_error = sample_err
        # int_{a_max}^inf I(a) da <= int_{a_max}^inf 2 s^3/(e^s - 1) ds
        A = a_max
        self.cutoff_error = 2.0 * (A**3 + 3 * A**2 + 6 * A + 6) * math.exp(-A) / (-math.expm1(-A))

    @cached_property
    def error_bound(self) -> float:
        """Bound on ``|J(w) - J_exact(w)|`` valid for every ``w``."""
        return self.interp_error + self.sample_error + self.cutoff_error

    def __call__(self, w: float) -> float:
        z = w * self.halves
        jn = spherical_jn(self._orders[None, :], z[:, None])
        panel = (self.coeffs * self._ipow[None, :] * jn).sum(axis=1) * 2.0
        return float(np.sum(self.halves * (np.exp(1j * w * self.centers) * panel).real))


def force_poisson(
    geometry: CavityGeometry,
    mirror: Mirror,
    thermal: ThermalState,
    config: QuadratureConfig = DEFAULT_CONFIG,
) -> ForceResult:
    """Force as the Poisson series ``F~(0) + 2 sum_{m>=1} F~(m lambda_T)``.

    The ``m = 0`` term is :func:`force_vacuum`. The series stops when two
    consecutive terms fall below ``poisson_rel_tol`` of the partial sum; the
    remainder is estimated from the measured power-law decay of the terms.
    """
    if thermal.is_vacuum:
        raise RedirectError("T = 0 leaves only the m = 0 term; use force_vacuum", target="force_vacuum")
    L = geometry.L
    pref = vacuum_prefactor(geometry)
    vac = force_vacuum(geometry, mirror, config)
    transform = CosineTransform(plasma_parameter(mirror, L), config)
    total = vac.force / pref
    comp = 0.0
    below = 0
    last = 0.0
    m = 0
    for m in range(1, config.m_max + 1):
        term = 2.0 * transform(m * thermal.lambda_T / (2.0 * L))
        y = total + term
        comp += (total - y) + term if abs(total) >= abs(term) else (term - y) + total
        total = y
        last = term
        below = below + 1 if abs(term) < config.poisson_rel_tol * abs(total + comp) else 0
        if below >= 2:
            break
    else:
        raise ConvergenceError(
            f"Poisson series not converged at m={m}",
            error_estimate=abs(last) * m / 3.0 * pref, m=m, L=L, T=thermal.T,
        )
    tail = _power_tail(transform, m, last, thermal.lambda_T / (2.0 * L))
    err = vac.error_estimate / pref + 2.0 * transform.error_bound + abs(tail)
    return ForceResult(float((total + comp + tail) * pref), Representation.POISSON, m + 1, float(err * pref))


def _power_tail(transform: CosineTransform, M: int, last: float, w1: float) -> float:
    """Remainder ``sum_{m>M}`` assuming power-law decay ``m^-q``.

    The density carries an ``a^2 log a`` term for plasma mirrors (``q = 3``)
    and an ``|a|^3`` term for perfect ones (``q = 4``); ``q`` is measured
    from ``J(M w1)`` and ``J(2 M w1)`` rather than assumed.
    """
    if last == 0.0:
        return 0.0
    far = 2.0 * transform(2 * M * w1)
    ratio = last / far if far != 0.0 else math.inf
    q = math.log2(ratio) if ratio > 1.0 else 1.5
    q = min(max(q, 1.5), 8.0)
    # sum_{m>M} m^-q ~ M^(1-q)/(q-1) - M^-q/2
    return last * (M / (q - 1.0) - 0.5)


def parse_representation(value: str | Representation) -> Representation:
    """Accept an enum member or its value in any letter case ("poisson", "Matsubara")."""
    if isinstance(value, Representation):
        return value
    for rep in Representation:
        if str(value).lower() in (rep.value.lower(), rep.name.lower()):
            return rep
    raise DomainError(f"unknown representation {value!r}; choose from "
                      + ", ".join(r.value for r in Representation))


def casimir_force(
    geometry: CavityGeometry,
    mirror: Mirror,
    thermal: ThermalState,
    config: QuadratureConfig = DEFAULT_CONFIG,
    representation: str | Representation = Representation.MATSUBARA,
) -> ForceResult:
    """Force at any ``T >= 0``: vacuum integral at ``T = 0``, else the chosen series."""
    if thermal.is_vacuum:
        return force_vacuum(geometry, mirror, config)
    representation = parse_representation(representation)
    if representation is Representation.MATSUBARA:
        return force_matsubara(geometry, mirror, thermal, config)
    if representation is Representation.POISSON:
        return force_poisson(geometry, mirror, thermal, config)
    raise DomainError("VacuumOnly applies at T = 0 only")
