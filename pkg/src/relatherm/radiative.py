"""Spectral machinery: Doppler kinematics, pencil integrands, and fluxes.

Geometry: a small hole in a plane sheet couples the clamped thermometer to a
heat bath sliding past at speed beta, parallel to the sheet. Radiation is
exchanged in pencils labelled by frequency and polar angle; azimuthal and
polar projection factors are integrated out analytically, leaving

    emitted   Phi(T)    = pi * int_0^inf A(w) w^3 n(w/T) dw
    absorbed  Phi0(T0)  = 2 gamma^-3 * int_0^inf dw int_0^pi dth  A(w) w^3
                          * sin^2(th) (1 + beta cos th)^-3
                          * n( w / (gamma T0 (1 + beta cos th)) )

with n the thermal occupation 1/(exp(x) - 1). The absorbed integrand is the
bath's isotropic rest-frame spectrum pushed through the Doppler map
w = gamma (1 + beta cos th) w0 and weighted by the thermometer's
absorptivity at the blueshifted frequency; at beta = 0 the two fluxes
coincide. Both are continuous and strictly increasing in their temperature
argument, which is what makes the balance point unique.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import AbsorptionProfile, Boost
from .quadrature import (
    DEFAULT_REL_TOL,
    integrate_finite,
    integrate_semi_infinite,
)

__all__ = [
    "FluxResult",
    "EXP_CUTOFF",
    "doppler_frequency",
    "planck_occupation",
    "emitted_integrand",
    "emitted_flux",
    "absorbed_integrand",
    "absorbed_flux",
    "BLACKBODY_FLUX_COEFF",
]

# exp(700) ~ 1e304; occupations beyond this are below 1e-304 and are
# clipped to exactly zero so the semi-infinite tails terminate cleanly.
EXP_CUTOFF = 700.0

# Phi for a black body is BLACKBODY_FLUX_COEFF * T^4 (the pi * pi^4/15
# reduction of the emitted integral at A = 1).
BLACKBODY_FLUX_COEFF = math.pi**5 / 15.0


@dataclass(frozen=True)
class FluxResult:
    """A flux value (energy per unit time) with a numerical error estimate."""

    flux: float
    error_estimate: float


def _occupation(x):
    """1/(exp(x) - 1) for x > 0 (ndarray), zero beyond the cutoff."""
    x = np.asarray(x, dtype=float)
    occ = 1.0 / np.expm1(np.minimum(x, EXP_CUTOFF))
    return np.where(x > EXP_CUTOFF, 0.0, occ)


def doppler_frequency(boost: Boost, theta0, omega0):
    """Frequency in the thermometer frame of a pencil emitted at (theta0, omega0).

    theta0 is the rest-frame angle to the velocity; omega0 the rest-frame
    frequency. Accepts scalars or ndarrays.
    """
    th = np.asarray(theta0, dtype=float)
    w0 = np.asarray(omega0, dtype=float)
    if np.any((th < 0.0) | (th > math.pi)):
        raise ValueError("theta0 must lie in [0, pi]")
    if np.any(w0 < 0.0):
        raise ValueError("omega0 must be >= 0")
    out = boost.gamma * (1.0 + boost.beta * np.cos(th)) * w0
    if th.ndim == 0 and w0.ndim == 0:
        return float(out)
    return out


def planck_occupation(omega, temperature):
    """Thermal occupation 1/(exp(omega/T) - 1) in reduced units.

    Returns exactly 0 once omega/T exceeds the overflow cutoff.
    """
    w = np.asarray(omega, dtype=float)
    if np.any(w <= 0.0):
        raise ValueError("omega must be > 0")
    if not temperature > 0.0:
        raise ValueError(f"temperature must be > 0, got {temperature!r}")
    occ = _occupation(w / temperature)
    if w.ndim == 0:
        return float(occ)
    return occ


def _emitted_core(profile, temperature, w):
    """pi * A(w) * w^3 * n(w/T) without argument validation (w ndarray)."""
    x = w / temperature
    occ = _occupation(np.where(x > 0.0, x, np.inf))  # w = 0 contributes 0
    return math.pi * profile.value(w) * w**3 * occ


def emitted_integrand(profile: AbsorptionProfile, temperature, omega):
    """Spectral density of the emitted flux at frequency omega."""
    if not temperature > 0.0:
        raise ValueError(f"temperature must be > 0, got {temperature!r}")
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0.0):
        raise ValueError("omega must be >= 0")
    out = _emitted_core(profile, temperature, w)
    if w.ndim == 0:
        return float(out)
    return out


def emitted_flux(profile: AbsorptionProfile, temperature, rel_tol=DEFAULT_REL_TOL):
    """Total flux radiated by the thermometer at temperature T.

    Narrow bands and piecewise steps integrate over their finite support
    segments directly; gray profiles go through the semi-infinite transform.
    """
    if not temperature > 0.0:
        raise ValueError(f"temperature must be > 0, got {temperature!r}")

    def integrand(w):
        return _emitted_core(profile, temperature, w)

    total = 0.0
    err = 0.0
    for lo, hi in profile.segments():
        if math.isinf(hi):
            r = integrate_semi_infinite(integrand, rel_tol)
        else:
            r = integrate_finite(integrand, lo, hi, rel_tol)
        total += r.value
        err += r.error_estimate
    return FluxResult(total, err)


def absorbed_integrand(profile: AbsorptionProfile, boost: Boost, t0, omega, theta0):
    """Density (per dw dtheta0) of the flux absorbed from the moving bath.

    The azimuthal integral (a factor of 2) is already folded in. The
    occupation is evaluated at the rest-frame frequency of the pencil that
    arrives with thermometer-frame frequency omega from rest-frame angle
    theta0.
    """
    if not t0 > 0.0:
        raise ValueError(f"t0 must be > 0, got {t0!r}")
    w = np.asarray(omega, dtype=float)
    th = np.asarray(theta0, dtype=float)
    if np.any(w < 0.0):
        raise ValueError("omega must be >= 0")
    if np.any((th < 0.0) | (th > math.pi)):
        raise ValueError("theta0 must lie in [0, pi]")
    gamma = boost.gamma
    d = 1.0 + boost.beta * np.cos(th)
    x = w / (gamma * t0 * d)
    occ = _occupation(np.where(x > 0.0, x, np.inf))
    out = 2.0 * gamma**-3 * profile.value(w) * w**3 * np.sin(th) ** 2 * d**-3 * occ
    if w.ndim == 0 and th.ndim == 0:
        return float(out)
    return out


def absorbed_flux(profile: AbsorptionProfile, boost: Boost, t0, rel_tol=DEFAULT_REL_TOL):
    """Total flux the thermometer absorbs from the bath at rest-frame T0.

    Nested one-dimensional quadrature: the outer pass runs over frequency
    (restricted to the profile's support), the inner one over the rest-frame
    angle. Strictly increasing in t0.
    """
    if not t0 > 0.0:
        raise ValueError(f"t0 must be > 0, got {t0!r}")
    gamma = boost.gamma
    beta = boost.beta
    scale = gamma * t0
    prefactor = 2.0 * gamma**-3

    def angular_mass(w_scalar):
        def g(th):
            d = 1.0 + beta * np.cos(th)
            return np.sin(th) ** 2 * d**-3 * _occupation(w_scalar / (scale * d))

        return integrate_finite(g, 0.0, math.pi, rel_tol).value

    def outer_integrand(w):
        w = np.asarray(w, dtype=float)
        a = np.asarray(profile.value(w), dtype=float)
        out = np.zeros_like(w)
        for i in np.nonzero((a > 0.0) & (w > 0.0))[0]:
            out[i] = prefactor * a[i] * w[i] ** 3 * angular_mass(w[i])
        return out

    total = 0.0
    err = 0.0
    for lo, hi in profile.segments():
        if math.isinf(hi):
            r = integrate_semi_infinite(outer_integrand, rel_tol)
        else:
            r = integrate_finite(outer_integrand, lo, hi, rel_tol)
        total += r.value
        err += r.error_estimate
    # The outer estimate cannot see the inner truncation, so allow for it.
    return FluxResult(total, err + rel_tol * abs(total))
