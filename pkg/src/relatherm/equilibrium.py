"""Balance-point temperatures: fixed-point solve, narrow-band forms, limits.

The thermometer settles at the unique temperature where what it radiates
matches what it absorbs from the moving bath. Both fluxes are continuous
and strictly increasing, so the balance equation has exactly one root; it
is found by geometric bracket expansion followed by a bisection/secant
hybrid. The narrow-band specialization collapses the frequency integral to
a single line and exposes the closed-form low- and high-frequency limits,
which bracket the registered temperature and differ from every historical
one-parameter transformation law.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import AbsorptionProfile, Boost
from .quadrature import DEFAULT_REL_TOL, integrate_finite
from .radiative import _occupation, absorbed_flux, emitted_flux

__all__ = [
    "EquilibriumResult",
    "ComparatorLaws",
    "DegenerateProfileError",
    "SolverError",
    "solve_equilibrium_temperature",
    "narrowband_equilibrium",
    "low_frequency_limit",
    "high_frequency_limit",
    "comparator_laws",
]

_MAX_ITER = 200
_MAX_BRACKET_DOUBLINGS = 60


class DegenerateProfileError(ValueError):
    """The profile is identically zero: no radiative coupling, no balance point."""


class SolverError(RuntimeError):
    """The root search failed to bracket or converge."""


@dataclass(frozen=True)
class EquilibriumResult:
    """Balance temperature t_bar with the residual flux mismatch at it."""

    t_bar: float
    residual: float
    iterations: int


@dataclass(frozen=True)
class ComparatorLaws:
    """The three historical candidate transformation laws, for context."""

    planck_einstein: float
    ott_kibble: float
    invariant: float


def _flux_tol(rel_tol):
    # Fluxes must be quieter than the residual target they feed.
    return min(max(rel_tol * 1e-2, 1e-13), 1e-2)


def solve_equilibrium_temperature(
    profile: AbsorptionProfile, boost: Boost, t0, rel_tol=DEFAULT_REL_TOL
):
    """Solve emitted(t_bar) = absorbed(t0) for t_bar.

    The relative residual |emitted(t_bar) - absorbed(t0)| / absorbed(t0) is
    driven below rel_tol. Raises DegenerateProfileError for an identically
    zero profile and SolverError if bracketing or convergence fails.
    """
    if not t0 > 0.0:
        raise ValueError(f"t0 must be > 0, got {t0!r}")
    if profile.is_null():
        raise DegenerateProfileError(
            "profile is identically zero; the emitted flux vanishes for every "
            "temperature and no balance point exists"
        )
    ftol = _flux_tol(rel_tol)
    target = absorbed_flux(profile, boost, t0, ftol).flux
    if not target > 0.0:
        raise SolverError(
            "absorbed flux underflows to zero; no representable balance point"
        )
    tol_abs = rel_tol * target

    evaluations = 0

    def residual(temp):
        nonlocal evaluations
        evaluations += 1
        return emitted_flux(profile, temp, ftol).flux - target

    t_lo = t_hi = t0
    f_lo = f_hi = residual(t0)
    if abs(f_hi) <= tol_abs:
        return EquilibriumResult(t0, f_hi, evaluations)

    if f_hi < 0.0:  # emitted too small: expand upward
        for _ in range(_MAX_BRACKET_DOUBLINGS):
            t_lo, f_lo = t_hi, f_hi
            t_hi *= 2.0
            f_hi = residual(t_hi)
            if f_hi >= 0.0:
                break
        else:
            raise SolverError("failed to bracket the balance point from above")
    else:  # emitted too large: expand downward
        for _ in range(_MAX_BRACKET_DOUBLINGS):
            t_hi, f_hi = t_lo, f_lo
            t_lo *= 0.5
            f_lo = residual(t_lo)
            if f_lo <= 0.0:
                break
        else:
            raise SolverError("failed to bracket the balance point from below")

    # Bisection with secant acceleration on the bracketed monotone residual.
    t_prev, f_prev = t_lo, f_lo
    t_cur, f_cur = t_hi, f_hi
    for _ in range(_MAX_ITER):
        if abs(f_cur) <= tol_abs:
            return EquilibriumResult(t_cur, f_cur, evaluations)
        t_next = None
        if f_cur != f_prev:
            candidate = t_cur - f_cur * (t_cur - t_prev) / (f_cur - f_prev)
            if t_lo < candidate < t_hi:
                t_next = candidate
        if t_next is None:
            t_next = 0.5 * (t_lo + t_hi)
        f_next = residual(t_next)
        if f_next <= 0.0:
            t_lo, f_lo = t_next, f_next
        if f_next >= 0.0:
            t_hi, f_hi = t_next, f_next
        t_prev, f_prev = t_cur, f_cur
        t_cur, f_cur = t_next, f_next

    raise SolverError(
        f"no convergence after {_MAX_ITER} iterations; "
        f"last t_bar estimate {t_cur!r} with residual {f_cur!r}"
    )


def _angular_occupation(boost: Boost, x_head_on, power, rel_tol):
    """int_0^pi sin^2(th) (1+b cos th)^-power n(x/(1+b cos th)) dth.

    With power=3 and x = f/(gamma*t0) this is the angular mass of the
    narrow-band balance; n is dropped entirely when x is None (static
    angular integrals).
    """
    beta = boost.beta

    def g(th):
        d = 1.0 + beta * np.cos(th)
        out = np.sin(th) ** 2 * d ** (-power)
        if x_head_on is not None:
            out = out * _occupation(x_head_on / d)
        return out

    return integrate_finite(g, 0.0, math.pi, rel_tol).value


def narrowband_equilibrium(f, boost: Boost, t0, rel_tol=DEFAULT_REL_TOL):
    """Balance temperature of a vanishing-width band at frequency f.

    The band width cancels from both sides of the balance, leaving a single
    occupation equation: n(f/t_bar) equals the angular average of the bath
    occupation seen through the Doppler map. The left side inverts in closed
    form, the right side is one finite quadrature.
    """
    if not f > 0.0:
        raise ValueError(f"f must be > 0, got {f!r}")
    if not t0 > 0.0:
        raise ValueError(f"t0 must be > 0, got {t0!r}")
    gamma = boost.gamma
    rhs = (
        (2.0 / math.pi)
        * gamma**-3
        * _angular_occupation(boost, f / (gamma * t0), 3, rel_tol)
    )
    if rhs > 0.0:
        inv = math.log1p(1.0 / rhs)
        if math.isfinite(inv):
            return f / inv
    raise OverflowError(
        f"bath occupation underflows at f={f!r}: the band frequency is too "
        "far above every blueshifted thermal scale to balance in double "
        "precision"
    )


def low_frequency_limit(boost: Boost, t0, rel_tol=DEFAULT_REL_TOL):
    """Registered temperature of a band as its frequency tends to zero.

    Equals 2 s/(1+s) * t0 with s = 1/gamma (the angular integral has that
    closed form; the quadrature value is returned).
    """
    if not t0 > 0.0:
        raise ValueError(f"t0 must be > 0, got {t0!r}")
    gamma = boost.gamma
    return (
        (2.0 / math.pi)
        * gamma**-2
        * t0
        * _angular_occupation(boost, None, 2, rel_tol)
    )


def high_frequency_limit(boost: Boost, t0):
    """Registered temperature of a band as its frequency tends to infinity.

    The balance is then carried entirely by the maximally blueshifted
    pencils, giving t0 * sqrt((1+beta)/(1-beta)).
    """
    if not t0 > 0.0:
        raise ValueError(f"t0 must be > 0, got {t0!r}")
    return t0 * math.sqrt((1.0 + boost.beta) / (1.0 - boost.beta))


def comparator_laws(boost: Boost, t0):
    """The three historical one-parameter candidate laws, side by side."""
    if not t0 > 0.0:
        raise ValueError(f"t0 must be > 0, got {t0!r}")
    s = math.sqrt(1.0 - boost.beta * boost.beta)
    return ComparatorLaws(
        planck_einstein=t0 * s,
        ott_kibble=t0 / s,
        invariant=t0,
    )
