"""Kinematics, absorption profiles, and thermometer equations of state.

Reduced units throughout the package: hbar = k_B = c = 1, and the overall
flux normalization (radiation constant times aperture area) is set to 1.
Frequencies and temperatures therefore share a single unit, and fluxes are
energies per unit time in that normalization. Only ratios like omega/T ever
enter the physics, so no generality is lost.

All objects here are immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "BETA_MAX",
    "Boost",
    "AbsorptionProfile",
    "GrayProfile",
    "BandProfile",
    "PiecewiseProfile",
    "EquationOfState",
    "ConstantHeatCapacity",
    "PowerLawEntropy",
]

# Speed cap keeps gamma finite (gamma <= ~707 at the cap).
BETA_MAX = 1.0 - 1e-6


@dataclass(frozen=True)
class Boost:
    """A uniform velocity, stored as the speed ratio beta = |v|/c."""

    beta: float

    def __post_init__(self):
        if not (0.0 <= self.beta <= BETA_MAX):
            raise ValueError(
                f"beta must lie in [0, {BETA_MAX!r}], got {self.beta!r}"
            )

    @property
    def gamma(self) -> float:
        """Lorentz factor (1 - beta^2)^(-1/2)."""
        return 1.0 / math.sqrt(1.0 - self.beta * self.beta)


def _as_nonnegative_frequencies(omega):
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0.0):
        raise ValueError("frequency must be >= 0")
    return w


class AbsorptionProfile:
    """Frequency-dependent absorptivity A(omega), valued in [0, 1].

    By detailed balance the same coefficient weights emission, so a single
    profile drives both flux integrals. Subclasses implement ``value`` and
    ``segments``; all are piecewise continuous, hence integrable.
    """

    def value(self, omega):
        """A(omega) for scalar or ndarray omega >= 0."""
        raise NotImplementedError

    def segments(self):
        """Support pieces as (lo, hi) tuples; hi may be math.inf.

        Outside the union of segments the profile vanishes, so flux
        integrals only ever visit these intervals.
        """
        raise NotImplementedError

    def is_null(self) -> bool:
        """True if A is identically zero (no radiative coupling at all)."""
        raise NotImplementedError


@dataclass(frozen=True)
class GrayProfile(AbsorptionProfile):
    """Constant absorptivity A(omega) = a on all frequencies."""

    a: float

    def __post_init__(self):
        if not (0.0 <= self.a <= 1.0):
            raise ValueError(f"gray level must lie in [0, 1], got {self.a!r}")

    def value(self, omega):
        w = _as_nonnegative_frequencies(omega)
        if w.ndim == 0:
            return self.a
        return np.full_like(w, self.a)

    def segments(self):
        if self.a == 0.0:
            return ()
        return ((0.0, math.inf),)

    def is_null(self) -> bool:
        return self.a == 0.0


@dataclass(frozen=True)
class BandProfile(AbsorptionProfile):
    """Unit absorptivity on the interval [f, f + width], zero elsewhere."""

    f: float
    width: float

    def __post_init__(self):
        if not self.f > 0.0:
            raise ValueError(f"band edge must be > 0, got {self.f!r}")
        if not self.width > 0.0:
            raise ValueError(f"band width must be > 0, got {self.width!r}")

    def value(self, omega):
        w = _as_nonnegative_frequencies(omega)
        inside = (w >= self.f) & (w <= self.f + self.width)
        if w.ndim == 0:
            return 1.0 if inside else 0.0
        return inside.astype(float)

    def segments(self):
        return ((self.f, self.f + self.width),)

    def is_null(self) -> bool:
        return False


@dataclass(frozen=True)
class PiecewiseProfile(AbsorptionProfile):
    """Step profile from (omega_i, a_i) pairs.

    A(omega) = a_i on [omega_i, omega_{i+1}), zero below the first
    breakpoint and from the last one on. The last pair must therefore carry
    the value 0; it marks where the profile shuts off.
    """

    points: tuple

    def __init__(self, points):
        pts = tuple((float(w), float(a)) for w, a in points)
        if len(pts) < 2:
            raise ValueError("piecewise profile needs at least two breakpoints")
        omegas = [w for w, _ in pts]
        if omegas[0] < 0.0:
            raise ValueError("breakpoints must be >= 0")
        if any(b <= a for a, b in zip(omegas, omegas[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if any(not (0.0 <= a <= 1.0) for _, a in pts):
            raise ValueError("absorptivity values must lie in [0, 1]")
        if pts[-1][1] != 0.0:
            raise ValueError(
                "last breakpoint must carry value 0 (profile vanishes beyond it)"
            )
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "_omegas", np.array(omegas))
        object.__setattr__(self, "_values", np.array([a for _, a in pts]))

    def value(self, omega):
        w = _as_nonnegative_frequencies(omega)
        idx = np.searchsorted(self._omegas, w, side="right") - 1
        vals = np.where(idx < 0, 0.0, self._values[np.maximum(idx, 0)])
        if w.ndim == 0:
            return float(vals)
        return vals

    def segments(self):
        segs = []
        for (lo, a), (hi, _) in zip(self.points, self.points[1:]):
            if a > 0.0:
                segs.append((lo, hi))
        return tuple(segs)

    def is_null(self) -> bool:
        return not self.segments()

    @classmethod
    def from_file(cls, path):
        """Load breakpoints from a two-column text file (omega, value)."""
        data = np.loadtxt(path, ndmin=2)
        if data.shape[1] != 2:
            raise ValueError(f"{path}: expected two columns (omega, value)")
        return cls(data.tolist())


class EquationOfState:
    """Concave entropy S(E, V) of the thermometer body.

    The volume never changes (no mechanical work channel), so V enters only
    through constants; it is still accepted as an argument for uniformity.
    temperature/energy are exact inverses of each other.
    """

    def temperature(self, energy: float) -> float:
        raise NotImplementedError

    def entropy(self, energy: float, volume: float = 1.0) -> float:
        raise NotImplementedError

    def energy(self, temperature: float) -> float:
        raise NotImplementedError


def _check_positive(name, x):
    if not x > 0.0:
        raise ValueError(f"{name} must be > 0, got {x!r}")


@dataclass(frozen=True)
class ConstantHeatCapacity(EquationOfState):
    """S = s_ref + C ln(E/e_ref), so T = E/C with constant heat capacity C."""

    heat_capacity: float
    e_ref: float = 1.0
    s_ref: float = 0.0

    def __post_init__(self):
        _check_positive("heat_capacity", self.heat_capacity)
        _check_positive("e_ref", self.e_ref)

    def temperature(self, energy):
        _check_positive("energy", energy)
        return energy / self.heat_capacity

    def entropy(self, energy, volume=1.0):
        _check_positive("energy", energy)
        return self.s_ref + self.heat_capacity * math.log(energy / self.e_ref)

    def energy(self, temperature):
        _check_positive("temperature", temperature)
        return self.heat_capacity * temperature


@dataclass(frozen=True)
class PowerLawEntropy(EquationOfState):
    """S = coeff * E^exponent with exponent in (0, 1), so T = E^(1-q)/(coeff*q)."""

    coeff: float
    exponent: float

    def __post_init__(self):
        _check_positive("coeff", self.coeff)
        if not (0.0 < self.exponent < 1.0):
            raise ValueError(
                f"exponent must lie in (0, 1), got {self.exponent!r}"
            )

    def temperature(self, energy):
        _check_positive("energy", energy)
        return energy ** (1.0 - self.exponent) / (self.coeff * self.exponent)

    def entropy(self, energy, volume=1.0):
        _check_positive("energy", energy)
        return self.coeff * energy**self.exponent

    def energy(self, temperature):
        _check_positive("temperature", temperature)
        return (self.coeff * self.exponent * temperature) ** (
            1.0 / (1.0 - self.exponent)
        )
