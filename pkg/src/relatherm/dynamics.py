"""Relaxation of the thermometer's energy toward the balance temperature.

The energy obeys dE/dt = absorbed - emitted(T(E)). Along every solution the
free energy F(E) = E - t_bar * S(E, V) decreases monotonically and is
minimized exactly at the balance point, so it certifies global convergence:
dF/dt = (1 - t_bar/T) * (emitted(t_bar) - emitted(T)) <= 0, with equality
only at T = t_bar.

The trajectory integrator is an adaptive embedded Cash-Karp 5(4) pair; the
transient depends on the chosen equation of state while the terminal
temperature does not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import AbsorptionProfile, Boost, EquationOfState
from .equilibrium import solve_equilibrium_temperature
from .quadrature import DEFAULT_REL_TOL
from .radiative import absorbed_flux, emitted_flux

__all__ = [
    "Trajectory",
    "StiffnessError",
    "energy_rate",
    "lyapunov_value",
    "lyapunov_rate",
    "evolve",
    "TERMINATION_REL",
]

# Relative temperature gap at which a trajectory counts as settled.
TERMINATION_REL = 1e-8

DEFAULT_STEP_TOL = 1e-8

# Cash-Karp 5(4) tableau.
_CK_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (3 / 10, -9 / 10, 6 / 5),
    (-11 / 54, 5 / 2, -70 / 27, 35 / 27),
    (1631 / 55296, 175 / 512, 575 / 13824, 44275 / 110592, 253 / 4096),
)
_CK_B5 = (37 / 378, 0.0, 250 / 621, 125 / 594, 0.0, 512 / 1771)
_CK_B4 = (2825 / 27648, 0.0, 18575 / 48384, 13525 / 55296, 277 / 14336, 1 / 4)


@dataclass
class Trajectory:
    """Accepted-step samples (t, E, T, F) of one relaxation run."""

    time: np.ndarray
    energy: np.ndarray
    temperature: np.ndarray
    free_energy: np.ndarray
    profile: AbsorptionProfile = field(repr=False, default=None)
    boost: Boost = None
    t0: float = None
    eos: EquationOfState = None
    t_bar: float = None

    def __len__(self):
        return len(self.time)

    @property
    def terminal_gap(self) -> float:
        """Relative distance of the last sample's temperature from t_bar."""
        return abs(self.temperature[-1] - self.t_bar) / self.t_bar


class StiffnessError(RuntimeError):
    """Step size underflowed; carries the partial trajectory in ``trajectory``."""

    def __init__(self, message, trajectory: Trajectory):
        super().__init__(message)
        self.trajectory = trajectory


def energy_rate(
    profile: AbsorptionProfile,
    boost: Boost,
    t0,
    temperature,
    rel_tol=DEFAULT_REL_TOL,
):
    """Net energy gain rate of the thermometer at the given temperature.

    Positive below the balance temperature, negative above it, zero at it.
    """
    gain = absorbed_flux(profile, boost, t0, rel_tol).flux
    loss = emitted_flux(profile, temperature, rel_tol).flux
    return gain - loss


def lyapunov_value(eos: EquationOfState, energy, volume, t_bar):
    """Free energy E - t_bar * S(E, V) relative to the balance temperature."""
    if not t_bar > 0.0:
        raise ValueError(f"t_bar must be > 0, got {t_bar!r}")
    return energy - t_bar * eos.entropy(energy, volume)


def lyapunov_rate(
    profile: AbsorptionProfile,
    eos: EquationOfState,
    energy,
    t_bar,
    rel_tol=DEFAULT_REL_TOL,
):
    """Time derivative of the free energy along the relaxation flow.

    Equal to (1 - t_bar/T)(emitted(t_bar) - emitted(T)); never positive, and
    zero only at T = t_bar.
    """
    temp = eos.temperature(energy)
    phi_bar = emitted_flux(profile, t_bar, rel_tol).flux
    phi = emitted_flux(profile, temp, rel_tol).flux
    return (1.0 - t_bar / temp) * (phi_bar - phi)


def evolve(
    profile: AbsorptionProfile,
    boost: Boost,
    t0,
    eos: EquationOfState,
    e_init,
    volume=1.0,
    t_max=100.0,
    step_tol=DEFAULT_STEP_TOL,
    rel_tol=DEFAULT_REL_TOL,
    t_bar=None,
):
    """Integrate the energy balance from e_init and record accepted steps.

    Stops once |T - t_bar|/t_bar < TERMINATION_REL or t_max is reached.
    t_bar may be supplied to skip the balance solve. Raises StiffnessError
    (with the partial trajectory attached) if the step size underflows.
    """
    if not e_init > 0.0:
        raise ValueError(f"e_init must be > 0, got {e_init!r}")
    if not t_max > 0.0:
        raise ValueError(f"t_max must be > 0, got {t_max!r}")
    if t_bar is None:
        t_bar = solve_equilibrium_temperature(
            profile, boost, t0, rel_tol=min(rel_tol, 1e-10)
        ).t_bar

    gain = absorbed_flux(profile, boost, t0, rel_tol).flux

    def rate(energy):
        return gain - emitted_flux(profile, eos.temperature(energy), rel_tol).flux

    times = [0.0]
    energies = [float(e_init)]
    temps = [eos.temperature(e_init)]
    frees = [lyapunov_value(eos, e_init, volume, t_bar)]

    def build():
        return Trajectory(
            time=np.array(times),
            energy=np.array(energies),
            temperature=np.array(temps),
            free_energy=np.array(frees),
            profile=profile,
            boost=boost,
            t0=t0,
            eos=eos,
            t_bar=t_bar,
        )

    if abs(temps[0] - t_bar) / t_bar < TERMINATION_REL:
        return build()

    t = 0.0
    e = float(e_init)
    k1 = rate(e)
    h = min(t_max, 0.01 * e / (abs(k1) + 1e-30))

    while t < t_max:
        h = min(h, t_max - t)
        stages = [k1]
        stage_failed = False
        for row in _CK_A[1:]:
            e_stage = e + h * sum(a * k for a, k in zip(row, stages))
            if not e_stage > 0.0:
                stage_failed = True
                break
            stages.append(rate(e_stage))
        if not stage_failed:
            e5 = e + h * sum(b * k for b, k in zip(_CK_B5, stages))
            e4 = e + h * sum(b * k for b, k in zip(_CK_B4, stages))
            if not e5 > 0.0:
                stage_failed = True
        if stage_failed:
            h *= 0.2
            if h < 1e-14 * max(t, 1.0):
                raise StiffnessError(
                    f"step size underflow at t={t!r} (energy left the domain)",
                    build(),
                )
            continue

        scale = step_tol * max(abs(e), abs(e5)) + 1e-300
        ratio = abs(e5 - e4) / scale
        if ratio <= 1.0:
            t += h
            e = e5
            temp = eos.temperature(e)
            times.append(t)
            energies.append(e)
            temps.append(temp)
            frees.append(lyapunov_value(eos, e, volume, t_bar))
            if abs(temp - t_bar) / t_bar < TERMINATION_REL:
                return build()
            k1 = rate(e)
        grow = 0.9 * ratio**-0.2 if ratio > 0.0 else 5.0
        h *= min(5.0, max(0.2, grow))
        if h < 1e-14 * max(t, 1.0):
            raise StiffnessError(
                f"step size underflow at t={t!r}", build()
            )

    return build()
