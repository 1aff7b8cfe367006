"""Morse potential, unit reduction, and the variable change to z."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, ScaleOverflowError

HBAR = 1.054571817e-34  # J s (CODATA 2018)
EV = 1.602176634e-19  # J
AMU = 1.66053906660e-27  # kg
ANGSTROM = 1e-10  # m

_ENERGY_UNITS = {"J": 1.0, "eV": EV, "meV": 1e-3 * EV}


@dataclass(frozen=True)
class MorseParams:
    """Physical Morse parameters in SI units.

    ``D`` is stored in joules; ``D_unit`` only records how it was entered.
    """

    D: float
    beta: float
    r0: float
    mu: float
    D_unit: str = field(default="J", compare=False)

    def __post_init__(self):
        for name in ("D", "beta", "r0", "mu"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ConfigError(f"{name} must be positive and finite, got {value!r}")

    @classmethod
    def from_units(
        cls, D: float, D_unit: str, beta_per_angstrom: float, r0_angstrom: float, mu_amu: float
    ) -> "MorseParams":
        if D_unit not in _ENERGY_UNITS:
            raise ConfigError(f"unknown energy unit {D_unit!r}")
        return cls(
            D=D * _ENERGY_UNITS[D_unit],
            beta=beta_per_angstrom / ANGSTROM,
            r0=r0_angstrom * ANGSTROM,
            mu=mu_amu * AMU,
            D_unit=D_unit,
        )

    def D_in(self, unit: str) -> float:
        return self.D / _ENERGY_UNITS[unit]


@dataclass(frozen=True)
class DimensionlessParams:
    """Reduced depth ``d``, reduced equilibrium distance ``beta_r0``, and ``z0``."""

    d: float
    beta_r0: float

    def __post_init__(self):
        if not (math.isfinite(self.d) and self.d > 0):
            raise ConfigError(f"d must be positive, got {self.d!r}")
        if not (math.isfinite(self.beta_r0) and self.beta_r0 > 0):
            raise ConfigError(f"beta_r0 must be positive, got {self.beta_r0!r}")
        if self.beta_r0 > 700.0:
            raise ScaleOverflowError("beta_r0 too large: exp(beta_r0) overflows")

    @property
    def z0(self) -> float:
        """Value of z at r = 0."""
        return 2.0 * self.d * math.exp(self.beta_r0)


# Li-6 triplet preset. D and beta*r0 as used for the figures; r0 and mu are
# standard molecular constants so that physical output has sensible units.
LI6_PRESET = {
    "D_meV": 40.0,
    "beta_r0": 4.15,
    "r0_angstrom": 4.17,
    "mu_amu": 6.0151228874 / 2.0,
}


def li6_params() -> MorseParams:
    p = LI6_PRESET
    beta = p["beta_r0"] / p["r0_angstrom"]
    return MorseParams.from_units(p["D_meV"], "meV", beta, p["r0_angstrom"], p["mu_amu"])


def eval_potential(p: MorseParams, r):
    """V(r) = D((1 - exp(-beta (r - r0)))^2 - 1), in joules. Accepts arrays."""
    e = np.exp(-p.beta * (np.asarray(r, dtype=float) - p.r0))
    v = p.D * ((1.0 - e) ** 2 - 1.0)
    return float(v) if np.ndim(v) == 0 else v


def scaled_potential(dp: DimensionlessParams, beta_r):
    """Potential in units of hbar^2 beta^2 / 2 mu as a function of x = beta r."""
    e = np.exp(-(np.asarray(beta_r, dtype=float) - dp.beta_r0))
    v = dp.d**2 * ((1.0 - e) ** 2 - 1.0)
    return float(v) if np.ndim(v) == 0 else v


def reduce(p: MorseParams) -> DimensionlessParams:
    """Map physical parameters to (d, beta r0)."""
    d = math.sqrt(2.0 * p.mu * p.D) / (HBAR * p.beta)
    return DimensionlessParams(d=d, beta_r0=p.beta * p.r0)


def expand(dp: DimensionlessParams, beta: float, mu: float) -> MorseParams:
    """Inverse of :func:`reduce` once beta (1/m) and mu (kg) are fixed."""
    D = (dp.d * HBAR * beta) ** 2 / (2.0 * mu)
    return MorseParams(D=D, beta=beta, r0=dp.beta_r0 / beta, mu=mu)


def z_of_r(dp: DimensionlessParams, beta_r):
    """z = 2 d exp(-(beta r - beta r0)); accepts arrays."""
    z = 2.0 * dp.d * np.exp(-(np.asarray(beta_r, dtype=float) - dp.beta_r0))
    return float(z) if np.ndim(z) == 0 else z


def energy_unit(p: MorseParams) -> float:
    """hbar^2 beta^2 / 2 mu in joules: the unit of all scaled energies."""
    return (HBAR * p.beta) ** 2 / (2.0 * p.mu)
