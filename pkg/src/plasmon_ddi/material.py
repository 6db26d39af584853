"""Frequency-dependent permittivity of the nanosphere and its host.

Unit system: energies in eV, lengths in nm; the only dimensional constant
is hbar*c.  All headline outputs downstream are dimensionless ratios.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

#: hbar * c in eV nm
HBAR_C_EV_NM = 197.3269804


@dataclass(frozen=True)
class DrudeModel:
    """eps(w) = eps_inf - omega_m**2 / (w**2 + i gamma_m w), energies in eV."""

    eps_inf: float = 6.0
    omega_m: float = 7.90
    gamma_m: float = 0.051

    def __post_init__(self):
        if self.eps_inf < 1.0:
            raise ValueError("eps_inf must be >= 1")
        if self.omega_m <= 0.0 or self.gamma_m <= 0.0:
            raise ValueError("omega_m and gamma_m must be positive")


#: silver parameters used throughout
SILVER = DrudeModel()


@dataclass(frozen=True)
class HostMedium:
    """Host permittivity; fixed to vacuum in this artifact."""

    eps_host: float = 1.0

    def __post_init__(self):
        if self.eps_host != 1.0:
            raise ValueError("only a vacuum host (eps_host = 1) is supported")


@dataclass(frozen=True)
class SphereSystem:
    """Nanosphere radius (nm) plus materials of sphere and host."""

    radius: float
    drude: DrudeModel = SILVER
    host: HostMedium = field(default_factory=HostMedium)

    def __post_init__(self):
        if self.radius < 0.0:
            raise ValueError("radius must be >= 0")

    def eps_sphere(self, omega: float) -> complex:
        return permittivity(self.drude, omega)


def permittivity(model: DrudeModel, omega: float) -> complex:
    """Drude permittivity at omega (eV); Im part strictly positive."""
    if omega <= 0.0:
        raise ValueError("omega must be positive")
    return model.eps_inf - model.omega_m**2 / (omega * omega + 1j * model.gamma_m * omega)


def wavenumber(eps: complex, omega: float) -> complex:
    """k = sqrt(eps) * omega / (hbar c) in 1/nm, branch with Im k >= 0."""
    if omega <= 0.0:
        raise ValueError("omega must be positive")
    n = cmath.sqrt(eps)
    if n.imag < 0.0:
        n = -n
    return n * omega / HBAR_C_EV_NM
