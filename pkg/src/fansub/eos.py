"""Barotropic equation of state p(rho) = rho**gamma."""

from dataclasses import dataclass

import numpy as np


class DomainError(ValueError):
    """Raised when a thermodynamic function is evaluated outside rho > 0."""


def _check_positive(rho, name="rho"):
    if np.any(np.asarray(rho) <= 0):
        raise DomainError(f"{name} must be positive, got {rho!r}")


@dataclass(frozen=True)
class Eos:
    """Gamma-law gas.

    ``energy_offset`` adds a constant to the internal energy density. It is
    zero in normal use and exists to exercise the gauge freedom of the
    admissibility inequalities.
    """

    gamma: float
    energy_offset: float = 0.0

    def __post_init__(self):
        if not self.gamma >= 1.0:
            raise DomainError(f"gamma must be >= 1, got {self.gamma!r}")

    @property
    def isothermal(self) -> bool:
        return self.gamma == 1.0

    def pressure(self, rho):
        _check_positive(rho)
        return np.power(rho, self.gamma)

    def dpressure(self, rho):
        _check_positive(rho)
        return self.gamma * np.power(rho, self.gamma - 1.0)

    def internal_energy(self, rho):
        """Specific internal energy e with rho**2 e'(rho) = p(rho)."""
        _check_positive(rho)
        if self.isothermal:
            return np.log(rho) + self.energy_offset
        g1 = self.gamma - 1.0
        return np.power(rho, g1) / g1 + self.energy_offset

    def sound_speed(self, rho):
        _check_positive(rho)
        return np.sqrt(self.gamma) * np.power(rho, 0.5 * (self.gamma - 1.0))
