"""Physical constants in Hartree atomic units."""

from __future__ import annotations

from dataclasses import dataclass

# Speed of light in atomic units = 1/alpha_fs (CODATA inverse fine-structure
# constant, truncated to the precision used throughout).
SPEED_OF_LIGHT_AU = 137.035999


@dataclass(frozen=True)
class PhysicalConstants:
    """Mass, charge magnitude, action and speed of light, all in a.u.

    The defaults describe a single electron.  Any positive values are
    accepted; only the combinations hbar/(m*c) and m*c**2 enter the
    fractional scaling factors, so rescaled unit systems work unchanged.
    """

    m: float = 1.0
    e: float = 1.0
    hbar: float = 1.0
    c: float = SPEED_OF_LIGHT_AU

    def __post_init__(self) -> None:
        for name in ("m", "e", "hbar", "c"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be strictly positive")

    @property
    def length_scale(self) -> float:
        """hbar/(m c), the length that makes fractional powers dimensionless."""
        return self.hbar / (self.m * self.c)


ATOMIC_UNITS = PhysicalConstants()
