"""Uniform hard-wall grids for the one-dimensional solver."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MIN_POINTS = 8


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid over the open interior of a hard-wall box.

    The grid stores the first interior point ``x_min``, the spacing ``dx``
    and the point count ``n``; the implied walls sit one spacing outside
    the first and last points, where wavefunctions are identically zero.
    """

    x_min: float
    dx: float
    n: int

    def __post_init__(self) -> None:
        if self.dx <= 0.0:
            raise ValueError("dx must be strictly positive")
        if self.n < MIN_POINTS:
            raise ValueError(f"n must be at least {MIN_POINTS}")

    @classmethod
    def from_wall(cls, wall: float, width: float, n: int) -> "Grid1D":
        """Grid filling (wall, wall + width) with n interior points."""
        if width <= 0.0:
            raise ValueError("width must be strictly positive")
        dx = width / (n + 1)
        return cls(x_min=wall + dx, dx=dx, n=n)

    @classmethod
    def symmetric(cls, width: float, n: int) -> "Grid1D":
        """Grid symmetric about the origin, walls at +-width/2.

        The points mirror, x[n-1-i] = -x[i], to rounding level, which
        keeps parity nulls clean far below physical tolerances.
        """
        if width <= 0.0:
            raise ValueError("width must be strictly positive")
        dx = width / (n + 1)
        return cls(x_min=-width / 2.0 + dx, dx=dx, n=n)

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n)

    @property
    def left_wall(self) -> float:
        return self.x_min - self.dx

    @property
    def right_wall(self) -> float:
        return self.x_min + self.n * self.dx

    @property
    def width(self) -> float:
        """Full box width, wall to wall."""
        return (self.n + 1) * self.dx
