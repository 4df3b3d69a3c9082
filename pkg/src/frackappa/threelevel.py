"""Closed-form three-level response model constrained by the sum rules.

Parameterized by the transition-energy ratio E = E10/E20, the normalized
first moment X = |x_10| / x10_max, and the four sum-rule weights lam00,
lam11, lam10, lam20 measured from (or assumed for) a system.  With the
identity weights the standard results follow: the polarizability peaks at
X = 1, and |kappa2| peaks at X = 3**(-1/4), E -> 0 with the value

    kappa2_max = 3**(1/4) e^3 hbar^3 sqrt(N^3 / (m^3 E10^7)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import PhysicalConstants

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class ThreeLevelDomainError(ValueError):
    """A requested moment is singular at the given (X, E) corner."""


@dataclass(frozen=True)
class ThreeLevelParams:
    """Inputs of the three-level model; dimensionless except E10 (a.u.)."""

    energy_ratio: float
    moment_ratio: float
    e10: float
    lam00: float = 1.0
    lam11: float = 1.0
    lam10: float = 0.0
    lam20: float = 0.0
    n_electrons: int = 1
    consts: PhysicalConstants = PhysicalConstants()

    def __post_init__(self) -> None:
        if not 0.0 <= self.energy_ratio < 1.0:
            raise ValueError("energy ratio must lie in [0, 1)")
        if not 0.0 <= self.moment_ratio <= 1.0:
            raise ValueError("moment ratio must lie in [0, 1]")
        if self.lam00 <= 0.0:
            raise ValueError("lam00 must be strictly positive")
        if self.e10 <= 0.0:
            raise ValueError("E10 must be strictly positive")


def x10_max(e10: float, lam00: float, consts: PhysicalConstants) -> float:
    """Largest 0->1 moment allowed by the sum rules, hbar sqrt(lam00/(2 m E10))."""
    if e10 <= 0.0 or lam00 <= 0.0:
        raise ValueError("E10 and lam00 must be strictly positive")
    return consts.hbar * math.sqrt(lam00) / math.sqrt(2.0 * consts.m * e10)


@dataclass(frozen=True)
class ConstrainedMoments:
    """The five sum-rule-constrained moments of the three-level model (a.u.)."""

    x10: float
    x20: float
    x12: float
    x11bar: float
    x22bar: float


def _unit(p: ThreeLevelParams) -> float:
    return p.consts.hbar / math.sqrt(2.0 * p.consts.m * p.e10)


def _mixed(p: ThreeLevelParams) -> float:
    return math.sqrt(p.moment_ratio**2 * p.lam00 + p.lam11)


def moment_x10(p: ThreeLevelParams) -> float:
    """0->1 moment, X times its sum-rule ceiling."""
    return _unit(p) * p.moment_ratio * math.sqrt(p.lam00)


def moment_x20(p: ThreeLevelParams) -> float:
    """0->2 moment; vanishes when all strength sits in the 0->1 transition."""
    e, x = p.energy_ratio, p.moment_ratio
    return _unit(p) * math.sqrt(e * (1.0 - x**2)) * math.sqrt(p.lam00)


def moment_x12(p: ThreeLevelParams) -> float:
    """1->2 moment; singular as the transition energies degenerate (E -> 1)."""
    e = p.energy_ratio
    if e >= 1.0:
        raise ThreeLevelDomainError("x12 is singular as E -> 1")
    return _unit(p) * math.sqrt(e / (1.0 - e)) * _mixed(p)


def moment_x11bar(p: ThreeLevelParams) -> float:
    """Barred 1->1 moment; singular at X = 0 and as E -> 1."""
    e, x = p.energy_ratio, p.moment_ratio
    if e >= 1.0:
        raise ThreeLevelDomainError("x11bar is singular as E -> 1")
    if x == 0.0:
        raise ThreeLevelDomainError("x11bar is singular at X = 0")
    return _unit(p) * (
        (e - 2.0) / math.sqrt(1.0 - e) * math.sqrt(1.0 - x**2) / x * _mixed(p)
        - p.lam10 / (x * math.sqrt(p.lam00))
    )


def moment_x22bar(p: ThreeLevelParams) -> float:
    """Barred 2->2 moment; singular at X = 1 and as E -> 1."""
    e, x = p.energy_ratio, p.moment_ratio
    if e >= 1.0:
        raise ThreeLevelDomainError("x22bar is singular as E -> 1")
    if x == 1.0:
        raise ThreeLevelDomainError("x22bar is singular at X = 1")
    return _unit(p) * (
        (1.0 - 2.0 * e) / math.sqrt(1.0 - e) * x / math.sqrt(1.0 - x**2) * _mixed(p)
        - math.sqrt(e / (1.0 - x**2)) * p.lam20 / math.sqrt(p.lam00)
    )


def constrained_moments(p: ThreeLevelParams) -> ConstrainedMoments:
    """All five sum-rule-constrained moments at once.

    Raises a domain error naming the singular moment at the corners
    E -> 1 (x12, barred diagonals), X = 0 (x11bar), X = 1 (x22bar); the
    individual moment functions accept anything in their own domains.
    """
    return ConstrainedMoments(
        x10=moment_x10(p),
        x20=moment_x20(p),
        x12=moment_x12(p),
        x11bar=moment_x11bar(p),
        x22bar=moment_x22bar(p),
    )


def tl_kappa1(p: ThreeLevelParams) -> float:
    """Three-level polarizability e^2 hbar^2/(m E10^2) [X^2 + E^2(1-X^2)] lam00."""
    c = p.consts
    e, x = p.energy_ratio, p.moment_ratio
    return (
        c.e**2
        * c.hbar**2
        / (c.m * p.e10**2)
        * (x**2 + e**2 * (1.0 - x**2))
        * p.lam00
    )


def _kappa2_value(x, e, lam00, lam11, lam10, lam20, e10, consts):
    # Works elementwise on arrays as well as on plain floats.
    mixed = (x**2 * lam00 + lam11) ** 0.5
    bracket = (
        x
        * (1.0 - x**2) ** 0.5
        * (1.0 - e) ** 1.5
        * (2.0 + 3.0 * e + 2.0 * e**2)
        * lam00
        * mixed
        - x * lam00**0.5 * lam10
        - (1.0 - x**2) ** 0.5 * e**3.5 * lam00**0.5 * lam20
    )
    scale = 1.5 * consts.e**3 * consts.hbar**3 / (2.0 * consts.m**3 * e10**7) ** 0.5
    return scale * bracket


def tl_kappa2(p: ThreeLevelParams) -> float:
    """Three-level hyperpolarizability, including the off-diagonal subtractions."""
    return float(
        _kappa2_value(
            p.moment_ratio,
            p.energy_ratio,
            p.lam00,
            p.lam11,
            p.lam10,
            p.lam20,
            p.e10,
            p.consts,
        )
    )


def kappa2_max_standard(e10: float, n: int, consts: PhysicalConstants) -> float:
    """Hyperpolarizability ceiling of standard (non-fractional) quantum mechanics."""
    if e10 <= 0.0:
        raise ValueError("E10 must be strictly positive")
    return (
        3.0**0.25
        * consts.e**3
        * consts.hbar**3
        * math.sqrt(n**3 / (consts.m**3 * e10**7))
    )


@dataclass(frozen=True)
class FractionalMaximum:
    """Extremes of |kappa2| over the three-level domain for fixed weights."""

    kappa2_max: float
    x_at: float
    e_at: float
    largest_positive: float
    largest_negative: float


X_RANGE = (0.01, 0.99)
E_RANGE = (0.0, 0.95)


def _golden_max(f, a: float, b: float, iterations: int = 60) -> tuple[float, float]:
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iterations):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
    mid = (a + b) / 2.0
    return mid, f(mid)


def kappa2_max_fractional(
    lam00: float,
    lam11: float,
    lam10: float,
    lam20: float,
    e10: float,
    consts: PhysicalConstants = PhysicalConstants(),
    grid_points: int = 200,
) -> FractionalMaximum:
    """Numeric maximum of |kappa2| over X in [0.01, 0.99], E in [0, 0.95].

    Deterministic: a coarse grid scan followed by golden-section
    refinement along each axis in turn.  With nonzero off-diagonal
    weights the surface can carry lobes of both signs, so the signed
    extremes are reported alongside the absolute maximum.
    """
    if lam00 <= 0.0:
        raise ValueError("lam00 must be strictly positive")

    def value(x, e):
        return _kappa2_value(x, e, lam00, lam11, lam10, lam20, e10, consts)

    xs = np.linspace(X_RANGE[0], X_RANGE[1], grid_points)
    es = np.linspace(E_RANGE[0], E_RANGE[1], grid_points)
    surface = value(xs[:, None], es[None, :])
    largest_pos = float(surface.max())
    largest_neg = float(surface.min())
    i_best, j_best = np.unravel_index(np.argmax(np.abs(surface)), surface.shape)
    x_best = float(xs[i_best])
    e_best = float(es[j_best])
    dx = float(xs[1] - xs[0])
    de = float(es[1] - es[0])
    for _ in range(2):
        x_best, _ = _golden_max(
            lambda x: abs(value(x, e_best)),
            max(X_RANGE[0], x_best - dx),
            min(X_RANGE[1], x_best + dx),
        )
        e_best, _ = _golden_max(
            lambda e: abs(value(x_best, e)),
            max(E_RANGE[0], e_best - de),
            min(E_RANGE[1], e_best + de),
        )
    peak = abs(value(x_best, e_best))
    return FractionalMaximum(peak, x_best, e_best, largest_pos, largest_neg)


@dataclass(frozen=True)
class ApparentResponse:
    """Responses normalized by their standard (alpha -> 1) three-level maxima."""

    kappa1_app: float
    kappa2_app: float


def apparent_intrinsic(
    kappa1: float,
    kappa2: float,
    e10: float,
    n: int,
    consts: PhysicalConstants,
) -> ApparentResponse:
    """kappa1 / (e^2 hbar^2 / m E10^2) and kappa2 / kappa2_max_standard."""
    kappa1_ceiling = consts.e**2 * consts.hbar**2 / (consts.m * e10**2) * n
    return ApparentResponse(
        kappa1_app=kappa1 / kappa1_ceiling,
        kappa2_app=kappa2 / kappa2_max_standard(e10, n, consts),
    )


def measured_params(
    energies,
    table,
    lam,
    consts: PhysicalConstants = PhysicalConstants(),
) -> ThreeLevelParams:
    """Three-level parameters read off a solved spectrum.

    Uses the lowest three states: E = E10/E20, X = |x_10| / x10_max with
    the measured lam00, and the four measured sum-rule weights.
    """
    e10 = float(energies[1] - energies[0])
    e20 = float(energies[2] - energies[0])
    lam00 = float(lam.values[0, 0])
    x = abs(float(table.moments[0, 1])) / x10_max(e10, lam00, consts)
    return ThreeLevelParams(
        energy_ratio=e10 / e20,
        moment_ratio=min(x, 1.0),
        e10=e10,
        lam00=lam00,
        lam11=float(lam.values[1, 1]),
        lam10=float(lam.values[1, 0]),
        lam20=float(lam.values[2, 0]),
        consts=consts,
    )
