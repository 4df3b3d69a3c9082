"""Fractional Hamiltonians: potentials, assembly, spectra, offset calibration.

The kinetic operator is |p|^(2 alpha) / 2m with the canonical momentum
p = -i m c (hbar/mc)^alpha d^alpha/dx^alpha, assembled on the grid as

    H = -(m c^2 / 2) (hbar / m c)^(2 alpha) D_riesz(2 alpha) + diag(V),

which reduces to -hbar^2/(2m) d^2/dx^2 + V at alpha = 1.  Potentials are
functions of the canonical coordinate xhat(x) = (hbar/mc)^(1-alpha)
|x|^alpha sign(x); asymmetric wells carry a hard wall realized by the left
grid boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Union

import numpy as np
import scipy.linalg as sla

from .constants import PhysicalConstants
from .exceptions import CalibrationError, ConfigurationError, NumericError
from .fracop import inner_product, riesz_matrix
from .grid import Grid1D

ALPHA_MIN = 0.5
ALPHA_MAX = 1.0


@dataclass(frozen=True)
class FractionalOrder:
    """Fractional parameter alpha in (0.5, 1] and derivative order beta = 2 alpha."""

    alpha: float

    def __post_init__(self) -> None:
        if not ALPHA_MIN < self.alpha <= ALPHA_MAX:
            raise ValueError(
                f"alpha must lie in ({ALPHA_MIN}, {ALPHA_MAX}], got {self.alpha}"
            )

    @property
    def beta(self) -> float:
        return 2.0 * self.alpha


def canonical_position(x, alpha: float, consts: PhysicalConstants):
    """Canonical coordinate (hbar/mc)^(1-alpha) |x|^alpha sign(x).

    Odd and monotone increasing in x; the identity map at alpha = 1.
    Accepts scalars or arrays.  A pure map, defined for any alpha > 0;
    the operator layer enforces the solvable range.
    """
    if alpha <= 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    scale = consts.length_scale ** (1.0 - alpha)
    x = np.asarray(x, dtype=float)
    out = scale * np.abs(x) ** alpha * np.sign(x)
    return float(out) if out.ndim == 0 else out


def fractional_offset(b: float, alpha: float, consts: PhysicalConstants) -> float:
    """Offset mapped into the canonical coordinate; same map as the position."""
    return canonical_position(b, alpha, consts)


@dataclass(frozen=True)
class CQHO:
    """Clipped harmonic well: (m omega^2 / 2)(xhat - bhat)^2 right of the wall."""

    omega: float = 1.0
    b: float = 0.0

    def __post_init__(self) -> None:
        if self.omega <= 0.0:
            raise ValueError("omega must be strictly positive")

    has_wall = True

    def with_offset(self, b: float) -> "CQHO":
        return replace(self, b=b)


@dataclass(frozen=True)
class SlantWell:
    """Linear ramp A (xhat - bhat) right of the wall."""

    slope: float = 1.0
    b: float = 0.0

    def __post_init__(self) -> None:
        if self.slope <= 0.0:
            raise ValueError("slope must be strictly positive")

    has_wall = True

    def with_offset(self, b: float) -> "SlantWell":
        return replace(self, b=b)


@dataclass(frozen=True)
class SymmetricHO:
    """Unclipped well (m omega^2 / 2) xhat^2; symmetric, no wall, no offset."""

    omega: float = 1.0

    def __post_init__(self) -> None:
        if self.omega <= 0.0:
            raise ValueError("omega must be strictly positive")

    has_wall = False
    b = 0.0

    def with_offset(self, b: float) -> "SymmetricHO":
        if b != 0.0:
            raise ValueError("symmetric well has no offset")
        return self


@dataclass(frozen=True)
class Tabulated:
    """Potential given directly as samples on the grid."""

    samples: np.ndarray

    has_wall = False
    b = 0.0


Potential = Union[CQHO, SlantWell, SymmetricHO, Tabulated]


def potential_on_grid(
    spec: Potential, grid: Grid1D, alpha: float, consts: PhysicalConstants
) -> np.ndarray:
    """Sample the potential on the grid, in energy units (a.u.).

    For the walled variants the grid must start strictly right of the wall
    at x = b; the infinite branch is realized by the boundary itself.
    """
    if isinstance(spec, Tabulated):
        v = np.asarray(spec.samples, dtype=float)
        if v.shape != (grid.n,):
            raise ConfigurationError(
                f"tabulated potential has {v.shape[0]} samples, grid has {grid.n}"
            )
        return v
    xh = canonical_position(grid.x, alpha, consts)
    if isinstance(spec, SymmetricHO):
        return 0.5 * consts.m * spec.omega**2 * xh**2
    if grid.x_min <= spec.b:
        raise ConfigurationError(
            f"grid starts at {grid.x_min} inside the forbidden region x <= {spec.b}"
        )
    bh = fractional_offset(spec.b, alpha, consts)
    if isinstance(spec, CQHO):
        return 0.5 * consts.m * spec.omega**2 * (xh - bh) ** 2
    if isinstance(spec, SlantWell):
        return spec.slope * (xh - bh)
    raise TypeError(f"unknown potential {type(spec).__name__}")


def kinetic_prefactor(alpha: float, consts: PhysicalConstants) -> float:
    """(m c^2 / 2)(hbar/mc)^(2 alpha); equals hbar^2/2m at alpha = 1."""
    return 0.5 * consts.m * consts.c**2 * consts.length_scale ** (2.0 * alpha)


def hamiltonian_norm_bound(
    grid: Grid1D, alpha: float, potential: np.ndarray, consts: PhysicalConstants
) -> float:
    """Cheap upper bound on ||H||: kinetic row-sum bound plus max |V|.

    The absolute row sums of the symmetric derivative matrix are bounded by
    2 beta / dx^beta (the GL weights have absolute sum 2 beta), scaled by
    the Riesz prefactor.
    """
    beta = 2.0 * alpha
    kinetic = kinetic_prefactor(alpha, consts) * (
        2.0 * beta / (grid.dx**beta * 2.0 * abs(np.cos(np.pi * beta / 2.0)))
    )
    return float(kinetic + np.abs(potential).max())


def assemble(
    grid: Grid1D, alpha: float, potential: np.ndarray, consts: PhysicalConstants
) -> np.ndarray:
    """Dense symmetric Hamiltonian matrix for the given potential samples."""
    FractionalOrder(alpha)
    potential = np.asarray(potential, dtype=float)
    if potential.shape != (grid.n,):
        raise ValueError(
            f"potential has shape {potential.shape}, expected ({grid.n},)"
        )
    h = riesz_matrix(grid, 2.0 * alpha).entries * (-kinetic_prefactor(alpha, consts))
    h[np.diag_indices_from(h)] += potential
    return h


@dataclass(frozen=True)
class Spectrum:
    """Lowest eigenpairs of a fractional Hamiltonian on a grid.

    states holds one normalized, sign-fixed wavefunction per column,
    sampled on grid.x; energies are strictly ascending.
    """

    order: FractionalOrder
    grid: Grid1D
    energies: np.ndarray
    states: np.ndarray

    @property
    def count(self) -> int:
        return len(self.energies)


def _fix_signs(states: np.ndarray) -> np.ndarray:
    # First component above 1e-6 of the state's peak is made positive.
    for j in range(states.shape[1]):
        col = states[:, j]
        big = np.abs(col) > 1e-6 * np.abs(col).max()
        first = int(np.argmax(big))
        if col[first] < 0.0:
            states[:, j] = -col
    return states


def solve(
    h: np.ndarray, k_states: int, grid: Grid1D, alpha: float = 1.0
) -> Spectrum:
    """Lowest k_states eigenpairs, unit-normalized under the grid quadrature.

    k_states is capped at n/4 so the retained states stay well inside the
    resolvable part of the discrete spectrum.
    """
    n = grid.n
    if k_states < 1:
        raise ValueError("k_states must be at least 1")
    if k_states > n // 4:
        raise ValueError(
            f"k_states={k_states} exceeds n/4={n // 4}; refine the grid"
        )
    try:
        energies, states = sla.eigh(h, subset_by_index=[0, k_states - 1])
    except sla.LinAlgError as exc:
        raise NumericError(
            f"eigensolver failed for n={n}, k_states={k_states}: {exc}"
        ) from exc
    states = _fix_signs(states / np.sqrt(grid.dx))
    return Spectrum(FractionalOrder(alpha), grid, energies, states)


def solve_potential(
    spec: Potential,
    grid: Grid1D,
    alpha: float,
    consts: PhysicalConstants,
    k_states: int,
) -> Spectrum:
    """Assemble and diagonalize in one step."""
    v = potential_on_grid(spec, grid, alpha, consts)
    return solve(assemble(grid, alpha, v, consts), k_states, grid, alpha)


def ground_moment(spectrum: Spectrum, consts: PhysicalConstants) -> float:
    """Ground-state expectation value of the canonical coordinate."""
    xh = canonical_position(spectrum.grid.x, spectrum.order.alpha, consts)
    psi0 = spectrum.states[:, 0]
    return inner_product(psi0, xh * psi0, spectrum.grid)


@dataclass(frozen=True)
class GridPolicy:
    """How to place and refine the solution box.

    The box starts at the wall (or symmetric about the origin) with the
    given width and point count.  After a solve the policy checks that the
    top retained state is classically confined with energy headroom and
    that its amplitude at the far edge is below tail_tol; failing that the
    box is widened (point count grows with it, capped at n_max).
    """

    width: float = 16.0
    n: int = 3000
    tail_tol: float = 1e-8
    max_widenings: int = 3
    n_max: int = 4096
    headroom: float = 1.3

    def __post_init__(self) -> None:
        if self.width <= 0.0 or self.n < 8:
            raise ValueError("policy needs width > 0 and n >= 8")

    def grid_for(self, spec: Potential, width: float, n: int) -> Grid1D:
        if getattr(spec, "has_wall", False):
            return Grid1D.from_wall(spec.b, width, n)
        return Grid1D.symmetric(width, n)

    def widened(self, width: float, n: int) -> tuple[float, int]:
        return 2.0 * width, min(2 * n + 1, self.n_max)


def tail_amplitude(spectrum: Spectrum) -> float:
    """Largest relative wavefunction amplitude at the far grid edge."""
    states = spectrum.states
    peak = np.abs(states).max(axis=0)
    return float((np.abs(states[-1, :]) / peak).max())


def _confined(
    spec: Potential,
    spectrum: Spectrum,
    alpha: float,
    consts: PhysicalConstants,
    headroom: float,
) -> bool:
    v = potential_on_grid(spec, spectrum.grid, alpha, consts)
    e_top = spectrum.energies[-1]
    e_ref = max(e_top, spectrum.energies[0] + 1e-12)
    return bool(v[-1] >= headroom * e_ref)


@dataclass(frozen=True)
class CalibrationResult:
    b: float
    spectrum: Spectrum
    residual: float
    iterations: int
    width: float
    tail: float


def calibrate_offset(
    spec: Potential,
    policy: GridPolicy,
    alpha: float,
    consts: PhysicalConstants,
    tol: float = 1e-8,
    k_states: int = 20,
    max_iter: int = 50,
) -> CalibrationResult:
    """Find the well offset b that zeroes the ground-state canonical moment.

    Secant iteration on g(b) = <0|xhat|0>(b), with the grid rebuilt around
    the wall at every step; convergence is judged on the moment residual,
    not on b.  Symmetric potentials are returned immediately with b = 0.
    The box is widened per the policy until the retained states fit.
    """
    if tol <= 0.0:
        raise ValueError("tol must be strictly positive")
    width, n = policy.width, policy.n

    if not getattr(spec, "has_wall", False):
        for attempt in range(policy.max_widenings + 1):
            grid = policy.grid_for(spec, width, n)
            spectrum = solve_potential(spec, grid, alpha, consts, k_states)
            tail = tail_amplitude(spectrum)
            if (
                tail <= policy.tail_tol
                and _confined(spec, spectrum, alpha, consts, policy.headroom)
            ) or attempt == policy.max_widenings:
                break
            width, n = policy.widened(width, n)
        residual = abs(ground_moment(spectrum, consts))
        return CalibrationResult(0.0, spectrum, residual, 0, width, tail)

    b = spec.b
    total_iter = 0
    for attempt in range(policy.max_widenings + 1):
        b, spectrum, residual, iters = _secant_offset(
            spec, policy, alpha, consts, tol, k_states, max_iter, b, width, n
        )
        total_iter += iters
        tail = tail_amplitude(spectrum)
        if (
            tail <= policy.tail_tol
            and _confined(
                spec.with_offset(b), spectrum, alpha, consts, policy.headroom
            )
        ) or attempt == policy.max_widenings:
            break
        width, n = policy.widened(width, n)
    return CalibrationResult(b, spectrum, residual, total_iter, width, tail)


def _secant_offset(spec, policy, alpha, consts, tol, k_states, max_iter, b0, width, n):
    def solve_at(b, k):
        grid = policy.grid_for(spec.with_offset(b), width, n)
        return solve_potential(spec.with_offset(b), grid, alpha, consts, k)

    def moment(b):
        sp = solve_at(b, 1)
        return ground_moment(sp, consts)

    b_prev, m_prev = b0, moment(b0)
    if abs(m_prev) < tol:
        sp = solve_at(b_prev, k_states)
        return b_prev, sp, abs(m_prev), 1
    # At alpha = 1 the moment is exactly linear with unit slope in b, so
    # b - m is the root; it also serves as the second secant point.
    b = b_prev - m_prev
    for iteration in range(2, max_iter + 1):
        m = moment(b)
        if abs(m) < tol:
            sp = solve_at(b, k_states)
            return b, sp, abs(m), iteration
        db, dm = b - b_prev, m - m_prev
        step = m * db / dm if dm != 0.0 else m
        b_prev, m_prev = b, m
        b = b - step
    raise CalibrationError(
        f"offset calibration did not reach |<0|xhat|0>| < {tol} in "
        f"{max_iter} iterations (last residual {abs(m_prev):.3e})",
        residual=abs(m_prev),
        iterations=max_iter,
    )
