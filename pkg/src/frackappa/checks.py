"""Self-check suite behind `frackappa check` and the /check endpoint.

Each check recomputes an independently known quantity (integer-order
stencils, analytic oscillator/Airy spectra, parity nulls, the standard
three-level maximum) and compares at a fixed tolerance.  The quick tier
runs in a few seconds; the full tier adds eigensolves at production-like
resolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg as sla
import scipy.special

from .constants import PhysicalConstants
from .fracop import gl_weights, riesz_matrix
from .grid import Grid1D
from .hamiltonian import (
    CQHO,
    GridPolicy,
    SlantWell,
    SymmetricHO,
    calibrate_offset,
    solve_potential,
)
from .response import lambda_matrix, sos_kappa1, sos_kappa2, transition_moments
from .threelevel import kappa2_max_fractional, kappa2_max_standard


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    passed: bool
    detail: str


def _check_riesz_integer_limit() -> CheckOutcome:
    grid = Grid1D.from_wall(0.0, 10.0, 64)
    d = riesz_matrix(grid, 2.0).entries
    ref = (
        np.diag(-2.0 * np.ones(grid.n))
        + np.diag(np.ones(grid.n - 1), 1)
        + np.diag(np.ones(grid.n - 1), -1)
    ) / grid.dx**2
    diff = np.abs(d - ref).max()
    return CheckOutcome(
        "riesz reduces to the central stencil at beta=2",
        bool(diff == 0.0),
        f"max entry difference {diff:.3e}",
    )


def _check_riesz_symmetry() -> CheckOutcome:
    grid = Grid1D.from_wall(0.0, 8.0, 200)
    worst = 0.0
    for beta in np.linspace(1.05, 2.0, 20):
        d = riesz_matrix(grid, float(beta)).entries
        worst = max(worst, float(np.abs(d - d.T).max()))
    return CheckOutcome(
        "riesz matrix exactly symmetric across beta",
        bool(worst == 0.0),
        f"max asymmetry {worst:.3e}",
    )


def _check_riesz_definiteness() -> CheckOutcome:
    grid = Grid1D.from_wall(0.0, 8.0, 200)
    worst = -np.inf
    for beta in (1.2, 1.5, 1.8, 2.0):
        d = riesz_matrix(grid, beta).entries
        ev = sla.eigvalsh(d)
        worst = max(worst, float(ev[-1] / np.abs(ev).max()))
    return CheckOutcome(
        "riesz matrix negative semidefinite",
        bool(worst <= 1e-10),
        f"largest scaled eigenvalue {worst:.3e}",
    )


def _check_gl_partial_sums() -> CheckOutcome:
    w = gl_weights(1.8, 2000)
    tail = abs(float(np.sum(w)))
    return CheckOutcome(
        "GL weight partial sums tend to zero",
        bool(tail < 1e-2),
        f"|sum w_k| = {tail:.3e} at 2000 terms",
    )


def _check_threelevel_maximum() -> CheckOutcome:
    consts = PhysicalConstants()
    target = kappa2_max_standard(1.0, 1, consts)
    found = kappa2_max_fractional(1.0, 1.0, 0.0, 0.0, 1.0, consts)
    rel = abs(found.kappa2_max - target) / target
    ok = bool(rel < 5e-3 and abs(found.x_at - 3.0**-0.25) < 0.01 and found.e_at <= 0.02)
    return CheckOutcome(
        "three-level optimizer recovers the standard maximum",
        ok,
        f"rel err {rel:.2e}, argmax X {found.x_at:.4f}, argmax E {found.e_at:.4f}",
    )


def _check_sho_polarizability() -> CheckOutcome:
    consts = PhysicalConstants()
    grid = Grid1D.symmetric(20.0, 1200)
    spectrum = solve_potential(SymmetricHO(), grid, 1.0, consts, 30)
    table = transition_moments(spectrum, consts)
    k1 = sos_kappa1(table, spectrum.energies, 30, consts)
    k2 = sos_kappa2(table, spectrum.energies, 30, consts)
    ok = bool(abs(k1 - 1.0) < 1e-2 and abs(k2) < 1e-6)
    return CheckOutcome(
        "symmetric oscillator gives kappa1=1 and kappa2=0",
        ok,
        f"kappa1 {k1:.6f}, kappa2 {k2:.2e}",
    )


def _check_cqho_spectrum() -> CheckOutcome:
    consts = PhysicalConstants()
    grid = Grid1D.from_wall(0.0, 12.0, 2000)
    spectrum = solve_potential(CQHO(), grid, 1.0, consts, 3)
    target = np.array([1.5, 3.5, 5.5])
    rel = float(np.abs(spectrum.energies - target).max() / target.max())
    return CheckOutcome(
        "clipped oscillator energies 1.5/3.5/5.5 at alpha=1",
        bool(rel < 1e-3),
        f"max relative error {rel:.2e}",
    )


def _check_slantwell_airy() -> CheckOutcome:
    consts = PhysicalConstants()
    grid = Grid1D.from_wall(0.0, 16.0, 2000)
    spectrum = solve_potential(SlantWell(), grid, 1.0, consts, 1)
    airy_zero = scipy.special.ai_zeros(1)[0][0]
    target = abs(airy_zero) / 2.0 ** (1.0 / 3.0)
    rel = float(abs(spectrum.energies[0] - target) / target)
    return CheckOutcome(
        "slant-well ground energy matches the Airy zero",
        bool(rel < 1e-3),
        f"E0 {spectrum.energies[0]:.6f} vs {target:.6f}",
    )


def _check_calibration() -> CheckOutcome:
    consts = PhysicalConstants()
    policy = GridPolicy(width=16.0, n=1500, max_widenings=1)
    calib = calibrate_offset(CQHO(), policy, 1.0, consts, tol=1e-8, k_states=3)
    target = -2.0 / math.sqrt(math.pi)
    ok = bool(abs(calib.b - target) < 1e-3 and calib.residual < 1e-8)
    return CheckOutcome(
        "particle-centric offset hits -2/sqrt(pi) at alpha=1",
        ok,
        f"b {calib.b:.6f}, residual {calib.residual:.2e}",
    )


def _check_lambda_identity() -> CheckOutcome:
    consts = PhysicalConstants()
    policy = GridPolicy(width=16.0, n=1500, max_widenings=1)
    calib = calibrate_offset(CQHO(), policy, 1.0, consts, tol=1e-8, k_states=5)
    lam = lambda_matrix(calib.spectrum, 1.0, consts).values
    diag_err = float(np.abs(np.diag(lam) - 1.0).max())
    off = lam - np.diag(np.diag(lam))
    off_err = float(np.abs(off).max())
    ok = bool(diag_err < 1e-2 and off_err < 1e-2)
    return CheckOutcome(
        "sum-rule weights reduce to the identity at alpha=1",
        ok,
        f"diag err {diag_err:.2e}, off-diag {off_err:.2e}",
    )


QUICK_CHECKS: list[Callable[[], CheckOutcome]] = [
    _check_riesz_integer_limit,
    _check_riesz_symmetry,
    _check_riesz_definiteness,
    _check_gl_partial_sums,
    _check_threelevel_maximum,
]

FULL_CHECKS: list[Callable[[], CheckOutcome]] = QUICK_CHECKS + [
    _check_sho_polarizability,
    _check_cqho_spectrum,
    _check_slantwell_airy,
    _check_calibration,
    _check_lambda_identity,
]


def run_checks(full: bool = True) -> list[CheckOutcome]:
    checks = FULL_CHECKS if full else QUICK_CHECKS
    return [check() for check in checks]
