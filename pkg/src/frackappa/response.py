"""Linear and first nonlinear static response of a solved system.

Provides canonical-position transition moments, the sum-rule weight matrix
lambda(alpha, k, l), sum-rule residuals, the state-sum polarizability and
hyperpolarizability

    kappa1 = 2 e^2 sum'_k |x_0k|^2 / E_k0
    kappa2 = 3 e^3 sum'_{k,l} x_0k xbar_kl x_l0 / (E_k0 E_l0),

and an independent finite-field route that differentiates the ground-state
energy with respect to a static field coupled to the canonical coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import PhysicalConstants
from .exceptions import NumericError
from .fracop import riesz_matrix
from .grid import Grid1D
from .hamiltonian import (
    GridPolicy,
    Potential,
    Spectrum,
    assemble,
    calibrate_offset,
    canonical_position,
    hamiltonian_norm_bound,
    potential_on_grid,
    solve,
)

# Convergence guard threshold shared by reports and sweep rows.
DELTA_TOL = 1e-2
# Floor for relative deltas so identically-zero responses compare clean.
DELTA_FLOOR = 1e-9


@dataclass(frozen=True)
class TransitionTable:
    """Canonical-position matrix elements x_ij between retained states."""

    moments: np.ndarray

    @property
    def count(self) -> int:
        return self.moments.shape[0]

    def bar(self) -> np.ndarray:
        """Barred moments xbar_ij = x_ij - delta_ij x_00."""
        out = self.moments.copy()
        out[np.diag_indices_from(out)] -= self.moments[0, 0]
        return out


def transition_moments(
    spectrum: Spectrum, consts: PhysicalConstants
) -> TransitionTable:
    """Moments x_ij = <i|xhat|j> by grid quadrature; symmetrized.

    The raw quadrature matrix is symmetric to eigensolver rounding; the
    construction check rejects anything worse before averaging it away.
    """
    xh = canonical_position(spectrum.grid.x, spectrum.order.alpha, consts)
    states = spectrum.states
    raw = (states.T * xh) @ states * spectrum.grid.dx
    scale = max(np.abs(raw).max(), 1.0)
    asym = np.abs(raw - raw.T).max()
    if asym > 1e-8 * scale:
        raise NumericError(
            f"transition moments asymmetric at {asym:.3e} (scale {scale:.3e})"
        )
    return TransitionTable((raw + raw.T) / 2.0)


@dataclass(frozen=True)
class LambdaMatrix:
    """Sum-rule weight elements lambda(alpha, k, l); identity at alpha = 1."""

    values: np.ndarray

    @property
    def count(self) -> int:
        return self.values.shape[0]


def lambda_matrix(
    spectrum: Spectrum, alpha: float, consts: PhysicalConstants
) -> LambdaMatrix:
    """Elements <k| xi^2 D/2 + D xi^2/2 - xi D xi |l> with xi = |x|^alpha sign x.

    D is the same symmetric fractional-derivative matrix used in the
    kinetic term, so the matrix equals m/hbar^2 times the double
    commutator [xhat, [H, xhat]] up to rounding.
    """
    grid = spectrum.grid
    d = riesz_matrix(grid, 2.0 * alpha).entries
    x = grid.x
    xi = np.abs(x) ** alpha * np.sign(x)
    states = spectrum.states
    dx = grid.dx

    d_states = d @ states
    xi2_states = (xi**2)[:, None] * states
    half = (xi2_states.T @ d_states) * dx
    cross = ((xi[:, None] * states).T @ (d @ (xi[:, None] * states))) * dx
    values = 0.5 * (half + half.T) - cross

    asym = np.abs(values - values.T).max()
    if asym > 1e-6:
        raise NumericError(f"lambda matrix asymmetric at {asym:.3e}")
    return LambdaMatrix((values + values.T) / 2.0)


@dataclass(frozen=True)
class TrkResidual:
    """Relative sum-rule residual plus its truncation self-check."""

    value: float
    delta: float
    converged: bool


def trk_residual(
    spectrum: Spectrum,
    table: TransitionTable,
    lam: LambdaMatrix,
    k: int,
    l: int,
    consts: PhysicalConstants = PhysicalConstants(),
) -> TrkResidual:
    """Relative mismatch of the (k, l) sum rule.

    Compares sum_q x_kq x_ql [E_q - (E_k + E_l)/2] against
    (hbar^2 / 2m) lambda_kl, normalized by hbar^2/2m.  The delta field
    reports how much the sum moved over the last ten retained states; a
    delta above 1e-3 marks the state count as insufficient.
    """
    e = spectrum.energies
    x = table.moments
    n_states = table.count
    if max(k, l) >= n_states:
        raise ValueError(f"indices ({k}, {l}) outside the {n_states} retained states")
    weights = e - 0.5 * (e[k] + e[l])
    scale = consts.hbar**2 / (2.0 * consts.m)

    def partial(count: int) -> float:
        s = float(np.sum(x[k, :count] * x[:count, l] * weights[:count]))
        return abs(s - scale * lam.values[k, l]) / scale

    full = partial(n_states)
    trimmed = partial(max(n_states - 10, max(k, l) + 1))
    delta = abs(full - trimmed)
    return TrkResidual(full, delta, bool(delta < 1e-3))


def sos_kappa1(
    table: TransitionTable,
    energies: np.ndarray,
    k_sum: int,
    consts: PhysicalConstants,
) -> float:
    """State-sum polarizability over the first k_sum states (ground included)."""
    k_sum = min(k_sum, table.count)
    x = table.moments
    de = energies[1:k_sum] - energies[0]
    return float(2.0 * consts.e**2 * np.sum(x[0, 1:k_sum] ** 2 / de))


def sos_kappa2(
    table: TransitionTable,
    energies: np.ndarray,
    k_sum: int,
    consts: PhysicalConstants,
) -> float:
    """State-sum hyperpolarizability over the first k_sum states.

    The barred diagonal subtraction is applied as defined even though
    calibration drives x_00 to zero; it then only removes residual
    calibration noise.
    """
    k_sum = min(k_sum, table.count)
    x = table.moments
    xbar = table.bar()[1:k_sum, 1:k_sum]
    de = energies[1:k_sum] - energies[0]
    v = x[0, 1:k_sum] / de
    return float(3.0 * consts.e**3 * (v @ xbar @ v))


def perturbed_energy(
    spec: Potential,
    grid: Grid1D,
    alpha: float,
    consts: PhysicalConstants,
    field: float,
) -> float:
    """Ground-state energy with the static-field term e * field * xhat added.

    The well offset in spec is used as given: all field points of a
    finite-field stencil share the zero-field calibration.
    """
    v = potential_on_grid(spec, grid, alpha, consts)
    if field != 0.0:
        v = v + consts.e * field * canonical_position(grid.x, alpha, consts)
    h = assemble(grid, alpha, v, consts)
    return float(solve(h, 1, grid, alpha).energies[0])


@dataclass(frozen=True)
class FiniteFieldResult:
    kappa1: float
    kappa2: float
    step: float
    fields: np.ndarray
    energies: np.ndarray


def finite_field_scan(
    spec: Potential,
    grid: Grid1D,
    alpha: float,
    consts: PhysicalConstants,
    step: float = 1e-3,
    max_doublings: int = 40,
    max_step: float = 0.25,
    kappa2_resolution: float = 1e-7,
) -> FiniteFieldResult:
    """Quartic fit of E0 over the stencil {0, +-h, +-2h}.

    Both response coefficients come from the fitted Taylor coefficients,
    kappa1 = -2 c2 and kappa2 = +3 c3; the signs make the polarizability
    positive and reproduce the state-sum prefactors.

    The step doubles until the quadratic and cubic energy shifts clear the
    floating noise of the eigensolves (eps times a bound on ||H||) by 1e6.
    A genuinely null cubic response never clears that bar (parity kills
    it), so it is instead accepted once the implied noise floor on kappa2
    drops below kappa2_resolution.
    """
    if step <= 0.0:
        raise ValueError("step must be strictly positive")
    v0 = potential_on_grid(spec, grid, alpha, consts)
    e0 = float(solve(assemble(grid, alpha, v0, consts), 1, grid, alpha).energies[0])
    noise = np.finfo(float).eps * (
        hamiltonian_norm_bound(grid, alpha, v0, consts) + abs(e0)
    )
    h = step
    for _ in range(max_doublings + 1):
        fields = np.array([-2.0 * h, -h, 0.0, h, 2.0 * h])
        energies = np.array(
            [
                perturbed_energy(spec, grid, alpha, consts, f) if f != 0.0 else e0
                for f in fields
            ]
        )
        em2, em1, _, ep1, ep2 = energies
        quad_shift = abs(ep1 + em1 - 2.0 * e0)
        cubic_shift = abs(ep2 - 2.0 * ep1 + 2.0 * em1 - em2)
        # cubic_shift = 12 |c3| h^3, so noise-level shifts bound kappa2 by
        # 3 * (a few x noise) / (12 h^3).
        kappa2_floor = 8.0 * noise / h**3
        quad_ok = quad_shift >= 1e6 * noise
        cubic_ok = cubic_shift >= 1e6 * noise or kappa2_floor <= kappa2_resolution
        if quad_ok and cubic_ok:
            break
        h *= 2.0
        if h > max_step:
            raise NumericError(
                f"field shifts stayed below the noise floor up to h={h / 2.0:.3e}; "
                "pass a larger field step or refine the grid"
            )
    else:
        raise NumericError(
            f"field shifts stayed below the noise floor up to h={h / 2.0:.3e}; "
            "pass a larger field step"
        )
    # Exact interpolation through the five points, fitted in units of h for
    # conditioning.
    coeffs = np.polynomial.polynomial.polyfit(fields / h, energies, 4)
    c2 = coeffs[2] / h**2
    c3 = coeffs[3] / h**3
    return FiniteFieldResult(-2.0 * c2, 3.0 * c3, h, fields, energies)


def finite_field_kappa(
    spec: Potential,
    grid: Grid1D,
    alpha: float,
    consts: PhysicalConstants,
    order: int,
    step: float = 1e-3,
) -> float:
    """Finite-field response of the requested order (1 or 2)."""
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    scan = finite_field_scan(spec, grid, alpha, consts, step)
    return scan.kappa1 if order == 1 else scan.kappa2


def relative_delta(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), DELTA_FLOOR)


@dataclass(frozen=True)
class ConvergenceDeltas:
    """Self-consistency deltas for the state-sum responses.

    dk*_states: change under ten more states in the sums.
    dk*_grid: change under halving the grid spacing (same box, same offset).
    """

    dk1_states: float
    dk2_states: float
    dk1_grid: float
    dk2_grid: float

    @property
    def worst(self) -> float:
        return max(self.dk1_states, self.dk2_states, self.dk1_grid, self.dk2_grid)

    @property
    def converged(self) -> bool:
        return self.worst < DELTA_TOL


def convergence_report(
    spec: Potential,
    spectrum: Spectrum,
    table: TransitionTable,
    consts: PhysicalConstants,
    k_sum: int,
) -> ConvergenceDeltas:
    """Deltas of kappa1/kappa2 under k_sum + 10 and under dx -> dx/2.

    The refined solve keeps the calibrated offset and box; its point count
    doubles so the old points interleave the new ones.
    """
    alpha = spectrum.order.alpha
    grid = spectrum.grid
    e = spectrum.energies
    k_lo = min(k_sum, table.count)
    k_hi = min(k_sum + 10, table.count)
    k1_lo = sos_kappa1(table, e, k_lo, consts)
    k2_lo = sos_kappa2(table, e, k_lo, consts)
    k1_hi = sos_kappa1(table, e, k_hi, consts)
    k2_hi = sos_kappa2(table, e, k_hi, consts)

    fine = Grid1D(
        x_min=grid.left_wall + grid.dx / 2.0, dx=grid.dx / 2.0, n=2 * grid.n + 1
    )
    sp_fine = solve(
        assemble(fine, alpha, potential_on_grid(spec, fine, alpha, consts), consts),
        k_lo,
        fine,
        alpha,
    )
    table_fine = transition_moments(sp_fine, consts)
    k1_fine = sos_kappa1(table_fine, sp_fine.energies, k_lo, consts)
    k2_fine = sos_kappa2(table_fine, sp_fine.energies, k_lo, consts)

    return ConvergenceDeltas(
        dk1_states=relative_delta(k1_lo, k1_hi),
        dk2_states=relative_delta(k2_lo, k2_hi),
        dk1_grid=relative_delta(k1_lo, k1_fine),
        dk2_grid=relative_delta(k2_lo, k2_fine),
    )


@dataclass(frozen=True)
class ResponseReport:
    """Responses of one calibrated system at one fractional parameter."""

    alpha: float
    b_offset: float
    kappa1: float
    kappa2: float
    kappa1_app: float
    kappa2_app: float
    e10: float
    e20: float
    k_states: int
    k_sum: int
    deltas: ConvergenceDeltas


def build_report(
    spec: Potential,
    policy: GridPolicy,
    alpha: float,
    consts: PhysicalConstants,
    k_states: int = 20,
    k_sum: int = 20,
    calib_tol: float = 1e-8,
) -> tuple[ResponseReport, Spectrum, TransitionTable, LambdaMatrix]:
    """Calibrate, solve and assemble the full response bundle for one alpha."""
    from .threelevel import apparent_intrinsic  # local import breaks the cycle

    k_solve = max(k_states, min(k_sum, k_states) + 10)
    calib = calibrate_offset(
        spec, policy, alpha, consts, tol=calib_tol, k_states=k_solve
    )
    spectrum = calib.spectrum
    table = transition_moments(spectrum, consts)
    lam = lambda_matrix(spectrum, alpha, consts)
    k_use = min(k_sum, k_states)
    kappa1 = sos_kappa1(table, spectrum.energies, k_use, consts)
    kappa2 = sos_kappa2(table, spectrum.energies, k_use, consts)
    e10 = float(spectrum.energies[1] - spectrum.energies[0])
    e20 = float(spectrum.energies[2] - spectrum.energies[0])
    apparent = apparent_intrinsic(kappa1, kappa2, e10, 1, consts)
    deltas = convergence_report(
        spec.with_offset(calib.b) if spec.has_wall else spec,
        spectrum,
        table,
        consts,
        k_use,
    )
    report = ResponseReport(
        alpha=alpha,
        b_offset=calib.b,
        kappa1=kappa1,
        kappa2=kappa2,
        kappa1_app=apparent.kappa1_app,
        kappa2_app=apparent.kappa2_app,
        e10=e10,
        e20=e20,
        k_states=k_states,
        k_sum=k_use,
        deltas=deltas,
    )
    return report, spectrum, table, lam
