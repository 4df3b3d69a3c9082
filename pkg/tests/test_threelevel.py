import math

import numpy as np
import pytest

from frackappa.constants import ATOMIC_UNITS
from frackappa.hamiltonian import CQHO, GridPolicy, calibrate_offset
from frackappa.response import (
    lambda_matrix,
    transition_moments,
)
from frackappa.threelevel import (
    ThreeLevelDomainError,
    ThreeLevelParams,
    apparent_intrinsic,
    constrained_moments,
    kappa2_max_fractional,
    kappa2_max_standard,
    measured_params,
    moment_x11bar,
    moment_x12,
    moment_x20,
    tl_kappa1,
    tl_kappa2,
    x10_max,
)

CONSTS = ATOMIC_UNITS


def params(x, e, e10=1.0, lam=(1.0, 1.0, 0.0, 0.0)):
    return ThreeLevelParams(
        energy_ratio=e,
        moment_ratio=x,
        e10=e10,
        lam00=lam[0],
        lam11=lam[1],
        lam10=lam[2],
        lam20=lam[3],
        consts=CONSTS,
    )


class TestX10Max:
    def test_arithmetic(self):
        assert x10_max(2.0, 1.0, CONSTS) == pytest.approx(0.5)

    def test_sqrt_scaling_in_lam00(self):
        assert x10_max(2.0, 0.25, CONSTS) == pytest.approx(0.25)

    def test_guards(self):
        with pytest.raises(ValueError):
            x10_max(0.0, 1.0, CONSTS)
        with pytest.raises(ValueError):
            x10_max(1.0, -1.0, CONSTS)

    def test_solver_moment_below_ceiling(self):
        policy = GridPolicy(width=16.0, n=800, tail_tol=1e-2, max_widenings=1)
        calib = calibrate_offset(CQHO(), policy, 1.0, CONSTS, k_states=5)
        table = transition_moments(calib.spectrum, CONSTS)
        lam = lambda_matrix(calib.spectrum, 1.0, CONSTS)
        p = measured_params(calib.spectrum.energies, table, lam, CONSTS)
        assert 0.0 < p.moment_ratio <= 1.0


class TestConstrainedMoments:
    def test_all_strength_in_first_transition(self):
        # x20 vanishes when X = 1 (its factor sqrt(1 - X^2) is zero).
        assert moment_x20(params(1.0, 0.5)) == 0.0

    def test_x12_arithmetic_example(self):
        # Identity weights, X = 1, E = 1/2, E10 = 1:
        # (1/sqrt(2)) * sqrt(E/(1-E)) * sqrt(2) = 1.
        assert moment_x12(params(1.0, 0.5)) == pytest.approx(1.0, rel=1e-12)

    def test_degenerate_energy_ratio(self):
        p = params(0.5, 0.0)
        assert moment_x12(p) == 0.0
        assert math.isfinite(moment_x11bar(p))

    def test_bundle_matches_singletons(self):
        p = params(0.6, 0.3, e10=1.7, lam=(0.8, 0.5, 0.02, -0.01))
        bundle = constrained_moments(p)
        assert bundle.x20 == moment_x20(p)
        assert bundle.x12 == moment_x12(p)
        assert bundle.x11bar == moment_x11bar(p)

    def test_singular_corners_named(self):
        with pytest.raises(ThreeLevelDomainError, match="x11bar"):
            constrained_moments(params(0.0, 0.5))
        with pytest.raises(ThreeLevelDomainError, match="x22bar"):
            constrained_moments(params(1.0, 0.5))
        with pytest.raises(ValueError):
            params(0.5, 1.0 + 1e-12)
        with pytest.raises(ValueError):
            params(0.5, -0.1)


class TestKappa1:
    def test_maximum_at_unit_moment(self):
        assert tl_kappa1(params(1.0, 0.7)) == pytest.approx(1.0)
        # Maximum over X on a grid sits at X = 1 for any E.
        for e in np.linspace(0.0, 0.9, 10):
            values = [tl_kappa1(params(x, float(e))) for x in np.linspace(0, 1, 21)]
            assert np.argmax(values) == 20

    def test_zero_corner(self):
        assert tl_kappa1(params(0.0, 0.0)) == 0.0

    def test_scaling_in_e10(self):
        assert tl_kappa1(params(1.0, 0.2, e10=2.0)) == pytest.approx(0.25)


class TestKappa2:
    def test_limit_matches_standard_maximum(self):
        p = params(3.0**-0.25, 1e-9)
        assert tl_kappa2(p) == pytest.approx(
            kappa2_max_standard(1.0, 1, CONSTS), rel=1e-6
        )

    def test_zero_moment_with_zero_lam20(self):
        assert tl_kappa2(params(0.0, 0.4)) == 0.0

    def test_large_lam10_flips_sign(self):
        assert tl_kappa2(params(0.5, 0.2)) > 0.0
        assert tl_kappa2(params(0.5, 0.2, lam=(1.0, 1.0, 10.0, 0.0))) < 0.0


class TestKappa2MaxStandard:
    def test_unit_value(self):
        assert kappa2_max_standard(1.0, 1, CONSTS) == pytest.approx(3.0**0.25)
        assert kappa2_max_standard(1.0, 1, CONSTS) == pytest.approx(1.31607, abs=1e-5)

    def test_power_law_in_e10(self):
        ratio = kappa2_max_standard(1.0, 1, CONSTS) / kappa2_max_standard(
            4.0, 1, CONSTS
        )
        assert ratio == pytest.approx(128.0, rel=1e-12)

    def test_e10_two(self):
        assert kappa2_max_standard(2.0, 1, CONSTS) == pytest.approx(0.11632, abs=1e-5)


class TestFractionalMaximum:
    def test_recovers_identity_limit(self):
        found = kappa2_max_fractional(1.0, 1.0, 0.0, 0.0, 1.0, CONSTS)
        target = kappa2_max_standard(1.0, 1, CONSTS)
        assert abs(found.kappa2_max - target) / target < 5e-3
        assert found.x_at == pytest.approx(3.0**-0.25, abs=0.01)
        assert found.e_at <= 0.02

    def test_homogeneity(self):
        s = 0.37
        base = kappa2_max_fractional(1.0, 1.0, 0.0, 0.0, 1.0, CONSTS)
        scaled = kappa2_max_fractional(s, s, 0.0, 0.0, 1.0, CONSTS)
        assert scaled.kappa2_max == pytest.approx(
            s**1.5 * base.kappa2_max, rel=1e-10
        )
        assert tl_kappa1(params(0.5, 0.2, lam=(s, s, 0, 0))) == pytest.approx(
            s * tl_kappa1(params(0.5, 0.2)), rel=1e-12
        )
        assert tl_kappa2(params(0.5, 0.2, lam=(s, s, 0, 0))) == pytest.approx(
            s**1.5 * tl_kappa2(params(0.5, 0.2)), rel=1e-12
        )

    def test_refinement_invariance(self):
        coarse = kappa2_max_fractional(0.8, 0.5, 0.01, -0.02, 1.3, CONSTS)
        fine = kappa2_max_fractional(
            0.8, 0.5, 0.01, -0.02, 1.3, CONSTS, grid_points=400
        )
        assert abs(fine.kappa2_max - coarse.kappa2_max) / coarse.kappa2_max < 1e-4

    def test_signed_extremes_reported(self):
        # A moderate off-diagonal weight carves lobes of both signs.
        found = kappa2_max_fractional(1.0, 1.0, 0.5, 0.0, 1.0, CONSTS)
        assert found.largest_negative < 0.0 < found.largest_positive
        assert found.kappa2_max == pytest.approx(
            max(found.largest_positive, -found.largest_negative), rel=1e-2
        )

    def test_measured_weights_stay_below_identity_ceiling(self):
        policy = GridPolicy(width=24.0, n=800, tail_tol=1e-2, max_widenings=1)
        calib = calibrate_offset(CQHO(), policy, 0.9, CONSTS, k_states=5)
        table = transition_moments(calib.spectrum, CONSTS)
        lam = lambda_matrix(calib.spectrum, 0.9, CONSTS)
        p = measured_params(calib.spectrum.energies, table, lam, CONSTS)
        measured = kappa2_max_fractional(
            p.lam00, p.lam11, p.lam10, p.lam20, p.e10, CONSTS
        )
        identity = kappa2_max_fractional(1.0, 1.0, 0.0, 0.0, p.e10, CONSTS)
        assert measured.kappa2_max < identity.kappa2_max

    def test_lam00_guard(self):
        with pytest.raises(ValueError):
            kappa2_max_fractional(0.0, 1.0, 0.0, 0.0, 1.0, CONSTS)


@pytest.fixture(scope="module")
def measured():
    policy = GridPolicy(width=16.0, n=1200, tail_tol=1e-2, max_widenings=1)
    calib = calibrate_offset(CQHO(), policy, 1.0, CONSTS, k_states=30)
    table = transition_moments(calib.spectrum, CONSTS)
    lam = lambda_matrix(calib.spectrum, 1.0, CONSTS)
    p = measured_params(calib.spectrum.energies, table, lam, CONSTS)
    identity = ThreeLevelParams(
        energy_ratio=p.energy_ratio,
        moment_ratio=p.moment_ratio,
        e10=p.e10,
        consts=CONSTS,
    )
    return calib, table, identity


class TestSolverConsistency:
    """Loose cross-checks: the three-level model truncates the spectrum,
    so agreement with the full solver is only at truncation level."""

    def test_kappa1_within_truncation_error(self, measured):
        calib, table, identity = measured
        full = 2.0 * float(
            np.sum(
                table.moments[0, 1:30] ** 2
                / (calib.spectrum.energies[1:30] - calib.spectrum.energies[0])
            )
        )
        # Measured gap is ~1.4%; 30% is the documented truncation budget.
        assert abs(tl_kappa1(identity) - full) / full < 0.30

    def test_x20_within_truncation_error(self, measured):
        _, table, identity = measured
        solver_x20 = abs(float(table.moments[0, 2]))
        model_x20 = moment_x20(identity)
        # Measured gap is ~34%; assert only the documented order of magnitude.
        assert abs(model_x20 - solver_x20) / solver_x20 < 0.5


class TestApparentIntrinsic:
    def test_definition(self):
        ceiling = kappa2_max_standard(1.0, 1, CONSTS)
        response = apparent_intrinsic(0.5, ceiling, 1.0, 1, CONSTS)
        assert response.kappa2_app == pytest.approx(1.0)
        assert response.kappa1_app == pytest.approx(0.5)

    def test_zero_response_maps_to_zero(self):
        response = apparent_intrinsic(0.3, 0.0, 2.0, 1, CONSTS)
        assert response.kappa2_app == 0.0
