"""Analysis tests: sup norms, certificates, convergence sweeps."""

from __future__ import annotations

import numpy as np
import pytest

from nehari.analysis import (
    convergence_sweep,
    error_evaluator,
    optimality_certificate,
    supnorm_on_circle,
)
from nehari.errors import InputError, NumericalGuardError
from nehari.hankel import check_conditions
from nehari.realization import Realization, eval_coanalytic, gramians
from nehari.solver import central_restricted, solve_full_nehari
from nehari.subspace import build_ladder
from oracles import scalar_system


class TestSupnorm:
    def test_constant(self):
        c = 1.5 - 2.0j
        val = supnorm_on_circle(lambda lam: c * np.eye(2), 64)
        assert val == pytest.approx(abs(c), abs=1e-13)

    def test_optimal_error_all_pass(self):
        R = scalar_system(0.5)
        gp = gramians(R)
        sol = solve_full_nehari(R, gp, check_conditions(R, gp))
        val = supnorm_on_circle(error_evaluator(R, sol), 4096)
        assert val == pytest.approx(4 / 3, abs=1e-8)

    def test_moebius_difference(self):
        # -1/(2+lam) + 2/3 peaks at lam = -1 with value 1/3
        val = supnorm_on_circle(
            lambda lam: np.array([[-1 / (2 + lam) + 2 / 3]]), 4096
        )
        assert val == pytest.approx(1 / 3, abs=1e-6)

    def test_grid_doubling_stability(self):
        R = scalar_system(0.5)
        gp = gramians(R)
        sol = solve_full_nehari(R, gp, check_conditions(R, gp))
        err = error_evaluator(R, sol)
        a = supnorm_on_circle(err, 2048)
        b = supnorm_on_circle(err, 4096)
        assert abs(a - b) < 1e-6

    def test_failure_carries_grid_point(self):
        def bad(lam):
            raise ValueError("boom")

        with pytest.raises(NumericalGuardError, match="lambda"):
            supnorm_on_circle(bad, 4)


class TestOptimalityCertificate:
    def test_level_one_plain_symbol(self):
        # zero analytic part: the error is the symbol itself, and its norm on
        # the constants is the level-1 restricted norm 2/sqrt(3)
        R = scalar_system(0.5)
        lb = build_ladder([], k=1, p=1)
        residual = optimality_certificate(
            lambda lam: eval_coanalytic(R, lam), lb, 2 / np.sqrt(3), n_fft=2048
        )
        assert residual <= 1e-8

    def test_full_error_on_constants(self):
        R = scalar_system(0.5)
        gp = gramians(R)
        sol = solve_full_nehari(R, gp, check_conditions(R, gp))
        lb = build_ladder([], k=1, p=1)
        residual = optimality_certificate(
            error_evaluator(R, sol), lb, 4 / 3, n_fft=2048
        )
        assert residual <= 1e-8

    def test_restricted_level_two(self):
        R = scalar_system(0.5)
        gp = gramians(R)
        lb = build_ladder([], k=2, p=1)
        sol = central_restricted(R, gp, lb)
        residual = optimality_certificate(
            error_evaluator(R, sol), lb, sol.gamma, n_fft=2048
        )
        assert residual <= 1e-8

    def test_grid_floor_validated(self):
        lb = build_ladder([], k=2, p=1)
        with pytest.raises(InputError):
            optimality_certificate(lambda lam: np.eye(1), lb, 1.0, n_fft=8)


class TestConvergenceSweep:
    def test_scalar_slow_pole(self):
        R = scalar_system(0.9)
        rep = convergence_sweep(R, [], k_max=22, n_grid=512)
        assert rep.fit_ok
        assert rep.z0_radius == pytest.approx(0.9, abs=1e-12)
        assert abs(rep.fitted_slope - np.log(0.9)) <= 0.1
        assert rep.gamma_monotone

    def test_root_choice_improves_rate(self):
        R = Realization(
            np.diag([0.9, 0.3]), np.array([[1.0], [1.0]]), np.array([[1.0, 1.0]])
        )
        slow = convergence_sweep(R, [], k_max=16, n_grid=512)
        fast = convergence_sweep(R, [0.9], k_max=16, n_grid=512)
        assert fast.fit_ok and slow.fit_ok
        assert abs(fast.fitted_slope - np.log(0.3)) <= 0.15
        assert fast.fitted_slope < slow.fitted_slope

    def test_annihilating_roots_are_exact(self):
        R = Realization(
            np.diag([0.9, 0.3]), np.array([[1.0], [1.0]]), np.array([[1.0, 1.0]])
        )
        rep = convergence_sweep(R, [0.9, 0.3], k_max=6, n_grid=256)
        assert rep.all_below_floor
        assert not rep.fit_ok
        assert rep.predicted_log_rate is None
        for rec in rep.records:
            assert rec.skipped is None
            assert rec.sup_err <= 1e-10

    def test_too_few_levels_inconclusive(self):
        R = scalar_system(0.5)
        rep = convergence_sweep(R, [], k_max=2, n_grid=128)
        assert not rep.fit_ok
        assert rep.fitted_slope is None

    def test_delta_gap_ratio(self):
        R = Realization(
            np.diag([0.6, 0.2]), np.array([[1.0], [1.0]]), np.array([[1.0, 1.0]])
        )
        rep = convergence_sweep(R, [], k_max=14, n_grid=256)
        ratios = [r for r in rep.delta_ratios]
        assert len(ratios) >= 3
        assert np.median(ratios) == pytest.approx(0.36, rel=0.3)

    def test_fit_residuals_bounded(self):
        R = scalar_system(0.8)
        rep = convergence_sweep(R, [], k_max=18, n_grid=256)
        assert rep.fit_ok
        assert rep.fit_residual_max <= 0.5

    def test_json_round_trip_fields(self):
        R = scalar_system(0.5)
        rep = convergence_sweep(R, [], k_max=5, n_grid=128)
        d = rep.to_json_dict()
        assert d["k_max"] == 5
        assert len(d["records"]) == 5
        rows = list(rep.csv_rows())
        assert rows[0][0] == 1
