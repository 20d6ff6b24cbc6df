"""Tests for the phase-plane geometry: level sets, intersections, contours."""

import math

import numpy as np
import pytest

from qdecision.core import (
    PhasePair,
    TwoChoiceExperiment,
    classical_bounds,
    conditional_classical,
    conditional_quantum,
    quantum_bounds,
)
from qdecision.errors import (
    DegenerateExperimentError,
    DomainError,
    ParallelLinesError,
)
from qdecision.geometry import (
    REGION_ABOVE,
    REGION_BELOW,
    REGION_CLASSICAL,
    REGION_SINGULAR,
    concurrency,
    contour,
    intersect,
    sample_trajectory,
    trajectory,
)

SHAFIR = TwoChoiceExperiment("shafir", 0.97, 0.84, 0.5, 0.63)
CROSON = TwoChoiceExperiment("croson", 0.67, 0.32, 0.5, 0.30)
LI_TAPLIN = TwoChoiceExperiment("li-taplin", 0.83, 0.66, 0.5, 0.60)
BUSEMEYER = TwoChoiceExperiment("busemeyer", 0.91, 0.84, 0.5, 0.66)
ALL_ROWS = (SHAFIR, CROSON, LI_TAPLIN, BUSEMEYER)


def solve_pair_oracle(exp_a, exp_b):
    """Independent 2x2 linear solve for the common level-set point."""
    rows = []
    rhs = []
    for exp in (exp_a, exp_b):
        a = exp.interference_amplitude(0)
        b = exp.interference_amplitude(1)
        target = exp.observed_pk
        rows.append([a * (1 - target), -b * target])
        rhs.append(target - conditional_classical(exp, 0))
    return np.linalg.solve(np.array(rows), np.array(rhs))


class TestTrajectory:
    def test_classical_target_passes_through_origin(self):
        line = trajectory(SHAFIR, conditional_classical(SHAFIR, 0))
        assert line.gamma == pytest.approx(0.0, abs=1e-15)
        assert line.residual(0.0, 0.0) == pytest.approx(0.0, abs=1e-15)
        p = conditional_quantum(SHAFIR, PhasePair(math.pi / 2, math.pi / 2), 0)
        assert p == pytest.approx(line.target, abs=1e-12)

    def test_shafir_admissible_span(self):
        # endpoints by clamping c1 = +/-1 in the line equation
        line = trajectory(SHAFIR, 0.63)
        ends = sorted((line.c0_at(-1.0), line.c0_at(1.0)))
        assert ends[0] == pytest.approx(-0.954, abs=2e-3)
        assert ends[1] == pytest.approx(-0.693, abs=2e-3)

    def test_croson_self_consistency_sweep(self):
        line = trajectory(CROSON, 0.30)
        pairs = sample_trajectory(line, 1024)
        assert pairs
        worst = max(
            abs(conditional_quantum(CROSON, p, 0) - 0.30) for p in pairs
        )
        assert worst < 1e-10

    def test_uses_observed_pk_by_default(self):
        assert trajectory(SHAFIR).target == 0.63

    def test_degenerate_experiment(self):
        with pytest.raises(DegenerateExperimentError):
            trajectory(TwoChoiceExperiment("pure", 0.7, 0.3, 1.0), 0.5)

    def test_target_range(self):
        with pytest.raises(DomainError):
            trajectory(SHAFIR, 1.0)
        with pytest.raises(DomainError):
            trajectory(TwoChoiceExperiment("no-obs", 0.7, 0.3, 0.5))


class TestSampleTrajectory:
    def test_empty_outside_quantum_bounds(self):
        qb = quantum_bounds(SHAFIR, 0).interval
        below = qb.lo / 2
        line = trajectory(SHAFIR, below)
        assert sample_trajectory(line, 64) == []

    def test_empty_iff_outside_bounds(self):
        rng = np.random.default_rng(21)
        for _ in range(200):
            p0, p1, q0 = rng.uniform(0.05, 0.95, 3)
            exp = TwoChoiceExperiment("r", p0, p1, q0)
            target = rng.uniform(0.01, 0.99)
            pairs = sample_trajectory(trajectory(exp, target), 128)
            qb = quantum_bounds(exp, 0).interval
            inside = qb.lo - 1e-9 <= target <= qb.hi + 1e-9
            near_edge = min(abs(target - qb.lo), abs(target - qb.hi)) < 1e-9
            if not near_edge:
                assert bool(pairs) == inside

    def test_vertical_line_shares_c0(self):
        # p0 = 1 kills the choice-1 interference amplitude -> beta = 0
        exp = TwoChoiceExperiment("v", 1.0, 0.5, 0.5)
        line = trajectory(exp, 0.8)
        assert line.beta == pytest.approx(0.0, abs=1e-15)
        pairs = sample_trajectory(line, 32)
        assert pairs
        c0s = {round(p.c0, 12) for p in pairs}
        assert len(c0s) == 1

    def test_principal_branch(self):
        pairs = sample_trajectory(trajectory(SHAFIR, 0.63), 64)
        for p in pairs:
            assert 0.0 <= p.theta0 <= math.pi
            assert 0.0 <= p.theta1 <= math.pi

    def test_on_target_everywhere(self):
        line = trajectory(SHAFIR, 0.63)
        pairs = sample_trajectory(line, 1024)
        assert pairs
        for p in pairs:
            assert conditional_quantum(SHAFIR, p, 0) == pytest.approx(0.63, abs=1e-10)

    def test_count_validation(self):
        with pytest.raises(DomainError):
            sample_trajectory(trajectory(SHAFIR, 0.63), 1)


class TestIntersect:
    def test_identical_lines_error(self):
        a = trajectory(SHAFIR, 0.63)
        with pytest.raises(ParallelLinesError):
            intersect(a, trajectory(SHAFIR, 0.63))

    def test_shafir_croson(self):
        c0, c1, in_range = intersect(trajectory(SHAFIR), trajectory(CROSON))
        oracle = solve_pair_oracle(SHAFIR, CROSON)
        assert c0 == pytest.approx(oracle[0], abs=1e-12)
        assert c1 == pytest.approx(oracle[1], abs=1e-12)
        assert c0 == pytest.approx(-0.918, abs=2e-3)
        assert c1 == pytest.approx(-0.721, abs=2e-3)
        assert in_range

    def test_shafir_busemeyer_near_the_same_point(self):
        c0a, c1a, _ = intersect(trajectory(SHAFIR), trajectory(CROSON))
        c0b, c1b, _ = intersect(trajectory(SHAFIR), trajectory(BUSEMEYER))
        assert c0b == pytest.approx(-0.920, abs=2e-3)
        assert c1b == pytest.approx(-0.738, abs=2e-3)
        assert math.hypot(c0a - c0b, c1a - c1b) < 0.02

    def test_intersection_reproduces_both_targets(self):
        c0, c1, in_range = intersect(trajectory(SHAFIR), trajectory(CROSON))
        assert in_range
        phases = PhasePair(math.acos(c0), math.acos(c1))
        assert conditional_quantum(SHAFIR, phases, 0) == pytest.approx(0.63, abs=1e-10)
        assert conditional_quantum(CROSON, phases, 0) == pytest.approx(0.30, abs=1e-10)


class TestConcurrency:
    def test_two_experiments_zero_residuals(self):
        rep = concurrency([SHAFIR, CROSON])
        assert abs(rep.residuals[0]) < 1e-12
        assert abs(rep.residuals[1]) < 1e-12

    def test_odd_man_out(self):
        rep = concurrency([SHAFIR, CROSON, LI_TAPLIN, BUSEMEYER], fit_pair=(0, 1))
        residuals = dict(zip(rep.labels, rep.residuals))
        assert abs(residuals["busemeyer"]) == pytest.approx(0.0007, abs=3e-4)
        assert abs(residuals["li-taplin"]) == pytest.approx(0.02, abs=5e-3)
        assert abs(residuals["li-taplin"]) >= 10 * abs(residuals["busemeyer"])

    def test_classical_target_zero_residual_at_origin(self):
        exp = TwoChoiceExperiment("cl", 0.7, 0.4, 0.5, conditional_classical(SHAFIR, 0))
        line = trajectory(exp, conditional_classical(exp, 0))
        assert line.residual(0.0, 0.0) == pytest.approx(0.0, abs=1e-15)

    def test_needs_two(self):
        with pytest.raises(DomainError):
            concurrency([SHAFIR])
        with pytest.raises(DomainError):
            concurrency([SHAFIR, CROSON], fit_pair=(0, 0))


class TestContour:
    def test_quarter_turn_cell_is_classical(self):
        grid = contour(SHAFIR, 9)  # 9 points: pi/2 on the grid
        idx = 2  # thetas[2] = pi/2
        assert grid.thetas[idx] == pytest.approx(math.pi / 2, abs=1e-12)
        assert grid.values[idx, idx] == pytest.approx(0.905, abs=1e-12)
        assert grid.regions[idx, idx] == REGION_CLASSICAL

    def test_figure_inputs_show_three_regions(self):
        exp = TwoChoiceExperiment("fig-left", 6 / 8, 1 / 8, 0.5)
        grid = contour(exp, 201)
        f = grid.region_fractions()
        assert f[REGION_BELOW] > 0
        assert f[REGION_ABOVE] > 0
        assert f[REGION_CLASSICAL] > 0

    def test_mirror_symmetry(self):
        exp = TwoChoiceExperiment("fig-left", 6 / 8, 1 / 8, 0.5)
        grid = contour(exp, 101)
        v = grid.values
        assert np.allclose(v, v[::-1, :], atol=1e-12, equal_nan=True)
        assert np.allclose(v, v[:, ::-1], atol=1e-12, equal_nan=True)

    def test_closer_probabilities_leave_band_more(self):
        far = contour(TwoChoiceExperiment("far", 6 / 8, 1 / 8, 0.5), 201)
        close = contour(TwoChoiceExperiment("close", 3 / 8, 1 / 8, 0.5), 201)
        assert close.outside_classical_fraction() > far.outside_classical_fraction()

    def test_swapped_ordering_accepted(self):
        grid = contour(TwoChoiceExperiment("swap", 1 / 8, 6 / 8, 0.5), 51)
        assert grid.outside_classical_fraction() > 0

    def test_region_labels_consistent(self):
        grid = contour(SHAFIR, 51)
        band = classical_bounds(SHAFIR, 0)
        for i in range(51):
            for j in range(51):
                v = grid.values[i, j]
                label = grid.regions[i, j]
                if math.isnan(v):
                    assert label == REGION_SINGULAR
                elif v < band.lo - 1e-12:
                    assert label == REGION_BELOW
                elif v > band.hi + 1e-12:
                    assert label == REGION_ABOVE
                else:
                    assert label == REGION_CLASSICAL

    def test_singular_cells_flagged(self):
        exp = TwoChoiceExperiment("sing", 0.5, 0.5, 0.5)
        grid = contour(exp, 9)  # theta = pi on the grid at index 4
        assert grid.regions[4, 4] == REGION_SINGULAR
        assert math.isnan(grid.values[4, 4])

    def test_values_match_direct_evaluation(self):
        grid = contour(SHAFIR, 21)
        for i in (0, 5, 13, 20):
            for j in (0, 7, 20):
                direct = conditional_quantum(
                    SHAFIR, PhasePair(float(grid.thetas[i]), float(grid.thetas[j])), 0
                )
                assert grid.values[i, j] == pytest.approx(direct, abs=1e-12)

    def test_resolution_validation(self):
        with pytest.raises(DomainError):
            contour(SHAFIR, 1)
