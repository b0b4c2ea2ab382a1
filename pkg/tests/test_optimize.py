import math

import pytest

from twqaoa.cut import cutsize, max_cut_exact
from twqaoa.environments import EnvironmentKind
from twqaoa.errors import NotCubicError, OptimizationError, SimulationError, TriangleError
from twqaoa.graph import from_edge_list
from twqaoa.operators import Method
from twqaoa.optimize import optimize_angles, polish_angles, run_restarts, twisted_qaoa_run
from twqaoa.qaoa_sim import Angles
from twqaoa.treeval import certified_tree_bound
from tests.conftest import k4, k33, petersen, random_cubic


def smooth(a: Angles) -> float:
    return sum(math.cos(b - 0.5) for b in a.beta) + sum(math.sin(g) for g in a.gamma)


class TestRestarts:
    def test_constant_objective(self):
        results = run_restarts(lambda a: 1.0, 1, restarts=3, seed=0)
        assert [r.value for r in results] == [1.0, 1.0, 1.0]

    def test_never_below_start(self):
        for r in run_restarts(smooth, 2, restarts=5, seed=1):
            assert r.value >= r.start_value
            assert r.evaluations > 0

    def test_deterministic_for_seed(self):
        first = optimize_angles(smooth, 1, restarts=4, seed=9)
        second = optimize_angles(smooth, 1, restarts=4, seed=9)
        assert first == second

    def test_workers_do_not_change_result(self):
        serial = optimize_angles(smooth, 1, restarts=4, seed=3, workers=1)
        threaded = optimize_angles(smooth, 1, restarts=4, seed=3, workers=3)
        assert serial == threaded

    def test_finds_maximum(self):
        _, value = optimize_angles(smooth, 1, restarts=4, seed=2)
        assert value == pytest.approx(2.0, abs=1e-6)

    def test_invalid_arguments(self):
        with pytest.raises(OptimizationError):
            run_restarts(smooth, 1, restarts=0)
        with pytest.raises(OptimizationError):
            run_restarts(smooth, 0, restarts=1)

    def test_non_finite_objective(self):
        with pytest.raises(OptimizationError):
            optimize_angles(lambda a: float("nan"), 1, restarts=1, seed=0)


class TestPolish:
    def test_climbs_from_start(self):
        start = Angles.of((0.9,), (1.2,))
        angles, value = polish_angles(smooth, start)
        assert value == pytest.approx(2.0, abs=1e-6)
        assert angles.beta[0] == pytest.approx(0.5, abs=1e-3)

    def test_reproducible(self):
        start = Angles.of((0.2, 1.0), (0.4, 2.0))
        assert polish_angles(smooth, start) == polish_angles(smooth, start)

    def test_stays_at_optimum(self):
        start = Angles.of((0.5,), (math.pi / 2,))
        angles, value = polish_angles(smooth, start)
        assert value >= smooth(start)
        assert angles.beta[0] == pytest.approx(0.5, abs=1e-4)


class TestTreeObjectives:
    def test_bare_level_one(self):
        _, value = optimize_angles(
            lambda a: certified_tree_bound(EnvironmentKind.EDGE, 1, a), 1, restarts=8, seed=0
        )
        assert value >= 0.6924 - 1e-4

    def test_fkl_level_one(self):
        _, value = optimize_angles(
            lambda a: certified_tree_bound(EnvironmentKind.TRIPLET, 1, a), 1, restarts=8, seed=0
        )
        assert value >= 0.7443 - 1e-4


class TestTwistedRun:
    def test_bare_run_on_k33(self):
        record = twisted_qaoa_run(k33(), 1, Method.BARE, shots=64, seed=0, restarts=2)
        assert record.max_cut == 9
        assert 0 < record.mean_ratio <= 1
        assert record.best_cutsize == cutsize(k33(), record.best_cut)
        assert record.mean_ratio == record.raw_mean_ratio

    def test_postprocessing_never_hurts(self):
        g = petersen()
        for method in (Method.FKL, Method.HLZ):
            record = twisted_qaoa_run(g, 1, method, shots=100, seed=4, restarts=2)
            assert record.mean_ratio >= record.raw_mean_ratio
            assert record.best_cutsize <= max_cut_exact(g)[0]

    def test_record_document(self):
        record = twisted_qaoa_run(k4(), 1, "fkl", shots=10, seed=1, restarts=1)
        doc = record.to_dict()
        assert doc["method"] == "fkl"
        assert doc["shots"] == 10
        assert set(doc) >= {"beta", "gamma", "value", "best_cut", "mean_ratio"}
        assert len(doc["best_cut"]) == 4

    def test_zero_shots(self):
        with pytest.raises(SimulationError):
            twisted_qaoa_run(k4(), 1, shots=0)

    def test_hlz_needs_triangle_free(self):
        with pytest.raises(TriangleError):
            twisted_qaoa_run(k4(), 1, Method.HLZ, shots=10)

    def test_not_cubic(self):
        with pytest.raises(NotCubicError):
            twisted_qaoa_run(from_edge_list(3, [(0, 1), (1, 2)]), 1, shots=10)

    @pytest.mark.slow
    def test_twisted_objective_dominates(self):
        # ratios lie in [0, 1]: each sample mean has standard error <= 1/(2 sqrt(shots))
        shots = 500
        sigma = math.sqrt(2) / (2 * math.sqrt(shots))
        for i, g in enumerate(random_cubic(20, sizes=(8, 10, 12, 14, 16), seed=500)):
            bare = twisted_qaoa_run(g, 1, Method.BARE, shots=shots, seed=i, restarts=4)
            twisted = twisted_qaoa_run(g, 1, Method.FKL, shots=shots, seed=i, restarts=4)
            assert twisted.value >= bare.value - 1e-6
            assert twisted.mean_ratio >= bare.raw_mean_ratio - 3 * sigma
