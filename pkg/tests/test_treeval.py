import math

import numpy as np
import pytest

from twqaoa.certify import WITNESS_ANGLES
from twqaoa.environments import EnvironmentKind
from twqaoa.errors import TreeError
from twqaoa.graph import MarkedGraph, Triplet, edge_tree, from_edge_list, star_tree, triplet_tree
from twqaoa.operators import Method, edge_operator, triplet_operator
from twqaoa.qaoa_sim import Angles, state_expectation
from twqaoa.treeval import (
    TreeEvaluator,
    certified_tree_bound,
    kind_operator,
    kind_tree,
    tree_expectation,
    walsh_hadamard,
)

TOLERANCE = 5e-5


def random_angles(p, seed):
    rng = np.random.default_rng(seed)
    return Angles.from_vector(rng.uniform(0, 2 * math.pi, size=2 * p))


class TestWalshHadamard:
    def test_involution(self):
        x = np.random.default_rng(0).normal(size=16)
        assert np.allclose(walsh_hadamard(walsh_hadamard(x)) / 16, x)

    def test_small(self):
        assert np.allclose(walsh_hadamard([1, 0]), [1, 1])
        assert np.allclose(walsh_hadamard([0, 1, 0, 0]), [1, -1, 1, -1])


class TestAgreementWithStatevector:
    def check(self, kind, p, seed):
        a = random_angles(p, seed)
        tree = kind_tree(kind, p)
        op = kind_operator(kind, tree.marked)
        assert tree_expectation(tree, a, op) == pytest.approx(
            state_expectation(tree.graph, a, op), abs=1e-10
        )

    @pytest.mark.parametrize("seed", range(20))
    @pytest.mark.parametrize("p", [1, 2])
    def test_edge_tree(self, p, seed):
        self.check(EnvironmentKind.EDGE, p, seed)

    @pytest.mark.parametrize("seed", range(20))
    @pytest.mark.parametrize("p", [1, 2])
    def test_triplet_tree(self, p, seed):
        self.check(EnvironmentKind.TRIPLET, p, 100 + seed)

    @pytest.mark.parametrize("seed", range(20))
    def test_star_tree_level_one(self, seed):
        self.check(EnvironmentKind.STAR, 1, 200 + seed)

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(20))
    def test_star_tree_level_two(self, seed):
        self.check(EnvironmentKind.STAR, 2, 300 + seed)

    def test_irregular_tree(self):
        # a path with a pendant, marked at the middle vertices
        g = from_edge_list(6, [(0, 1), (1, 2), (2, 3), (3, 4), (2, 5)])
        t = MarkedGraph(g, (2, 1))
        a = random_angles(2, 4)
        op = edge_operator(2, 1)
        assert tree_expectation(t, a, op) == pytest.approx(
            state_expectation(g, a, op), abs=1e-10
        )


class TestEvaluator:
    def test_marginal_is_distribution(self):
        a = random_angles(3, 1)
        probs = TreeEvaluator(a).marginal(triplet_tree(3))
        assert probs.shape == (8,)
        assert probs.sum() == pytest.approx(1.0, abs=1e-10)
        assert (probs > -1e-12).all()

    def test_naive_matches_memoized(self):
        a = random_angles(3, 2)
        tree = star_tree(3)
        op = kind_operator(EnvironmentKind.STAR, tree.marked)
        fast = tree_expectation(tree, a, op)
        slow = tree_expectation(tree, a, op, naive=True)
        assert fast == pytest.approx(slow, abs=1e-11)

    def test_depth_pruning(self):
        a = random_angles(2, 3)
        op = triplet_operator(Triplet(*triplet_tree(2).marked))
        deeper = triplet_tree(3)
        assert tree_expectation(deeper, a, op) == pytest.approx(
            tree_expectation(triplet_tree(2), a, op), abs=1e-9
        )

    def test_zero_angles(self):
        tree = edge_tree(2)
        assert tree_expectation(tree, Angles.zeros(2), edge_operator(0, 1)) == pytest.approx(0.5)

    def test_rejects_cycle(self):
        g = from_edge_list(3, [(0, 1), (1, 2), (0, 2)])
        with pytest.raises(TreeError):
            tree_expectation(MarkedGraph(g, (0, 1)), Angles.zeros(1), edge_operator(0, 1))

    def test_rejects_support_outside_marked(self):
        tree = edge_tree(1)
        with pytest.raises(TreeError):
            tree_expectation(tree, Angles.zeros(1), edge_operator(0, 2))

    def test_needs_marked_vertex(self):
        with pytest.raises(TreeError):
            TreeEvaluator(Angles.zeros(1)).marginal(MarkedGraph(edge_tree(1).graph, ()))


class TestCertifiedBounds:
    def test_kind_trees(self):
        assert kind_tree("edge", 1).graph.n == 6
        assert kind_tree(EnvironmentKind.STAR, 1).graph.n == 10

    def test_level_range(self):
        with pytest.raises(TreeError):
            certified_tree_bound(EnvironmentKind.EDGE, 7, Angles.zeros(7))
        with pytest.raises(TreeError):
            certified_tree_bound(EnvironmentKind.EDGE, 2, Angles.zeros(1))

    def test_zero_angle_values(self):
        # uniform cut: edge 1/2, triplet 2 * (1/4 + 1/12), star (2/3) * (3/4 + 3/20 + 17/120)
        assert certified_tree_bound("edge", 1, Angles.zeros(1)) == pytest.approx(0.5)
        assert certified_tree_bound("triplet", 1, Angles.zeros(1)) == pytest.approx(2 / 3)
        star = (2 / 3) * (3 / 4 + (2 / 5) * (3 / 8) + (17 / 15) / 8)
        assert certified_tree_bound("star", 1, Angles.zeros(1)) == pytest.approx(star)

    def test_fkl_level_four(self):
        a = WITNESS_ANGLES[(Method.FKL, 4)]
        assert certified_tree_bound(EnvironmentKind.TRIPLET, 4, a) >= 0.8323 - TOLERANCE

    def test_hlz_level_two(self):
        a = WITNESS_ANGLES[(Method.HLZ, 2)]
        assert certified_tree_bound(EnvironmentKind.STAR, 2, a) >= 0.7954 - TOLERANCE

    @pytest.mark.slow
    def test_hlz_level_six(self):
        a = WITNESS_ANGLES[(Method.HLZ, 6)]
        assert certified_tree_bound(EnvironmentKind.STAR, 6, a) >= 0.8582 - TOLERANCE

    def test_bare_level_four(self):
        a = WITNESS_ANGLES[(Method.BARE, 4)]
        assert certified_tree_bound(EnvironmentKind.EDGE, 4, a) >= 0.8168 - TOLERANCE
