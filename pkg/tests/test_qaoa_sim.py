import math

import numpy as np
import pytest
from scipy.linalg import expm

from twqaoa.cut import cut_values, cutsize
from twqaoa.errors import SimulationError
from twqaoa.graph import Triplet, from_edge_list, triplet_tree
from twqaoa.postprocess import fkl, hlz
from twqaoa.operators import (
    Method,
    maxcut_hamiltonian,
    star_operator,
    triplet_operator,
    twisted_hamiltonian,
)
from twqaoa.qaoa_sim import (
    Angles,
    diagonal_expectation,
    environment_expectation,
    expectation,
    observable_diagonal,
    parity,
    prepare_state,
    sample,
    state_expectation,
)
from tests.conftest import k4, k33, petersen, prism, random_cubic

FKL_P1 = Angles.of((1.130565,), (5.667705,))


def dense_state(g, a):
    """Reference state from matrix exponentials of the full Hamiltonians."""
    dim = 1 << g.n
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    mixer = np.zeros((dim, dim), dtype=complex)
    for i in range(g.n):
        term = np.array([[1]], dtype=complex)
        for j in reversed(range(g.n)):
            term = np.kron(term, x if j == i else np.eye(2))
        mixer += term
    cost = np.diag(cut_values(g).astype(float))
    psi = np.full(dim, 1 / math.sqrt(dim), dtype=complex)
    for beta, gamma in zip(a.beta, a.gamma):
        psi = expm(-1j * gamma * cost) @ psi
        psi = expm(-1j * beta * mixer) @ psi
    return psi


class TestAngles:
    def test_vector_round_trip(self):
        a = Angles.of((0.1, 0.2), (0.3, 0.4))
        assert Angles.from_vector(a.to_vector()) == a

    def test_length_mismatch(self):
        with pytest.raises(SimulationError):
            Angles(2, (0.1,), (0.2, 0.3))

    def test_not_finite(self):
        with pytest.raises(SimulationError):
            Angles.of((float("nan"),), (0.0,))

    def test_to_dict_wraps(self):
        d = Angles.of((-0.5,), (7.0,)).to_dict()
        assert d["beta"] == [round(2 * math.pi - 0.5, 6)]
        assert d["gamma"] == [round(7.0 - 2 * math.pi, 6)]


class TestPrepareState:
    def test_zero_angles_give_half_the_edges(self):
        for g in [k4(), k33(), petersen()]:
            s = prepare_state(g, Angles.zeros(2))
            assert expectation(s, maxcut_hamiltonian(g)) == pytest.approx(g.m / 2)

    def test_norm_and_parity(self):
        rng = np.random.default_rng(0)
        for g in random_cubic(4, sizes=(8, 10)):
            a = Angles.from_vector(rng.uniform(0, 2 * math.pi, size=4))
            s = prepare_state(g, a)
            assert np.linalg.norm(s.amplitudes) == pytest.approx(1.0, abs=1e-12)
            assert parity(s) == pytest.approx(1.0, abs=1e-10)

    def test_matches_dense_reference(self):
        g = k4()
        a = Angles.of((0.3, 1.1), (0.7, 2.5))
        reference = dense_state(g, a)
        assert np.allclose(prepare_state(g, a).amplitudes, reference, atol=1e-10)

    def test_periodic_in_two_pi(self):
        g = prism()
        a = Angles.of((0.4,), (0.9,))
        shifted = Angles.of((0.4 + 2 * math.pi,), (0.9 - 2 * math.pi,))
        h = maxcut_hamiltonian(g)
        assert state_expectation(g, shifted, h) == pytest.approx(state_expectation(g, a, h))

    def test_state_is_read_only(self):
        s = prepare_state(k4(), Angles.zeros(1))
        with pytest.raises(ValueError):
            s.amplitudes[0] = 0

    def test_too_many_qubits(self):
        g = from_edge_list(26, [(i, i + 1) for i in range(25)])
        with pytest.raises(SimulationError):
            prepare_state(g, Angles.zeros(1))


class TestExpectation:
    def test_diagonal_matches_terms(self):
        g = petersen()
        a = Angles.of((0.6,), (0.4,))
        s = prepare_state(g, a)
        h = twisted_hamiltonian(g, Method.HLZ)
        diag = observable_diagonal(h, g.n)
        assert diagonal_expectation(s, diag) == pytest.approx(expectation(s, h))

    def test_diagonal_values(self):
        g = k33()
        diag = observable_diagonal(maxcut_hamiltonian(g), g.n)
        assert diag[0] == 0
        assert diag[0b111000] == 9

    def test_support_outside_state(self):
        s = prepare_state(k4(), Angles.zeros(1))
        with pytest.raises(SimulationError):
            expectation(s, star_operator(0, (1, 2, 9)))

    def test_triplet_tree_at_level_one(self):
        tree = triplet_tree(1)
        op = triplet_operator(Triplet(*tree.marked))
        assert 2 * state_expectation(tree.graph, FKL_P1, op) >= 0.7443 - 5e-5

    def test_twisted_value_at_zero_angles(self):
        g = petersen()
        s = prepare_state(g, Angles.zeros(1))
        expected = g.m / 2 + (2 * g.m / 4) / 3
        assert expectation(s, twisted_hamiltonian(g, Method.FKL)) == pytest.approx(expected)


class TestLocality:
    def test_environment_matches_full_state(self):
        rng = np.random.default_rng(5)
        for g in [prism(), petersen()] + random_cubic(2, sizes=(12,)):
            for p in (1, 2):
                a = Angles.from_vector(rng.uniform(0, math.pi, size=2 * p))
                full = prepare_state(g, a)
                for u, v in sorted(g.edges)[:4]:
                    w = next(x for x in g.neighbors(u) if x != v)
                    op = triplet_operator(Triplet(u, v, w))
                    local = environment_expectation(g, a, op)
                    assert local == pytest.approx(expectation(full, op), abs=1e-10)


class TestSample:
    def test_deterministic(self):
        s = prepare_state(petersen(), Angles.of((0.3,), (0.5,)))
        assert sample(s, 42, 50) == sample(s, 42, 50)

    def test_cuts_have_right_length(self):
        g = k33()
        s = prepare_state(g, Angles.of((0.4,), (0.8,)))
        cuts = sample(s, 1, 20)
        assert len(cuts) == 20
        assert all(len(c) == g.n and set(c) <= {0, 1} for c in cuts)

    def test_zero_angles_sample_uniformly(self):
        g = k4()
        s = prepare_state(g, Angles.zeros(1))
        cuts = sample(s, 3, 2000)
        mean = np.mean([cutsize(g, c) for c in cuts])
        assert mean == pytest.approx(3.0, abs=0.2)

    def test_flip_symmetry_of_probabilities(self):
        s = prepare_state(prism(), Angles.of((0.7, 0.2), (1.3, 0.4)))
        probs = s.probabilities()
        assert np.allclose(probs, probs[::-1])

    def test_no_shots(self):
        s = prepare_state(k4(), Angles.zeros(1))
        with pytest.raises(SimulationError):
            sample(s, 0, 0)

    @pytest.mark.parametrize(
        "method, procedure, graph",
        [
            (Method.FKL, fkl, petersen()),
            (Method.FKL, fkl, prism()),
            (Method.HLZ, hlz, petersen()),
            (Method.HLZ, hlz, k33()),
        ],
    )
    @pytest.mark.parametrize("a", [FKL_P1, Angles.of((0.4, 0.9), (0.8, 2.1))])
    def test_post_processed_samples_reach_twisted_value(self, method, procedure, graph, a):
        s = prepare_state(graph, a)
        target = expectation(s, twisted_hamiltonian(graph, method))
        sizes = [cutsize(graph, procedure(graph, c)) for c in sample(s, 11, 1500)]
        sigma = np.std(sizes) / math.sqrt(len(sizes))
        assert np.mean(sizes) >= target - 3 * sigma - 1e-9
