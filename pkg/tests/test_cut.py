from fractions import Fraction

import numpy as np
import pytest

from twqaoa.cut import (
    all_cuts,
    constant_cut,
    cut_values,
    cutsize,
    edge_l_total,
    flip,
    format_cut,
    good_triplets,
    l_edge,
    l_triplet,
    max_cut_exact,
    mc_upper_bound,
    parse_cut,
    random_cut,
    triplet_l_total,
    unsat_sets,
    unsatisfied_degree,
)
from twqaoa.errors import CutError, GraphError, NotCubicError
from twqaoa.graph import Triplet, from_edge_list, triplets
from tests.conftest import k4, k33, petersen, prism, random_cubic

BIPARTITION = (0, 0, 0, 1, 1, 1)


class TestCutsize:
    def test_examples(self):
        assert cutsize(k4(), constant_cut(4)) == 0
        assert cutsize(k33(), BIPARTITION) == 9
        assert cutsize(k4(), parse_cut("0011")) == 4

    def test_length_mismatch(self):
        with pytest.raises(CutError):
            cutsize(k4(), (0, 1))

    def test_matches_value_table(self):
        g = petersen()
        values = cut_values(g)
        for z, c in enumerate(all_cuts(g.n)[:64]):
            assert values[z] == cutsize(g, c)


class TestFlip:
    def test_examples(self):
        assert flip((0, 0, 0, 0), {1, 2}) == (0, 1, 1, 0)
        assert flip((0, 1, 1), set()) == (0, 1, 1)

    def test_involution_and_global_symmetry(self):
        rng = np.random.default_rng(3)
        g = petersen()
        for _ in range(20):
            c = random_cut(g.n, rng)
            w = {int(v) for v in rng.integers(0, g.n, size=4)}
            assert flip(flip(c, w), w) == c
            assert cutsize(g, flip(c, range(g.n))) == cutsize(g, c)

    def test_single_flip_gain(self):
        rng = np.random.default_rng(4)
        for g in random_cubic(5):
            c = random_cut(g.n, rng)
            for v in range(g.n):
                unsat = unsatisfied_degree(g, c, v)
                assert cutsize(g, flip(c, [v])) - cutsize(g, c) == unsat - (3 - unsat)

    def test_out_of_range(self):
        with pytest.raises(CutError):
            flip((0, 1), [2])


class TestParse:
    def test_round_trip_string(self):
        assert format_cut(parse_cut("0110")) == "0110"

    @pytest.mark.parametrize("text", ["", "012", "ab"])
    def test_invalid(self, text):
        with pytest.raises(CutError):
            parse_cut(text)

    def test_length_checked(self):
        with pytest.raises(CutError):
            parse_cut("010", 4)


class TestGoodTriplets:
    def test_constant_cut_all_good(self):
        for g in random_cubic(5):
            assert len(good_triplets(g, constant_cut(g.n))) == 2 * g.m

    def test_bipartition_none_good(self):
        assert good_triplets(k33(), BIPARTITION) == set()

    def test_average_over_all_cuts(self):
        g = petersen()
        cuts = all_cuts(g.n)
        total = sum(len(good_triplets(g, c)) for c in cuts)
        assert Fraction(total, len(cuts)) == Fraction(len(triplets(g)), 4)


class TestUnsatSets:
    def test_constant_cut(self):
        g = petersen()
        v2, v3 = unsat_sets(g, constant_cut(g.n))
        assert v3 == set(range(g.n)) and v2 == set()

    def test_bipartition(self):
        assert unsat_sets(k33(), BIPARTITION) == (set(), set())

    def test_averages_over_all_cuts(self):
        g = petersen()
        cuts = all_cuts(g.n)
        sizes = [unsat_sets(g, c) for c in cuts]
        assert Fraction(sum(len(v3) for _, v3 in sizes), len(cuts)) == Fraction(g.n, 8)
        # two of three neighbors on the same side: 3 of the 8 neighbor patterns
        assert Fraction(sum(len(v2) for v2, _ in sizes), len(cuts)) == Fraction(3 * g.n, 8)

    def test_requires_cubic(self):
        with pytest.raises(NotCubicError):
            unsat_sets(from_edge_list(3, [(0, 1), (1, 2)]), (0, 0, 0))


class TestMaxCutExact:
    @pytest.mark.parametrize(
        "graph, expected", [(k4(), 4), (k33(), 9), (petersen(), 12), (prism(), 7)]
    )
    def test_known_values(self, graph, expected):
        value, witness = max_cut_exact(graph)
        assert value == expected
        assert cutsize(graph, witness) == expected
        assert witness[0] == 0

    def test_matches_brute_force(self):
        for g in random_cubic(5, sizes=(8, 10)):
            brute = max(cutsize(g, c) for c in all_cuts(g.n))
            assert max_cut_exact(g)[0] == brute

    def test_too_large(self):
        g = from_edge_list(27, [(i, i + 1) for i in range(26)])
        with pytest.raises(GraphError):
            max_cut_exact(g)


class TestUpperBound:
    def test_examples(self):
        assert mc_upper_bound(prism()) == 7
        assert mc_upper_bound(k33()) == 9
        assert mc_upper_bound(k4()) == 4

    def test_bounds_exact_value(self):
        graphs = [k4(), k33(), prism(), petersen()] + random_cubic(50, sizes=(6, 8, 10, 12, 14))
        for g in graphs:
            assert mc_upper_bound(g) >= max_cut_exact(g)[0]


class TestLFractions:
    def test_triangle_free(self):
        g = k33()
        assert all(l_edge(g, e) == 1 for e in g.edges)

    def test_k4(self):
        g = k4()
        assert all(l_edge(g, e) == Fraction(4, 5) for e in g.edges)
        assert all(l_triplet(g, t) == Fraction(2, 5) for t in triplets(g))

    def test_not_an_edge(self):
        with pytest.raises(GraphError):
            l_edge(k33(), (0, 1))

    def test_sums_bound_max_cut(self):
        graphs = [k4(), prism(), petersen()] + random_cubic(20, sizes=(6, 8, 10, 12, 14))
        for g in graphs:
            assert triplet_l_total(g) == edge_l_total(g)
            assert edge_l_total(g) >= max_cut_exact(g)[0]

    def test_explicit_triplet(self):
        g = prism()
        # edge 0-1 is in a triangle, edge 0-3 is not
        assert l_triplet(g, Triplet(0, 1, 3)) == (Fraction(4, 5) + 1) / 4
