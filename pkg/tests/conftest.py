"""Shared graphs for the test suite."""

from typing import List

import pytest

from twqaoa.graph import Graph, from_edge_list, random_three_regular, triangles


def k4() -> Graph:
    return from_edge_list(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


def k33() -> Graph:
    return from_edge_list(6, [(a, b) for a in (0, 1, 2) for b in (3, 4, 5)])


def prism() -> Graph:
    return from_edge_list(
        6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)]
    )


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return from_edge_list(10, outer + spokes + inner)


def random_cubic(count: int, sizes=(8, 10, 12, 14, 16), seed: int = 0) -> List[Graph]:
    """Deterministic list of random cubic graphs cycling through sizes."""
    return [random_three_regular(sizes[i % len(sizes)], seed + i) for i in range(count)]


def random_triangle_free(count: int, sizes=(8, 10, 12, 14, 16), seed: int = 1000) -> List[Graph]:
    graphs = []
    attempt = seed
    while len(graphs) < count:
        g = random_three_regular(sizes[len(graphs) % len(sizes)], attempt)
        attempt += 1
        if not triangles(g):
            graphs.append(g)
    return graphs


@pytest.fixture
def K4() -> Graph:
    return k4()


@pytest.fixture
def K33() -> Graph:
    return k33()


@pytest.fixture
def Prism() -> Graph:
    return prism()


@pytest.fixture
def Petersen() -> Graph:
    return petersen()
