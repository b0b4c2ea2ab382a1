"""
Cuts and MaxCut Combinatorics

A cut is a tuple of 0/1 colors indexed by vertex. This module measures cuts (cutsize,
good triplets, unsatisfied-degree sets), solves MaxCut exactly by enumeration for small
graphs and provides the triangle/crossed-square upper bound with the per-edge and
per-triplet L-fractions used by the mediant argument.
"""

import logging
from fractions import Fraction
from typing import Iterable, List, Optional, Set, Tuple

import numpy as np

from .errors import CutError, GraphError
from .graph import Graph, Triplet, crossed_squares, isolated_triangles, triangles, triplets

logger = logging.getLogger(__name__)

Cut = Tuple[int, ...]

MAX_EXACT_VERTICES = 26
_CHUNK_BITS = 20


def validate_cut(g: Graph, c: Cut) -> None:
    """
    Raises:
        CutError: Length differs from g.n or an entry is not 0/1
    """
    if len(c) != g.n:
        raise CutError(f"Cut has length {len(c)} but the graph has {g.n} vertices")
    if any(bit not in (0, 1) for bit in c):
        raise CutError("Cut entries must be 0 or 1")


def parse_cut(text: str, n: Optional[int] = None) -> Cut:
    """Parse a 0/1 string (vertex 0 leftmost)."""
    text = text.strip()
    if not text or any(ch not in "01" for ch in text):
        raise CutError(f"Cut must be a non-empty string of 0/1 characters, got {text!r}")
    if n is not None and len(text) != n:
        raise CutError(f"Cut has length {len(text)} but the graph has {n} vertices")
    return tuple(int(ch) for ch in text)


def format_cut(c: Cut) -> str:
    return "".join(str(bit) for bit in c)


def constant_cut(n: int, color: int = 0) -> Cut:
    return (color,) * n


def random_cut(n: int, rng: np.random.Generator) -> Cut:
    """Uniformly random cut drawn from a numpy Generator."""
    return tuple(int(b) for b in rng.integers(0, 2, size=n))


def cutsize(g: Graph, c: Cut) -> int:
    """Number of satisfied (bichromatic) edges."""
    validate_cut(g, c)
    return sum(1 for u, v in g.edges if c[u] != c[v])


def flip(c: Cut, w: Iterable[int]) -> Cut:
    """Invert the colors on the vertex set w."""
    flipped = set(w)
    for v in flipped:
        if not 0 <= v < len(c):
            raise CutError(f"Cannot flip vertex {v} of a cut with {len(c)} entries")
    return tuple(1 - bit if v in flipped else bit for v, bit in enumerate(c))


def is_good(c: Cut, t: Triplet) -> bool:
    return c[t.c] == c[t.j] == c[t.k]


def good_triplets(g: Graph, c: Cut) -> Set[Triplet]:
    """Monochromatic triplets under c."""
    validate_cut(g, c)
    return {t for t in triplets(g) if is_good(c, t)}


def unsatisfied_degree(g: Graph, c: Cut, v: int) -> int:
    """Number of monochromatic edges at v."""
    return sum(1 for w in g.adjacency[v] if c[w] == c[v])


def unsat_sets(g: Graph, c: Cut) -> Tuple[Set[int], Set[int]]:
    """
    Vertices with exactly two and exactly three unsatisfied incident edges.

    Returns:
        (V2, V3)

    Raises:
        NotCubicError: g is not 3-regular
    """
    g.require_cubic("unsat_sets")
    validate_cut(g, c)
    v2, v3 = set(), set()
    for v in range(g.n):
        d = unsatisfied_degree(g, c, v)
        if d == 3:
            v3.add(v)
        elif d == 2:
            v2.add(v)
    return v2, v3


def cut_values(g: Graph, start: int = 0, stop: Optional[int] = None) -> np.ndarray:
    """
    Cutsize of every basis index in [start, stop); bit i of the index is vertex i's color.

    Defaults to the full range 0..2^n - 1.
    """
    if stop is None:
        stop = 1 << g.n
    index = np.arange(start, stop, dtype=np.int64)
    values = np.zeros(stop - start, dtype=np.int16)
    for u, v in g.sorted_edges():
        values += (((index >> u) ^ (index >> v)) & 1).astype(np.int16)
    return values


def max_cut_exact(g: Graph) -> Tuple[int, Cut]:
    """
    Exact MaxCut by enumerating the 2^(n-1) cuts that keep vertex 0 at color 0.

    Returns:
        (MC(G), a maximizing cut; the smallest index among optima)

    Raises:
        GraphError: n exceeds the enumeration budget
    """
    if g.n > MAX_EXACT_VERTICES:
        raise GraphError(f"Exact MaxCut limited to {MAX_EXACT_VERTICES} vertices, got {g.n}")
    if g.n <= 1:
        return 0, (0,) * g.n

    # vertex 0 stays at color 0: only even indices are enumerated
    half = 1 << (g.n - 1)
    chunk = 1 << _CHUNK_BITS
    best_value, best_index = -1, 0
    for lo in range(0, half, chunk):
        hi = min(half, lo + chunk)
        values = cut_values(g, 2 * lo, 2 * hi)[::2]
        arg = int(np.argmax(values))
        if values[arg] > best_value:
            best_value, best_index = int(values[arg]), 2 * (lo + arg)

    witness = tuple((best_index >> v) & 1 for v in range(g.n))
    logger.debug(f"MC={best_value} for n={g.n}")
    return best_value, witness


def _is_k4(g: Graph) -> bool:
    return g.n == 4 and g.m == 6


def mc_upper_bound(g: Graph) -> int:
    """|E| - #isolated triangles - #crossed squares, with MC(K4) = 4."""
    if _is_k4(g):
        return 4
    return g.m - len(isolated_triangles(g)) - len(crossed_squares(g))


def triangle_edges(g: Graph) -> Set[Tuple[int, int]]:
    """Edges lying in at least one triangle."""
    found = set()
    for a, b, c in triangles(g):
        found.update({(a, b), (a, c), (b, c)})
    return found


def l_edge(g: Graph, e: Tuple[int, int], tri_edges: Optional[Set[Tuple[int, int]]] = None) -> Fraction:
    """1 for an edge outside every triangle, 4/5 otherwise."""
    key = (min(e), max(e))
    if key not in g.edges:
        raise GraphError(f"{key} is not an edge")
    if tri_edges is None:
        tri_edges = triangle_edges(g)
    return Fraction(4, 5) if key in tri_edges else Fraction(1)


def l_triplet(g: Graph, t: Triplet, tri_edges: Optional[Set[Tuple[int, int]]] = None) -> Fraction:
    """Quarter of the L-values of the triplet's two edges."""
    if tri_edges is None:
        tri_edges = triangle_edges(g)
    return (l_edge(g, (t.c, t.j), tri_edges) + l_edge(g, (t.c, t.k), tri_edges)) / 4


def triplet_l_total(g: Graph) -> Fraction:
    """Sum of l_triplet over all triplets; equals the edge sum on cubic graphs."""
    tri_edges = triangle_edges(g)
    return sum((l_triplet(g, t, tri_edges) for t in triplets(g)), Fraction(0))


def edge_l_total(g: Graph) -> Fraction:
    tri_edges = triangle_edges(g)
    return sum((l_edge(g, e, tri_edges) for e in g.sorted_edges()), Fraction(0))


def all_cuts(n: int) -> List[Cut]:
    """Every cut on n vertices, little-endian index order (test and baseline helper)."""
    return [tuple((z >> v) & 1 for v in range(n)) for z in range(1 << n)]
