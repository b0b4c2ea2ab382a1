"""
Graph Representation

Simple undirected graphs on the ordered vertex set 0..n-1, with the cubic-graph
combinatorics the certificates rely on: triplets, girth, triangles, p-environments,
the p-trees T^(p) and a pairing-model generator for random 3-regular instances.

All values are immutable once built and can be shared between threads.
"""

import logging
import math
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import GraphError, NotCubicError

logger = logging.getLogger(__name__)

MAX_PAIRING_ATTEMPTS = 10_000


@dataclass(frozen=True)
class Graph:
    """
    Simple undirected graph with vertices 0..n-1.

    Args:
        n: Vertex count
        edges: Unordered edges stored as (u, v) with u < v
        adjacency: Per-vertex sorted neighbor tuple
    """

    n: int
    edges: FrozenSet[Tuple[int, int]]
    adjacency: Tuple[Tuple[int, ...], ...]

    @property
    def m(self) -> int:
        """Number of edges."""
        return len(self.edges)

    def neighbors(self, v: int) -> Tuple[int, ...]:
        """Sorted neighbors of v (the ordered neighborhood A(v))."""
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def sorted_edges(self) -> List[Tuple[int, int]]:
        """Edges in lexicographic order (deterministic iteration)."""
        return sorted(self.edges)

    def is_cubic(self) -> bool:
        return self.n > 0 and all(len(nb) == 3 for nb in self.adjacency)

    def require_cubic(self, purpose: str = "this operation") -> None:
        """
        Raise NotCubicError unless every vertex has degree 3.

        Args:
            purpose: Short description used in the error message
        """
        if not self.is_cubic():
            degrees = sorted({len(nb) for nb in self.adjacency})
            raise NotCubicError(f"{purpose} requires a 3-regular graph (degrees found: {degrees})")


class Triplet(NamedTuple):
    """Central vertex c with two distinct neighbors j < k."""

    c: int
    j: int
    k: int


@dataclass(frozen=True)
class MarkedGraph:
    """
    Graph with an ordered tuple of distinguished vertices.

    The marked tuple is the support S of an observable (an edge, a triplet or a star).
    `origin` maps local vertex ids back to the graph the environment was cut from.
    """

    graph: Graph
    marked: Tuple[int, ...]
    origin: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if len(set(self.marked)) != len(self.marked):
            raise GraphError(f"Marked vertices must be distinct: {self.marked}")
        for v in self.marked:
            if not 0 <= v < self.graph.n:
                raise GraphError(f"Marked vertex {v} outside graph with n={self.graph.n}")
        if self.origin is not None and len(self.origin) != self.graph.n:
            raise GraphError("origin must list one source vertex per local vertex")


def from_edge_list(n: int, pairs: Iterable[Sequence[int]]) -> Graph:
    """
    Build a validated Graph.

    Args:
        n: Vertex count
        pairs: Vertex pairs, each listed once in either orientation

    Returns:
        Graph with consistent edge set and adjacency lists

    Raises:
        GraphError: Self-loop, duplicate edge or out-of-range vertex
    """
    if n < 0:
        raise GraphError(f"Vertex count must be non-negative, got {n}")

    edges = set()
    neighbors: List[List[int]] = [[] for _ in range(n)]
    for pair in pairs:
        u, v = (int(x) for x in pair)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"Edge ({u}, {v}) references a vertex outside [0, {n})")
        if u == v:
            raise GraphError(f"Self-loop at vertex {u}")
        key = (min(u, v), max(u, v))
        if key in edges:
            raise GraphError(f"Duplicate edge {key}")
        edges.add(key)
        neighbors[u].append(v)
        neighbors[v].append(u)

    adjacency = tuple(tuple(sorted(nb)) for nb in neighbors)
    return Graph(n=n, edges=frozenset(edges), adjacency=adjacency)


def triplets(g: Graph) -> List[Triplet]:
    """
    All triplets (c, j, k) of g, ordered by (c, j, k).

    For a 3-regular graph there are exactly 2|E| of them and every edge lies in 4.
    """
    return [
        Triplet(c, j, k)
        for c in range(g.n)
        for j, k in combinations(g.adjacency[c], 2)
    ]


def girth(g: Graph) -> Union[int, float]:
    """
    Length of the shortest cycle, or math.inf for forests.

    Runs a BFS from every vertex; a non-tree edge met at depths d(u), d(w) closes a
    cycle of length at most d(u) + d(w) + 1 and the minimum over all roots is exact.
    """
    best: Union[int, float] = math.inf
    for root in range(g.n):
        dist = {root: 0}
        parent = {root: -1}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] + 1 >= best:
                break
            for w in g.adjacency[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    best = min(best, dist[u] + dist[w] + 1)
    return best


def distances_from(g: Graph, sources: Sequence[int], limit: Optional[int] = None) -> Dict[int, int]:
    """BFS distances from a vertex set, optionally truncated at `limit`."""
    dist = {v: 0 for v in sources}
    queue = deque(sources)
    while queue:
        u = queue.popleft()
        if limit is not None and dist[u] >= limit:
            continue
        for w in g.adjacency[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def p_environment(g: Graph, s: Sequence[int], p: int) -> MarkedGraph:
    """
    The p-environment G^(p)[S]: union of all paths of length at most p starting in S.

    Vertices are relabeled: the support comes first in the given order, the rest follow
    by (distance from S, original index). For p = 0 the induced subgraph G[S] is returned.

    Args:
        g: Source graph
        s: Support vertices (distinct)
        p: Level (p >= 0)

    Returns:
        MarkedGraph with marked = (0, ..., |S|-1) and origin pointing back into g
    """
    support = tuple(int(v) for v in s)
    if len(set(support)) != len(support):
        raise GraphError(f"Support vertices must be distinct: {support}")
    for v in support:
        if not 0 <= v < g.n:
            raise GraphError(f"Support vertex {v} outside [0, {g.n})")
    if p < 0:
        raise GraphError(f"Level must be non-negative, got {p}")

    dist = distances_from(g, support, limit=p)
    if p == 0:
        kept = [(u, v) for u, v in g.sorted_edges() if u in dist and v in dist]
    else:
        # a path of length <= p uses edge {u, w} only if one endpoint is within p - 1
        kept = [
            (u, v) for u, v in g.sorted_edges()
            if min(dist.get(u, p + 1), dist.get(v, p + 1)) <= p - 1
        ]

    support_set = set(support)
    rest = sorted((v for v in dist if v not in support_set), key=lambda v: (dist[v], v))
    order = list(support) + rest
    local = {v: i for i, v in enumerate(order)}
    sub = from_edge_list(len(order), [(local[u], local[v]) for u, v in kept])
    return MarkedGraph(graph=sub, marked=tuple(range(len(support))), origin=tuple(order))


def _grow_tree(support_size: int, support_edges: List[Tuple[int, int]], p: int) -> MarkedGraph:
    """Attach fresh children until every vertex closer than p to the support has degree 3."""
    if p < 1:
        raise GraphError(f"Tree level must be at least 1, got {p}")

    pairs = list(support_edges)
    degree = [0] * support_size
    for u, v in pairs:
        degree[u] += 1
        degree[v] += 1

    n = support_size
    frontier = []
    for v in range(support_size):
        for _ in range(3 - degree[v]):
            pairs.append((v, n))
            frontier.append(n)
            n += 1

    for _ in range(p - 1):
        next_frontier = []
        for v in frontier:
            for _ in range(2):
                pairs.append((v, n))
                next_frontier.append(n)
                n += 1
        frontier = next_frontier

    return MarkedGraph(graph=from_edge_list(n, pairs), marked=tuple(range(support_size)))


def edge_tree(p: int) -> MarkedGraph:
    """T^(p) of an edge: 2 + 4(2^p - 1) vertices, marked (u, v)."""
    return _grow_tree(2, [(0, 1)], p)


def triplet_tree(p: int) -> MarkedGraph:
    """T^(p) of a triplet: 3 + 5(2^p - 1) vertices, marked (c, j, k)."""
    return _grow_tree(3, [(0, 1), (0, 2)], p)


def star_tree(p: int) -> MarkedGraph:
    """T^(p) of a 3-star: 4 + 6(2^p - 1) vertices, marked (c, j, k, l)."""
    return _grow_tree(4, [(0, 1), (0, 2), (0, 3)], p)


def is_tree(g: Graph) -> bool:
    """Connected and acyclic."""
    if g.n == 0:
        return False
    return g.m == g.n - 1 and len(distances_from(g, [0])) == g.n


def triangles(g: Graph) -> List[Tuple[int, int, int]]:
    """All triangles as sorted vertex triples."""
    found = []
    for u, v in g.sorted_edges():
        for w in g.adjacency[u]:
            if w > v and g.has_edge(v, w):
                found.append((u, v, w))
    return found


def _triangle_edges(t: Tuple[int, int, int]) -> List[Tuple[int, int]]:
    a, b, c = t
    return [(a, b), (a, c), (b, c)]


def isolated_triangles(g: Graph) -> List[Tuple[int, int, int]]:
    """Triangles sharing no edge with another triangle."""
    tris = triangles(g)
    edge_count: Dict[Tuple[int, int], int] = {}
    for t in tris:
        for e in _triangle_edges(t):
            edge_count[e] = edge_count.get(e, 0) + 1
    return [t for t in tris if all(edge_count[e] == 1 for e in _triangle_edges(t))]


def crossed_squares(g: Graph) -> List[Tuple[Tuple[int, int, int], Tuple[int, int, int]]]:
    """Pairs of triangles sharing an edge, each pair listed once."""
    tris = triangles(g)
    pairs = []
    for a, b in combinations(tris, 2):
        if set(_triangle_edges(a)) & set(_triangle_edges(b)):
            pairs.append((a, b))
    return pairs


def random_three_regular(n: int, seed: Optional[int] = None) -> Graph:
    """
    Random simple cubic graph from the pairing (configuration) model.

    Stubs are shuffled and paired; pairings with loops or multi-edges are rejected.

    Args:
        n: Vertex count (even, at least 4)
        seed: Seed for numpy's default_rng; identical seeds give identical graphs

    Raises:
        GraphError: n odd or below 4, or no simple pairing within the attempt cap
    """
    if n < 4 or n % 2:
        raise GraphError(f"Cubic graphs need an even vertex count >= 4, got {n}")

    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n), 3)
    for attempt in range(1, MAX_PAIRING_ATTEMPTS + 1):
        pairs = rng.permutation(stubs).reshape(-1, 2)
        if np.any(pairs[:, 0] == pairs[:, 1]):
            continue
        keys = {(int(min(u, v)), int(max(u, v))) for u, v in pairs}
        if len(keys) == len(pairs):
            logger.debug(f"Pairing model succeeded for n={n} after {attempt} attempts")
            return from_edge_list(n, sorted(keys))

    raise GraphError(f"No simple pairing found for n={n} in {MAX_PAIRING_ATTEMPTS} attempts")


def format_edge_list(g: Graph) -> str:
    """Edge-list text: 'n m' header, then one 'u v' line per edge."""
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.sorted_edges())
    return "\n".join(lines) + "\n"


def format_marked(env: MarkedGraph) -> str:
    """Edge-list text with a trailing 'marked: v0 v1 ...' line."""
    marked = " ".join(str(v) for v in env.marked)
    return format_edge_list(env.graph) + f"marked: {marked}\n"


def parse_edge_list(text: str) -> Graph:
    """
    Parse edge-list text.

    Raises:
        GraphError: Missing header, wrong edge count or malformed lines
    """
    rows = [line.split() for line in text.splitlines() if line.strip()]
    rows = [row for row in rows if not row[0].startswith("marked:")]
    if not rows or len(rows[0]) != 2:
        raise GraphError("Edge list must start with a 'n m' header line")
    try:
        n, m = int(rows[0][0]), int(rows[0][1])
        pairs = [(int(row[0]), int(row[1])) for row in rows[1:] if len(row) == 2]
    except ValueError as e:
        raise GraphError(f"Malformed edge list: {e}") from e
    if len(pairs) != len(rows) - 1:
        raise GraphError("Every edge line must contain exactly two vertex indices")
    if len(pairs) != m:
        raise GraphError(f"Header announces {m} edges but {len(pairs)} were listed")
    return from_edge_list(n, pairs)


def read_edge_list(path: Path) -> Graph:
    """Load a graph from an edge-list file."""
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise GraphError(f"Cannot read graph file {path}: {e}") from e
    return parse_edge_list(text)


def write_edge_list(g: Graph, path: Path) -> None:
    """Write a graph as an edge-list file (LF line endings)."""
    output_path = Path(path)
    if output_path.parent and str(output_path.parent) != '.':
        output_path.parent.mkdir(parents=True, exist_ok=True)
    with open(output_path, 'w', newline='\n') as f:
        f.write(format_edge_list(g))
