"""
Environment Catalogs

The 1-environments an edge, a triplet or a 3-star can have inside a cubic graph,
transcribed as explicit edge lists, plus the marked isomorphism test used to
classify environments cut out of concrete graphs.
"""

import logging
from enum import Enum
from functools import lru_cache
from itertools import permutations
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import NoMatchError, TriangleError
from .graph import Graph, MarkedGraph, from_edge_list, p_environment, triangles, triplets

logger = logging.getLogger(__name__)


class EnvironmentKind(str, Enum):
    """Support shape of an observable."""

    EDGE = "edge"
    TRIPLET = "triplet"
    STAR = "star"

    @property
    def symmetries(self) -> List[Tuple[int, ...]]:
        """Permutations of the marked positions an isomorphism may apply."""
        if self is EnvironmentKind.EDGE:
            return [(0, 1), (1, 0)]
        if self is EnvironmentKind.TRIPLET:
            return [(0, 1, 2), (0, 2, 1)]
        return [(0,) + perm for perm in permutations((1, 2, 3))]


# Edge lists use symbolic names; marked names come first in support order.
_EDGE_ENTRIES = [
    (("u", "v"), "u-v u-ua u-ub v-va v-vb"),
    (("u", "v"), "u-v u-ua v-va w-u w-v"),
    (("u", "v"), "u-v u-a u-b v-a v-b"),
]

_TRIPLET_ENTRIES = [
    (("c", "j", "k"), "c-j c-k c-l k-ka k-kb j-ja j-jb"),
    (("c", "j", "k"), "c-j c-k c-l k-ka k-kb l-j j-jb"),
    (("c", "j", "k"), "c-j c-k c-l l-k k-kb l-j j-jb"),
    (("c", "j", "k"), "c-j c-k c-l l-k k-b l-j j-b"),
    (("c", "j", "k"), "c-j c-k c-l a-k k-b a-j j-b"),
    (("c", "j", "k"), "c-j c-k c-l k-ka k-b l-j j-b"),
    (("c", "j", "k"), "c-j c-k c-l k-ka j-ja j-b b-k"),
    (("c", "j", "k"), "c-j c-k c-l k-ka j-ja k-j"),
    (("c", "j", "k"), "c-j c-k c-l k-ka l-j k-j"),
    (("c", "j", "k"), "c-j c-k c-l l-k l-j k-j"),
    (("c", "j", "k"), "c-j c-k c-l a-k a-j k-j"),
]

_STAR_ENTRIES = [
    (("c", "i", "j", "k"), "c-i c-j c-k i-ia i-ib j-ja j-jb k-ka k-kb"),
    (("c", "i", "j", "k"), "c-i c-j c-k j-x x-k i-ia i-ib j-ja k-ka"),
    (("c", "i", "j", "k"), "c-i c-j c-k x-i x-j x-k i-ia j-ja k-ka"),
    (("c", "i", "j", "k"), "c-i c-j c-k i-ia i-ib j-x x-k j-y y-k"),
    (("c", "i", "j", "k"), "c-i c-j c-k j-ja k-ka j-x x-i i-y y-k"),
    (("c", "i", "j", "k"), "c-i c-j c-k x-i x-j x-k j-y y-k i-ia"),
    (("c", "i", "j", "k"), "c-i c-j c-k x-i x-j x-k y-i y-j y-k"),
    (("c", "i", "j", "k"), "c-i c-j c-k j-x x-i i-y y-k k-z z-j"),
]


def _transcribe(marked: Sequence[str], edges: str) -> MarkedGraph:
    """Turn a symbolic edge list into a MarkedGraph; unmarked names numbered by first use."""
    index: Dict[str, int] = {name: i for i, name in enumerate(marked)}
    pairs = []
    for token in edges.split():
        a, b = token.split("-")
        for name in (a, b):
            if name not in index:
                index[name] = len(index)
        pairs.append((index[a], index[b]))
    return MarkedGraph(graph=from_edge_list(len(index), pairs), marked=tuple(range(len(marked))))


def fingerprint(env: MarkedGraph) -> str:
    """
    Isomorphism invariant used as a quick pre-filter and as the catalog key.

    Combines sizes, the degree sequence, the multiset of marked-vertex degrees and the
    triangle count. Equal fingerprints do not imply isomorphism.
    """
    g = env.graph
    degrees = sorted(g.degree(v) for v in range(g.n))
    marked_degrees = sorted(g.degree(v) for v in env.marked)
    return (
        f"n={g.n} m={g.m} deg={''.join(map(str, degrees))} "
        f"marked={''.join(map(str, marked_degrees))} tri={len(triangles(g))}"
    )


def marked_isomorphism(
    a: MarkedGraph,
    b: MarkedGraph,
    symmetries: Optional[List[Tuple[int, ...]]] = None,
) -> Optional[Dict[int, int]]:
    """
    Find an isomorphism a -> b mapping the marked tuple of a onto that of b.

    Marked vertex a.marked[i] goes to b.marked[perm[i]] for one of the allowed
    permutations (identity only by default). The remaining vertices are matched by
    backtracking in BFS order from the support, pruning on degree and on adjacency
    to everything already mapped.

    Returns:
        Vertex mapping, or None when no isomorphism exists
    """
    ga, gb = a.graph, b.graph
    if ga.n != gb.n or ga.m != gb.m or len(a.marked) != len(b.marked):
        return None
    if symmetries is None:
        symmetries = [tuple(range(len(a.marked)))]

    order = _bfs_order(ga, a.marked)
    marked_b = set(b.marked)

    for perm in symmetries:
        mapping = {a.marked[i]: b.marked[perm[i]] for i in range(len(a.marked))}
        if not _consistent(ga, gb, mapping, list(mapping)):
            continue
        used = set(mapping.values())
        result = _extend(ga, gb, order, len(a.marked), mapping, used, marked_b)
        if result is not None:
            return result
    return None


def _bfs_order(g: Graph, sources: Sequence[int]) -> List[int]:
    seen = list(sources)
    known = set(seen)
    head = 0
    while head < len(seen):
        for w in g.adjacency[seen[head]]:
            if w not in known:
                known.add(w)
                seen.append(w)
        head += 1
    seen.extend(v for v in range(g.n) if v not in known)
    return seen


def _consistent(ga: Graph, gb: Graph, mapping: Dict[int, int], vertices: List[int]) -> bool:
    for v in vertices:
        if ga.degree(v) != gb.degree(mapping[v]):
            return False
        for x, y in mapping.items():
            if x != v and ga.has_edge(v, x) != gb.has_edge(mapping[v], y):
                return False
    return True


def _extend(
    ga: Graph,
    gb: Graph,
    order: List[int],
    position: int,
    mapping: Dict[int, int],
    used: set,
    marked_b: set,
) -> Optional[Dict[int, int]]:
    if position == len(order):
        return dict(mapping)
    v = order[position]
    for w in range(gb.n):
        if w in used or w in marked_b or gb.degree(w) != ga.degree(v):
            continue
        mapping[v] = w
        if _consistent(ga, gb, mapping, [v]):
            used.add(w)
            found = _extend(ga, gb, order, position + 1, mapping, used, marked_b)
            if found is not None:
                return found
            used.discard(w)
        del mapping[v]
    return None


class EnvironmentCatalog:
    """
    Ordered 1-environments of one support kind.

    Entry r is referred to as G_{r+1} in reports.
    """

    def __init__(self, kind: EnvironmentKind, entries: List[MarkedGraph]):
        self.kind = kind
        self.entries: Tuple[MarkedGraph, ...] = tuple(entries)
        self.keys: Tuple[str, ...] = tuple(fingerprint(e) for e in entries)

    def __len__(self) -> int:
        return len(self.entries)

    def name(self, index: int) -> str:
        return f"G{index + 1}"

    def classify(self, env: MarkedGraph) -> int:
        """
        Index of the entry isomorphic to env.

        Raises:
            NoMatchError: env is not in the catalog
        """
        key = fingerprint(env)
        for index, entry in enumerate(self.entries):
            if self.keys[index] != key:
                continue
            if marked_isomorphism(env, entry, self.kind.symmetries) is not None:
                return index
        raise NoMatchError(
            f"No {self.kind.value} environment matches ({key}, marked={env.marked})"
        )

    def duplicate_pairs(self) -> List[Tuple[int, int]]:
        """Index pairs of mutually isomorphic entries (empty for a sound catalog)."""
        pairs = []
        for i in range(len(self.entries)):
            for j in range(i + 1, len(self.entries)):
                if marked_isomorphism(self.entries[i], self.entries[j], self.kind.symmetries):
                    pairs.append((i, j))
        return pairs


@lru_cache(maxsize=None)
def catalog(kind: EnvironmentKind) -> EnvironmentCatalog:
    """The catalog for a support kind (built once, shared)."""
    kind = EnvironmentKind(kind)
    table = {
        EnvironmentKind.EDGE: _EDGE_ENTRIES,
        EnvironmentKind.TRIPLET: _TRIPLET_ENTRIES,
        EnvironmentKind.STAR: _STAR_ENTRIES,
    }[kind]
    entries = [_transcribe(marked, edges) for marked, edges in table]
    logger.debug(f"Built {kind.value} catalog with {len(entries)} entries")
    return EnvironmentCatalog(kind, entries)


def classify_environment(env: MarkedGraph, cat: EnvironmentCatalog) -> int:
    """Catalog index of a 1-environment; raises NoMatchError when absent."""
    return cat.classify(env)


def star_support(g: Graph, c: int) -> Tuple[int, ...]:
    """Star support (c, A(c)) with the ordered neighborhood."""
    return (c,) + tuple(g.neighbors(c))


def supports(g: Graph, kind: EnvironmentKind) -> List[Tuple[int, ...]]:
    """All supports of the given kind in g, in deterministic order."""
    kind = EnvironmentKind(kind)
    if kind is EnvironmentKind.EDGE:
        return [tuple(e) for e in g.sorted_edges()]
    if kind is EnvironmentKind.TRIPLET:
        return [tuple(t) for t in triplets(g)]
    return [star_support(g, c) for c in range(g.n)]


def environment_census(g: Graph, kind: EnvironmentKind) -> List[int]:
    """
    How often each catalog entry occurs as a 1-environment in g.

    Args:
        g: Cubic graph (triangle-free for stars)
        kind: Support kind

    Returns:
        One count per catalog entry

    Raises:
        NotCubicError: g is not 3-regular
        TriangleError: stars requested on a graph with triangles
    """
    kind = EnvironmentKind(kind)
    g.require_cubic("environment census")
    if kind is EnvironmentKind.STAR and triangles(g):
        raise TriangleError("Star census: triangle-free required")

    cat = catalog(kind)
    counts = [0] * len(cat)
    for support in supports(g, kind):
        counts[cat.classify(p_environment(g, support, 1))] += 1
    logger.debug(f"{kind.value} census: {counts}")
    return counts
