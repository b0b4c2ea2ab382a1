"""
Classical Post-Processing

Greedy cut-improvement procedures applied to measured cuts:

- fkl: triplet-based local search for cubic graphs, gains at least |Good|/3
- hlz: V3/V2 repair for triangle-free cubic graphs, gains at least (2/5)|V2| + (17/15)|V3|
- greedy_unsat: flips fully unsatisfied vertices only, gains at least (3/4)|V3|

Every procedure can record one FlipStep per iteration into a caller-supplied list.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Set, Tuple

from .cut import Cut, cutsize, flip, good_triplets, is_good, unsat_sets, unsatisfied_degree, validate_cut
from .errors import PostprocessError, TriangleError
from .graph import Graph, Triplet, triangles
from .operators import FKL_WEIGHT, HLZ_V2_WEIGHT, HLZ_V3_WEIGHT

logger = logging.getLogger(__name__)

GREEDY_WEIGHT = Fraction(3, 4)


@dataclass(frozen=True)
class FlipStep:
    """One iteration of a procedure: which vertices flipped and the cutsize around it."""

    kind: str
    vertices: Tuple[int, ...]
    before: int
    after: int

    def describe(self) -> str:
        vertices = ",".join(str(v) for v in self.vertices)
        return f"{self.kind:<12} flip {{{vertices}}}  cutsize {self.before} -> {self.after}"


def _flip_gain(g: Graph, c: Cut, v: int) -> int:
    """Cutsize change when flipping v alone: unsatisfied minus satisfied edges at v."""
    unsat = unsatisfied_degree(g, c, v)
    return unsat - (g.degree(v) - unsat)


def fkl(g: Graph, c: Cut, trace: Optional[List[FlipStep]] = None) -> Cut:
    """
    FKL improvement for 3-regular graphs.

    Starting from S = Good(C), repeatedly pick the triplet of S whose cheapest member flip
    destroys the fewest triplets of S (ties by (c, j, k)), flip the member with the best
    gain per destroyed triplet (ties in order c, j, k) and keep only still-good triplets.

    Args:
        g: 3-regular graph
        c: Initial cut
        trace: Optional list receiving one FlipStep per flip

    Returns:
        Improved cut with cutsize >= cutsize(c) + |Good(c)|/3

    Raises:
        NotCubicError: g is not 3-regular
    """
    g.require_cubic("FKL post-processing")
    validate_cut(g, c)

    s: List[Triplet] = sorted(good_triplets(g, c))
    size = cutsize(g, c)
    while s:
        # a good triplet containing sigma stops being good once sigma flips
        destroyed: Dict[int, int] = {}
        for t in s:
            for v in t:
                destroyed[v] = destroyed.get(v, 0) + 1

        chosen = min(s, key=lambda t: (min(destroyed[v] for v in t), t))

        best_vertex, best_ratio = None, None
        for sigma in chosen:
            lost = destroyed[sigma]
            if lost < 1:
                raise PostprocessError(f"Triplet {chosen} not destroyed by flipping {sigma}")
            ratio = Fraction(_flip_gain(g, c, sigma), lost)
            if best_ratio is None or ratio > best_ratio:
                best_vertex, best_ratio = sigma, ratio

        before = size
        size += _flip_gain(g, c, best_vertex)
        c = flip(c, [best_vertex])
        s = [t for t in s if is_good(c, t)]
        logger.debug(f"FKL flip {best_vertex} via {tuple(chosen)}: {before} -> {size}, |S|={len(s)}")
        if trace is not None:
            trace.append(FlipStep("fkl", (best_vertex,), before, size))

    return c


def _component(g: Graph, members: Set[int], start: int) -> Set[int]:
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in g.adjacency[u]:
            if w in members and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def _walk(g: Graph, members: Set[int], start: int, first: Optional[int] = None) -> List[int]:
    """Follow a path or cycle of max-degree-2 vertices from start."""
    order = [start]
    visited = {start}
    nxt = first
    if nxt is None:
        options = [w for w in g.adjacency[start] if w in members]
        nxt = min(options) if options else None
    while nxt is not None and nxt not in visited:
        order.append(nxt)
        visited.add(nxt)
        options = [w for w in g.adjacency[nxt] if w in members and w not in visited]
        nxt = min(options) if options else None
    return order


def _greedy_extend(g: Graph, members: Set[int], path: List[int], visited: Set[int]) -> None:
    while True:
        options = [w for w in g.adjacency[path[-1]] if w in members and w not in visited]
        if not options:
            return
        path.append(min(options))
        visited.add(path[-1])


def _v2_sequence(g: Graph, v2: Set[int], v: int) -> Tuple[List[int], str]:
    """
    Path or cycle through v in G[V2] and the step kind.

    Path and cycle components are used whole. Components with a branching vertex fall back
    to a greedy path grown from v in both directions.
    """
    component = _component(g, v2, v)
    inner_degree = {u: sum(1 for w in g.adjacency[u] if w in component) for u in component}

    if max(inner_degree.values()) <= 2:
        endpoints = sorted(u for u in component if inner_degree[u] <= 1)
        if endpoints:
            return _walk(g, component, endpoints[0]), "v2-path"
        return _walk(g, component, v), "v2-cycle"

    logger.info(f"HLZ fallback: branching V2 component of size {len(component)} at vertex {v}")
    forward = [v]
    visited = {v}
    _greedy_extend(g, component, forward, visited)
    backward = [v]
    _greedy_extend(g, component, backward, visited)
    sequence = list(reversed(backward[1:])) + forward
    if sequence[-1] < sequence[0]:
        sequence.reverse()
    return sequence, "v2-fallback"


def _odd_positions(g: Graph, sequence: List[int]) -> List[int]:
    """v1, v3, v5, ... skipping any vertex adjacent to one already chosen."""
    chosen: List[int] = []
    for v in sequence[::2]:
        if not any(g.has_edge(v, u) for u in chosen):
            chosen.append(v)
    return chosen


def hlz(g: Graph, c: Cut, trace: Optional[List[FlipStep]] = None) -> Cut:
    """
    HLZ improvement for triangle-free 3-regular graphs.

    While some vertex has two or three unsatisfied edges: flip the V3 vertex with the fewest
    V3 neighbors (smallest index on ties), otherwise flip the odd positions of a path or
    cycle through the smallest V2 vertex in G[V2].

    Args:
        g: Triangle-free 3-regular graph
        c: Initial cut
        trace: Optional list receiving one FlipStep per iteration

    Returns:
        Cut with no vertex in V2 or V3

    Raises:
        NotCubicError: g is not 3-regular
        TriangleError: g contains a triangle
        PostprocessError: an iteration did not increase the cutsize
    """
    g.require_cubic("HLZ post-processing")
    if triangles(g):
        raise TriangleError("HLZ post-processing: triangle-free required")
    validate_cut(g, c)

    size = cutsize(g, c)
    while True:
        v2, v3 = unsat_sets(g, c)
        if not v2 and not v3:
            break

        if v3:
            v = min(v3, key=lambda u: (sum(1 for w in g.adjacency[u] if w in v3), u))
            flipped, kind = [v], "v3"
        else:
            sequence, kind = _v2_sequence(g, v2, min(v2))
            flipped = _odd_positions(g, sequence)

        before = size
        c = flip(c, flipped)
        size = cutsize(g, c)
        if size <= before:
            raise PostprocessError(
                f"HLZ {kind} step on {sorted(flipped)} did not increase cutsize ({before} -> {size})"
            )
        logger.debug(f"HLZ {kind} flip {sorted(flipped)}: {before} -> {size}")
        if trace is not None:
            trace.append(FlipStep(kind, tuple(flipped), before, size))

    return c


def greedy_unsat(g: Graph, c: Cut, trace: Optional[List[FlipStep]] = None) -> Cut:
    """
    Flip the smallest fully unsatisfied vertex until none is left.

    Each flip gains 3, so the result gains at least (3/4)|V3(c)|.
    """
    g.require_cubic("greedy post-processing")
    validate_cut(g, c)

    size = cutsize(g, c)
    while True:
        _, v3 = unsat_sets(g, c)
        if not v3:
            return c
        v = min(v3)
        before = size
        size += _flip_gain(g, c, v)
        c = flip(c, [v])
        if trace is not None:
            trace.append(FlipStep("greedy", (v,), before, size))


PROCEDURES: Dict[str, Callable[..., Cut]] = {
    "fkl": fkl,
    "hlz": hlz,
    "greedy": greedy_unsat,
}


def guaranteed_gain(g: Graph, c: Cut, method: str) -> Fraction:
    """
    Minimum cutsize gain promised for a procedure on this cut.

    Args:
        g: 3-regular graph
        c: Cut before post-processing
        method: "fkl", "hlz" or "greedy"
    """
    method = str(getattr(method, "value", method)).lower()
    if method == "fkl":
        return FKL_WEIGHT * len(good_triplets(g, c))
    v2, v3 = unsat_sets(g, c)
    if method == "hlz":
        return HLZ_V2_WEIGHT * len(v2) + HLZ_V3_WEIGHT * len(v3)
    if method == "greedy":
        return GREEDY_WEIGHT * len(v3)
    raise ValueError(f"Unknown post-processing method: {method}")


def postprocess(g: Graph, c: Cut, method: str, trace: Optional[List[FlipStep]] = None) -> Cut:
    """Dispatch by name; "bare"/"none" returns the cut unchanged."""
    method = str(getattr(method, "value", method)).lower()
    if method in ("bare", "none"):
        validate_cut(g, c)
        return c
    if method not in PROCEDURES:
        raise ValueError(f"Unknown post-processing method: {method}")
    return PROCEDURES[method](g, c, trace=trace)
