"""
Tree Expectation Backend

Exact QAOA expectations of diagonal observables on trees of any size, used where the
statevector would be far too large (level p >= 3 trees have hundreds of vertices).

Each vertex carries a configuration of 2p+1 bits: forward bits z^0..z^{p-1} (bits
0..p-1), backward bits w^0..w^{p-1} (bits p..2p-1) and the measured bit shared by both
branches (bit 2p). The cost phase of layer m reads z^{m-1} and w^{m-1}. Summing over all
configurations factorizes over the tree, so leaf-to-root messages give the exact result.
An edge couples its endpoints only through the XOR of their phase bits, so each message
is an XOR-convolution computed with a Walsh-Hadamard transform. Subtrees that carry no
marked vertex are memoized by their rooted shape.
"""

import logging
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from .environments import EnvironmentKind
from .errors import TreeError
from .graph import MarkedGraph, Triplet, edge_tree, is_tree, star_tree, triplet_tree
from .operators import DiagonalObservable, edge_operator, star_operator, triplet_operator
from .qaoa_sim import Angles

logger = logging.getLogger(__name__)

MAX_TREE_LEVEL = 6
IMAGINARY_TOLERANCE = 1e-9

KIND_FACTORS: Dict[EnvironmentKind, Fraction] = {
    EnvironmentKind.EDGE: Fraction(1),
    EnvironmentKind.TRIPLET: Fraction(2),
    EnvironmentKind.STAR: Fraction(2, 3),
}


def walsh_hadamard(values: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform of a length-2^k vector."""
    out = np.array(values, dtype=np.complex128)
    size = out.shape[0]
    h = 1
    while h < size:
        view = out.reshape(-1, 2, h)
        low = view[:, 0, :].copy()
        high = view[:, 1, :]
        view[:, 0, :] = low + high
        view[:, 1, :] = low - high
        h *= 2
    return out


class TreeEvaluator:
    """
    Message passing for one set of angles.

    Args:
        angles: QAOA angles of level p
        naive: Use the dense edge kernel and no memoization (reference mode)
    """

    def __init__(self, angles: Angles, naive: bool = False):
        self.angles = angles
        self.p = angles.p
        self.naive = naive
        self.low_dim = 1 << (2 * self.p)
        self.dim = 2 * self.low_dim

        index = np.arange(self.dim)
        self.final_bit = (index >> (2 * self.p)) & 1
        self.vertex_weight = self._vertex_weight(index)
        self.edge_kernel = self._edge_kernel(np.arange(self.low_dim))
        self.kernel_spectrum = walsh_hadamard(self.edge_kernel)
        self._dense_kernel: Optional[np.ndarray] = None
        self._memo: Dict[Tuple, np.ndarray] = {}

    def _vertex_weight(self, index: np.ndarray) -> np.ndarray:
        p = self.p
        final = (index >> (2 * p)) & 1

        def forward(m):
            return final if m == p else (index >> m) & 1

        def backward(m):
            return final if m == p else (index >> (p + m)) & 1

        weight = np.full(index.shape[0], 0.5, dtype=np.complex128)
        for m, beta in enumerate(self.angles.beta, start=1):
            mixer = np.array(
                [[np.cos(beta), -1j * np.sin(beta)], [-1j * np.sin(beta), np.cos(beta)]]
            )
            weight *= mixer[forward(m), forward(m - 1)]
            weight *= np.conj(mixer[backward(m), backward(m - 1)])
        return weight

    def _edge_kernel(self, diff: np.ndarray) -> np.ndarray:
        p = self.p
        kernel = np.ones(diff.shape[0], dtype=np.complex128)
        for m, gamma in enumerate(self.angles.gamma, start=1):
            forward = (diff >> (m - 1)) & 1
            backward = (diff >> (p + m - 1)) & 1
            kernel *= np.exp(-1j * gamma * forward) * np.exp(1j * gamma * backward)
        return kernel

    def _send(self, local: np.ndarray) -> np.ndarray:
        """Message to the parent from a child's full local product."""
        if self.naive:
            if self._dense_kernel is None:
                x = np.arange(self.dim)
                self._dense_kernel = self.edge_kernel[(x[:, None] ^ x[None, :]) & (self.low_dim - 1)]
            return (self._dense_kernel @ local)[: self.low_dim]
        folded = local[: self.low_dim] + local[self.low_dim:]
        return walsh_hadamard(self.kernel_spectrum * walsh_hadamard(folded)) / self.low_dim

    def _local(self, children_messages: List[np.ndarray], pin: Optional[int]) -> np.ndarray:
        local = self.vertex_weight.copy()
        if pin is not None:
            local = np.where(self.final_bit == pin, local, 0)
        for message in children_messages:
            local *= np.tile(message, 2)
        return local

    def marginal(self, t: MarkedGraph) -> np.ndarray:
        """
        Distribution of the measured bits on t.marked (pattern bit i = marked[i]).

        Raises:
            TreeError: t is not a tree or has no marked vertex
        """
        g = t.graph
        if not is_tree(g):
            raise TreeError(f"Tree evaluation needs a tree (n={g.n}, m={g.m})")
        if not t.marked:
            raise TreeError("Tree evaluation needs at least one marked vertex")

        root = t.marked[0]
        position = {v: i for i, v in enumerate(t.marked)}
        parent, order = _rooted(g, root)
        children: Dict[int, List[int]] = {v: [] for v in range(g.n)}
        for v in order[1:]:
            children[parent[v]].append(v)

        pinned: Set[int] = set()
        for v in reversed(order):
            if v in position or any(w in pinned for w in children[v]):
                pinned.add(v)

        shapes: Dict[int, Tuple] = {}
        for v in reversed(order):
            shapes[v] = tuple(sorted(shapes[w] for w in children[v]))

        fixed: Dict[int, np.ndarray] = {}
        for v in reversed(order):
            if v in pinned:
                continue
            key = shapes[v]
            if not self.naive and key in self._memo:
                fixed[v] = self._memo[key]
                continue
            message = self._send(self._local([fixed[w] for w in children[v]], None))
            fixed[v] = message
            if not self.naive:
                self._memo[key] = message

        k = len(t.marked)
        probs = np.zeros(1 << k)
        for pattern in range(1 << k):
            messages: Dict[int, np.ndarray] = dict(fixed)
            total = 0j
            for v in reversed(order):
                if v not in pinned:
                    continue
                pin = (pattern >> position[v]) & 1 if v in position else None
                local = self._local([messages[w] for w in children[v]], pin)
                if v == root:
                    total = complex(local.sum())
                else:
                    messages[v] = self._send(local)
            if abs(total.imag) > IMAGINARY_TOLERANCE:
                raise TreeError(f"Non-real probability {total} for pattern {pattern}")
            probs[pattern] = total.real

        logger.debug(f"Tree marginal at p={self.p}: n={g.n}, total={probs.sum():.12f}")
        return probs

    def expectation(self, t: MarkedGraph, o: DiagonalObservable) -> float:
        """
        <psi_t| o |psi_t> for an observable supported on t.marked.

        Raises:
            TreeError: a term support leaves the marked region
        """
        position = {v: i for i, v in enumerate(t.marked)}
        for term in o.terms:
            if any(v not in position for v in term.support):
                raise TreeError(f"Support {term.support} outside marked region {t.marked}")

        probs = self.marginal(t)
        total = 0.0
        for support, table in o.float_terms():
            for pattern, prob in enumerate(probs):
                sub = sum(((pattern >> position[v]) & 1) << i for i, v in enumerate(support))
                total += prob * table[sub]
        return total


def _rooted(g, root: int) -> Tuple[Dict[int, int], List[int]]:
    parent = {root: -1}
    order = [root]
    head = 0
    while head < len(order):
        u = order[head]
        for w in g.adjacency[u]:
            if w not in parent:
                parent[w] = u
                order.append(w)
        head += 1
    return parent, order


def tree_expectation(t: MarkedGraph, a: Angles, o: DiagonalObservable, naive: bool = False) -> float:
    """Exact expectation of o in the QAOA state on tree t."""
    return TreeEvaluator(a, naive=naive).expectation(t, o)


def kind_tree(kind: EnvironmentKind, p: int) -> MarkedGraph:
    kind = EnvironmentKind(kind)
    builders = {
        EnvironmentKind.EDGE: edge_tree,
        EnvironmentKind.TRIPLET: triplet_tree,
        EnvironmentKind.STAR: star_tree,
    }
    return builders[kind](p)


def kind_operator(kind: EnvironmentKind, marked: Sequence[int]) -> DiagonalObservable:
    """The per-support operator whose expectation bounds the ratio for this kind."""
    kind = EnvironmentKind(kind)
    if kind is EnvironmentKind.EDGE:
        return edge_operator(marked[0], marked[1])
    if kind is EnvironmentKind.TRIPLET:
        return triplet_operator(Triplet(marked[0], marked[1], marked[2]))
    return star_operator(marked[0], marked[1:4])


def certified_tree_bound(kind: EnvironmentKind, p: int, a: Angles) -> float:
    """
    Factor times the kind's operator expectation on the level-p tree.

    Factors are 1 (edge), 2 (triplet) and 2/3 (star).

    Raises:
        TreeError: p outside 1..6 or angles of a different level
    """
    kind = EnvironmentKind(kind)
    if not 1 <= p <= MAX_TREE_LEVEL:
        raise TreeError(f"Tree bounds supported for p in 1..{MAX_TREE_LEVEL}, got {p}")
    if a.p != p:
        raise TreeError(f"Angles have level {a.p}, expected {p}")
    tree = kind_tree(kind, p)
    value = tree_expectation(tree, a, kind_operator(kind, tree.marked))
    return float(KIND_FACTORS[kind]) * value
