"""
Diagonal Observables

Every operator the twisted algorithms need is diagonal in the computational basis, so an
observable is a list of small truth tables, each attached to an ordered support of at most
four vertices. Bit i of a table index is the color of support[i]. Coefficients are exact
fractions; float tables are produced on demand for the simulators.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from .errors import GraphError
from .graph import Graph, Triplet, triplets

logger = logging.getLogger(__name__)

FKL_WEIGHT = Fraction(1, 3)
HLZ_V2_WEIGHT = Fraction(2, 5)
HLZ_V3_WEIGHT = Fraction(17, 15)


class Method(str, Enum):
    """Post-processing attached to a QAOA run. BARE means none."""

    BARE = "bare"
    FKL = "fkl"
    HLZ = "hlz"

    @classmethod
    def _missing_(cls, value):
        if isinstance(value, str):
            lowered = value.lower()
            if lowered == "none":
                return cls.BARE
            for member in cls:
                if member.value == lowered:
                    return member
        return None


@dataclass(frozen=True)
class Term:
    """One local diagonal term: table[pattern] with pattern = sum of bit(support[i]) << i."""

    support: Tuple[int, ...]
    table: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(set(self.support)) != len(self.support):
            raise GraphError(f"Term support must be distinct vertices: {self.support}")
        if len(self.table) != 1 << len(self.support):
            raise GraphError(
                f"Table of length {len(self.table)} does not fit support of size {len(self.support)}"
            )

    def pattern(self, bits: Sequence[int]) -> int:
        return sum(bits[v] << i for i, v in enumerate(self.support))

    def value(self, bits: Sequence[int]) -> Fraction:
        return self.table[self.pattern(bits)]

    def scaled(self, factor: Fraction) -> "Term":
        return Term(self.support, tuple(factor * x for x in self.table))


@dataclass(frozen=True)
class DiagonalObservable:
    terms: Tuple[Term, ...]

    def evaluate(self, bits: Sequence[int]) -> Fraction:
        """Exact value on a full cut."""
        return sum((t.value(bits) for t in self.terms), Fraction(0))

    def scaled(self, factor) -> "DiagonalObservable":
        factor = Fraction(factor)
        return DiagonalObservable(tuple(t.scaled(factor) for t in self.terms))

    def __add__(self, other: "DiagonalObservable") -> "DiagonalObservable":
        return DiagonalObservable(self.terms + other.terms)

    def vertices(self) -> List[int]:
        """Sorted union of all supports."""
        return sorted({v for t in self.terms for v in t.support})

    def float_terms(self) -> List[Tuple[Tuple[int, ...], np.ndarray]]:
        """(support, float64 table) pairs for numerical backends."""
        return [(t.support, np.array([float(x) for x in t.table])) for t in self.terms]

    def relabeled(self, mapping) -> "DiagonalObservable":
        """Same observable with every support vertex v replaced by mapping[v]."""
        return DiagonalObservable(
            tuple(Term(tuple(mapping[v] for v in t.support), t.table) for t in self.terms)
        )


def observable_sum(parts: Iterable[DiagonalObservable]) -> DiagonalObservable:
    terms: Tuple[Term, ...] = ()
    for part in parts:
        terms += part.terms
    return DiagonalObservable(terms)


def _table(size: int, rule) -> Tuple[Fraction, ...]:
    """Truth table over size bits; rule receives the bit list in support order."""
    return tuple(
        Fraction(rule([(z >> i) & 1 for i in range(size)])) for z in range(1 << size)
    )


_EDGE_TABLE = _table(2, lambda b: int(b[0] != b[1]))
_GOOD_TABLE = _table(3, lambda b: int(b[0] == b[1] == b[2]))
_PI3_TABLE = _table(4, lambda b: int(b[0] == b[1] == b[2] == b[3]))
# exactly one neighbor differs from the center
_PI2_TABLE = _table(4, lambda b: int(sum(b[0] ^ x for x in b[1:]) == 1))


def edge_operator(u: int, v: int) -> DiagonalObservable:
    """H^{u,v} = (I - Z_u Z_v) / 2."""
    return DiagonalObservable((Term((u, v), _EDGE_TABLE),))


def maxcut_hamiltonian(g: Graph) -> DiagonalObservable:
    """H_G: one edge term per edge; its value on a cut is the cutsize."""
    return observable_sum(edge_operator(u, v) for u, v in g.sorted_edges())


def good_triplet_projector(t: Triplet) -> DiagonalObservable:
    return DiagonalObservable((Term((t.c, t.j, t.k), _GOOD_TABLE),))


def good_triplet_number(g: Graph) -> DiagonalObservable:
    """N_G: counts monochromatic triplets."""
    return observable_sum(good_triplet_projector(t) for t in triplets(g))


def _star(g: Graph, c: int) -> Tuple[int, ...]:
    if g.degree(c) != 3:
        raise GraphError(f"Vertex {c} has degree {g.degree(c)}, star operators need degree 3")
    return (c,) + g.neighbors(c)


def m2(g: Graph) -> DiagonalObservable:
    """M^(2): counts vertices with exactly two unsatisfied edges."""
    g.require_cubic("M^(2)")
    return DiagonalObservable(tuple(Term(_star(g, c), _PI2_TABLE) for c in range(g.n)))


def m3(g: Graph) -> DiagonalObservable:
    """M^(3): counts vertices with three unsatisfied edges."""
    g.require_cubic("M^(3)")
    return DiagonalObservable(tuple(Term(_star(g, c), _PI3_TABLE) for c in range(g.n)))


def delta_fkl(g: Graph) -> DiagonalObservable:
    return good_triplet_number(g).scaled(FKL_WEIGHT)


def delta_hlz(g: Graph) -> DiagonalObservable:
    return m2(g).scaled(HLZ_V2_WEIGHT) + m3(g).scaled(HLZ_V3_WEIGHT)


def twisted_hamiltonian(g: Graph, method: Method) -> DiagonalObservable:
    """
    H_G + Delta for the given post-processing (plain H_G for BARE).

    Args:
        g: Graph (3-regular for HLZ)
        method: Method or its string value ("none" is accepted for BARE)
    """
    method = Method(method)
    h = maxcut_hamiltonian(g)
    if method is Method.FKL:
        return h + delta_fkl(g)
    if method is Method.HLZ:
        return h + delta_hlz(g)
    return h


def triplet_operator(t: Triplet) -> DiagonalObservable:
    """T_(c,j,k) = (H^{cj} + H^{ck}) / 4 + Pi_{c,j,k} / 3 as one 3-vertex term."""
    table = _table(
        3,
        lambda b: Fraction((b[0] != b[1]) + (b[0] != b[2]), 4) + FKL_WEIGHT * (b[0] == b[1] == b[2]),
    )
    return DiagonalObservable((Term((t.c, t.j, t.k), table),))


def star_operator(c: int, neighborhood: Sequence[int]) -> DiagonalObservable:
    """S_c = (H^{cj} + H^{ck} + H^{cl}) / 2 + (2/5) Pi^(2)_c + (17/15) Pi^(3)_c on (c, A(c))."""
    if len(neighborhood) != 3:
        raise GraphError(f"Star operator needs exactly 3 neighbors, got {len(neighborhood)}")
    table = tuple(
        Fraction(sum(1 for i in (1, 2, 3) if ((z >> i) & 1) != (z & 1)), 2)
        + HLZ_V2_WEIGHT * _PI2_TABLE[z]
        + HLZ_V3_WEIGHT * _PI3_TABLE[z]
        for z in range(16)
    )
    return DiagonalObservable((Term((c,) + tuple(neighborhood), table),))


def triplet_operator_sum(g: Graph) -> DiagonalObservable:
    return observable_sum(triplet_operator(t) for t in triplets(g))


def star_operator_sum(g: Graph) -> DiagonalObservable:
    g.require_cubic("star operators")
    return observable_sum(star_operator(c, g.neighbors(c)) for c in range(g.n))
