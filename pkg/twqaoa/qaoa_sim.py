"""
QAOA Statevector Simulation

Exact level-p QAOA states for graphs with up to 24 vertices. Basis index bit i is the
color of vertex i. Each layer applies the diagonal phase exp(-i gamma cutsize(z)) from a
precomputed cutsize table, then the transverse mixer exp(-i beta X) qubit by qubit.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .cut import Cut, cut_values
from .errors import SimulationError
from .graph import Graph, p_environment
from .operators import DiagonalObservable

logger = logging.getLogger(__name__)

MAX_QUBITS = 24
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Angles:
    """
    Level-p QAOA parameters in radians.

    Values are stored as given; canonical() wraps them into [0, 2pi) for display.
    """

    p: int
    beta: Tuple[float, ...]
    gamma: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "beta", tuple(float(b) for b in self.beta))
        object.__setattr__(self, "gamma", tuple(float(g) for g in self.gamma))
        if self.p < 0:
            raise SimulationError(f"Level must be non-negative, got {self.p}")
        if len(self.beta) != self.p or len(self.gamma) != self.p:
            raise SimulationError(
                f"Level {self.p} needs {self.p} betas and gammas, "
                f"got {len(self.beta)} and {len(self.gamma)}"
            )
        if not all(math.isfinite(x) for x in self.beta + self.gamma):
            raise SimulationError("Angles must be finite")

    @classmethod
    def of(cls, beta: Sequence[float], gamma: Sequence[float]) -> "Angles":
        return cls(len(beta), tuple(beta), tuple(gamma))

    @classmethod
    def zeros(cls, p: int) -> "Angles":
        return cls(p, (0.0,) * p, (0.0,) * p)

    @classmethod
    def from_vector(cls, x: Sequence[float]) -> "Angles":
        """Inverse of to_vector: betas first, then gammas."""
        if len(x) % 2:
            raise SimulationError(f"Angle vector must have even length, got {len(x)}")
        p = len(x) // 2
        return cls(p, tuple(x[:p]), tuple(x[p:]))

    def to_vector(self) -> np.ndarray:
        return np.array(self.beta + self.gamma, dtype=float)

    def canonical(self) -> "Angles":
        return Angles(
            self.p,
            tuple(b % TWO_PI for b in self.beta),
            tuple(g % TWO_PI for g in self.gamma),
        )

    def to_dict(self, decimals: int = 6) -> dict:
        wrapped = self.canonical()
        return {
            "beta": [round(b, decimals) for b in wrapped.beta],
            "gamma": [round(g, decimals) for g in wrapped.gamma],
        }


@dataclass(frozen=True, eq=False)
class Statevector:
    """Normalized amplitudes over 2^n basis states (read-only array)."""

    n: int
    amplitudes: np.ndarray

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def apply_mixer(psi: np.ndarray, n: int, beta: float) -> None:
    """exp(-i beta X) on every qubit, in place."""
    cos, sin = math.cos(beta), math.sin(beta)
    for i in range(n):
        view = psi.reshape(1 << (n - i - 1), 2, 1 << i)
        zero = view[:, 0, :].copy()
        one = view[:, 1, :]
        view[:, 0, :] = cos * zero - 1j * sin * one
        view[:, 1, :] = -1j * sin * zero + cos * one


def prepare_state(g: Graph, a: Angles, values: Optional[np.ndarray] = None) -> Statevector:
    """
    |psi_G(beta, gamma)> starting from |+>^n.

    Args:
        g: Graph with at most MAX_QUBITS vertices
        a: Angles
        values: Precomputed cut_values(g), reused across calls when given

    Raises:
        SimulationError: g exceeds the qubit budget
    """
    if g.n > MAX_QUBITS:
        raise SimulationError(f"Statevector simulation limited to {MAX_QUBITS} qubits, got {g.n}")

    if values is None:
        values = cut_values(g)
    dim = 1 << g.n
    psi = np.full(dim, 1.0 / math.sqrt(dim), dtype=np.complex128)
    levels = np.arange(g.m + 1)
    for beta, gamma in zip(a.beta, a.gamma):
        psi *= np.exp(-1j * gamma * levels)[values]
        apply_mixer(psi, g.n, beta)

    psi.setflags(write=False)
    return Statevector(g.n, psi)


def expectation(s: Statevector, o: DiagonalObservable) -> float:
    """
    <psi| o |psi> summed term by term over marginal distributions of each support.

    Raises:
        SimulationError: a support vertex is outside the state
    """
    probs = s.probabilities()
    index = np.arange(probs.shape[0], dtype=np.int64)
    total = 0.0
    for support, table in o.float_terms():
        if any(not 0 <= v < s.n for v in support):
            raise SimulationError(f"Term support {support} outside a {s.n}-qubit state")
        pattern = np.zeros(probs.shape[0], dtype=np.int64)
        for i, v in enumerate(support):
            pattern |= ((index >> v) & 1) << i
        marginal = np.bincount(pattern, weights=probs, minlength=len(table))
        total += float(marginal @ table)
    return total


def observable_diagonal(o: DiagonalObservable, n: int) -> np.ndarray:
    """Value of o on every basis index, for repeated expectations against one observable."""
    index = np.arange(1 << n, dtype=np.int64)
    diagonal = np.zeros(1 << n, dtype=float)
    for support, table in o.float_terms():
        pattern = np.zeros(1 << n, dtype=np.int64)
        for i, v in enumerate(support):
            pattern |= ((index >> v) & 1) << i
        diagonal += table[pattern]
    return diagonal


def diagonal_expectation(s: Statevector, diagonal: np.ndarray) -> float:
    return float(s.probabilities() @ diagonal)


def parity(s: Statevector) -> float:
    """<psi| X^{(x)n} |psi>; X^{(x)n} maps index z to its complement, the reversed array."""
    return float(np.real(np.vdot(s.amplitudes, s.amplitudes[::-1])))


def sample(s: Statevector, seed: Optional[int], shots: int) -> List[Cut]:
    """
    Draw `shots` cuts from |amp(z)|^2.

    Raises:
        SimulationError: shots < 1
    """
    if shots < 1:
        raise SimulationError(f"shots must be at least 1, got {shots}")
    probs = s.probabilities()
    rng = np.random.default_rng(seed)
    draws = rng.choice(probs.shape[0], size=shots, p=probs / probs.sum())
    return [tuple((int(z) >> v) & 1 for v in range(s.n)) for z in draws]


def state_expectation(g: Graph, a: Angles, o: DiagonalObservable) -> float:
    return expectation(prepare_state(g, a), o)


def environment_expectation(g: Graph, a: Angles, o: DiagonalObservable) -> float:
    """
    Expectation of a local observable simulated on the p-environment of its support only.

    Equal to state_expectation(g, a, o) by the light-cone property.
    """
    support = o.vertices()
    env = p_environment(g, support, a.p)
    local = {v: i for i, v in enumerate(env.origin)}
    return state_expectation(env.graph, a, o.relabeled(local))
