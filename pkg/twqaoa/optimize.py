"""
Angle Optimization and the Twisted Pipeline

Multistart Nelder-Mead over QAOA angles, and the end-to-end hybrid run: optimize
<H_G + Delta>, sample cuts from the optimized state, post-process each sample.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy.optimize import minimize

from .cut import Cut, cut_values, cutsize, format_cut, max_cut_exact
from .errors import OptimizationError, SimulationError, TriangleError
from .graph import Graph, triangles
from .operators import Method, twisted_hamiltonian
from .postprocess import postprocess
from .qaoa_sim import MAX_QUBITS, Angles, diagonal_expectation, observable_diagonal, prepare_state, sample

logger = logging.getLogger(__name__)

Objective = Callable[[Angles], float]

NM_OPTIONS = {"xatol": 1e-8, "fatol": math.inf, "maxfev": 10_000, "maxiter": 10_000}


@dataclass(frozen=True)
class RestartResult:
    index: int
    start: Angles
    start_value: float
    angles: Angles
    value: float
    evaluations: int


def _checked(objective: Objective, a: Angles) -> float:
    value = float(objective(a))
    if not math.isfinite(value):
        raise OptimizationError(f"Objective returned {value} at beta={a.beta}, gamma={a.gamma}")
    return value


def _run_restart(objective: Objective, index: int, start: np.ndarray) -> RestartResult:
    start_angles = Angles.from_vector(start)
    start_value = _checked(objective, start_angles)

    result = minimize(
        lambda x: -_checked(objective, Angles.from_vector(x)),
        start,
        method="Nelder-Mead",
        options=NM_OPTIONS,
    )
    angles, value = Angles.from_vector(result.x), -float(result.fun)
    if value < start_value:
        angles, value = start_angles, start_value

    logger.debug(f"Restart {index}: {start_value:.6f} -> {value:.6f} ({result.nfev} evaluations)")
    return RestartResult(index, start_angles, start_value, angles, value, int(result.nfev))


def run_restarts(
    objective: Objective,
    p: int,
    restarts: int = 8,
    seed: Optional[int] = None,
    workers: int = 1,
) -> List[RestartResult]:
    """
    Nelder-Mead ascent from `restarts` uniform starts in [0, 2pi)^{2p}.

    Starts are drawn up front from default_rng(seed), so results do not depend on the
    number of workers.

    Raises:
        OptimizationError: restarts < 1, p < 1, or a non-finite objective value
    """
    if restarts < 1:
        raise OptimizationError(f"restarts must be at least 1, got {restarts}")
    if p < 1:
        raise OptimizationError(f"Level must be at least 1, got {p}")

    rng = np.random.default_rng(seed)
    starts = rng.uniform(0.0, 2.0 * math.pi, size=(restarts, 2 * p))

    if workers <= 1:
        return [_run_restart(objective, i, starts[i]) for i in range(restarts)]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(lambda i: _run_restart(objective, i, starts[i]), range(restarts)))


def optimize_angles(
    objective: Objective,
    p: int,
    restarts: int = 8,
    seed: Optional[int] = None,
    workers: int = 1,
) -> Tuple[Angles, float]:
    """
    Maximize an angle objective.

    Args:
        objective: Maps Angles to a real value
        p: QAOA level
        restarts: Number of random starts
        seed: Seed for the start points
        workers: Threads used for restarts

    Returns:
        (best angles, best value); ties go to the lowest restart index
    """
    results = run_restarts(objective, p, restarts, seed, workers)
    best = results[0]
    for result in results[1:]:
        if result.value > best.value:
            best = result
    logger.info(f"Best of {restarts} restarts at p={p}: {best.value:.6f} (restart {best.index})")
    return best.angles, best.value


POLISH_OPTIONS = {"xatol": 1e-6, "fatol": math.inf, "maxfev": 4_000, "maxiter": 4_000}


def polish_angles(objective: Objective, start: Angles) -> Tuple[Angles, float]:
    """
    One Nelder-Mead ascent from a fixed point; never returns less than the start value.

    The start simplex depends only on `start`, so the result is reproducible.
    """
    start_value = _checked(objective, start)
    result = minimize(
        lambda x: -_checked(objective, Angles.from_vector(x)),
        start.to_vector(),
        method="Nelder-Mead",
        options=POLISH_OPTIONS,
    )
    angles, value = Angles.from_vector(result.x), -float(result.fun)
    if value < start_value:
        return start, start_value
    logger.info(f"Polished p={start.p}: {start_value:.6f} -> {value:.6f} ({result.nfev} evaluations)")
    return angles, value


@dataclass(frozen=True)
class RunRecord:
    """Outcome of one twisted QAOA run."""

    method: Method
    p: int
    shots: int
    seed: Optional[int]
    angles: Angles
    value: float
    best_cut: Cut
    best_cutsize: int
    max_cut: int
    mean_ratio: float
    raw_mean_ratio: float

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "method": self.method.value,
            "p": self.p,
            "shots": self.shots,
            "seed": self.seed,
            **self.angles.to_dict(),
            "value": round(self.value, 6),
            "best_cut": format_cut(self.best_cut),
            "best_cutsize": self.best_cutsize,
            "max_cut": self.max_cut,
            "mean_ratio": round(self.mean_ratio, 6),
            "raw_mean_ratio": round(self.raw_mean_ratio, 6),
        }


def twisted_qaoa_run(
    g: Graph,
    p: int,
    method: Method = Method.BARE,
    shots: int = 1000,
    seed: Optional[int] = None,
    restarts: int = 8,
    workers: int = 1,
) -> RunRecord:
    """
    Optimize <H_G + Delta>, sample the optimized state and post-process every sample.

    Raises:
        NotCubicError: g is not 3-regular
        TriangleError: HLZ requested on a graph with triangles
        SimulationError: shots < 1 or g over the qubit budget
    """
    method = Method(method)
    g.require_cubic("twisted QAOA")
    if shots < 1:
        raise SimulationError(f"shots must be at least 1, got {shots}")
    if g.n > MAX_QUBITS:
        raise SimulationError(f"Statevector simulation limited to {MAX_QUBITS} qubits, got {g.n}")
    if method is Method.HLZ and triangles(g):
        raise TriangleError("HLZ post-processing: triangle-free required")

    values = cut_values(g)
    diagonal = observable_diagonal(twisted_hamiltonian(g, method), g.n)

    def objective(a: Angles) -> float:
        return diagonal_expectation(prepare_state(g, a, values), diagonal)

    angles, value = optimize_angles(objective, p, restarts, seed, workers)
    cuts = sample(prepare_state(g, angles, values), seed, shots)

    processed: Dict[Cut, Cut] = {}
    raw_sizes, sizes = [], []
    for c in cuts:
        if c not in processed:
            processed[c] = postprocess(g, c, method.value)
        raw_sizes.append(cutsize(g, c))
        sizes.append(cutsize(g, processed[c]))

    best = int(np.argmax(sizes))
    mc, _ = max_cut_exact(g)
    record = RunRecord(
        method=method,
        p=p,
        shots=shots,
        seed=seed,
        angles=angles,
        value=value,
        best_cut=processed[cuts[best]],
        best_cutsize=sizes[best],
        max_cut=mc,
        mean_ratio=float(np.mean(sizes)) / mc,
        raw_mean_ratio=float(np.mean(raw_sizes)) / mc,
    )
    logger.info(
        f"{method.value} run p={p}: best {record.best_cutsize}/{mc}, mean ratio {record.mean_ratio:.4f}"
    )
    return record
