"""
Certification

Reproduces the guaranteed approximation ratios of bare, FKL-twisted and HLZ-twisted QAOA
at levels 1..6 from stored witness angles:

- level 1 twisted bounds: every catalog environment is simulated and the tree environment
  must be the worst one, so its value bounds every cubic graph (triangle-free for HLZ)
- level p tree bounds: the kind's operator evaluated on the level-p tree, valid for
  graphs of girth above 2p+2

Bare angles for p <= 3 are not stored; they are generated once by the optimizer and frozen
into a JSON cache.
"""

import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .cut import l_edge, l_triplet
from .environments import EnvironmentKind, catalog, environment_census
from .errors import CertificationError, TriangleError
from .graph import Graph, Triplet, triangles
from .operators import Method
from .optimize import optimize_angles, polish_angles
from .qaoa_sim import Angles, state_expectation
from .treeval import KIND_FACTORS, MAX_TREE_LEVEL, certified_tree_bound, kind_operator, kind_tree

logger = logging.getLogger(__name__)

TOLERANCE = 5e-5
ORDERING_SLACK = 1e-12
STATEVECTOR_MAX_LEVEL = 2
SCHEMA_VERSION = 1

METHOD_KIND: Dict[Method, EnvironmentKind] = {
    Method.BARE: EnvironmentKind.EDGE,
    Method.FKL: EnvironmentKind.TRIPLET,
    Method.HLZ: EnvironmentKind.STAR,
}

TABLE_TARGETS: Dict[Method, Tuple[float, ...]] = {
    Method.BARE: (0.6924, 0.7559, 0.7923, 0.8168, 0.8363, 0.8498),
    Method.FKL: (0.7443, 0.7887, 0.8146, 0.8323, 0.8457, 0.8564),
    Method.HLZ: (0.7548, 0.7954, 0.8191, 0.8358, 0.8482, 0.8582),
}

PRINTED_ANGLES: Dict[Tuple[Method, int], Angles] = {
    (Method.FKL, 1): Angles.of((1.130565,), (5.667705,)),
    (Method.HLZ, 1): Angles.of((0.102870,), (5.669319,)),
    (Method.FKL, 2): Angles.of((0.99225, 3.46308), (5.78009, 2.25304)),
    (Method.HLZ, 2): Angles.of((0.98705, 3.47167), (5.77664, 2.25962)),
    (Method.FKL, 3): Angles.of((0.62112, 0.48905, 0.26477), (0.42728, 0.79596, 0.92620)),
    (Method.HLZ, 3): Angles.of((0.62519, 0.49754, 0.27393), (0.42808, 0.79569, 0.92077)),
    (Method.BARE, 4): Angles.of(
        (0.59956, 0.43434, 0.29676, 0.15904), (0.40875, 0.78057, 0.98804, 0.15691)
    ),
    (Method.FKL, 4): Angles.of(
        (0.63219, 2.09215, 0.42150, 0.22286), (0.38433, 0.72509, 0.83266, 0.94350)
    ),
    (Method.HLZ, 4): Angles.of(
        (0.63516, 0.52634, 0.43047, 0.23058), (0.38478, 0.72269, 0.82767, 0.93461)
    ),
    (Method.BARE, 5): Angles.of(
        (0.63167, 0.52253, 1.96094, 0.27599, 0.14930),
        (0.35924, 0.70609, 0.82209, 1.00420, 1.15394),
    ),
    (Method.FKL, 5): Angles.of(
        (0.64008, 0.54030, 0.45437, 0.34000, 0.18710),
        (0.35582, 0.68736, 0.78042, 0.87482, 0.99556),
    ),
    (Method.HLZ, 5): Angles.of(
        (0.64349, 0.54679, 0.46687, 0.38838, 0.19975),
        (0.35349, 0.68144, 0.76945, 0.85500, 0.96997),
    ),
    (Method.BARE, 6): Angles.of(
        (0.63589, 0.53443, 0.46334, 0.35999, 0.25858, 0.13885),
        (0.33137, 0.64558, 0.73165, 0.83696, 1.01019, 1.12724),
    ),
    (Method.FKL, 6): Angles.of(
        (0.64369, 0.54870, 0.47903, 0.40547, 1.88825, 0.16000),
        (0.33434, 0.64986, 0.73024, 0.81681, 0.93262, 1.04923),
    ),
    (Method.HLZ, 6): Angles.of(
        (0.64622, 0.55243, 0.48572, 0.42258, 1.91095, 0.17045),
        (0.33265, 0.64669, 0.72479, 0.80326, 0.90278, 1.01496),
    ),
}

# printed entries with a dropped leading digit; each one restores its table value
ANGLE_CORRECTIONS: Dict[Tuple[Method, int], Angles] = {
    (Method.HLZ, 1): Angles.of((1.102870,), (5.669319,)),
    (Method.BARE, 4): Angles.of(
        (0.59956, 0.43434, 0.29676, 0.15904), (0.40875, 0.78057, 0.98804, 1.15691)
    ),
}

# printed entries that miss their table value with no single-digit fix known; they are
# polished by one Nelder-Mead ascent started at the printed point
POLISHED_CELLS = frozenset({(Method.FKL, 5)})

WITNESS_ANGLES: Dict[Tuple[Method, int], Angles] = {**PRINTED_ANGLES, **ANGLE_CORRECTIONS}

GENERATED_LEVELS = (1, 2, 3)


def angle_source(method: Method, p: int) -> str:
    """Where a cell's certifying angles come from."""
    key = (Method(method), p)
    if key in ANGLE_CORRECTIONS:
        return "corrected"
    if key in POLISHED_CELLS:
        return "polished"
    if key in PRINTED_ANGLES:
        return "printed"
    return "generated"


@dataclass
class CertReport:
    """One certified bound and whether it meets its table value."""

    method: Method
    p: int
    angles: Angles
    bound: float
    target: float
    passed: bool
    breakdown: Optional[List[dict]] = None
    seconds: Optional[float] = None
    failure: Optional[str] = None
    source: str = "given"

    def to_dict(self, timing: bool = False) -> dict:
        """JSON-ready document; `seconds` stays null unless timing is requested."""
        document = {
            "schema": SCHEMA_VERSION,
            "method": self.method.value,
            "p": self.p,
            **self.angles.to_dict(),
            "angles_source": self.source,
            "bound": round(self.bound, 8),
            "target": self.target,
            "pass": self.passed,
            "breakdown": self.breakdown,
            "seconds": round(self.seconds, 3) if timing and self.seconds is not None else None,
        }
        if self.failure:
            document["failure"] = self.failure
        return document


def target_for(method: Method, p: int) -> float:
    method = Method(method)
    if not 1 <= p <= MAX_TREE_LEVEL:
        raise CertificationError(f"Table levels are 1..{MAX_TREE_LEVEL}, got {p}")
    return TABLE_TARGETS[method][p - 1]


def meets(bound: float, target: float) -> bool:
    return bound >= target - TOLERANCE


class WitnessAngleStore:
    """
    Witness angles by (method, level).

    Stored values are used as printed, apart from ANGLE_CORRECTIONS. Cells in
    POLISHED_CELLS are polished from their printed point, and missing bare levels 1..3 are
    optimized on the edge tree; both are written to `cache_path` (when set) so later runs
    reuse them.

    Args:
        cache_path: JSON file for generated angles, or None to keep them in memory only
        restarts: Optimizer restarts for generation
        seed: Optimizer seed for generation
        workers: Optimizer threads
    """

    def __init__(
        self,
        cache_path: Optional[Path] = None,
        restarts: int = 64,
        seed: int = 2023,
        workers: int = 1,
    ):
        self.cache_path = Path(cache_path) if cache_path else None
        self.restarts = restarts
        self.seed = seed
        self.workers = workers
        self.angles: Dict[Tuple[Method, int], Angles] = {
            key: a for key, a in WITNESS_ANGLES.items() if key not in POLISHED_CELLS
        }
        self._load_cache()

    @staticmethod
    def _cacheable(key: Tuple[Method, int]) -> bool:
        return key not in WITNESS_ANGLES or key in POLISHED_CELLS

    def _load_cache(self) -> None:
        if not self.cache_path or not self.cache_path.exists():
            return
        try:
            with open(self.cache_path, 'r') as f:
                data = json.load(f)
            for method_name, levels in data.items():
                for level, entry in levels.items():
                    key = (Method(method_name), int(level))
                    if self._cacheable(key):
                        self.angles[key] = Angles.of(entry["beta"], entry["gamma"])
            logger.debug(f"Loaded generated angles from {self.cache_path}")
        except (OSError, ValueError, KeyError, TypeError) as e:
            logger.warning(f"Ignoring unreadable angle cache {self.cache_path}: {e}")

    def _save_cache(self) -> None:
        if not self.cache_path:
            return
        data: Dict[str, Dict[str, dict]] = {}
        for (method, level), a in sorted(self.angles.items(), key=lambda kv: (kv[0][0].value, kv[0][1])):
            if not self._cacheable((method, level)):
                continue
            data.setdefault(method.value, {})[str(level)] = {
                "beta": list(a.beta),
                "gamma": list(a.gamma),
            }
        if self.cache_path.parent and str(self.cache_path.parent) != '.':
            self.cache_path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.cache_path, 'w', newline='\n') as f:
            json.dump(data, f, indent=2, sort_keys=True)
            f.write("\n")
        logger.info(f"Saved generated angles to {self.cache_path}")

    def has(self, method: Method, p: int) -> bool:
        return (Method(method), p) in self.angles

    def get(self, method: Method, p: int) -> Angles:
        """
        Raises:
            CertificationError: no stored angles and the level cannot be generated
        """
        key = (Method(method), p)
        if key in self.angles:
            return self.angles[key]
        if key in POLISHED_CELLS:
            self.angles[key] = self.polish(key[0], p)
            self._save_cache()
            return self.angles[key]
        if key[0] is Method.BARE and p in GENERATED_LEVELS:
            self.angles[key] = self.generate(key[0], p)
            self._save_cache()
            return self.angles[key]
        raise CertificationError(f"No witness angles for {key[0].value} at p={p}")

    def generate(self, method: Method, p: int) -> Angles:
        """Optimize the certified tree bound of the method's support kind."""
        kind = METHOD_KIND[Method(method)]
        logger.info(f"Generating {Method(method).value} angles at p={p} ({self.restarts} restarts)")
        angles, value = optimize_angles(
            lambda a: certified_tree_bound(kind, p, a),
            p,
            restarts=self.restarts,
            seed=self.seed,
            workers=self.workers,
        )
        logger.info(f"Generated angles reach {value:.6f}")
        return angles

    def polish(self, method: Method, p: int) -> Angles:
        """Nelder-Mead ascent of the certified tree bound from the printed angles."""
        kind = METHOD_KIND[Method(method)]
        printed = PRINTED_ANGLES[(Method(method), p)]
        logger.info(f"Polishing printed {Method(method).value} angles at p={p}")
        angles, _ = polish_angles(lambda a: certified_tree_bound(kind, p, a), printed)
        return angles


def _environment_values(kind: EnvironmentKind, angles: Angles) -> List[Tuple[float, Fraction]]:
    """(operator expectation, L-weight) per catalog entry, by statevector."""
    rows = []
    for env in catalog(kind).entries:
        value = state_expectation(env.graph, angles, kind_operator(kind, env.marked))
        if kind is EnvironmentKind.TRIPLET:
            weight = l_triplet(env.graph, Triplet(*env.marked))
        elif kind is EnvironmentKind.EDGE:
            weight = l_edge(env.graph, env.marked)
        else:
            # a star covers three edges, each shared with one other star
            weight = Fraction(3, 2)
        rows.append((value, weight))
    return rows


def _certify_p1(method: Method, angles: Angles, source: str = "given") -> CertReport:
    """Environment argument: the tree entry must give the smallest ratio."""
    kind = METHOD_KIND[method]
    cat = catalog(kind)
    started = time.perf_counter()
    rows = _environment_values(kind, angles)
    ratios = [value / float(weight) for value, weight in rows]

    breakdown = [
        {
            "environment": cat.name(r),
            "expectation": round(value, 10),
            "weight": str(weight),
            "ratio": round(ratio, 10),
        }
        for r, ((value, weight), ratio) in enumerate(zip(rows, ratios))
    ]
    offenders = [r for r, ratio in enumerate(ratios) if ratio < ratios[0] - ORDERING_SLACK]
    bound = ratios[0]
    target = target_for(method, 1)

    failure = None
    if offenders:
        failure = f"Environment {cat.name(offenders[0])} has a smaller ratio than the tree G1"
        logger.warning(f"{method.value} p=1: {failure}")
    elif not meets(bound, target):
        failure = f"Bound {bound:.6f} below target {target}"
        logger.warning(f"{method.value} p=1: {failure}")

    return CertReport(
        method=method,
        p=1,
        angles=angles,
        bound=bound,
        target=target,
        passed=failure is None,
        breakdown=breakdown,
        seconds=time.perf_counter() - started,
        failure=failure,
        source=source,
    )


def certify_p1_fkl(angles: Optional[Angles] = None) -> CertReport:
    """
    Level-1 FKL bound over all 11 triplet environments.

    ratio_r = <T_(c,j,k)> / L_(c,j,k) on environment r; certified bound = ratio of the tree.
    """
    if angles is None:
        return certify_table(Method.FKL, 1)
    return _certify_p1(Method.FKL, angles)


def certify_p1_hlz(angles: Optional[Angles] = None) -> CertReport:
    """Level-1 HLZ bound over the 8 triangle-free star environments: (2/3)<S_c>."""
    if angles is None:
        return certify_table(Method.HLZ, 1)
    return _certify_p1(Method.HLZ, angles)


def tree_bound(method: Method, p: int, angles: Angles) -> float:
    """Certified tree value: statevector for p <= 2, message passing beyond."""
    kind = METHOD_KIND[Method(method)]
    if p <= STATEVECTOR_MAX_LEVEL:
        tree = kind_tree(kind, p)
        value = state_expectation(tree.graph, angles, kind_operator(kind, tree.marked))
        return float(KIND_FACTORS[kind]) * value
    return certified_tree_bound(kind, p, angles)


def certify_table(method: Method, p: int, store: Optional[WitnessAngleStore] = None) -> CertReport:
    """
    Certify one cell of the results table.

    Raises:
        CertificationError: level outside 1..6 or no angles available
    """
    method = Method(method)
    target = target_for(method, p)
    store = store or WitnessAngleStore()
    angles = store.get(method, p)

    if p == 1 and method is not Method.BARE:
        return _certify_p1(method, angles, angle_source(method, p))

    started = time.perf_counter()
    bound = tree_bound(method, p, angles)
    passed = meets(bound, target)
    failure = None if passed else f"Bound {bound:.6f} below target {target}"
    if failure:
        logger.warning(f"{method.value} p={p}: {failure}")
    else:
        logger.info(f"{method.value} p={p}: {bound:.6f} >= {target}")
    return CertReport(
        method=method,
        p=p,
        angles=angles,
        bound=bound,
        target=target,
        passed=passed,
        seconds=time.perf_counter() - started,
        failure=failure,
        source=angle_source(method, p),
    )


def table_cells() -> List[Tuple[Method, int]]:
    return [(method, p) for method in Method for p in range(1, MAX_TREE_LEVEL + 1)]


def certify_all(store: Optional[WitnessAngleStore] = None, workers: int = 1) -> List[CertReport]:
    """All 18 cells in order bare, FKL, HLZ and p = 1..6 within each."""
    store = store or WitnessAngleStore()
    cells = table_cells()
    for method, p in cells:
        store.get(method, p)

    if workers <= 1:
        return [certify_table(method, p, store) for method, p in cells]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(lambda cell: certify_table(cell[0], cell[1], store), cells))


def table_invariant_violations(reports: List[CertReport]) -> List[str]:
    """
    Cross-row checks on a full table: bare <= FKL <= HLZ at every level, and the best
    twisted bound at level p-1 within 0.01 of the bare bound at level p.
    """
    bounds = {(r.method, r.p): r.bound for r in reports}
    problems = []
    for p in range(1, MAX_TREE_LEVEL + 1):
        row = [bounds.get((m, p)) for m in (Method.BARE, Method.FKL, Method.HLZ)]
        if None not in row and not (row[0] <= row[1] + TOLERANCE and row[1] <= row[2] + TOLERANCE):
            problems.append(f"p={p}: bounds not ordered bare <= fkl <= hlz ({row})")
    for p in range(2, MAX_TREE_LEVEL + 1):
        twisted = [bounds.get((m, p - 1)) for m in (Method.FKL, Method.HLZ)]
        bare = bounds.get((Method.BARE, p))
        if bare is None or None in twisted:
            continue
        if max(twisted) < bare - 0.01:
            problems.append(f"p={p}: twisted level {p - 1} ({max(twisted):.4f}) trails bare ({bare:.4f})")
    return problems


def graph_p1_bound(g: Graph, method: Method, angles: Optional[Angles] = None) -> CertReport:
    """
    Level-1 ratio bound for one concrete cubic graph.

    Groups the graph's supports by environment: the bound is sum_r n_r t_r / sum_r n_r l_r,
    at least the universal level-1 bound at the same angles.

    Raises:
        TriangleError: HLZ requested on a graph with triangles
    """
    method = Method(method)
    kind = METHOD_KIND[method]
    if method is Method.HLZ and triangles(g):
        raise TriangleError("HLZ bound: triangle-free required")
    if angles is None:
        angles = WITNESS_ANGLES.get((method, 1)) or WitnessAngleStore().get(method, 1)

    started = time.perf_counter()
    counts = environment_census(g, kind)
    rows = _environment_values(kind, angles)
    cat = catalog(kind)

    numerator = sum(n * value for n, (value, _) in zip(counts, rows))
    denominator = float(sum((n * weight for n, (_, weight) in zip(counts, rows)), Fraction(0)))
    bound = numerator / denominator
    breakdown = [
        {"environment": cat.name(r), "count": n, "expectation": round(value, 10)}
        for r, (n, (value, _)) in enumerate(zip(counts, rows))
        if n
    ]
    target = target_for(method, 1)
    logger.debug(f"Graph bound {bound:.6f} from census {counts}")
    return CertReport(
        method=method,
        p=1,
        angles=angles,
        bound=bound,
        target=target,
        passed=meets(bound, target),
        breakdown=breakdown,
        seconds=time.perf_counter() - started,
    )


@dataclass(frozen=True)
class Baseline:
    name: str
    ratio: Fraction
    description: str = field(default="")


def classical_baselines() -> List[Baseline]:
    """Guaranteed ratios of post-processing applied to trivial cuts on cubic graphs."""
    return [
        Baseline("fkl-constant-cut", Fraction(2, 3), "FKL on the constant cut"),
        Baseline("fkl-random-cut", Fraction(2, 3), "FKL on a uniformly random cut (expected)"),
        Baseline("hlz-constant-cut", Fraction(34, 45), "HLZ on the constant cut, triangle-free"),
        Baseline(
            "hlz-random-cut",
            Fraction(1, 2) + Fraction(29, 180),
            "HLZ on a uniformly random cut (expected, lower bound), triangle-free",
        ),
        Baseline("greedy-random-cut", Fraction(9, 16), "Greedy V3 flips on a random cut (expected)"),
    ]
