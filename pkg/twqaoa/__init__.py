"""
Twisted QAOA Certifier

Twisted hybrid MaxCut algorithms on 3-regular graphs: QAOA simulation, FKL/HLZ
post-processing, the twisted cost Hamiltonians H_G + Delta, and certification of the
guaranteed approximation ratios from witness angles.
"""

from .certify import (
    CertReport,
    WitnessAngleStore,
    certify_all,
    certify_p1_fkl,
    certify_p1_hlz,
    certify_table,
    classical_baselines,
    graph_p1_bound,
)
from .cut import cutsize, flip, good_triplets, max_cut_exact, mc_upper_bound, unsat_sets
from .environments import EnvironmentKind, catalog, classify_environment, environment_census
from .errors import (
    CertificationError,
    CutError,
    GraphError,
    NoMatchError,
    NotCubicError,
    OptimizationError,
    PostprocessError,
    SimulationError,
    TreeError,
    TriangleError,
    TwistError,
)
from .graph import Graph, MarkedGraph, Triplet, from_edge_list, random_three_regular
from .operators import DiagonalObservable, Method, twisted_hamiltonian
from .optimize import RunRecord, optimize_angles, twisted_qaoa_run
from .postprocess import fkl, greedy_unsat, hlz
from .qaoa_sim import Angles, Statevector, expectation, prepare_state, sample
from .treeval import certified_tree_bound, tree_expectation

__version__ = "0.1.0"

__all__ = [
    "Angles",
    "CertReport",
    "CertificationError",
    "CutError",
    "DiagonalObservable",
    "EnvironmentKind",
    "Graph",
    "GraphError",
    "MarkedGraph",
    "Method",
    "NoMatchError",
    "NotCubicError",
    "OptimizationError",
    "PostprocessError",
    "RunRecord",
    "SimulationError",
    "Statevector",
    "TreeError",
    "TriangleError",
    "Triplet",
    "TwistError",
    "WitnessAngleStore",
    "catalog",
    "certified_tree_bound",
    "certify_all",
    "certify_p1_fkl",
    "certify_p1_hlz",
    "certify_table",
    "classical_baselines",
    "classify_environment",
    "cutsize",
    "environment_census",
    "expectation",
    "fkl",
    "flip",
    "from_edge_list",
    "good_triplets",
    "graph_p1_bound",
    "greedy_unsat",
    "hlz",
    "max_cut_exact",
    "mc_upper_bound",
    "optimize_angles",
    "prepare_state",
    "random_three_regular",
    "sample",
    "tree_expectation",
    "twisted_hamiltonian",
    "twisted_qaoa_run",
    "unsat_sets",
]
