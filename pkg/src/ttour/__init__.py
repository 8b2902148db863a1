"""Best-of-Many Christofides for shortest T-tours, in exact rational arithmetic,
with a checker for every inequality of the 8/5 analysis."""

from .analysis import Certificate, Check, verify_certificates
from .bom import BomReport, OptResult, TourResult, best_of_many, brute_force_opt, christofides_single
from .constants import BETA_STAR, f_beta, f_beta_exact, minimize_mixed_bound, mixed_bound
from .decomposition import DecompositionError, TreeCombination, decompose, packing_value_oracle
from .graph import DEFAULT_CAPS, CapacityError, Caps, Cut, Graph, Instance, InstanceError
from .instances import FIXTURES, ParseError, fixture, format_instance, gen_random, parse_instance
from .lp import LpSolution, solve_relaxation
from .tjoin import brute_force_tjoin, min_tjoin

__all__ = [
    "BETA_STAR", "BomReport", "Caps", "CapacityError", "Certificate", "Check", "Cut",
    "DEFAULT_CAPS", "DecompositionError", "FIXTURES", "Graph", "Instance", "InstanceError",
    "LpSolution", "OptResult", "ParseError", "TourResult", "TreeCombination",
    "best_of_many", "brute_force_opt", "brute_force_tjoin", "christofides_single",
    "decompose", "f_beta", "f_beta_exact", "fixture", "format_instance", "gen_random",
    "min_tjoin", "minimize_mixed_bound", "mixed_bound", "packing_value_oracle",
    "parse_instance", "solve_relaxation", "verify_certificates",
]
