"""Fixed points of graph-constrained contractions on modular spaces.

The package evaluates modular functionals, samples the contraction
hypotheses for violations, runs certified Picard iteration, and reproduces
the closed-form worked examples exactly on a rational backend.
"""

from .backend import EXACT, FLOAT, Backend, Number, get_backend, infer_backend
from .contractions import (BANACH_RESCALE_RULE, KANNAN_RESCALE_RULE,
                           BanachConstants, ContractionReport, KannanConstants,
                           PairViolation, SelfMap, affine_map,
                           check_banach_condition, check_edge_preservation,
                           check_kannan_condition, constant_map,
                           convex_rescale_banach, convex_rescale_kannan,
                           estimate_banach_k, scalar_map)
from .config import ExperimentConfig, config_to_dict, load_config
from .errors import (AdmissibilityError, ConfigError, DimensionMismatchError,
                     ExprError, ModfixError, NonFiniteError)
from .expr import eval_expr, parse_expression, parse_predicate
from .graphs import (Path, SpaceGraph, check_property_star_on_orbit,
                     check_star_condition, find_undirected_path, has_edge,
                     has_undirected_edge, is_weakly_connected_on,
                     make_complete, make_custom, make_poset)
from .modular import (AxiomReport, ModularSpec, Point, Violation, abs_norm,
                      as_point, check_convexity, check_modular_axioms,
                      custom_modular, eval_modular, power, rho_gap,
                      weighted_power)
from .sampling import SplitMix64
from .solver import (CfReport, ConvergenceCertificate, OrbitTrace,
                     PathUniquenessBound, UniquenessEvidence,
                     banach_apriori_bound, check_cf_membership,
                     kannan_cauchy_bound, kannan_tail_bound, picard_orbit,
                     simplest_rational_in, solve_banach, solve_kannan,
                     verify_uniqueness_banach, verify_uniqueness_kannan)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
