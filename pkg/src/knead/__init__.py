"""Kneading theory for piecewise monotone graph maps.

Exact rational computation of kneading determinants, negative and Lefschetz
zeta functions and topological entropy, with coefficient-wise checks of the
identities that tie them together.
"""
__version__ = "0.1.0"

from .config import RunConfig
from .errors import (IdentityViolated, InfiniteFixedSet, InputError, KneadError,
                     LapBudgetExceeded, ParseError, SemanticError, UnstableRoot)
from .finite_rank import (CoordinateForm, FiniteRankPair, RankOneTerm, StepForm,
                          check_multiplicativity, pair_determinant, pair_matrix,
                          pair_traces, perturbed_root_bound)
from .graph import (Gluing, GluedGraph, InducedMap, build_graph,
                    homological_entropy, spectral_radius, validate_induced)
from .kneading import (KneadingData, check_kneading_zeta_identity,
                       kneading_matrices, sigma, trace_identity_check)
from .mapfile import MapDefinition, bundled_maps, load_map, parse_map_file
from .pm_domain import (Branch, FormalVector, Lap, Omega, PMMap, lap_count,
                        laps, signed_orbit, validate, variation)
from .series import (SeriesMatrix, TruncatedSeries, det_id_minus_zM,
                     radius_estimate, smallest_root_in_disk)
from .spectra import (EntropyReport, FixCounts, artin_mazur_oracle,
                      correction_factor_H, count_fix_neg_lift, entropy,
                      fix_counts, glued_point_corrections, zeta_lefschetz,
                      zeta_minus, zeta_mt)
from .verify import verify_map

__all__ = [
    "RunConfig", "IdentityViolated", "InfiniteFixedSet", "InputError", "KneadError",
    "LapBudgetExceeded", "ParseError", "SemanticError", "UnstableRoot",
    "CoordinateForm", "FiniteRankPair", "RankOneTerm", "StepForm",
    "check_multiplicativity", "pair_determinant", "pair_matrix", "pair_traces",
    "perturbed_root_bound", "Gluing", "GluedGraph", "InducedMap", "build_graph",
    "homological_entropy", "spectral_radius", "validate_induced", "KneadingData",
    "check_kneading_zeta_identity", "kneading_matrices", "sigma",
    "trace_identity_check", "MapDefinition", "bundled_maps", "load_map",
    "parse_map_file", "Branch", "FormalVector", "Lap", "Omega", "PMMap",
    "lap_count", "laps", "signed_orbit", "validate", "variation", "SeriesMatrix",
    "TruncatedSeries", "det_id_minus_zM", "radius_estimate", "smallest_root_in_disk",
    "EntropyReport", "FixCounts", "artin_mazur_oracle", "correction_factor_H",
    "count_fix_neg_lift", "entropy", "fix_counts", "glued_point_corrections",
    "zeta_lefschetz", "zeta_minus", "zeta_mt", "verify_map",
]
