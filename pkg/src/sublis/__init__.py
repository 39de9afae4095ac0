"""Sublinear-query LIS estimation and erasure-resilient monotonicity testing."""

from .additive import (InsufficientSample, PseudoSolution, SubarraySample, TypicalValueSet,
                       best_pseudo_solution, estimate_lis_additive, estimate_lis_presampled,
                       find_typical)
from .exact import (Poset, count_deserted, distance_to_monotonicity, erased_distance,
                    is_completable_monotone, lis_dp, lis_exact, max_antichain, min_chain_cover)
from .hard import BlockRef, ScaleVector, detect_bad_event, lca_level, sample_D, sample_Dh
from .oracle import (ERASED, OUT_OF_RANGE, EstimateReport, ErasedArray, QueryOracle, make_rng,
                     read_instance, write_instance)
from .sqrt import estimate_lis_multiplicative, lambda_sweep
from .tester import TesterVerdict, er_test, er_test_single

__version__ = "0.1.0"

__all__ = [
    "ERASED", "OUT_OF_RANGE", "BlockRef", "ErasedArray", "EstimateReport", "InsufficientSample",
    "Poset", "PseudoSolution", "QueryOracle", "ScaleVector", "SubarraySample", "TesterVerdict",
    "TypicalValueSet", "best_pseudo_solution", "count_deserted", "detect_bad_event",
    "distance_to_monotonicity", "er_test", "er_test_single", "erased_distance",
    "estimate_lis_additive", "estimate_lis_multiplicative", "estimate_lis_presampled",
    "find_typical", "is_completable_monotone", "lambda_sweep", "lca_level", "lis_dp", "lis_exact",
    "make_rng", "max_antichain", "min_chain_cover", "read_instance", "sample_D", "sample_Dh",
    "write_instance",
]
