"""Logarithmic functions on F_q(t) and F_q(x, y): c-pairs, AF search, valuation reconstruction."""

from .cpair import (AFElement, BadSubspace, CPairResult, Corank, InertiaResult, NotFound, af_corank,
                    find_af_in_span, find_bad_subspace, inertia_check, is_c_pair_field,
                    verify_cpair_witness)
from .logfun import (Character, LogFunction, PlaceWeights, combination, eval_log, logfunction_from_json,
                     ord_place, restrict_to_subspace)
from .models import Bivariate, Univariate
from .reconstruct import ReconstructionResult, reconstruct_valuation, verify_ultrametric_witness
from .valuations import MonomialValuation, Place, PlaceValuation
