"""Conjugate code pairs over small fields, end to end.

The pieces, in dependency order: finite fields and exact linear algebra,
linear codes with cross-containing pairs and their quotients, balanced
companion-matrix ensembles with the spectrum sieve, error exponents for
additive channels, outer evaluation-code pairs, dual-basis concatenation,
and Monte Carlo transmission with analytic comparisons.  The `cli` module
drives all of it from JSON configs.
"""

from .builds import build_system, reference_21, reference_49
from .codes import ConjugatePair, LinearCode, QuotientCode, dual, \
    make_pair, quotient, quotient_encode, spectrum
from .concat import ConcatenatedPair, build_inner_maps, concatenate, \
    verify_duality
from .ensemble import BalancedEnsemble, SieveReport, find_doubly_good_pair, \
    sieve, verify_balanced
from .errors import BudgetExceededError, ConfigError, VerificationError
from .field import Field, field_create
from .infotheory import ChannelModel, css_achievable_rate, entropy, \
    random_coding_exponent, syndrome_decoding_error_bound
from .rs import GrsCode, OuterPair, TableCode, outer_pair, rs_pair
from .simulate import ErrorEstimate, TrialConfig, concat_decode, \
    concat_encode, monte_carlo, transmit, union_bound

__all__ = [
    "BalancedEnsemble", "BudgetExceededError", "ChannelModel",
    "ConcatenatedPair", "ConfigError", "ConjugatePair", "ErrorEstimate",
    "Field", "GrsCode", "LinearCode", "OuterPair", "QuotientCode",
    "SieveReport", "TableCode", "TrialConfig", "VerificationError",
    "build_inner_maps", "build_system", "concat_decode", "concat_encode",
    "concatenate", "css_achievable_rate", "dual", "entropy", "field_create",
    "find_doubly_good_pair", "make_pair", "monte_carlo", "outer_pair",
    "quotient", "quotient_encode", "random_coding_exponent", "reference_21",
    "reference_49", "rs_pair", "sieve", "spectrum",
    "syndrome_decoding_error_bound", "transmit", "union_bound",
    "verify_balanced", "verify_duality",
]
