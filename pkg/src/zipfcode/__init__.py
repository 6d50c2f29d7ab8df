"""Optimal coding lengths, Zipf's law and the law of abbreviation.

Submodules
----------
coding
    Optimal code lengths, code enumeration, Elias gamma, decodability.
rankstats
    Rank distributions, entropy, expected log-rank, Kendall tau-b, efficiencies.
fitting
    Zipf and exponential MLE, linear length laws, class membership.
random_typing
    Miller's random-typing generator and its closed forms.
corpus
    Tokenisation and token counting.
"""
from .coding import (
    Alphabet,
    CodeTable,
    SchemeKind,
    elias_gamma_decode,
    elias_gamma_encode,
    enumerate_nonsingular_codes,
    is_nonsingular,
    is_uniquely_decodable,
    kraft_sum,
    nonsingular_length_hard,
    nonsingular_length_soft,
    ud_length_hard,
    ud_length_soft,
)
from .fitting import (
    assess_class_membership,
    fit_exponential_mle,
    fit_size_probability_law,
    fit_size_rank_law,
    fit_zipf_mle,
    select_model,
    zipf_distribution,
)
from .kernels import BACKEND
from .rankstats import (
    LengthProfile,
    RankDistribution,
    coding_efficiency,
    entropy,
    from_counts,
    kendall_tau_b,
    mean_length,
    mean_log_rank,
)

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "assess_class_membership",
    "BACKEND",
    "CodeTable",
    "coding_efficiency",
    "elias_gamma_decode",
    "elias_gamma_encode",
    "entropy",
    "enumerate_nonsingular_codes",
    "fit_exponential_mle",
    "fit_size_probability_law",
    "fit_size_rank_law",
    "fit_zipf_mle",
    "from_counts",
    "is_nonsingular",
    "is_uniquely_decodable",
    "kendall_tau_b",
    "kraft_sum",
    "LengthProfile",
    "mean_length",
    "mean_log_rank",
    "nonsingular_length_hard",
    "nonsingular_length_soft",
    "RankDistribution",
    "SchemeKind",
    "select_model",
    "ud_length_hard",
    "ud_length_soft",
    "zipf_distribution",
    "__version__",
]
