"""Fitting Zipf's law, the exponential alternative and the two linear
length laws, plus the conversions between their parameters.

Naming: the *size-rank* law regresses length on ``log_N i`` and its slope
and intercept are ``a_ns``/``b_ns`` (displacement from optimal non-singular
coding). The *size-probability* law regresses length on ``-log_N p(i)``
with ``a_ud``/``b_ud`` (displacement from optimal uniquely decodable
coding). Zipf's law then has ``alpha = a_ns / a_ud``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np
from scipy.optimize import brentq

from . import kernels
from .coding import _check_base
from .errors import (
    CollinearityError,
    ConvergenceError,
    DegenerateInputError,
    DimensionMismatchError,
    DomainError,
    EmptyInputError,
    ResourceLimitError,
)
from .rankstats import (
    LengthProfile,
    RankDistribution,
    entropy,
    kendall_tau_b,
    mean_length,
    mean_log_rank,
)

ALPHA_BRACKET = (0.0, 20.0)
MAX_SUPPORT = 10**8


class LawKind(enum.Enum):
    SIZE_RANK = "size_rank"
    SIZE_PROBABILITY = "size_probability"


class ModelVerdict(enum.Enum):
    POWER_LAW = "PowerLaw"
    EXPONENTIAL = "Exponential"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class ZipfFit:
    alpha: float
    c: float
    n: int
    log_likelihood: float
    stderr: float
    total: float
    base: Optional[int] = None

    @property
    def beta(self) -> Optional[float]:
        """``-log_N c``; needs ``base``."""
        if self.base is None:
            return None
        return -math.log(self.c) / math.log(self.base) + 0.0


@dataclass(frozen=True)
class ExponentialFit:
    lam: float
    n: int
    log_likelihood: float
    stderr: float
    total: float


@dataclass(frozen=True)
class LinearLawFit:
    slope: float
    intercept: float
    r_squared: float
    weighted: bool
    law: LawKind
    n: int
    residual_autocorr: float = 0.0


class ModelSelection(NamedTuple):
    verdict: ModelVerdict
    delta_aic: float
    power_law: ZipfFit
    exponential: ExponentialFit


@dataclass(frozen=True)
class GroupParams:
    """Parameters of Zipf's law and of both linear length laws.

    Any two of the three pairs determine the third; see
    :meth:`complete`.
    """

    alpha: float
    c: float
    a_ns: float
    b_ns: float
    a_ud: float
    b_ud: float
    base: int

    @classmethod
    def complete(cls, base, alpha=None, c=None, a_ns=None, b_ns=None, a_ud=None, b_ud=None):
        have_zipf = alpha is not None and c is not None
        have_ns = a_ns is not None and b_ns is not None
        have_ud = a_ud is not None and b_ud is not None
        if have_ns and have_ud:
            alpha, c = zipf_from_law_params(a_ns, b_ns, a_ud, b_ud, base)
        elif have_zipf and have_ns:
            a_ud, b_ud = size_rank_from(alpha, c, a_ns, b_ns, base)
        elif have_zipf and have_ud:
            a_ns, b_ns = size_prob_from(alpha, c, a_ud, b_ud, base)
        else:
            raise DomainError("need two complete parameter pairs out of (alpha, c), (a_ns, b_ns), (a_ud, b_ud)")
        return cls(alpha, c, a_ns, b_ns, a_ud, b_ud, base)


@dataclass(frozen=True)
class ClassMembershipReport:
    verdict: bool
    tau: Optional[float]
    tau_ok: bool
    size_rank: Optional[LinearLawFit]
    size_prob: Optional[LinearLawFit]
    slopes_nonnegative: bool
    implied_alpha: Optional[float]
    implied_c: Optional[float]
    direct_zipf: Optional[ZipfFit]
    alpha_discrepancy: Optional[float]
    c_discrepancy: Optional[float]
    alpha_consistent: Optional[bool]
    n_used: int
    thresholds: dict
    base: int
    diagnostics: list = field(default_factory=list)


def zipf_distribution(alpha: float, n: int, n_symbols: int = 2) -> RankDistribution:
    """Exact truncated Zipf distribution ``p(i) = c i**-alpha`` on ranks 1..n."""
    _check_base(n_symbols)
    if alpha < 0 or not math.isfinite(alpha):
        raise DomainError(f"alpha must be finite and >= 0, got {alpha!r}")
    if int(n) != n or n < 1:
        raise DomainError(f"support size must be a positive integer, got {n!r}")
    if n > MAX_SUPPORT:
        raise ResourceLimitError(f"support size {n} exceeds {MAX_SUPPORT}")
    weights = np.exp(-alpha * np.log(np.arange(1, int(n) + 1, dtype=np.float64)))
    probs = weights / weights.sum()
    # keep ties exact so the sortedness check never trips on rounding
    return RankDistribution(np.minimum.accumulate(probs))


def _rank_weights(counts):
    """Positive weights in rank order (descending)."""
    w = np.asarray(counts, dtype=np.float64)
    if w.ndim != 1:
        raise DomainError("counts must be one-dimensional")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise DomainError("counts must be finite and non-negative")
    w = w[w > 0]
    return -np.sort(-w, kind="stable")


def _zipf_moments(alpha, log_i):
    """Mean and variance of ``log i`` under the truncated power law, plus ``log Z``."""
    w = np.exp(-alpha * log_i)
    z = w.sum()
    mean = float(np.dot(w, log_i) / z)
    var = float(np.dot(w, (log_i - mean) ** 2) / z)
    return mean, var, math.log(z)


def zipf_log_likelihood(alpha, counts) -> float:
    w = _rank_weights(counts)
    log_i = np.log(np.arange(1, len(w) + 1, dtype=np.float64))
    _, _, log_z = _zipf_moments(alpha, log_i)
    return float(-alpha * np.dot(w, log_i) - w.sum() * log_z)


def zipf_score(alpha, counts) -> float:
    """Derivative of the truncated power-law log-likelihood in ``alpha``."""
    w = _rank_weights(counts)
    log_i = np.log(np.arange(1, len(w) + 1, dtype=np.float64))
    mean, _, _ = _zipf_moments(alpha, log_i)
    return float(w.sum() * mean - np.dot(w, log_i))


def fit_zipf_mle(counts, n_symbols: Optional[int] = None, presorted: bool = False) -> ZipfFit:
    """Maximum-likelihood exponent of a power law truncated to the observed ranks.

    ``counts`` are frequencies; they are ranked (sorted descending, zeros
    dropped) before fitting. Non-integer weights are accepted, which lets the
    same estimator run on a probability vector.

    With ``presorted=True`` the ``i``-th entry is taken as the count of rank
    ``i`` as given, zeros included, so the support is ``len(counts)``. Use
    this when ranks are known independently of the sample (simulation from
    a known distribution); ranking by the sample's own frequencies biases
    the exponent by a few standard errors at large sample sizes.

    Raises
    ------
    ConvergenceError
        If the likelihood still increases at the upper end of the
        ``alpha`` bracket.
    """
    if n_symbols is not None:
        _check_base(n_symbols)
    if presorted:
        w = np.asarray(counts, dtype=np.float64)
        if w.ndim != 1 or np.any(w < 0) or not np.all(np.isfinite(w)):
            raise DomainError("counts must be a one-dimensional array of finite non-negative values")
        if w.sum() <= 0:
            raise EmptyInputError("all counts are zero")
    else:
        w = _rank_weights(counts)
    n = len(w)
    if n < 2:
        raise DegenerateInputError("need at least two ranks to fit a power law")
    total = float(w.sum())
    log_i = np.log(np.arange(1, n + 1, dtype=np.float64))
    sum_wlog = float(np.dot(w, log_i))

    def score(a):
        return total * _zipf_moments(a, log_i)[0] - sum_wlog

    lo, hi = ALPHA_BRACKET
    s_lo = score(lo)
    if s_lo <= 1e-12 * total * max(1.0, log_i[-1]):
        # flat or increasing data: the constrained maximum sits at alpha = 0
        alpha = 0.0
    else:
        s_hi = score(hi)
        if s_hi > 0:
            raise ConvergenceError(f"likelihood still increasing at alpha = {hi}; no root in [{lo}, {hi}]")
        alpha = brentq(score, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=500)
    _, var, log_z = _zipf_moments(alpha, log_i)
    loglik = -alpha * sum_wlog - total * log_z
    stderr = 1.0 / math.sqrt(total * var) if var > 0 else math.inf
    return ZipfFit(
        alpha=float(alpha),
        c=math.exp(-log_z),
        n=n,
        log_likelihood=float(loglik),
        stderr=stderr,
        total=total,
        base=n_symbols,
    )


def fit_zipf_loglog(dist: RankDistribution) -> float:
    """Exponent from least squares of ``log p`` on ``log i``; a diagnostic only."""
    if dist.n < 2:
        raise CollinearityError("need at least two ranks")
    slope = np.polyfit(np.log(dist.ranks()), np.log(dist.probs), 1)[0]
    return float(-slope)


def _exp_moments(lam, ranks):
    w = np.exp(-lam * (ranks - 1.0))
    z = w.sum()
    mean = float(np.dot(w, ranks) / z)
    var = float(np.dot(w, (ranks - mean) ** 2) / z)
    log_z = math.log(z) - lam  # normaliser of exp(-lam * i)
    return mean, var, log_z


def fit_exponential_mle(counts) -> ExponentialFit:
    """Maximum-likelihood rate of ``p(i) ∝ exp(-lam i)`` on the observed ranks.

    Starts from the untruncated geometric inversion of the mean rank and
    refines with a bracketed root search on the score.
    """
    w = _rank_weights(counts)
    n = len(w)
    if n < 2:
        raise DegenerateInputError("all mass on rank 1; the exponential rate is unbounded")
    total = float(w.sum())
    ranks = np.arange(1, n + 1, dtype=np.float64)
    mean_rank = float(np.dot(w, ranks) / total)

    def score(lam):
        return total * (_exp_moments(lam, ranks)[0] - mean_rank)

    if mean_rank >= (n + 1) / 2 - 1e-12 * n:
        lam = 0.0
    else:
        guess = math.log(mean_rank / (mean_rank - 1.0))
        hi = max(2.0 * guess, 1.0)
        while score(hi) > 0:
            hi *= 2.0
            if hi > 1e6:
                raise ConvergenceError("could not bracket the exponential rate")
        lam = brentq(score, 0.0, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=500)
    _, var, log_z = _exp_moments(lam, ranks)
    loglik = -lam * mean_rank * total - total * log_z
    stderr = 1.0 / math.sqrt(total * var) if var > 0 else math.inf
    return ExponentialFit(lam=float(lam), n=n, log_likelihood=float(loglik), stderr=stderr, total=total)


def select_model(counts, threshold: float = 2.0, n_symbols: Optional[int] = None) -> ModelSelection:
    """Power law versus exponential by AIC (both have one free parameter).

    ``delta_aic`` is AIC(exponential) - AIC(power law): positive favours the
    power law. ``|delta_aic| < threshold`` is inconclusive.
    """
    w = _rank_weights(counts)
    if len(w) < 5:
        raise DomainError(f"model selection needs at least 5 ranks, got {len(w)}")
    pl = fit_zipf_mle(w, n_symbols)
    ex = fit_exponential_mle(w)
    delta = 2.0 * (pl.log_likelihood - ex.log_likelihood)
    if abs(delta) < threshold:
        verdict = ModelVerdict.INCONCLUSIVE
    elif delta > 0:
        verdict = ModelVerdict.POWER_LAW
    else:
        verdict = ModelVerdict.EXPONENTIAL
    return ModelSelection(verdict, float(delta), pl, ex)


def _linear_fit(x, y, weights, law, weighted):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if np.ptp(x) == 0:
        raise CollinearityError(f"{law.value} regressor takes a single value")
    if len(x) < 3:
        raise DomainError(f"{law.value} fit needs at least 3 points, got {len(x)}")
    w = np.asarray(weights, dtype=np.float64) if weighted else np.ones_like(x)
    w = w / w.sum()
    xm = np.dot(w, x)
    ym = np.dot(w, y)
    dx = x - xm
    dy = y - ym
    slope = float(np.dot(w, dx * dy) / np.dot(w, dx * dx))
    intercept = float(ym - slope * xm)
    resid = y - (intercept + slope * x)
    ss_tot = float(np.dot(w, dy * dy))
    ss_res = float(np.dot(w, resid * resid))
    # flat lengths leave nothing to explain
    r2 = 0.0 if ss_tot == 0 else min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    denom = float(np.dot(resid, resid))
    autocorr = float(np.dot(resid[1:], resid[:-1]) / denom) if denom > 1e-300 else 0.0
    return LinearLawFit(slope, intercept, r2, bool(weighted), law, len(x), autocorr)


def _rank_regressor(n, n_symbols, optimum):
    ranks = np.arange(1, n + 1)
    if optimum == "hard":
        return kernels.nonsingular_lengths(ranks, n_symbols).astype(np.float64)
    if optimum == "soft":
        return np.log(ranks.astype(np.float64)) / math.log(n_symbols)
    raise DomainError(f"optimum must be 'soft' or 'hard', got {optimum!r}")


def fit_size_rank_law(
    profile: LengthProfile,
    dist: RankDistribution,
    n_symbols: int,
    weighted: bool = False,
    optimum: str = "soft",
) -> LinearLawFit:
    """Least squares of ``l(i)`` on the optimal non-singular length of rank ``i``.

    The regressor is ``log_N i`` (``optimum="soft"``) or the integer length
    of the ``i``-th enumerated string (``optimum="hard"``). Slope is
    ``a_ns``, intercept ``b_ns``.
    """
    n_symbols = _check_base(n_symbols)
    if len(profile) != dist.n:
        raise DimensionMismatchError("profile and distribution differ in length")
    x = _rank_regressor(dist.n, n_symbols, optimum)
    return _linear_fit(x, profile.lengths, dist.probs, LawKind.SIZE_RANK, weighted)


def fit_size_probability_law(
    profile: LengthProfile, dist: RankDistribution, n_symbols: int, weighted: bool = False
) -> LinearLawFit:
    """Least squares of ``l(i)`` on ``-log_N p(i)``; slope ``a_ud``, intercept ``b_ud``."""
    n_symbols = _check_base(n_symbols)
    if len(profile) != dist.n:
        raise DimensionMismatchError("profile and distribution differ in length")
    x = -np.log(dist.probs) / math.log(n_symbols)
    return _linear_fit(x, profile.lengths, dist.probs, LawKind.SIZE_PROBABILITY, weighted)


def zipf_from_law_params(a_ns, b_ns, a_ud, b_ud, n_symbols):
    """``alpha = a_ns / a_ud`` and ``c = N**((b_ud - b_ns) / a_ud)``."""
    if a_ud == 0:
        raise ZeroDivisionError("a_ud is zero; Zipf parameters are undefined")
    return a_ns / a_ud, float(n_symbols) ** ((b_ud - b_ns) / a_ud)


def size_rank_from(alpha, c, a_ns, b_ns, n_symbols):
    """Size-probability parameters ``(a_ud, b_ud)`` from Zipf's law and the size-rank law."""
    if alpha == 0:
        raise ZeroDivisionError("alpha is zero; the size-probability law is undefined")
    log_c = math.log(c) / math.log(n_symbols)
    return a_ns / alpha, b_ns + a_ns * log_c / alpha


def size_prob_from(alpha, c, a_ud, b_ud, n_symbols):
    """Size-rank parameters ``(a_ns, b_ns)`` from Zipf's law and the size-probability law."""
    log_c = math.log(c) / math.log(n_symbols)
    return alpha * a_ud, b_ud - a_ud * log_c


def check_linear_separation(dist: RankDistribution, alpha, beta, n_symbols, profile: Optional[LengthProfile] = None):
    """Residuals of ``H = alpha <log_N i> + beta`` and of the efficiency identity.

    The second residual is ``None`` without a profile.
    """
    h = entropy(dist, n_symbols)
    mlr = mean_log_rank(dist, n_symbols)
    res_exp = abs(h - (alpha * mlr + beta))
    res_eff = None
    if profile is not None:
        mean = mean_length(dist, profile)
        res_eff = abs(h / mean - (alpha * mlr / mean + beta / mean))
    return res_exp, res_eff


def assess_class_membership(
    dist: RankDistribution,
    profile: LengthProfile,
    n_symbols: int,
    min_r2: float = 0.95,
    alpha_tolerance: float = 0.10,
    weighted: bool = True,
    optimum: str = "hard",
    min_count: int = 10,
) -> ClassMembershipReport:
    """Decide whether a coding system belongs to the quasioptimal class.

    The verdict requires a non-positive tau between p(i) and l(i),
    non-negative slopes for both linear laws and both fits with
    ``r_squared >= min_r2``.

    When raw counts are present, the linear fits and the direct Zipf fit use
    only the head of types seen at least ``min_count`` times; rarer types
    have unreliable ranks. Probabilities keep their whole-sample values.
    The exponent implied by the slopes is compared with the direct MLE and
    flagged (not failed) beyond ``alpha_tolerance``: the power-law MLE is
    biased on step-shaped rank distributions such as random typing.
    """
    n_symbols = _check_base(n_symbols)
    if len(profile) != dist.n:
        raise DimensionMismatchError("profile and distribution differ in length")
    if dist.n < 5:
        raise DomainError(f"class assessment needs at least 5 ranks, got {dist.n}")
    thresholds = {
        "min_r2": min_r2,
        "alpha_tolerance": alpha_tolerance,
        "weighted": weighted,
        "optimum": optimum,
        "min_count": min_count,
    }
    diagnostics = []

    def rejected(reason, tau=None):
        diagnostics.append(reason)
        return ClassMembershipReport(
            verdict=False, tau=tau, tau_ok=tau is not None and tau <= 0, size_rank=None,
            size_prob=None, slopes_nonnegative=False, implied_alpha=None, implied_c=None,
            direct_zipf=None, alpha_discrepancy=None, c_discrepancy=None, alpha_consistent=None,
            n_used=0, thresholds=thresholds, base=n_symbols, diagnostics=diagnostics,
        )

    if dist.probs[0] == dist.probs[-1]:
        return rejected("uniform distribution: the size-probability regressor is constant")
    if np.ptp(profile.lengths) == 0:
        return rejected("all lengths are equal: tau and both length laws are undefined")
    tau = kendall_tau_b(dist.probs, profile.lengths)
    tau_ok = tau <= 0
    if not tau_ok:
        diagnostics.append(f"tau = {tau:.4g} > 0: frequent units are longer")

    n_used = dist.n
    if dist.counts is not None and min_count > 1:
        n_used = int(np.searchsorted(-dist.counts, -min_count, side="right"))
        if n_used < 5:
            return rejected(f"only {n_used} types occur at least {min_count} times; need 5", tau)
    probs = dist.probs[:n_used]
    lengths = profile.lengths[:n_used]
    if probs[0] == probs[-1]:
        return rejected("retained types are equiprobable: the size-probability regressor is constant", tau)
    try:
        size_rank = _linear_fit(
            _rank_regressor(n_used, n_symbols, optimum), lengths, probs, LawKind.SIZE_RANK, weighted
        )
    except CollinearityError:
        return rejected("retained ranks share one optimal length; size-rank law undefined", tau)
    size_prob = _linear_fit(
        -np.log(probs) / math.log(n_symbols), lengths, probs, LawKind.SIZE_PROBABILITY, weighted
    )
    slopes_ok = size_rank.slope >= 0 and size_prob.slope >= 0
    if not slopes_ok:
        diagnostics.append("negative slope in a linear length law")
    for fit in (size_rank, size_prob):
        if fit.r_squared < min_r2:
            diagnostics.append(f"{fit.law.value} r^2 = {fit.r_squared:.4f} below {min_r2}")
        if fit.r_squared < min_r2 and fit.residual_autocorr > 0.9:
            diagnostics.append(
                f"{fit.law.value} residuals strongly structured (lag-1 autocorrelation "
                f"{fit.residual_autocorr:.3f}); a piecewise law may fit better"
            )
    implied_alpha = implied_c = None
    if size_prob.slope > 0:
        implied_alpha, implied_c = zipf_from_law_params(
            size_rank.slope, size_rank.intercept, size_prob.slope, size_prob.intercept, n_symbols
        )
    else:
        diagnostics.append("size-probability slope is not positive; implied Zipf parameters undefined")
    direct = None
    alpha_disc = c_disc = None
    consistent = None
    if dist.counts is not None:
        direct = fit_zipf_mle(dist.counts[:n_used], n_symbols)
        if implied_alpha is not None and direct.alpha > 0:
            alpha_disc = abs(implied_alpha - direct.alpha) / direct.alpha
            c_disc = abs(implied_c - direct.c) / direct.c
            consistent = alpha_disc <= alpha_tolerance
            if not consistent:
                diagnostics.append(f"implied alpha differs from the direct MLE by {alpha_disc:.1%}")
    verdict = bool(
        tau_ok
        and slopes_ok
        and size_rank.r_squared >= min_r2
        and size_prob.r_squared >= min_r2
        and implied_alpha is not None
    )
    return ClassMembershipReport(
        verdict=verdict, tau=float(tau), tau_ok=bool(tau_ok), size_rank=size_rank,
        size_prob=size_prob, slopes_nonnegative=bool(slopes_ok), implied_alpha=implied_alpha,
        implied_c=implied_c, direct_zipf=direct, alpha_discrepancy=alpha_disc,
        c_discrepancy=c_disc, alpha_consistent=consistent, n_used=n_used,
        thresholds=thresholds, base=n_symbols, diagnostics=diagnostics,
    )
