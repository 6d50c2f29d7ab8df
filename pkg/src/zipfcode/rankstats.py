"""Rank distributions and the scalar statistics built on them.

All logarithms are taken in base ``N`` (the alphabet size), passed
explicitly. Arrays are converted once from natural logs.
"""
from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .coding import SchemeKind, _check_base
from .errors import (
    DegenerateInputError,
    DimensionMismatchError,
    DomainError,
    EmptyInputError,
    ParseError,
)

NORMALIZATION_TOL = 1e-9


def _frozen(values, dtype=np.float64):
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class RankDistribution:
    """Probabilities ``p(1) >= p(2) >= ... > 0`` summing to one.

    ``counts`` is kept when the distribution was built from frequencies so
    that likelihood-based fits can use the raw sample size.
    """

    probs: np.ndarray
    counts: Optional[np.ndarray] = None

    def __post_init__(self):
        probs = _frozen(self.probs)
        object.__setattr__(self, "probs", probs)
        if probs.ndim != 1 or len(probs) == 0:
            raise EmptyInputError("a rank distribution needs at least one probability")
        if not np.all(np.isfinite(probs)) or np.any(probs <= 0):
            raise DomainError("every probability must be finite and strictly positive")
        if np.any(np.diff(probs) > 0):
            raise DomainError("probabilities must be sorted non-increasingly")
        total = math.fsum(probs)
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise DomainError(f"probabilities sum to {total!r}, not 1")
        if self.counts is not None:
            counts = _frozen(self.counts, dtype=np.int64)
            if counts.shape != probs.shape:
                raise DimensionMismatchError("counts and probabilities differ in length")
            object.__setattr__(self, "counts", counts)

    @property
    def n(self) -> int:
        return len(self.probs)

    @property
    def total(self) -> Optional[int]:
        return None if self.counts is None else int(self.counts.sum())

    def ranks(self) -> np.ndarray:
        return np.arange(1, self.n + 1, dtype=np.float64)

    def __len__(self):
        return self.n


@dataclass(frozen=True, eq=False)
class LengthProfile:
    """Code lengths (or any non-negative magnitude) aligned by rank."""

    lengths: np.ndarray

    def __post_init__(self):
        lengths = _frozen(self.lengths)
        object.__setattr__(self, "lengths", lengths)
        if lengths.ndim != 1:
            raise DomainError("lengths must be one-dimensional")
        if np.any(~np.isfinite(lengths)) or np.any(lengths < 0):
            raise DomainError("lengths must be finite and non-negative")

    def __len__(self):
        return len(self.lengths)


@dataclass(frozen=True)
class EfficiencyPair:
    eta_ns: float
    eta_ud: float
    mean_length: float


def from_counts(counts: Sequence[int]) -> RankDistribution:
    """Rank distribution from raw frequencies.

    Zeros are dropped and the rest sorted descending; equal counts keep
    their input order.
    """
    counts = np.asarray(counts)
    if counts.ndim != 1:
        raise DomainError("counts must be one-dimensional")
    if np.any(counts < 0) or np.any(counts != np.floor(counts)):
        raise DomainError("counts must be non-negative integers")
    counts = counts.astype(np.int64)
    counts = counts[counts > 0]
    if len(counts) == 0:
        raise EmptyInputError("all counts are zero")
    counts = counts[np.argsort(-counts, kind="stable")]
    return RankDistribution(counts / counts.sum(), counts=counts)


def _aligned(dist, profile):
    if len(profile) != dist.n:
        raise DimensionMismatchError(
            f"length profile has {len(profile)} entries, distribution has {dist.n}"
        )
    return profile.lengths


def mean_length(dist: RankDistribution, profile: LengthProfile) -> float:
    lengths = _aligned(dist, profile)
    return float(np.dot(dist.probs, lengths))


def mean_log_rank(dist: RankDistribution, n_symbols: int) -> float:
    """Expected ``log_N i`` under the rank distribution."""
    n_symbols = _check_base(n_symbols)
    return float(np.dot(dist.probs, np.log(dist.ranks()))) / math.log(n_symbols)


def entropy(dist: RankDistribution, n_symbols: int) -> float:
    n_symbols = _check_base(n_symbols)
    p = dist.probs
    return float(-np.dot(p, np.log(p))) / math.log(n_symbols) + 0.0


def kendall_tau_b(x, y) -> float:
    """Kendall's tau-b with tie correction, in O(n log n)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise DimensionMismatchError("x and y must be one-dimensional and equally long")
    if len(x) < 2:
        raise DegenerateInputError("Kendall tau needs at least two observations")
    s, n0, ties_x, ties_y = kernels.kendall_counts(x, y)
    if n0 == ties_x or n0 == ties_y:
        raise DegenerateInputError("all values of one variable are tied")
    return s / math.sqrt(n0 - ties_x) / math.sqrt(n0 - ties_y)


def law_of_abbreviation_holds(dist: RankDistribution, profile: LengthProfile):
    """Return ``(tau, tau < 0)`` for the correlation between p(i) and l(i)."""
    lengths = _aligned(dist, profile)
    tau = kendall_tau_b(dist.probs, lengths)
    return tau, tau < 0


def hard_nonsingular_minimum(dist: RankDistribution, n_symbols: int) -> float:
    lengths = kernels.nonsingular_lengths(np.arange(1, dist.n + 1), _check_base(n_symbols))
    return float(np.dot(dist.probs, lengths))


def hard_ud_minimum(dist: RankDistribution, n_symbols: int) -> float:
    from .coding import ud_length_hard

    lengths = np.array([ud_length_hard(float(p), n_symbols) for p in dist.probs])
    return float(np.dot(dist.probs, lengths))


def coding_efficiency(
    dist: RankDistribution,
    profile: LengthProfile,
    scheme: SchemeKind,
    n_symbols: int,
    hard: bool = False,
) -> float:
    """Minimum achievable mean length under ``scheme`` over the observed one.

    Soft minima (expected log-rank, entropy) are used unless ``hard`` is set.
    """
    mean = mean_length(dist, profile)
    if mean == 0:
        raise ZeroDivisionError("mean length is zero; efficiency undefined")
    scheme = SchemeKind(scheme)
    if scheme is SchemeKind.NON_SINGULAR:
        best = hard_nonsingular_minimum(dist, n_symbols) if hard else mean_log_rank(dist, n_symbols)
    else:
        best = hard_ud_minimum(dist, n_symbols) if hard else entropy(dist, n_symbols)
    return best / mean


def efficiencies(dist, profile, n_symbols, hard=False) -> EfficiencyPair:
    return EfficiencyPair(
        eta_ns=coding_efficiency(dist, profile, SchemeKind.NON_SINGULAR, n_symbols, hard),
        eta_ud=coding_efficiency(dist, profile, SchemeKind.UNIQUELY_DECODABLE, n_symbols, hard),
        mean_length=mean_length(dist, profile),
    )


def validate_rank_bound(dist: RankDistribution, tol: float = NORMALIZATION_TOL) -> bool:
    """Check ``p(i) <= 1/i``, which any sorted normalized distribution obeys."""
    return bool(np.all(dist.probs <= 1.0 / dist.ranks() + tol))


RANK_TABLE_FIELDS = ("rank", "token", "count", "probability", "length")


def write_rank_table(fh, dist: RankDistribution, tokens=None, lengths=None, comments=()):
    """CSV with header ``rank,token,count,probability,length``.

    ``token``, ``count`` and ``length`` columns are emitted only when data
    for them is present. Probabilities use 17 significant digits.
    """
    for line in comments:
        fh.write(f"# {line}\n")
    fields = ["rank"]
    if tokens is not None:
        fields.append("token")
    if dist.counts is not None:
        fields.append("count")
    fields.append("probability")
    if lengths is not None:
        fields.append("length")
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(fields)
    for k in range(dist.n):
        row = [k + 1]
        if tokens is not None:
            row.append(tokens[k])
        if dist.counts is not None:
            row.append(int(dist.counts[k]))
        row.append(format(float(dist.probs[k]), ".17g"))
        if lengths is not None:
            value = float(lengths[k])
            row.append(int(value) if value.is_integer() else format(value, ".17g"))
        writer.writerow(row)


def read_rank_table(fh):
    """Inverse of :func:`write_rank_table`; returns ``(dist, tokens, lengths)``."""
    skipped = 0
    first = fh.readline()
    while first.startswith("#"):
        skipped += 1
        first = fh.readline()
    reader = csv.DictReader(itertools.chain([first], fh))
    if reader.fieldnames is None or "rank" not in reader.fieldnames or "probability" not in reader.fieldnames:
        raise ParseError("rank table header must include rank and probability", skipped + 1)
    probs, counts, tokens, lengths = [], [], [], []
    for row in reader:
        line = reader.line_num + skipped
        try:
            if int(row["rank"]) != len(probs) + 1:
                raise ParseError(f"ranks must be consecutive from 1, got {row['rank']}", line)
            probs.append(float(row["probability"]))
            if "count" in row:
                counts.append(int(row["count"]))
            if "length" in row:
                lengths.append(float(row["length"]))
        except ParseError:
            raise
        except (TypeError, ValueError) as exc:
            raise ParseError(str(exc), line) from None
        if "token" in row:
            tokens.append(row["token"])
    dist = RankDistribution(probs, counts=counts if counts else None)
    return dist, (tokens or None), (np.array(lengths) if lengths else None)
