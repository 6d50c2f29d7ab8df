"""Miller's random-typing model and its closed-form rank distribution.

Keys are ``N`` equiprobable characters plus a space. After a character
the space is hit with probability ``p_s``; after a space (and at the start
of the stream) the space key is disabled, so no empty words occur. Word
lengths are therefore geometric, ``P(L = l) = p_s (1 - p_s)**(l - 1)``, and
every word of length ``l`` has probability
``p_s / (1 - p_s) * ((1 - p_s) / N)**l``.
"""
from __future__ import annotations

import math
import string
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from .coding import _check_base, nonsingular_length_hard
from .errors import DomainError

GENERATOR_ID = "numpy.random.PCG64"
# Tokens are drawn in fixed-size batches; changing this changes the stream.
_BATCH = 65536

_DEFAULT_SYMBOLS = string.ascii_lowercase + string.ascii_uppercase + string.digits


def default_symbols(n_symbols: int) -> str:
    """First ``n_symbols`` of a-z, A-Z, 0-9, then Latin Extended code points."""
    if n_symbols <= len(_DEFAULT_SYMBOLS):
        return _DEFAULT_SYMBOLS[:n_symbols]
    extra = n_symbols - len(_DEFAULT_SYMBOLS)
    return _DEFAULT_SYMBOLS + "".join(chr(0x100 + k) for k in range(extra))


@dataclass(frozen=True)
class RandomTypingParams:
    n_symbols: int
    p_space: float
    seed: int = 0

    def __post_init__(self):
        _check_base(self.n_symbols)
        if not (0 < self.p_space < 1):
            raise DomainError(f"space probability must lie in (0, 1), got {self.p_space!r}")
        if not (0 <= int(self.seed) < 2**64):
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")


class AbbreviationParams(NamedTuple):
    a_rt: float
    b_rt: float
    a_ud: float
    b_ud: float


def iter_tokens(params: RandomTypingParams, count: int, symbols: str = None) -> Iterator[str]:
    """Yield ``count`` words typed at random; deterministic in ``params.seed``."""
    if int(count) != count or count < 1:
        raise DomainError(f"token count must be a positive integer, got {count!r}")
    symbols = symbols or default_symbols(params.n_symbols)
    if len(symbols) != params.n_symbols or len(set(symbols)) != len(symbols):
        raise DomainError("symbols must be distinct and match the alphabet size")
    table = np.array(list(symbols))
    rng = np.random.Generator(np.random.PCG64(int(params.seed)))
    remaining = int(count)
    while remaining:
        # always draw whole batches so a shorter run is a prefix of a longer one
        batch = min(remaining, _BATCH)
        lengths = rng.geometric(params.p_space, size=_BATCH)
        keys = rng.integers(0, params.n_symbols, size=int(lengths.sum()))
        text = "".join(table[keys[: int(lengths[:batch].sum())]].tolist())
        ends = np.cumsum(lengths[:batch]).tolist()
        start = 0
        for end in ends:
            yield text[start:end]
            start = end
        remaining -= batch


def generate_tokens(params: RandomTypingParams, count: int, symbols: str = None) -> list:
    return list(iter_tokens(params, count, symbols))


def theoretical_rank_probability(params: RandomTypingParams, i: int) -> float:
    """Probability of the word of rank ``i``; its length is the optimal non-singular one."""
    length = nonsingular_length_hard(i, params.n_symbols)
    ps = params.p_space
    return ps / (1 - ps) * ((1 - ps) / params.n_symbols) ** length


def theoretical_length_mass(params: RandomTypingParams, length: int) -> float:
    """Total probability of all ``N**length`` words of a given length."""
    if length < 1:
        raise DomainError("word length must be >= 1")
    ps = params.p_space
    return ps * (1 - ps) ** (length - 1)


def theoretical_zipf_parameters(params: RandomTypingParams):
    """``(alpha, c)`` with ``alpha = -log_N((1 - p_s)/N)`` and ``c = p_s/(1 - p_s)``."""
    ps, n = params.p_space, params.n_symbols
    alpha = -math.log((1 - ps) / n) / math.log(n)
    return alpha, ps / (1 - ps)


def theoretical_abbreviation_parameters(params: RandomTypingParams) -> AbbreviationParams:
    ps, n = params.p_space, params.n_symbols
    log_n = math.log(n)
    a_rt = 1.0 / (math.log(1 - ps) / log_n - 1.0)
    b_rt = a_rt * math.log((1 - ps) / ps) / log_n + 0.0
    return AbbreviationParams(a_rt, b_rt, -a_rt, b_rt)


def metadata(params: RandomTypingParams, count: int) -> dict:
    return {
        "alphabet_size": params.n_symbols,
        "p_space": params.p_space,
        "seed": int(params.seed),
        "count": int(count),
        "generator": GENERATOR_ID,
        "numpy_version": np.__version__,
        "batch": _BATCH,
    }


class ShellCheck(NamedTuple):
    rank: int
    token: str
    length: int
    expected_length: int
    empirical: float
    theoretical: float
    stderr: float

    @property
    def z(self) -> float:
        return (self.empirical - self.theoretical) / self.stderr


def shell_rank_check(tokens_by_rank, counts_by_rank, params: RandomTypingParams, top: int = 20):
    """Compare the top ranks with the closed form through their length shells.

    Words of equal length are equiprobable, so each rank is checked via the
    mean empirical probability of its shell (total shell mass divided by
    ``N**length``) against the theoretical probability of that rank. The
    standard error is binomial on the shell total.
    """
    total = float(sum(counts_by_rank))
    shell_counts = Counter()
    for tok, cnt in zip(tokens_by_rank, counts_by_rank):
        shell_counts[len(tok)] += cnt
    out = []
    for rank in range(1, min(top, len(tokens_by_rank)) + 1):
        tok = tokens_by_rank[rank - 1]
        length = len(tok)
        words = params.n_symbols ** length
        mass = shell_counts[length] / total
        expected_mass = theoretical_length_mass(params, length)
        stderr = math.sqrt(expected_mass * (1 - expected_mass) / total) / words
        out.append(
            ShellCheck(
                rank=rank,
                token=tok,
                length=length,
                expected_length=nonsingular_length_hard(rank, params.n_symbols),
                empirical=mass / words,
                theoretical=theoretical_rank_probability(params, rank),
                stderr=stderr,
            )
        )
    return out
