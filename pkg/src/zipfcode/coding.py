"""Optimal code lengths, code enumeration, Elias gamma coding and
decodability checks.

Ranks are 1-based throughout. ``N`` is the alphabet size and is always an
explicit argument.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DomainError, MalformedStreamError, ParseError, ResourceLimitError

# Sardinas-Patterson gives up after this many distinct suffix sets.
MAX_SUFFIX_SETS = 10_000

# Float inputs to ud_length_hard whose -log_N p lies this close to an
# integer are snapped to it, so that 1/9 in base 3 gives 2, not 3.
_SNAP = 1e-9


class SchemeKind(enum.Enum):
    NON_SINGULAR = "ns"
    UNIQUELY_DECODABLE = "ud"


@dataclass(frozen=True)
class Alphabet:
    """Ordered set of distinct single-character symbols.

    The order fixes lexicographic rank and, for binary alphabets, the Elias
    gamma digits (first symbol is 0, second is 1).
    """

    symbols: tuple

    def __post_init__(self):
        symbols = tuple(self.symbols)
        object.__setattr__(self, "symbols", symbols)
        if len(symbols) < 2:
            raise DomainError(f"alphabet needs at least 2 symbols, got {len(symbols)}")
        if len(set(symbols)) != len(symbols):
            raise DomainError(f"alphabet symbols must be distinct: {''.join(symbols)!r}")
        for s in symbols:
            if not isinstance(s, str) or len(s) != 1:
                raise DomainError(f"alphabet symbols must be single characters, got {s!r}")

    @classmethod
    def from_string(cls, text: str) -> "Alphabet":
        return cls(tuple(text))

    @property
    def size(self) -> int:
        return len(self.symbols)

    def __str__(self):
        return "".join(self.symbols)


@dataclass(frozen=True)
class CodeTable:
    """Codes for units 1..n; ``codes[i - 1]`` is the code of unit ``i``.

    Duplicated codes are allowed here (a singular table is still a table);
    use :func:`is_nonsingular` to check.
    """

    codes: tuple
    alphabet: Alphabet

    def __post_init__(self):
        codes = tuple(self.codes)
        object.__setattr__(self, "codes", codes)
        if not codes:
            raise DomainError("a code table needs at least one entry")
        allowed = set(self.alphabet.symbols)
        for rank, code in enumerate(codes, start=1):
            if not code:
                raise DomainError(f"code of unit {rank} is empty")
            bad = set(code) - allowed
            if bad:
                raise DomainError(
                    f"code {code!r} of unit {rank} uses symbols {sorted(bad)} "
                    f"outside alphabet {str(self.alphabet)!r}"
                )

    @classmethod
    def from_codes(cls, codes: Sequence[str], alphabet=None) -> "CodeTable":
        """Build a table, inferring a sorted alphabet from the codes if none is given."""
        if alphabet is None:
            symbols = sorted(set("".join(codes)))
            if len(symbols) < 2:
                # a one-symbol table still lives over some alphabet of size >= 2
                filler = next(c for c in "ab01" if c not in symbols)
                symbols = sorted(symbols + [filler])
            alphabet = Alphabet(tuple(symbols))
        elif isinstance(alphabet, str):
            alphabet = Alphabet.from_string(alphabet)
        return cls(tuple(codes), alphabet)

    def __len__(self):
        return len(self.codes)

    def entries(self):
        return list(enumerate(self.codes, start=1))

    def lengths(self):
        return [len(c) for c in self.codes]

    def code(self, rank: int) -> str:
        return self.codes[rank - 1]


def _check_rank(i):
    if isinstance(i, bool) or int(i) != i or i < 1:
        raise DomainError(f"rank must be a positive integer, got {i!r}")
    return int(i)


def _check_base(n_symbols):
    if isinstance(n_symbols, bool) or int(n_symbols) != n_symbols or n_symbols < 2:
        raise DomainError(f"alphabet size must be an integer >= 2, got {n_symbols!r}")
    return int(n_symbols)


def _check_prob(p):
    if not (0 < p <= 1):
        raise DomainError(f"probability must lie in (0, 1], got {p!r}")


def log_base(x: float, n_symbols: int) -> float:
    """``log_N x`` with exact results for powers of 2 and 10 in those bases."""
    if n_symbols == 2:
        return math.log2(x)
    if n_symbols == 10:
        return math.log10(x)
    return math.log(x) / math.log(n_symbols)


def nonsingular_length_hard(i: int, n_symbols: int) -> int:
    """Optimal non-singular code length of rank ``i``.

    Smallest ``L`` such that the ``N + N**2 + ... + N**L`` non-empty strings
    of length at most ``L`` include the ``i``-th one. Exact for arbitrarily
    large ranks.
    """
    i = _check_rank(i)
    n_symbols = _check_base(n_symbols)
    length, shell, below = 1, n_symbols, 0
    while i - below > shell:
        below += shell
        shell *= n_symbols
        length += 1
    return length


def nonsingular_length_hard_float(i: int, n_symbols: int) -> int:
    """Closed form ``ceil(log_N((N - 1) i / N + 1))``; cross-check only."""
    i = _check_rank(i)
    n_symbols = _check_base(n_symbols)
    v = log_base((n_symbols - 1) * i / n_symbols + 1, n_symbols)
    # shell boundaries make the argument an exact power of N; float log can
    # land a hair above the integer there
    nearest = round(v)
    if abs(v - nearest) <= 1e-12 * max(1.0, abs(v)):
        return int(nearest)
    return math.ceil(v)


def nonsingular_length_soft(i: float, n_symbols: int) -> float:
    if i < 1:
        raise DomainError(f"rank must be >= 1, got {i!r}")
    n_symbols = _check_base(n_symbols)
    return log_base(i, n_symbols)


def ud_length_soft(p: float, n_symbols: int) -> float:
    _check_prob(p)
    n_symbols = _check_base(n_symbols)
    return -log_base(p, n_symbols) + 0.0


def ud_length_hard(p, n_symbols: int) -> int:
    """``ceil(-log_N p)``, clamped to at least 1.

    :class:`fractions.Fraction` inputs are handled exactly. For floats, a
    value of ``-log_N p`` within 1e-9 of an integer is taken to be that
    integer, so decimal renderings of exact powers (``1/9`` in base 3) land
    on the intended length.
    """
    _check_prob(p)
    n_symbols = _check_base(n_symbols)
    if isinstance(p, Fraction):
        length = 0
        while n_symbols ** length * p < 1:
            length += 1
    else:
        v = -log_base(float(p), n_symbols)
        nearest = round(v)
        length = nearest if abs(v - nearest) <= _SNAP * max(1.0, abs(v)) else math.ceil(v)
    return max(int(length), 1)


def enumerate_nonsingular_codes(n: int, alphabet) -> CodeTable:
    """First ``n`` non-empty strings in length-then-lexicographic order."""
    if isinstance(alphabet, str):
        alphabet = Alphabet.from_string(alphabet)
    n = _check_rank(n)
    codes = []
    for length in itertools.count(1):
        for word in itertools.product(alphabet.symbols, repeat=length):
            codes.append("".join(word))
            if len(codes) == n:
                return CodeTable(tuple(codes), alphabet)


def _binary_alphabet(alphabet):
    if isinstance(alphabet, str):
        alphabet = Alphabet.from_string(alphabet)
    if alphabet.size != 2:
        raise DomainError(f"Elias gamma needs a binary alphabet, got size {alphabet.size}")
    return alphabet


def elias_gamma_encode(i: int, alphabet="01") -> str:
    """``floor(log2 i)`` zero symbols, then ``i`` in binary."""
    zero, one = _binary_alphabet(alphabet).symbols
    i = _check_rank(i)
    digits = bin(i)[2:]
    return zero * (len(digits) - 1) + digits.replace("0", zero).replace("1", one)


def elias_gamma_table(n: int, alphabet="01") -> CodeTable:
    alphabet = _binary_alphabet(alphabet)
    return CodeTable(tuple(elias_gamma_encode(i, alphabet) for i in range(1, n + 1)), alphabet)


def elias_gamma_decode(s: str, alphabet="01") -> list:
    """Split a concatenation of Elias gamma codewords back into ranks."""
    zero, one = _binary_alphabet(alphabet).symbols
    ranks = []
    pos, n = 0, len(s)
    while pos < n:
        start = pos
        zeros = 0
        while pos < n and s[pos] == zero:
            zeros += 1
            pos += 1
        if pos == n:
            raise MalformedStreamError(f"truncated codeword starting at position {start}")
        body = s[pos:pos + zeros + 1]
        if len(body) < zeros + 1:
            raise MalformedStreamError(f"truncated codeword starting at position {start}")
        value = 0
        for ch in body:
            if ch == zero:
                value <<= 1
            elif ch == one:
                value = (value << 1) | 1
            else:
                raise MalformedStreamError(f"symbol {ch!r} at position {pos} is not in the alphabet")
        ranks.append(value)
        pos += zeros + 1
    return ranks


def is_nonsingular(table: CodeTable) -> bool:
    return len(set(table.codes)) == len(table.codes)


def _dangling(prefixes: set, words: Iterable[str]) -> set:
    """Non-empty ``w`` with ``u + w == v`` for ``u`` in prefixes, ``v`` in words."""
    out = set()
    for v in words:
        for k in range(1, len(v)):
            if v[:k] in prefixes:
                out.add(v[k:])
    return out


def is_uniquely_decodable(table: CodeTable) -> bool:
    """Sardinas-Patterson test.

    Singular tables are rejected up front. Raises
    :class:`ResourceLimitError` past ``MAX_SUFFIX_SETS`` distinct suffix sets.
    """
    if not is_nonsingular(table):
        return False
    code = set(table.codes)
    current = _dangling(code, code)
    seen = set()
    while current:
        if current & code:
            return False
        key = frozenset(current)
        if key in seen:
            return True
        seen.add(key)
        if len(seen) > MAX_SUFFIX_SETS:
            raise ResourceLimitError(f"more than {MAX_SUFFIX_SETS} suffix sets derived")
        current = _dangling(code, current) | _dangling(current, code)
    return True


def kraft_sum(table: CodeTable) -> float:
    n_symbols = table.alphabet.size
    return float(sum(Fraction(1, n_symbols ** len(c)) for c in table.codes))


def write_code_table(fh, table: CodeTable, header=(), footer=()):
    """Write ``rank<TAB>code`` lines; header/footer strings become ``#`` comments."""
    for line in header:
        fh.write(f"# {line}\n")
    for rank, code in table.entries():
        fh.write(f"{rank}\t{code}\n")
    for line in footer:
        fh.write(f"# {line}\n")


def read_code_table(fh, alphabet=None) -> CodeTable:
    """Parse the two-column format written by :func:`write_code_table`.

    A ``# alphabet=...`` comment is used when no alphabet is passed.
    """
    codes = []
    for lineno, raw in enumerate(fh, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if alphabet is None and body.startswith("alphabet="):
                alphabet = body[len("alphabet="):]
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ParseError(f"expected 'rank<TAB>code', got {line!r}", lineno)
        try:
            rank = int(parts[0])
        except ValueError:
            raise ParseError(f"rank {parts[0]!r} is not an integer", lineno) from None
        if rank != len(codes) + 1:
            raise ParseError(f"expected rank {len(codes) + 1}, got {rank}", lineno)
        codes.append(parts[1])
    if not codes:
        raise ParseError("no code entries found")
    return CodeTable.from_codes(codes, alphabet)
