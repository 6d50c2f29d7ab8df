"""Tokenising raw text and counting tokens into frequency tables."""
from __future__ import annotations

import codecs
import csv
import enum
import io
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple

import regex

from .errors import DuplicateTokenError, EmptyInputError, EncodingError, ParseError
from .rankstats import LengthProfile, from_counts

_WORD_BOUNDARY = regex.compile(r"\b", flags=regex.WORD | regex.V1)
_HAS_WORD_CHAR = regex.compile(r"\w")
_GRAPHEME = regex.compile(r"\X")


class Splitter(enum.Enum):
    UNICODE_WORDS = "unicode"
    WHITESPACE = "whitespace"


class LengthUnit(enum.Enum):
    GRAPHEMES = "graphemes"
    CODE_POINTS = "codepoints"
    BYTES = "bytes"


def _grapheme_count(token):
    # in ASCII only CR LF forms a multi-character cluster
    if token.isascii() and "\r\n" not in token:
        return len(token)
    return len(_GRAPHEME.findall(token))


def _byte_count(token):
    return len(token.encode("utf-8"))


_MEASURES = {
    LengthUnit.GRAPHEMES: _grapheme_count,
    LengthUnit.CODE_POINTS: len,
    LengthUnit.BYTES: _byte_count,
}


def measure(token: str, unit=LengthUnit.GRAPHEMES) -> int:
    return _MEASURES[LengthUnit(unit)](token)


def split_words(text: str, splitter=Splitter.UNICODE_WORDS) -> list:
    """Tokens of one piece of text.

    ``UNICODE_WORDS`` cuts at default Unicode word boundaries and keeps the
    segments containing a word character; punctuation and spaces are dropped.
    """
    if Splitter(splitter) is Splitter.WHITESPACE:
        return text.split()
    return [seg for seg in _WORD_BOUNDARY.split(text) if _HAS_WORD_CHAR.search(seg)]


def _decoded_lines(stream) -> Iterator[str]:
    """Decode a binary stream line by line, reporting the byte offset of bad UTF-8."""
    decoder = codecs.getincrementaldecoder("utf-8")("strict")
    consumed = 0
    for chunk in stream:
        if isinstance(chunk, str):
            yield chunk
            continue
        pending = len(decoder.getstate()[0])
        try:
            text = decoder.decode(chunk)
        except UnicodeDecodeError as exc:
            raise EncodingError("invalid UTF-8", consumed - pending + exc.start) from None
        consumed += len(chunk)
        yield text
    pending = len(decoder.getstate()[0])
    try:
        tail = decoder.decode(b"", final=True)
    except UnicodeDecodeError as exc:
        raise EncodingError("truncated UTF-8 sequence at end of input", consumed - pending + exc.start) from None
    if tail:
        yield tail


def tokenize_stream(stream, lowercase: bool = False, splitter=Splitter.UNICODE_WORDS) -> Iterator[str]:
    """Yield tokens from a binary stream, an iterable of byte/str lines, or a string."""
    if isinstance(stream, (bytes, bytearray)):
        stream = io.BytesIO(bytes(stream))
    elif isinstance(stream, str):
        stream = io.StringIO(stream)
    splitter = Splitter(splitter)
    for line in _decoded_lines(stream):
        if lowercase:
            line = line.lower()
        yield from split_words(line, splitter)


class TokenRow(NamedTuple):
    token: str
    count: int
    length: float


@dataclass(frozen=True)
class TokenTable:
    """Token frequencies sorted by count, ties in order of first occurrence."""

    rows: tuple
    length_unit: LengthUnit = LengthUnit.GRAPHEMES

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "length_unit", LengthUnit(self.length_unit))
        seen = set()
        for row in self.rows:
            if row.token in seen:
                raise DuplicateTokenError(f"token {row.token!r} appears twice")
            seen.add(row.token)
            if row.count < 1:
                raise ParseError(f"count of {row.token!r} must be positive")

    @property
    def total_tokens(self) -> int:
        return sum(r.count for r in self.rows)

    def __len__(self):
        return len(self.rows)

    def tokens(self):
        return [r.token for r in self.rows]


@dataclass
class ShardCounts:
    """Partial counts of one shard of a token stream.

    ``first`` records ``(shard, position)`` of each token's first
    occurrence so merged tables order ties exactly as a single pass would.
    """

    counts: dict = field(default_factory=dict)
    first: dict = field(default_factory=dict)
    total: int = 0


def count_shard(tokens: Iterable[str], shard: int = 0) -> ShardCounts:
    counts = {}
    first = {}
    pos = -1
    for pos, tok in enumerate(tokens):
        if tok in counts:
            counts[tok] += 1
        else:
            counts[tok] = 1
            first[tok] = (shard, pos)
    return ShardCounts(counts, first, pos + 1)


def merge_counts(a: ShardCounts, b: ShardCounts) -> ShardCounts:
    """Associative and commutative merge of two shards."""
    counts = dict(a.counts)
    first = dict(a.first)
    for tok, cnt in b.counts.items():
        counts[tok] = counts.get(tok, 0) + cnt
        where = b.first[tok]
        if tok not in first or where < first[tok]:
            first[tok] = where
    return ShardCounts(counts, first, a.total + b.total)


def finalize_counts(shards: ShardCounts, length_unit=LengthUnit.GRAPHEMES) -> TokenTable:
    counts, first = shards.counts, shards.first
    order = sorted(counts, key=lambda t: (-counts[t], first[t]))
    unit = LengthUnit(length_unit)
    size = _MEASURES[unit]
    return TokenTable(tuple(TokenRow(t, counts[t], size(t)) for t in order), unit)


def count_tokens(tokens: Iterable[str], length_unit=LengthUnit.GRAPHEMES) -> TokenTable:
    return finalize_counts(count_shard(tokens), length_unit)


def to_rank_data(table: TokenTable):
    """``(RankDistribution, LengthProfile)`` aligned by rank."""
    if not table.rows:
        raise EmptyInputError("token table is empty")
    rows = sorted(table.rows, key=lambda r: -r.count)  # stable: ties keep table order
    dist = from_counts([r.count for r in rows])
    return dist, LengthProfile([r.length for r in rows])


def write_table(fh, table: TokenTable, comments=()):
    """CSV ``token,count,length``; leading ``#`` lines carry metadata."""
    for line in comments:
        fh.write(f"# {line}\n")
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["token", "count", "length"])
    for row in table.rows:
        writer.writerow([row.token, row.count, _format_length(row.length)])


def _format_length(value):
    number = float(value)
    return int(number) if number.is_integer() else number


def read_table(fh, length_unit=LengthUnit.GRAPHEMES) -> TokenTable:
    """Read a token table.

    Accepts the ``token,count,length`` format and also rank tables (extra
    ``rank`` and ``probability`` columns are ignored). A missing ``length``
    column is filled by measuring tokens in ``length_unit``. Only comment
    lines *before* the header are skipped.
    """
    unit = LengthUnit(length_unit)
    lines = iter(fh)
    lineno = 0
    header_line = None
    for raw in lines:
        lineno += 1
        if raw.startswith("#") or not raw.strip():
            continue
        header_line = raw
        break
    if header_line is None:
        raise ParseError("missing header")
    header = next(csv.reader([header_line]))
    header = [h.strip() for h in header]
    for required in ("token", "count"):
        if required not in header:
            raise ParseError(f"header lacks a {required!r} column", lineno)
    col = {name: k for k, name in enumerate(header)}
    rows = []
    seen = set()
    reader = csv.reader(lines)
    for fields in reader:
        line = lineno + reader.line_num
        if not fields:
            continue
        if len(fields) != len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(fields)}", line)
        token = fields[col["token"]]
        try:
            count = int(fields[col["count"]])
            length = _format_length(fields[col["length"]]) if "length" in col else measure(token, unit)
        except ValueError as exc:
            raise ParseError(str(exc), line) from None
        if count < 1:
            raise ParseError(f"count must be positive, got {count}", line)
        if length < 0:
            raise ParseError(f"length must be non-negative, got {length}", line)
        if token in seen:
            raise DuplicateTokenError(f"duplicate token {token!r}", line)
        seen.add(token)
        rows.append(TokenRow(token, count, length))
    return TokenTable(tuple(rows), unit)
