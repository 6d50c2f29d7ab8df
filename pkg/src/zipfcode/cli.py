"""Command-line interface.

Exit codes: 0 success, 2 usage or input error, 3 empty data,
4 numerical non-convergence or degenerate data.
"""
from __future__ import annotations

import concurrent.futures
import csv
import functools
import io
import json
import math
import sys

import click
import numpy as np

from . import __version__
from .coding import (
    Alphabet,
    elias_gamma_table,
    enumerate_nonsingular_codes,
    is_nonsingular,
    is_uniquely_decodable,
    kraft_sum,
    write_code_table,
)
from .corpus import (
    LengthUnit,
    Splitter,
    count_shard,
    finalize_counts,
    merge_counts,
    read_table,
    to_rank_data,
    tokenize_stream,
)
from .errors import (
    ConvergenceError,
    DegenerateInputError,
    EmptyInputError,
    EncodingError,
    ResourceLimitError,
    ZipfcodeError,
)
from .fitting import (
    GroupParams,
    assess_class_membership,
    check_linear_separation,
    fit_exponential_mle,
    fit_zipf_loglog,
    fit_zipf_mle,
    select_model,
    size_rank_from,
)
from .random_typing import RandomTypingParams, iter_tokens, metadata as simulation_metadata
from .rankstats import (
    efficiencies,
    entropy,
    law_of_abbreviation_holds,
    mean_length,
    mean_log_rank,
    validate_rank_bound,
    write_rank_table,
)
from .report import dumps, flatten

EXIT_USAGE = 2
EXIT_EMPTY = 3
EXIT_NUMERIC = 4


class CommandFailed(click.ClickException):
    def __init__(self, message, exit_code):
        super().__init__(message)
        self.exit_code = exit_code


def _exit_codes(func):
    """Map package exceptions onto the documented exit codes."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except EmptyInputError as exc:
            raise CommandFailed(str(exc), EXIT_EMPTY) from None
        except (ConvergenceError, DegenerateInputError, ResourceLimitError, ZeroDivisionError) as exc:
            raise CommandFailed(str(exc), EXIT_NUMERIC) from None
        except (ZipfcodeError, OSError, UnicodeError) as exc:
            raise CommandFailed(str(exc), EXIT_USAGE) from None

    return wrapper


def _common_options(default_format):
    def decorate(func):
        func = click.option(
            "--format", "fmt", type=click.Choice(["csv", "json"]), default=default_format,
            show_default=True, help="Output format.",
        )(func)
        func = click.option(
            "--output", "-o", type=click.Path(dir_okay=False, allow_dash=True), default="-",
            help="Output file ('-' for standard output).",
        )(func)
        return func

    return decorate


def _base_option(func):
    return click.option(
        "--base", "base", required=True,
        help="Alphabet size N used for every logarithm; 'auto' (analyze only) counts distinct length units.",
    )(func)


def _parse_base(value, allow_auto=False):
    if allow_auto and value == "auto":
        return "auto"
    try:
        base = int(value)
    except ValueError:
        raise click.BadParameter(f"{value!r} is not an integer", param_hint="--base") from None
    if base < 2:
        raise click.BadParameter("must be >= 2", param_hint="--base")
    return base


def _meta(command, flags, seed=None):
    meta = {"tool": "zipfcode", "version": __version__, "command": command, "flags": flags}
    if seed is not None:
        meta["seed"] = seed
    return meta


def _meta_line(meta):
    return "meta " + json.dumps(meta, sort_keys=True, ensure_ascii=False)


def _emit(output, text):
    with click.open_file(output, "w", encoding="utf-8") as fh:
        fh.write(text)


def _write_report(output, fmt, tree):
    if fmt == "json":
        _emit(output, dumps(tree))
        return
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["key", "value"])
    for key, value in flatten(tree):
        writer.writerow([key, _render(value)])
    _emit(output, buf.getvalue())


def _count_lines(job):
    """Worker: tokenize and count one contiguous block of input lines."""
    shard, offset, lines, lowercase, splitter = job
    try:
        return count_shard(tokenize_stream(lines, lowercase=lowercase, splitter=splitter), shard)
    except EncodingError as exc:
        raise EncodingError("invalid UTF-8", exc.offset + offset) from None


def _count_input(path, lowercase, splitter, unit, jobs):
    with click.open_file(path, "rb") as fh:
        if jobs <= 1:
            shards = count_shard(tokenize_stream(fh, lowercase=lowercase, splitter=splitter))
            return finalize_counts(shards, unit)
        lines = fh.readlines()
    size = max(1, math.ceil(len(lines) / jobs))
    blocks = []
    offset = 0
    for shard, start in enumerate(range(0, len(lines), size)):
        block = lines[start:start + size]
        blocks.append((shard, offset, block, lowercase, splitter))
        offset += sum(len(line) for line in block)
    merged = count_shard([])
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
        for part in pool.map(_count_lines, blocks):
            merged = merge_counts(merged, part)
    return finalize_counts(merged, unit)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__, prog_name="zipfcode")
def main():
    """Optimal coding, Zipf's law and the law of abbreviation."""


@main.command()
@click.argument("input_path", metavar="INPUT", type=click.Path(dir_okay=False, allow_dash=True))
@_base_option
@click.option("--lowercase/--no-lowercase", default=False, show_default=True)
@click.option("--splitter", type=click.Choice([s.value for s in Splitter]), default="unicode", show_default=True)
@click.option("--length-unit", type=click.Choice([u.value for u in LengthUnit]), default="graphemes", show_default=True)
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True, help="Counting processes.")
@click.option("--plot-data", type=click.Path(dir_okay=False), default=None,
              help="Also write log-rank / log-probability / length columns for plotting.")
@_common_options("csv")
@_exit_codes
def analyze(input_path, base, lowercase, splitter, length_unit, jobs, plot_data, output, fmt):
    """Count tokens of INPUT and write its rank table with summary statistics."""
    base = _parse_base(base, allow_auto=True)
    table = _count_input(input_path, lowercase, Splitter(splitter), LengthUnit(length_unit), jobs)
    if not table.rows:
        raise EmptyInputError("the corpus contains no tokens")
    if base == "auto":
        unit = LengthUnit(length_unit)
        if unit is LengthUnit.BYTES:
            symbols = {b for t in table.tokens() for b in t.encode("utf-8")}
        elif unit is LengthUnit.CODE_POINTS:
            symbols = {c for t in table.tokens() for c in t}
        else:
            from .corpus import _GRAPHEME

            symbols = {g for t in table.tokens() for g in _GRAPHEME.findall(t)}
        base = len(symbols)
        if base < 2:
            raise click.BadParameter("fewer than 2 distinct symbols in the corpus", param_hint="--base")
    dist, profile = to_rank_data(table)
    tokens = table.tokens()
    try:
        tau, holds = law_of_abbreviation_holds(dist, profile)
    except DegenerateInputError:
        tau, holds = None, None
    summary = {
        "n": dist.n,
        "total_tokens": table.total_tokens,
        "base": base,
        "entropy": entropy(dist, base),
        "mean_log_rank": mean_log_rank(dist, base),
        "mean_length": mean_length(dist, profile),
        "tau": tau,
        "law_of_abbreviation": holds,
        "rank_bound_ok": validate_rank_bound(dist),
    }
    if summary["mean_length"] > 0:
        eff = efficiencies(dist, profile, base)
        summary["eta_ns"] = eff.eta_ns
        summary["eta_ud"] = eff.eta_ud
    else:
        summary["eta_ns"] = summary["eta_ud"] = None
    flags = {
        "input": input_path, "base": base, "lowercase": lowercase, "splitter": splitter,
        "length_unit": length_unit, "format": fmt,
    }
    meta = _meta("analyze", flags)
    if fmt == "json":
        rows = [
            {"rank": k + 1, "token": tokens[k], "count": int(dist.counts[k]),
             "probability": float(dist.probs[k]), "length": float(profile.lengths[k])}
            for k in range(dist.n)
        ]
        _emit(output, dumps({"meta": meta, "summary": summary, "rows": rows}))
    else:
        buf = io.StringIO()
        comments = [_meta_line(meta)] + [
            f"{key}={_render(value)}" for key, value in summary.items()
        ]
        write_rank_table(buf, dist, tokens=tokens, lengths=profile.lengths, comments=comments)
        _emit(output, buf.getvalue())
    if plot_data:
        log_n = math.log(base)
        with open(plot_data, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["rank", "log_rank", "log_probability", "neg_log_probability", "length"])
            log_rank = np.log(dist.ranks()) / log_n
            log_p = np.log(dist.probs) / log_n
            for k in range(dist.n):
                writer.writerow([k + 1, repr(float(log_rank[k])), repr(float(log_p[k])),
                                 repr(float(-log_p[k])), _render(float(profile.lengths[k]))])


def _render(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return int(value) if value.is_integer() and abs(value) < 2**53 else format(value, ".17g")
    return value


def _load_table(path, need_length=False):
    with click.open_file(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if need_length:
        header = next((line for line in text.splitlines() if line and not line.startswith("#")), "")
        if "length" not in next(csv.reader([header]), []):
            raise click.BadParameter("table has no length column", param_hint="TABLE")
    table = read_table(io.StringIO(text))
    if not table.rows:
        raise EmptyInputError("the table has no rows")
    return table


@main.command()
@click.argument("table_path", metavar="TABLE", type=click.Path(dir_okay=False, allow_dash=True))
@click.option("--model", type=click.Choice(["zipf", "exp", "both"]), default="both", show_default=True)
@_base_option
@_common_options("json")
@_exit_codes
def fit(table_path, model, base, output, fmt):
    """Fit Zipf's law and/or the exponential law to the counts of TABLE."""
    base = _parse_base(base)
    table = _load_table(table_path)
    counts = [r.count for r in table.rows]
    dist, _ = to_rank_data(table)
    tree = {"meta": _meta("fit", {"table": table_path, "model": model, "base": base, "format": fmt})}
    if model == "both":
        sel = select_model(counts, n_symbols=base)
        tree["zipf"] = sel.power_law
        tree["exponential"] = sel.exponential
        tree["selection"] = {"verdict": sel.verdict, "delta_aic": sel.delta_aic}
    elif model == "zipf":
        tree["zipf"] = fit_zipf_mle(counts, base)
    else:
        tree["exponential"] = fit_exponential_mle(counts)
    if model != "exp":
        tree["loglog_alpha"] = fit_zipf_loglog(dist)
    _write_report(output, fmt, tree)


@main.command()
@click.argument("table_path", metavar="TABLE", type=click.Path(dir_okay=False, allow_dash=True))
@_base_option
@click.option("--min-r2", type=click.FloatRange(0, 1), default=0.95, show_default=True)
@click.option("--alpha-tol", type=click.FloatRange(min=0), default=0.10, show_default=True,
              help="Relative tolerance flagging implied vs directly fitted alpha.")
@click.option("--weighted/--unweighted", default=True, show_default=True,
              help="Weight each type by its probability in the linear fits.")
@click.option("--optimum", type=click.Choice(["hard", "soft"]), default="hard", show_default=True,
              help="Optimal non-singular length used as size-rank regressor.")
@click.option("--min-count", type=click.IntRange(min=1), default=10, show_default=True,
              help="Fit only types seen at least this many times.")
@_common_options("json")
@_exit_codes
def classify(table_path, base, min_r2, alpha_tol, weighted, optimum, min_count, output, fmt):
    """Assess whether TABLE belongs to the quasioptimal coding class."""
    base = _parse_base(base)
    table = _load_table(table_path, need_length=True)
    dist, profile = to_rank_data(table)
    rep = assess_class_membership(
        dist, profile, base, min_r2=min_r2, alpha_tolerance=alpha_tol,
        weighted=weighted, optimum=optimum, min_count=min_count,
    )
    flags = {
        "table": table_path, "base": base, "min_r2": min_r2, "alpha_tol": alpha_tol,
        "weighted": weighted, "optimum": optimum, "min_count": min_count, "format": fmt,
    }
    tree = {"meta": _meta("classify", flags), "report": rep}
    if rep.size_rank is not None and rep.size_prob is not None and rep.size_prob.slope > 0:
        group = GroupParams.complete(
            base, a_ns=rep.size_rank.slope, b_ns=rep.size_rank.intercept,
            a_ud=rep.size_prob.slope, b_ud=rep.size_prob.intercept,
        )
        tree["group"] = group
        if rep.direct_zipf is not None and rep.direct_zipf.alpha > 0:
            a_ud, b_ud = size_rank_from(
                rep.direct_zipf.alpha, rep.direct_zipf.c, rep.size_rank.slope, rep.size_rank.intercept, base
            )
            tree["size_probability_from_direct_zipf"] = {"a_ud": a_ud, "b_ud": b_ud}
    separation = {}
    for label, alpha, c in (
        ("implied", rep.implied_alpha, rep.implied_c),
        ("direct", rep.direct_zipf.alpha if rep.direct_zipf else None,
         rep.direct_zipf.c if rep.direct_zipf else None),
    ):
        if alpha is None or c is None or c <= 0:
            continue
        beta = -math.log(c) / math.log(base)
        res_exp, res_eff = check_linear_separation(
            dist, alpha, beta, base, profile if mean_length(dist, profile) > 0 else None
        )
        separation[label] = {"alpha": alpha, "beta": beta, "residual_expectation": res_exp,
                             "residual_efficiency": res_eff}
    tree["linear_separation"] = separation
    _write_report(output, fmt, tree)
    if rep.size_prob is None:
        raise CommandFailed("; ".join(rep.diagnostics) or "degenerate input", EXIT_NUMERIC)


@main.command()
@click.option("--alphabet-size", type=int, required=True, help="Number N of equiprobable characters.")
@click.option("--p-space", type=float, required=True, help="Probability of the space key after a character.")
@click.option("--tokens", "count", type=int, required=True, help="Number of words to type.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--output", "-o", type=click.Path(dir_okay=False, allow_dash=True), default="-")
@click.option("--metadata", "metadata_path", type=click.Path(dir_okay=False), default=None,
              help="Write run metadata JSON here (default: standard error).")
def simulate(alphabet_size, p_space, count, seed, output, metadata_path):
    """Type words at random; one token per line."""
    try:
        params = RandomTypingParams(alphabet_size, p_space, seed)
    except ZipfcodeError as exc:
        raise click.BadParameter(str(exc)) from None
    if count < 1:
        raise click.BadParameter("must be >= 1", param_hint="--tokens")
    meta = {**_meta("simulate", {"alphabet_size": alphabet_size, "p_space": p_space,
                                 "tokens": count, "seed": seed}, seed=seed),
            "simulation": simulation_metadata(params, count)}
    try:
        with click.open_file(output, "w", encoding="utf-8") as fh:
            buf = []
            for tok in iter_tokens(params, count):
                buf.append(tok)
                if len(buf) >= 65536:
                    fh.write("\n".join(buf) + "\n")
                    buf.clear()
            if buf:
                fh.write("\n".join(buf) + "\n")
        text = json.dumps(meta, sort_keys=True) + "\n"
        if metadata_path:
            with open(metadata_path, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            click.echo(text, err=True, nl=False)
    except OSError as exc:
        raise CommandFailed(str(exc), EXIT_USAGE) from None


@main.command()
@click.option("--scheme", type=click.Choice(["elias-gamma", "nonsingular"]), required=True)
@click.option("--upto", type=int, required=True, help="Number of units to code.")
@click.option("--alphabet", "alphabet_text", default="ab", show_default=True)
@_common_options("csv")
@_exit_codes
def codes(scheme, upto, alphabet_text, output, fmt):
    """Write an optimal non-singular or Elias gamma code table."""
    if upto < 1:
        raise click.BadParameter("must be >= 1", param_hint="--upto")
    try:
        alphabet = Alphabet.from_string(alphabet_text)
    except ZipfcodeError as exc:
        raise click.BadParameter(str(exc), param_hint="--alphabet") from None
    if scheme == "elias-gamma":
        if alphabet.size != 2:
            raise click.BadParameter("Elias gamma needs exactly 2 symbols", param_hint="--alphabet")
        table = elias_gamma_table(upto, alphabet)
    else:
        table = enumerate_nonsingular_codes(upto, alphabet)
    try:
        ud = is_uniquely_decodable(table)
    except ResourceLimitError:
        ud = None
    footer = {
        "kraft_sum": kraft_sum(table),
        "nonsingular": is_nonsingular(table),
        "uniquely_decodable": ud,
    }
    meta = _meta("codes", {"scheme": scheme, "upto": upto, "alphabet": alphabet_text, "format": fmt})
    if fmt == "json":
        tree = {"meta": meta, "alphabet": str(alphabet),
                "entries": [{"rank": r, "code": c} for r, c in table.entries()], **footer}
        _emit(output, dumps(tree))
        return
    buf = io.StringIO()
    write_code_table(
        buf, table,
        header=[_meta_line(meta), f"alphabet={alphabet}"],
        footer=[f"{k}={'unknown' if v is None else _render(v)}" for k, v in footer.items()],
    )
    _emit(output, buf.getvalue())


if __name__ == "__main__":
    sys.exit(main())
