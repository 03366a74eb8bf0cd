"""CSV ingestion and writing.

Readers accept a path or an open text file, auto-detect comma versus
semicolon delimiters, skip ``#`` comment lines, and understand an optional
metadata comment of the form ``# fbst: {...json...}`` (used to carry the
true effect of simulated datasets through a pipeline).  Missing cells are
empty strings or NA/NaN; rows with a missing value in any bound column are
dropped and their file line numbers reported back to the caller.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .exceptions import DataError
from .models import RegressionData, TwoGroupData

_META_PREFIX = "# fbst:"


def _read_text(source) -> str:
    if hasattr(source, "read"):
        return source.read()
    return Path(source).read_text(encoding="utf-8-sig")


def _is_missing(cell: str) -> bool:
    s = cell.strip()
    return s == "" or s.upper() in {"NA", "NAN"}


def _parse_float(cell: str, lineno: int, column: str) -> float:
    try:
        return float(cell.strip())
    except ValueError:
        raise DataError(
            f"line {lineno}, column '{column}': cannot parse {cell.strip()!r} as a number"
        ) from None


def read_table(source):
    """Parse a delimited text table.

    Returns ``(header, rows, meta)`` where rows are ``(lineno, cells)``
    pairs with 1-based file line numbers and meta is the parsed metadata
    comment (empty dict when absent).  Quoted fields containing newlines are
    not supported.
    """
    text = _read_text(source)
    meta = {}
    data_lines = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            if stripped.startswith(_META_PREFIX) and not meta:
                payload = stripped[len(_META_PREFIX):].strip()
                try:
                    meta = json.loads(payload)
                except json.JSONDecodeError as exc:
                    raise DataError(f"line {lineno}: bad metadata comment: {exc}") from None
            continue
        data_lines.append((lineno, line))
    if not data_lines:
        raise DataError("no data rows found")

    first = data_lines[0][1]
    delimiter = ";" if first.count(";") > first.count(",") else ","
    parsed = list(csv.reader([text for _, text in data_lines], delimiter=delimiter))
    header = [cell.strip() for cell in parsed[0]]
    if len(set(header)) != len(header):
        raise DataError("duplicate column names in header")
    rows = []
    for (lineno, _), cells in zip(data_lines[1:], parsed[1:]):
        if len(cells) != len(header):
            raise DataError(
                f"line {lineno}: expected {len(header)} fields, got {len(cells)}"
            )
        rows.append((lineno, cells))
    return header, rows, meta


def _column_index(header, name) -> int:
    try:
        return header.index(name)
    except ValueError:
        raise DataError(
            f"column '{name}' not found; available: {', '.join(header)}"
        ) from None


def ingest_two_groups(source, group_col="group", value_col="value", groups=None):
    """Read a long-format two-group table into TwoGroupData.

    ``groups`` optionally fixes which label is group 1 and which is group 2;
    by default labels are ordered alphabetically.  Returns ``(data, info)``.
    """
    header, rows, meta = read_table(source)
    gi = _column_index(header, group_col)
    vi = _column_index(header, value_col)

    by_label = {}
    dropped = []
    for lineno, cells in rows:
        if _is_missing(cells[gi]) or _is_missing(cells[vi]):
            dropped.append(lineno)
            continue
        label = cells[gi].strip()
        by_label.setdefault(label, []).append(_parse_float(cells[vi], lineno, value_col))

    if groups is not None:
        groups = [str(g) for g in groups]
        if len(groups) != 2 or groups[0] == groups[1]:
            raise DataError("groups must name two distinct labels")
        unknown = sorted(set(by_label) - set(groups))
        if unknown:
            raise DataError(f"unexpected group labels in data: {unknown}")
        missing = [g for g in groups if g not in by_label]
        if missing:
            raise DataError(f"group labels not found in data: {missing}")
        labels = groups
    else:
        labels = sorted(by_label)
        if len(labels) != 2:
            raise DataError(
                f"need exactly two group labels, found {len(labels)}: {labels}"
            )

    true_effect = meta.get("true_effect")
    data = TwoGroupData(
        group1=np.asarray(by_label[labels[0]], dtype=float),
        group2=np.asarray(by_label[labels[1]], dtype=float),
        labels=(labels[0], labels[1]),
        true_effect=None if true_effect is None else float(true_effect),
    )
    info = {"n_rows": len(rows), "dropped_lines": dropped, "meta": meta}
    return data, info


def parse_formula(text: str):
    """Split a formula like ``"grade ~ sex + age"`` into (response, terms)."""
    if text.count("~") != 1:
        raise DataError("formula must contain exactly one '~'")
    lhs, rhs = (part.strip() for part in text.split("~"))
    if not lhs:
        raise DataError("formula has no response variable")
    terms = [t.strip() for t in rhs.split("+")]
    if not all(terms):
        raise DataError("formula has an empty term")
    if len(set(terms)) != len(terms):
        raise DataError("formula repeats a term")
    if lhs in terms:
        raise DataError("response cannot also be a predictor")
    return lhs, terms


def _is_numeric_column(rows, idx) -> bool:
    seen = False
    for _, cells in rows:
        s = cells[idx].strip()
        if _is_missing(s):
            continue
        seen = True
        try:
            float(s)
        except ValueError:
            return False
    return seen


def ingest_regression(source, formula: str):
    """Read a table and build a design matrix from an R-style formula.

    Numeric predictors enter as-is.  Categorical predictors are dummy coded
    against the alphabetically first level, producing columns named like
    ``sexM`` (term name plus level).  Returns ``(data, info)``.
    """
    response, terms = parse_formula(formula)
    header, rows, meta = read_table(source)
    yi = _column_index(header, response)
    term_idx = [_column_index(header, t) for t in terms]

    kept = []
    dropped = []
    for lineno, cells in rows:
        if _is_missing(cells[yi]) or any(_is_missing(cells[i]) for i in term_idx):
            dropped.append(lineno)
        else:
            kept.append((lineno, cells))
    if not kept:
        raise DataError("all rows were dropped for missing values")

    if not _is_numeric_column(kept, yi):
        raise DataError(f"response column '{response}' is not numeric")
    y = np.asarray([_parse_float(cells[yi], lineno, response) for lineno, cells in kept])

    columns = [np.ones(len(kept))]
    names = ["intercept"]
    encodings = {}
    for term, idx in zip(terms, term_idx):
        if _is_numeric_column(kept, idx):
            columns.append(
                np.asarray([_parse_float(c[idx], ln, term) for ln, c in kept])
            )
            names.append(term)
            encodings[term] = "numeric"
        else:
            levels = sorted({cells[idx].strip() for _, cells in kept})
            values = [cells[idx].strip() for _, cells in kept]
            for level in levels[1:]:
                columns.append(np.asarray([1.0 if v == level else 0.0 for v in values]))
                names.append(f"{term}{level}")
            encodings[term] = {"levels": levels, "baseline": levels[0]}

    data = RegressionData(X=np.column_stack(columns), y=y, names=names)
    info = {
        "n_rows": len(rows),
        "n_used": len(kept),
        "dropped_lines": dropped,
        "encodings": encodings,
        "meta": meta,
    }
    return data, info


def _writable(target):
    if hasattr(target, "write"):
        return target, False
    return open(target, "w", encoding="utf-8", newline=""), True


def write_two_groups_csv(target, data: TwoGroupData, extra_meta=None) -> None:
    """Write a long-format two-group CSV, with a metadata comment when the
    true effect is known so that downstream runs can report it."""
    meta = {} if extra_meta is None else dict(extra_meta)
    if data.true_effect is not None:
        meta["true_effect"] = data.true_effect
    fp, close = _writable(target)
    try:
        if meta:
            fp.write(f"{_META_PREFIX} {json.dumps(meta)}\n")
        writer = csv.writer(fp, lineterminator="\n")
        writer.writerow(["group", "value"])
        for label, values in zip(data.labels, (data.group1, data.group2)):
            for v in values:
                writer.writerow([label, format(v, ".17g")])
    finally:
        if close:
            fp.close()


def write_draws_csv(target, draws) -> None:
    """Write kept draws as CSV with a chain column followed by parameters."""
    fp, close = _writable(target)
    try:
        writer = csv.writer(fp, lineterminator="\n")
        writer.writerow(["chain"] + list(draws.names))
        for c in range(draws.n_chains):
            for row in draws.chains[c]:
                writer.writerow([c] + [format(v, ".17g") for v in row])
    finally:
        if close:
            fp.close()


def read_draws_csv(source, column=None) -> np.ndarray:
    """Read one parameter's draws back from a draws CSV (or any table)."""
    header, rows, _ = read_table(source)
    if column is None:
        candidates = [h for h in header if h != "chain"]
        if len(candidates) != 1:
            raise DataError(
                f"specify a column; available: {', '.join(candidates)}"
            )
        column = candidates[0]
    idx = _column_index(header, column)
    return np.asarray([_parse_float(cells[idx], ln, column) for ln, cells in rows])
