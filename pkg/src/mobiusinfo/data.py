"""Loading CSV/TSV tables into discrete datasets."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

DEFAULT_NA = ("", "NA", "N/A", "NaN", "nan", "null", "None", "?")


class DataError(ValueError):
    """Malformed input table or an unusable encoding request."""


@dataclass(frozen=True)
class RawTable:
    header: tuple
    rows: tuple  # tuples of str, None for missing cells

    @property
    def shape(self):
        return len(self.header), len(self.rows)


def read_table(path, format: str = "csv", na: Sequence[str] = DEFAULT_NA) -> RawTable:
    """Read a delimited file with a header row; cells in ``na`` become ``None``."""
    if format not in ("csv", "tsv"):
        raise DataError(f"format must be 'csv' or 'tsv', got {format!r}")
    delimiter = "," if format == "csv" else "\t"
    na = set(na)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: missing header row") from None
        except csv.Error as exc:
            raise DataError(f"{path}, line 1: {exc}") from None
        header = tuple(h.strip() for h in header)
        if not any(header):
            raise DataError(f"{path}: missing header row")
        if len(set(header)) != len(header):
            raise DataError(f"{path}: duplicate column names in header")
        rows = []
        try:
            for row in reader:
                if not row:
                    continue
                if len(row) != len(header):
                    raise DataError(
                        f"{path}, line {reader.line_num}: expected {len(header)} fields, got {len(row)}")
                rows.append(tuple(None if cell.strip() in na else cell for cell in row))
        except csv.Error as exc:
            raise DataError(f"{path}, line {reader.line_num}: {exc}") from None
    return RawTable(header, tuple(rows))


@dataclass(frozen=True)
class Dataset:
    """Discrete columns of small nonnegative integer codes.

    ``category_maps[name][code]`` is the original value (categorical columns)
    or the bin's interval label (discretized numeric columns).
    """

    columns: dict
    category_maps: dict
    row_count: int
    dropped_count: int = 0
    numeric: frozenset = field(default_factory=frozenset)

    @property
    def names(self) -> list:
        return list(self.columns)

    def cardinality(self, name: str) -> int:
        return len(self.category_maps[name])

    def codes(self, names: Optional[Sequence[str]] = None) -> np.ndarray:
        names = self.names if names is None else list(names)
        missing = [n for n in names if n not in self.columns]
        if missing:
            raise DataError(f"unknown column(s): {', '.join(missing)}")
        return np.column_stack([self.columns[n] for n in names]).astype(np.int64)

    def decode(self, name: str) -> list:
        cmap = self.category_maps[name]
        return [cmap[c] for c in self.columns[name]]

    def subset(self, names: Sequence[str]) -> "Dataset":
        self.codes(names)
        return Dataset({n: self.columns[n] for n in names}, {n: self.category_maps[n] for n in names},
                       self.row_count, self.dropped_count, self.numeric & frozenset(names))

    @classmethod
    def from_codes(cls, codes, names=None) -> "Dataset":
        codes = np.asarray(codes, dtype=np.int64)
        if names is None:
            names = [f"X{i + 1}" for i in range(codes.shape[1])]
        columns, maps = {}, {}
        for j, name in enumerate(names):
            col, uniq = _dense(codes[:, j])
            columns[name] = col
            maps[name] = [str(u) for u in uniq]
        return cls(columns, maps, codes.shape[0])


def _dense(values: np.ndarray):
    uniq, inverse = np.unique(values, return_inverse=True)
    return inverse.astype(np.int64), uniq


def _to_float(cell):
    try:
        return float(cell)
    except ValueError:
        return None


def bin_edges(values: np.ndarray, bins: int, strategy: str) -> np.ndarray:
    """Interior bin edges; a value equal to an edge falls in the lower bin."""
    s = np.sort(values)
    if strategy == "equal-width":
        return np.linspace(s[0], s[-1], bins + 1)[1:-1]
    if strategy != "equal-frequency":
        raise DataError(f"strategy must be 'equal-frequency' or 'equal-width', got {strategy!r}")
    n = len(s)
    edges = []
    for k in range(1, bins):
        j = (k * n) // bins
        if 0 < j < n:
            edges.append((s[j - 1] + s[j]) / 2.0)
    return np.array(edges)


def _format_edge(x):
    return f"{x:.6g}"


def encode(table: RawTable, bins: int = 4, strategy: str = "equal-frequency", missing: str = "drop-row") -> Dataset:
    """Code every column as dense integers.

    Categorical columns are coded by first appearance; numeric columns with
    more than ``bins`` distinct values are discretized, others coded by sorted
    value. Rows with any missing cell are dropped.
    """
    if missing != "drop-row":
        raise DataError(f"unsupported missing-value policy {missing!r}")
    if bins < 1:
        raise DataError(f"bins must be >= 1, got {bins}")
    kept = [r for r in table.rows if None not in r]
    dropped = len(table.rows) - len(kept)
    if not kept:
        raise DataError("no rows left after dropping rows with missing values")
    columns, maps, numeric = {}, {}, set()
    for j, name in enumerate(table.header):
        cells = [r[j] for r in kept]
        floats = [_to_float(c) for c in cells]
        if all(f is not None for f in floats):
            arr = np.array(floats)
            if not np.all(np.isfinite(arr)):
                raise DataError(f"column {name!r} contains non-finite numbers")
            uniq = np.unique(arr)
            if len(uniq) <= bins:
                columns[name] = np.searchsorted(uniq, arr).astype(np.int64)
                maps[name] = [cells[int(np.argmax(arr == u))] for u in uniq]
            else:
                edges = bin_edges(arr, bins, strategy)
                raw = np.searchsorted(edges, arr, side="left")
                codes, used = _dense(raw)
                bounds = np.concatenate(([arr.min()], edges, [arr.max()]))
                columns[name] = codes
                maps[name] = [f"[{_format_edge(bounds[b])}, {_format_edge(bounds[b + 1])}]" for b in used]
                numeric.add(name)
        else:
            order = {}
            for c in cells:
                order.setdefault(c, len(order))
            columns[name] = np.array([order[c] for c in cells], dtype=np.int64)
            maps[name] = list(order)
    return Dataset(columns, maps, len(kept), dropped, frozenset(numeric))


def load_dataset(path, format: Optional[str] = None, na: Sequence[str] = DEFAULT_NA, bins: int = 4,
                 strategy: str = "equal-frequency") -> Dataset:
    if format is None:
        format = "tsv" if str(path).endswith((".tsv", ".tab")) else "csv"
    return encode(read_table(path, format, na), bins=bins, strategy=strategy)


def empirical_fractions(dataset: Dataset, names: Optional[Sequence[str]] = None):
    """Exact ``Fraction`` probabilities of every observed joint configuration."""
    codes = dataset.codes(names)
    uniq, counts = np.unique(codes, axis=0, return_counts=True)
    total = int(counts.sum())
    return {tuple(int(v) for v in u): Fraction(int(c), total) for u, c in zip(uniq, counts)}
