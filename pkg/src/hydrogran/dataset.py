"""Hydrocyclone observation tables: CSV I/O, train/test split, min-max scaling."""

import csv
import math
from dataclasses import dataclass, fields

import numpy as np

from .errors import ParseError, SchemaError, SizeError, ValidationError

COLUMNS = ("pressure_psi", "solids_pct", "size_um", "stream_flag", "cum_passing_pct")
CONDITION_COLUMNS = COLUMNS[:4]
DECISION_COLUMN = COLUMNS[4]

OVERFLOW, UNDERFLOW = 0, 1


@dataclass(frozen=True)
class DataRecord:
    """One observation: four operating/condition variables and the passing %."""

    pressure_psi: float
    solids_pct: float
    size_um: float
    stream_flag: int
    cum_passing_pct: float

    def __post_init__(self):
        validate_record(self)

    def as_tuple(self):
        return (
            self.pressure_psi,
            self.solids_pct,
            self.size_um,
            float(self.stream_flag),
            self.cum_passing_pct,
        )


def validate_record(rec, row=None):
    for f in fields(rec):
        v = getattr(rec, f.name)
        if not math.isfinite(v):
            raise ValidationError(f"{f.name} is not finite ({v!r})", row=row)
    if rec.pressure_psi <= 0:
        raise ValidationError(f"pressure_psi must be > 0, got {rec.pressure_psi}", row=row)
    if rec.size_um <= 0:
        raise ValidationError(f"size_um must be > 0, got {rec.size_um}", row=row)
    if rec.stream_flag not in (OVERFLOW, UNDERFLOW):
        raise ValidationError(f"stream_flag must be 0 or 1, got {rec.stream_flag}", row=row)
    for name in ("solids_pct", "cum_passing_pct"):
        v = getattr(rec, name)
        if not 0.0 <= v <= 100.0:
            raise ValidationError(f"{name} must lie in [0, 100], got {v}", row=row)


class Dataset:
    """Immutable ordered collection of :class:`DataRecord`."""

    __slots__ = ("_records", "_array")

    def __init__(self, records):
        self._records = tuple(records)
        arr = np.array([r.as_tuple() for r in self._records], dtype=np.float64)
        self._array = arr.reshape(len(self._records), len(COLUMNS))
        self._array.setflags(write=False)

    @classmethod
    def from_array(cls, arr):
        arr = np.asarray(arr, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[1] != len(COLUMNS):
            raise SizeError(f"expected an (n, {len(COLUMNS)}) array, got shape {arr.shape}")
        records = []
        for i, row in enumerate(arr):
            flag = row[3]
            if flag != round(flag):
                raise ValidationError(f"stream_flag must be integral, got {flag}", row=i)
            try:
                records.append(DataRecord(row[0], row[1], row[2], int(flag), row[4]))
            except ValidationError as exc:
                raise ValidationError(str(exc), row=i) from None
        return cls(records)

    @property
    def records(self):
        return self._records

    @property
    def array(self):
        """Read-only (n, 5) float view in column order :data:`COLUMNS`."""
        return self._array

    def __len__(self):
        return len(self._records)

    def __iter__(self):
        return iter(self._records)

    def __getitem__(self, i):
        return self._records[i]

    def __eq__(self, other):
        return isinstance(other, Dataset) and self._records == other._records

    def __repr__(self):
        return f"Dataset(n={len(self)})"


def load_csv(path):
    """Read a dataset CSV with the exact header :data:`COLUMNS`.

    Row indices in error messages are 1-based data rows (header excluded).
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError("empty file, no header") from None
        header = [h.strip() for h in header]
        for col in COLUMNS:
            if col not in header:
                raise SchemaError(f"missing column {col!r}", column=col)
        for col in header:
            if col not in COLUMNS:
                raise SchemaError(f"unexpected column {col!r}", column=col)
        if tuple(header) != COLUMNS:
            raise SchemaError(f"columns out of order: {','.join(header)}")

        records = []
        for i, cells in enumerate(reader, start=1):
            if not cells:
                continue
            if len(cells) != len(COLUMNS):
                raise ParseError(f"expected {len(COLUMNS)} cells, got {len(cells)}", row=i)
            vals = []
            for name, cell in zip(COLUMNS, cells):
                try:
                    vals.append(float(cell))
                except ValueError:
                    raise ParseError(f"{name} is not numeric: {cell!r}", row=i) from None
            flag = vals[3]
            if flag != round(flag):
                raise ValidationError(f"stream_flag must be 0 or 1, got {cells[3]}", row=i)
            try:
                records.append(DataRecord(vals[0], vals[1], vals[2], int(flag), vals[4]))
            except ValidationError as exc:
                raise ValidationError(str(exc), row=i) from None
    return Dataset(records)


def write_csv(dataset, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in dataset:
            w.writerow([
                repr(float(r.pressure_psi)),
                repr(float(r.solids_pct)),
                repr(float(r.size_um)),
                str(int(r.stream_flag)),
                repr(float(r.cum_passing_pct)),
            ])


def split_train_test(d, n_train, n_test, seed, stratify=False):
    """Seeded shuffle split into disjoint (train, test) datasets.

    With ``stratify=True`` the test set draws from each stream in
    proportion to its share of ``d`` (largest-remainder rounding).
    """
    n = len(d)
    if n_train < 0 or n_test < 0:
        raise SizeError("split sizes must be non-negative")
    if n_train + n_test > n:
        raise SizeError(f"n_train + n_test = {n_train + n_test} exceeds dataset size {n}")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    if not stratify:
        test_idx = perm[:n_test]
        train_idx = perm[n_test:n_test + n_train]
    else:
        flags = d.array[:, 3].astype(int)
        groups = [perm[flags[perm] == g] for g in (OVERFLOW, UNDERFLOW)]
        quotas = [n_test * len(g) / n for g in groups]
        take = [int(math.floor(q)) for q in quotas]
        rem = n_test - sum(take)
        for g in sorted(range(2), key=lambda g: -(quotas[g] - take[g]))[:rem]:
            take[g] += 1
        test_idx = np.concatenate([g[:k] for g, k in zip(groups, take)])
        chosen = set(test_idx.tolist())
        rest = np.array([i for i in perm if i not in chosen], dtype=int)
        train_idx = rest[:n_train]
    records = d.records
    return (
        Dataset(records[i] for i in train_idx),
        Dataset(records[i] for i in test_idx),
    )


@dataclass(frozen=True)
class NormStats:
    minimum: tuple
    maximum: tuple

    def __post_init__(self):
        if any(hi < lo for lo, hi in zip(self.minimum, self.maximum)):
            raise ValidationError("NormStats requires max >= min per column")

    @property
    def lo(self):
        return np.asarray(self.minimum, dtype=np.float64)

    @property
    def span(self):
        return np.asarray(self.maximum, dtype=np.float64) - self.lo

    def apply(self, arr):
        """Map raw columns into normalized units; constant columns go to 0."""
        arr = np.asarray(arr, dtype=np.float64)
        span = self.span
        safe = np.where(span > 0, span, 1.0)
        out = (arr - self.lo) / safe
        return np.where(span > 0, out, 0.0)

    def invert(self, arr):
        return np.asarray(arr, dtype=np.float64) * self.span + self.lo


def normalize(d):
    """Min-max scale every column of ``d``.

    Returns ``(X, stats)`` where ``X`` is an (n, 5) array in [0, 1]. An array
    is returned rather than a Dataset because scaled rows violate the record
    invariants (e.g. pressure becomes 0 at the column minimum).
    """
    arr = d.array if isinstance(d, Dataset) else np.asarray(d, dtype=np.float64)
    if arr.shape[0] == 0:
        raise SizeError("cannot normalize an empty dataset")
    stats = NormStats(tuple(arr.min(axis=0).tolist()), tuple(arr.max(axis=0).tolist()))
    return stats.apply(arr), stats


def denormalize(X, stats):
    return stats.invert(X)
