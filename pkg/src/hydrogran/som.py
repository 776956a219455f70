"""Rectangular-grid self-organizing map used for crisp granulation."""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .dataset import COLUMNS, DataRecord, Dataset
from .errors import SizeError, ValidationError


@dataclass
class SomMap:
    rows: int
    cols: int
    codebook: np.ndarray  # (rows*cols, dim), row-major unit order

    def __post_init__(self):
        self.codebook = np.ascontiguousarray(self.codebook, dtype=np.float64)
        if self.rows * self.cols < 1:
            raise SizeError("SOM needs at least one unit")
        if self.codebook.shape[0] != self.rows * self.cols:
            raise SizeError(
                f"codebook has {self.codebook.shape[0]} vectors, grid needs {self.rows * self.cols}"
            )
        if not np.all(np.isfinite(self.codebook)):
            raise ValidationError("codebook contains non-finite entries")

    @property
    def dim(self):
        return self.codebook.shape[1]

    @property
    def n_units(self):
        return self.rows * self.cols

    @property
    def grid(self):
        """(n_units, 2) float array of (row, col) grid positions."""
        r, c = np.divmod(np.arange(self.n_units), self.cols)
        return np.column_stack([r, c]).astype(np.float64)

    def copy(self):
        return SomMap(self.rows, self.cols, self.codebook.copy())


@dataclass(frozen=True)
class SomTrainConfig:
    epochs: int = 60
    lr_initial: float = 0.5
    lr_final: float = 0.02
    sigma_initial: float = 2.0
    sigma_final: float = 0.2
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 0:
            raise ValidationError("epochs must be >= 0")
        if not (0 < self.lr_final <= self.lr_initial <= 1):
            raise ValidationError("require 0 < lr_final <= lr_initial <= 1")
        if not (0 < self.sigma_final <= self.sigma_initial):
            raise ValidationError("require 0 < sigma_final <= sigma_initial")


def map_shape(n_units):
    """Grid shape for a requested neuron count: floor(sqrt(n)) rows.

    ``rows * cols`` may exceed ``n_units`` when n is not a product of the two.
    """
    if n_units < 1:
        raise SizeError("neuron count must be >= 1")
    rows = int(math.isqrt(n_units))
    return rows, -(-n_units // rows)


def _as_vectors(data):
    if isinstance(data, Dataset):
        data = data.array
    arr = np.ascontiguousarray(data, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[:, None]
    return arr


def init_map(rows, cols, dim, data, seed):
    """Codebook vectors sampled uniformly from ``data`` (without replacement
    while there are enough points)."""
    if rows < 1 or cols < 1 or dim < 1:
        raise SizeError(f"SOM dimensions must be positive, got {rows}x{cols}x{dim}")
    X = _as_vectors(data)
    if X.shape[0] == 0:
        raise SizeError("cannot initialize a SOM from empty data")
    if X.shape[1] != dim:
        raise SizeError(f"data has dimension {X.shape[1]}, map expects {dim}")
    n_units = rows * cols
    rng = np.random.default_rng(seed)
    idx = rng.choice(X.shape[0], size=n_units, replace=n_units > X.shape[0])
    return SomMap(rows, cols, X[idx].copy())


def best_matching_unit(som, x):
    x = np.asarray(x, dtype=np.float64).reshape(1, -1)
    if x.shape[1] != som.dim:
        raise SizeError(f"vector has length {x.shape[1]}, map dimension is {som.dim}")
    idx, _ = kernels.bmu(som.codebook, x)
    return int(idx[0])


def bmu_indices(som, data):
    X = _as_vectors(data)
    if X.shape[1] != som.dim:
        raise SizeError(f"data has dimension {X.shape[1]}, map dimension is {som.dim}")
    return kernels.bmu(som.codebook, X)


def _decay(start, end, t, n):
    if n <= 1:
        return start
    return start * (end / start) ** (t / (n - 1))


def train(som, data, cfg):
    """Online training; returns a new map, the input is left untouched.

    Learning rate and neighbourhood width decay exponentially per epoch from
    their initial to final values. Sample order is reshuffled every epoch.
    """
    X = _as_vectors(data)
    if X.shape[0] == 0:
        raise SizeError("cannot train a SOM on empty data")
    if X.shape[1] != som.dim:
        raise SizeError(f"data has dimension {X.shape[1]}, map dimension is {som.dim}")
    out = som.copy()
    grid = out.grid
    rng = np.random.default_rng(cfg.seed)
    for epoch in range(cfg.epochs):
        lr = _decay(cfg.lr_initial, cfg.lr_final, epoch, cfg.epochs)
        sigma = _decay(cfg.sigma_initial, cfg.sigma_final, epoch, cfg.epochs)
        order = rng.permutation(X.shape[0]).astype(np.int64)
        kernels.som_epoch(out.codebook, grid, X, order, lr, sigma)
    return out


def quantization_error(som, data):
    X = _as_vectors(data)
    if X.shape[0] == 0:
        raise SizeError("quantization error of empty data is undefined")
    _, dist = bmu_indices(som, X)
    return float(dist.mean())


def codebook_as_dataset(som, stats):
    """Denormalize codebook vectors into records (the crisp granules)."""
    if som.dim != len(COLUMNS):
        raise SizeError(f"codebook dimension {som.dim} != schema width {len(COLUMNS)}")
    raw = stats.invert(som.codebook)
    records = []
    for v in raw:
        records.append(
            DataRecord(
                pressure_psi=float(v[0]),
                solids_pct=float(np.clip(v[1], 0.0, 100.0)),
                size_um=float(v[2]),
                stream_flag=int(v[3] >= 0.5),
                cum_passing_pct=float(np.clip(v[4], 0.0, 100.0)),
            )
        )
    return Dataset(records)


def write_codebook_csv(som, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("unit,row,col," + ",".join(f"c{k}" for k in range(som.dim)) + "\n")
        for u, vec in enumerate(som.codebook):
            r, c = divmod(u, som.cols)
            fh.write(f"{u},{r},{c}," + ",".join(repr(float(v)) for v in vec) + "\n")
