"""Synthetic hydrocyclone classification data.

Feed size follows a Rosin-Rammler distribution, the corrected partition
curve has the exponential (Plitt) form, and the cut size responds to
pressure drop and feed solids through a power/exponential correlation.
The default constants are generator choices, not fitted to any rig.

Reference geometry of the original test rig, kept for documentation only:
body diameter "50.8cm", overflow "30m", underflow "7mm"; kaolin sample
density 2.17 g/cm^3. None of these enter the model.
"""

import math
from dataclasses import dataclass

import numpy as np

from .dataset import DataRecord, Dataset, OVERFLOW, UNDERFLOW
from .errors import DomainError, ValidationError

LN2 = math.log(2.0)  # Plitt's 0.693; exact so that E_c(d50c) = 0.5


@dataclass(frozen=True)
class PartitionSummary:
    d50: float
    d25: float
    d75: float
    imperfection: float


@dataclass(frozen=True)
class CycloneSimConfig:
    feed_d63: float = 30.0
    feed_n: float = 0.9
    d50_base: float = 22.0
    pressure_exp: float = 0.28
    solids_coef: float = 0.063
    sharpness_m: float = 2.0
    bypass_rf: float = 0.15
    size_fractions: tuple = (2.0, 4.0, 8.0, 12.0, 20.0, 32.0, 53.0, 75.0)
    operating_points: tuple = (
        (5.0, 5.0), (5.0, 10.0), (5.0, 15.0),
        (10.0, 5.0), (10.0, 10.0), (10.0, 15.0),
        (15.0, 5.0), (15.0, 10.0), (15.0, 15.0),
        (20.0, 5.0), (20.0, 10.0), (20.0, 15.0),
    )
    noise_sd: float = 1.0
    seed: int = 0

    def __post_init__(self):
        for name in ("feed_d63", "feed_n", "d50_base", "sharpness_m"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"{name} must be > 0")
        if not 0 <= self.bypass_rf < 1:
            raise ValidationError("bypass_rf must lie in [0, 1)")
        if self.noise_sd < 0:
            raise ValidationError("noise_sd must be >= 0")
        sizes = self.size_fractions
        if len(sizes) == 0 or sizes[0] <= 0:
            raise ValidationError("size_fractions must be non-empty and positive")
        if any(b <= a for a, b in zip(sizes, sizes[1:])):
            raise ValidationError("size_fractions must be strictly increasing")
        if len(self.operating_points) == 0:
            raise ValidationError("at least one operating point is required")
        for p, phi in self.operating_points:
            if p <= 0 or not 0 <= phi < 100:
                raise ValidationError(f"invalid operating point ({p}, {phi})")


def corrected_partition(d, d50c, m):
    """E_c(d) = 1 - exp(-ln2 (d/d50c)^m). Accepts array ``d``."""
    d = np.asarray(d, dtype=np.float64)
    if np.any(d <= 0) or d50c <= 0 or m <= 0:
        raise DomainError("corrected_partition needs d > 0, d50c > 0, m > 0")
    out = -np.expm1(-LN2 * (d / d50c) ** m)
    return float(out) if out.ndim == 0 else out


def actual_partition(d, d50c, m, bypass_rf):
    return bypass_rf + (1.0 - bypass_rf) * corrected_partition(d, d50c, m)


def d50c_model(p, phi, d50_base=22.0, pressure_exp=0.28, solids_coef=0.063):
    """Corrected cut size (um) at pressure ``p`` (psi) and solids ``phi`` (%)."""
    if p <= 0:
        raise DomainError(f"pressure must be > 0, got {p}")
    if not 0 <= phi < 100:
        raise DomainError(f"solids percent must lie in [0, 100), got {phi}")
    return d50_base * math.exp(solids_coef * phi) / p ** pressure_exp


def rosin_rammler_passing(d, d63, n):
    """Cumulative feed passing (%) at size ``d``: 100 (1 - exp(-(d/d63)^n))."""
    d = np.asarray(d, dtype=np.float64)
    return 100.0 * -np.expm1(-(d / d63) ** n)


def class_sizes(size_fractions):
    """Representative size of each class (geometric mean of its bounds).

    The first class spans (0, d_1]; its representative is d_1 / sqrt(2).
    """
    s = np.asarray(size_fractions, dtype=np.float64)
    lower = np.concatenate([[s[0] / 2.0], s[:-1]])
    return np.sqrt(lower * s)


def stream_masses(cfg, p, phi):
    """Feed, underflow and overflow mass per size class (feed sums to 1)."""
    sizes = np.asarray(cfg.size_fractions, dtype=np.float64)
    F = rosin_rammler_passing(sizes, cfg.feed_d63, cfg.feed_n) / 100.0
    feed = np.diff(np.concatenate([[0.0], F])) / F[-1]
    d50c = d50c_model(p, phi, cfg.d50_base, cfg.pressure_exp, cfg.solids_coef)
    y = actual_partition(class_sizes(sizes), d50c, cfg.sharpness_m, cfg.bypass_rf)
    under = feed * y
    over = feed - under
    return feed, under, over


def generate(cfg=None):
    """One record per (operating point, stream, size fraction)."""
    cfg = cfg or CycloneSimConfig()
    rng = np.random.default_rng(cfg.seed)
    records = []
    for p, phi in cfg.operating_points:
        _, under, over = stream_masses(cfg, p, phi)
        for flag, mass in ((OVERFLOW, over), (UNDERFLOW, under)):
            cum = 100.0 * np.cumsum(mass) / mass.sum()
            if cfg.noise_sd > 0:
                cum = cum + rng.normal(0.0, cfg.noise_sd, size=cum.shape)
            cum = np.clip(cum, 0.0, 100.0)
            for size, value in zip(cfg.size_fractions, cum):
                records.append(DataRecord(float(p), float(phi), float(size), flag, float(value)))
    return Dataset(records)


def _inverse_quantile(x, m):
    return (math.log(1.0 / (1.0 - x)) / LN2) ** (1.0 / m)


def partition_summary(d50c, m):
    if d50c <= 0 or m <= 0:
        raise DomainError("partition_summary needs positive d50c and m")
    d25 = d50c * _inverse_quantile(0.25, m)
    d50 = d50c * _inverse_quantile(0.5, m)
    d75 = d50c * _inverse_quantile(0.75, m)
    return PartitionSummary(d50, d25, d75, (d75 - d25) / (2.0 * d50))
