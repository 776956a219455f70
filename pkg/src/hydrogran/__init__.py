"""Granular knowledge discovery on hydrocyclone data: SOM crisp granules
refined by a Takagi-Sugeno neuro-fuzzy model (SONFIS-R) or by exact
rough-set rules with an adaptive strength threshold (SORST-R)."""

__version__ = "0.1.0"

from .dataset import DataRecord, Dataset, NormStats, load_csv, normalize, split_train_test
from .errors import (
    CapacityError,
    ConfigError,
    DomainError,
    HydrogranError,
    NumericError,
    ParseError,
    SchemaError,
    SizeError,
    ValidationError,
)
from .hydrosim import CycloneSimConfig, generate
from .sonfis import RunReport, SonfisConfig, run_sonfis
from .sorst import SorstConfig, SorstReport, run_sorst

__all__ = [
    "CapacityError", "ConfigError", "CycloneSimConfig", "DataRecord", "Dataset",
    "DomainError", "HydrogranError", "NormStats", "NumericError", "ParseError",
    "RunReport", "SchemaError", "SizeError", "SonfisConfig", "SorstConfig",
    "SorstReport", "ValidationError", "generate", "load_csv", "normalize",
    "run_sonfis", "run_sorst", "split_train_test",
]
