"""SONFIS-R: SOM granulation followed by neuro-fuzzy regression, swept over
rule counts and SOM sizes in close-open iterations.

Closed world: the NFIS is fitted only to the SOM codebook (the granules).
Open world: each candidate is scored by RMSE on the real test records.
"""

import enum
import logging
from dataclasses import dataclass, field, replace

import numpy as np

from . import nfis, som
from .dataset import normalize
from .errors import HydrogranError, SizeError, ValidationError

log = logging.getLogger(__name__)


class GrowthMode(str, enum.Enum):
    RANDOM = "RANDOM"
    REGULAR = "REGULAR"


@dataclass(frozen=True)
class SonfisConfig:
    iterations_per_rule_count: int = 10
    max_rules: int = 4
    min_rules: int = 1
    neuron_range: tuple = (4, 36)
    growth_mode: GrowthMode = GrowthMode.RANDOM
    error_level: float = 0.0
    seed: int = 0
    som_train: som.SomTrainConfig = field(default_factory=som.SomTrainConfig)
    nfis_train: nfis.NfisTrainConfig = field(default_factory=nfis.NfisTrainConfig)

    def __post_init__(self):
        object.__setattr__(self, "growth_mode", GrowthMode(self.growth_mode))
        object.__setattr__(self, "neuron_range", tuple(int(v) for v in self.neuron_range))
        lo, hi = self.neuron_range
        if not 1 <= self.min_rules <= self.max_rules:
            raise ValidationError("require 1 <= min_rules <= max_rules")
        if not 1 <= lo <= hi:
            raise ValidationError("require 1 <= neuron_range min <= max")
        if self.iterations_per_rule_count < 1:
            raise ValidationError("iterations_per_rule_count must be >= 1")
        if self.error_level < 0:
            raise ValidationError("error_level must be >= 0")


@dataclass(frozen=True)
class TraceEntry:
    rule_count: int
    iteration: int
    neurons: int
    rmse: float
    seed_used: int
    n_eval: int


@dataclass
class RunReport:
    trace: list
    best: int
    rules_dump: str
    split_seed: object = None
    baseline_rmse: float = float("nan")
    warnings: list = field(default_factory=list)
    config: SonfisConfig = None

    @property
    def best_entry(self):
        return self.trace[self.best]

    def to_csv(self):
        lines = ["rule_count,iteration,neurons,rmse"]
        for e in self.trace:
            lines.append(f"{e.rule_count},{e.iteration},{e.neurons},{e.rmse:.12g}")
        return "\n".join(lines) + "\n"

    def to_text(self, header=()):
        out = [f"# {h}" for h in header]
        out.append(f"# split_seed = {self.split_seed}")
        out.append("")
        out.append(f"{'rules':>5} {'iter':>4} {'neurons':>7} {'rmse':>12} {'seed':>20}")
        for i, e in enumerate(self.trace):
            mark = "  <- best" if i == self.best else ""
            out.append(
                f"{e.rule_count:>5} {e.iteration:>4} {e.neurons:>7} "
                f"{e.rmse:>12.6f} {e.seed_used:>20}{mark}"
            )
        b = self.best_entry
        out.append("")
        out.append(
            f"best: rules={b.rule_count} iteration={b.iteration} "
            f"neurons={b.neurons} rmse={b.rmse:.6f}"
        )
        out.append(f"constant-mean baseline rmse={self.baseline_rmse:.6f}")
        for w in self.warnings:
            out.append(f"warning: {w}")
        out.append("")
        out.append("fuzzy rules of best model:")
        out.append(self.rules_dump.rstrip("\n"))
        return "\n".join(out) + "\n"


def derive_seed(*parts):
    """Deterministic 63-bit seed from integer parts."""
    ss = np.random.SeedSequence([int(p) & 0xFFFFFFFFFFFFFFFF for p in parts])
    return int(ss.generate_state(2, dtype=np.uint64)[0] >> np.uint64(1))


def neuron_count(cfg, iteration, seed):
    lo, hi = cfg.neuron_range
    if cfg.growth_mode is GrowthMode.RANDOM:
        return int(np.random.default_rng(seed).integers(lo, hi + 1))
    steps = max(1, cfg.iterations_per_rule_count - 1)
    return int(round(lo + (hi - lo) * iteration / steps))


def _evaluate_candidate(Xn, stats, X_test, y_test, r, n_neurons, seed, cfg):
    rows, cols = som.map_shape(n_neurons)
    smap = som.init_map(rows, cols, Xn.shape[1], Xn, seed)
    smap = som.train(smap, Xn, replace(cfg.som_train, seed=seed))
    granules = stats.apply(som.codebook_as_dataset(smap, stats).array)
    model = nfis.init_model(r, granules, seed)
    model = nfis.train_hybrid(model, granules, replace(cfg.nfis_train, seed=seed))
    lo, span = stats.lo[4], stats.span[4]
    pred = np.clip(nfis.predict(model, X_test) * span + lo, 0.0, 100.0)
    return nfis.rmse(pred, y_test), model, smap.n_units


def run_sonfis(train, test, cfg=None, split_seed=None):
    cfg = cfg or SonfisConfig()
    if len(train) == 0 or len(test) == 0:
        raise SizeError("run_sonfis needs non-empty train and test sets")
    Xn, stats = normalize(train)
    X_test = stats.apply(test.array)[:, :4]
    y_test = test.array[:, 4]
    m = len(test)

    trace, models, warnings = [], [], []
    stop = False
    for r in range(cfg.min_rules, cfg.max_rules + 1):
        for it in range(cfg.iterations_per_rule_count):
            seed = derive_seed(cfg.seed, r, it)
            n = neuron_count(cfg, it, seed)
            if n > len(train):
                warnings.append(f"rules={r} iteration={it}: {n} neurons clamped to |train|={len(train)}")
                n = len(train)
            if n < r:
                warnings.append(f"rules={r} iteration={it}: {n} neurons raised to rule count {r}")
                n = r
            try:
                err, model, units = _evaluate_candidate(Xn, stats, X_test, y_test, r, n, seed, cfg)
            except HydrogranError as exc:
                raise type(exc)(f"sonfis rules={r} iteration={it}: {exc}") from exc
            trace.append(TraceEntry(r, it, units, err, seed, m))
            models.append(model)
            log.debug("sonfis r=%d it=%d neurons=%d rmse=%.6f", r, it, units, err)
            if cfg.error_level > 0 and err <= cfg.error_level:
                stop = True
                break
        if stop:
            break

    best = min(range(len(trace)), key=lambda i: (trace[i].rmse, i))
    baseline = nfis.rmse(np.full(m, train.array[:, 4].mean()), y_test)
    return RunReport(
        trace=trace,
        best=best,
        rules_dump=nfis.format_rules(models[best]),
        split_seed=split_seed,
        baseline_rmse=baseline,
        warnings=warnings,
        config=cfg,
    )
