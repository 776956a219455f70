"""SORST-R: SOM scaling into a symbolic decision table, exact rough rules,
and a strength threshold adapted linearly from the test error measure."""

import enum
from dataclasses import dataclass, field, replace

import numpy as np

from . import rst, som
from .dataset import normalize
from .errors import HydrogranError, SizeError, ValidationError
from .sonfis import derive_seed


class GranulateMode(str, enum.Enum):
    BMU_MAP = "BMU_MAP"
    CODEBOOK_ONLY = "CODEBOOK_ONLY"


@dataclass(frozen=True)
class SorstConfig:
    n_structures: int = 7
    neuron_range: tuple = (4, 36)
    bins_per_attribute: int = 4
    decision_bins: int = 4
    strength_init: float = 0.1
    gain: float = 0.05
    target_em: float = 0.0
    max_adapt_steps: int = 50
    seed: int = 0
    granulate_objects: GranulateMode = GranulateMode.BMU_MAP
    som_train: som.SomTrainConfig = field(default_factory=som.SomTrainConfig)

    def __post_init__(self):
        object.__setattr__(self, "granulate_objects", GranulateMode(self.granulate_objects))
        object.__setattr__(self, "neuron_range", tuple(int(v) for v in self.neuron_range))
        lo, hi = self.neuron_range
        if self.n_structures < 1:
            raise ValidationError("n_structures must be >= 1")
        if not 1 <= lo <= hi:
            raise ValidationError("require 1 <= neuron_range min <= max")
        if self.bins_per_attribute < 2:
            raise ValidationError("bins_per_attribute must be >= 2")
        if not 2 <= self.decision_bins <= rst.SENTINEL_DECISION:
            raise ValidationError(
                f"decision_bins must lie in [2, {rst.SENTINEL_DECISION}] "
                "so the unrecognized sentinel stays out of the code space"
            )
        if not 0 <= self.strength_init <= 1:
            raise ValidationError("strength_init must lie in [0, 1]")
        if self.gain <= 0:
            raise ValidationError("gain must be > 0")
        if self.max_adapt_steps < 1:
            raise ValidationError("max_adapt_steps must be >= 1")


@dataclass
class StructureResult:
    neuron_count: int
    rule_count: int
    final_strength: float
    em_trace: list
    strength_trace: list
    converged: bool
    rules: list
    reducts: list
    table: rst.DecisionTable = None

    @property
    def final_em(self):
        return self.em_trace[-1]


@dataclass
class SorstReport:
    structures: list
    best: int
    rules_dump: str
    split_seed: object = None
    config: SorstConfig = None

    @property
    def best_structure(self):
        return self.structures[self.best]

    def to_csv(self):
        lines = ["structure,neurons,rules,final_strength,final_em,converged"]
        for i, s in enumerate(self.structures):
            lines.append(
                f"{i},{s.neuron_count},{s.rule_count},{s.final_strength:.12g},"
                f"{s.final_em:.12g},{int(s.converged)}"
            )
        return "\n".join(lines) + "\n"

    def trace_csv(self, k):
        s = self.structures[k]
        lines = ["step,strength,em"]
        for step, (st, e) in enumerate(zip(s.strength_trace, s.em_trace)):
            lines.append(f"{step},{st:.12g},{e:.12g}")
        return "\n".join(lines) + "\n"

    def to_text(self, header=()):
        out = [f"# {h}" for h in header]
        out.append(f"# split_seed = {self.split_seed}")
        out.append("")
        out.append(f"{'struct':>6} {'neurons':>7} {'rules':>5} {'strength':>9} {'EM':>9} {'steps':>5} conv  reducts")
        for i, s in enumerate(self.structures):
            mark = "  <- best" if i == self.best else ""
            reducts = " ".join("{" + ",".join(f"a{a + 1}" for a in sorted(r)) + "}" for r in s.reducts)
            out.append(
                f"{i:>6} {s.neuron_count:>7} {s.rule_count:>5} {s.final_strength:>9.4f} "
                f"{s.final_em:>9.4f} {len(s.em_trace):>5} {'yes' if s.converged else 'no ':>4}  "
                f"{reducts}{mark}"
            )
        out.append("")
        out.append(f"exact rules of best structure ({self.best_structure.rule_count}):")
        out.append(self.rules_dump.rstrip("\n"))
        return "\n".join(out) + "\n"


def bin_codes(values, bins, upper=1.0):
    """Equal-width bins over [0, upper]; the last bin is right-closed."""
    v = np.clip(np.asarray(values, dtype=np.float64) / upper, 0.0, 1.0)
    return np.minimum(np.floor(v * bins), bins - 1).astype(np.int64)


def _categorize_vectors(Xn, smap, cfg, stats, real_pct=None):
    if Xn.shape[1] != smap.dim:
        raise SizeError(f"data dimension {Xn.shape[1]} != map dimension {smap.dim}")
    idx, _ = som.bmu_indices(smap, Xn)
    scaled = smap.codebook[idx]
    cond = bin_codes(scaled[:, :4], cfg.bins_per_attribute)
    if real_pct is None:
        real_pct = np.clip(stats.invert(scaled)[:, 4], 0.0, 100.0)
    dec = bin_codes(real_pct, cfg.decision_bins, upper=100.0)
    return rst.DecisionTable(cond, dec)


def categorize(data, smap, cfg, stats=None, real_decision=False):
    """Symbolic table from SOM scaling: every record is replaced by its BMU
    codebook vector, conditions binned on [0, 1] and the decision on [0, 100] %.

    ``stats`` normalizes ``data`` into map units; when omitted, stats are
    computed from ``data`` itself (appropriate for the training set only).
    With ``real_decision`` the record keeps its own passing % as decision;
    that is how test records are scored against the real data.
    """
    if stats is None:
        Xn, stats = normalize(data)
    else:
        Xn = stats.apply(data.array)
    real = data.array[:, 4] if real_decision else None
    return _categorize_vectors(Xn, smap, cfg, stats, real)


def codebook_table(smap, stats, cfg):
    """Table built from the codebook vectors themselves (one object per unit)."""
    granules = som.codebook_as_dataset(smap, stats)
    Xn = stats.apply(granules.array)
    cond = bin_codes(Xn[:, :4], cfg.bins_per_attribute)
    dec = bin_codes(granules.array[:, 4], cfg.decision_bins, upper=100.0)
    return rst.DecisionTable(cond, dec)


def adapt_loop(rules, test_table, cfg):
    """Classify the test table and update the threshold until convergence."""
    state = rst.StrengthState(cfg.strength_init)
    strengths, ems = [], []
    m = test_table.n_objects
    for _ in range(cfg.max_adapt_steps):
        pred = rst.classify_all(rules, state.s, test_table.conditions)
        e = rst.em(test_table.decisions, pred, m)
        strengths.append(state.s)
        ems.append(e)
        state = rst.adapt_strength(state, e, cfg.gain, cfg.target_em)
        if state.converged:
            break
    return state, strengths, ems


def run_sorst(train, test, cfg=None, split_seed=None):
    cfg = cfg or SorstConfig()
    if len(train) == 0 or len(test) == 0:
        raise SizeError("run_sorst needs non-empty train and test sets")
    Xn, stats = normalize(train)
    lo, hi = cfg.neuron_range
    results = []
    for k in range(cfg.n_structures):
        seed = derive_seed(cfg.seed, k)
        try:
            n = int(np.random.default_rng(seed).integers(lo, hi + 1))
            n = min(n, len(train))
            rows, cols = som.map_shape(n)
            smap = som.init_map(rows, cols, Xn.shape[1], Xn, seed)
            smap = som.train(smap, Xn, replace(cfg.som_train, seed=seed))
            if cfg.granulate_objects is GranulateMode.BMU_MAP:
                table = _categorize_vectors(Xn, smap, cfg, stats)
            else:
                table = codebook_table(smap, stats, cfg)
            rules = rst.extract_exact_rules(table, range(table.n_attrs))
            test_table = categorize(test, smap, cfg, stats, real_decision=True)
            state, strengths, ems = adapt_loop(rules, test_table, cfg)
            reducts = rst.find_reducts(table)
        except HydrogranError as exc:
            raise type(exc)(f"sorst structure {k}: {exc}") from exc
        results.append(
            StructureResult(
                neuron_count=smap.n_units,
                rule_count=len(rules),
                final_strength=state.s,
                em_trace=ems,
                strength_trace=strengths,
                converged=state.converged,
                rules=rules,
                reducts=reducts,
                table=table,
            )
        )
    best = min(
        range(len(results)),
        key=lambda i: (results[i].final_em, results[i].rule_count, i),
    )
    return SorstReport(
        structures=results,
        best=best,
        rules_dump=rst.format_rules(results[best].rules),
        split_seed=split_seed,
        config=cfg,
    )
