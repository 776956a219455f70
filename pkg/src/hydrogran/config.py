"""Flat ``key = value`` run configuration.

Keys are dotted paths into the module configs::

    split.n_train = 150        split.n_test = 19
    split.seed = 0             split.stratify = false
    sim.<field>                CycloneSimConfig
    sonfis.<field>             SonfisConfig
    sonfis.som.<field>         its SomTrainConfig
    sonfis.nfis.<field>        its NfisTrainConfig (alias: nfis.<field>)
    sorst.<field>              SorstConfig
    sorst.som.<field>          its SomTrainConfig
    som.<field>                SomTrainConfig of both pipelines

Nested ``seed`` fields are not configurable: each controller derives
per-iteration seeds from ``sonfis.seed`` / ``sorst.seed``.

Lists are comma separated; operating points are ``p:phi`` pairs, e.g.
``sim.operating_points = 5:5, 5:10, 10:5``. ``#`` starts a comment.
"""

import enum
from dataclasses import dataclass, field, fields, replace

from .errors import ConfigError
from .hydrosim import CycloneSimConfig
from .nfis import NfisTrainConfig
from .som import SomTrainConfig
from .sonfis import SonfisConfig
from .sorst import SorstConfig


@dataclass(frozen=True)
class RunConfig:
    sim: CycloneSimConfig = field(default_factory=CycloneSimConfig)
    sonfis: SonfisConfig = field(default_factory=SonfisConfig)
    sorst: SorstConfig = field(default_factory=SorstConfig)
    n_train: int = 150
    n_test: int = 19
    split_seed: int = 0
    stratify: bool = False


_SPLIT_KEYS = {
    "split.n_train": "n_train",
    "split.n_test": "n_test",
    "split.seed": "split_seed",
    "split.stratify": "stratify",
}


def _parse_bool(text):
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_value(name, default, text):
    text = text.strip()
    if isinstance(default, bool):
        return _parse_bool(text)
    if isinstance(default, enum.Enum):
        return type(default)(text.upper())
    if isinstance(default, int):
        return int(text)
    if isinstance(default, float):
        return float(text)
    if name == "operating_points":
        pairs = []
        for item in text.split(","):
            p, phi = item.split(":")
            pairs.append((float(p), float(phi)))
        return tuple(pairs)
    if name == "neuron_range":
        lo, hi = (int(v) for v in text.split(","))
        return (lo, hi)
    if isinstance(default, tuple):
        return tuple(float(v) for v in text.split(","))
    raise ValueError(f"unsupported field type for {name}")


def _format_value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, enum.Enum):
        return v.value
    if isinstance(v, tuple):
        if v and isinstance(v[0], tuple):
            return ", ".join(f"{a!r}:{b!r}" for a, b in v)
        return ", ".join(repr(x) if isinstance(x, float) else str(x) for x in v)
    return repr(v) if isinstance(v, float) else str(v)


def _scalar_fields(cfg, skip=()):
    return {f.name: getattr(cfg, f.name) for f in fields(cfg)
            if f.name not in skip and not hasattr(getattr(cfg, f.name), "__dataclass_fields__")}


def _key_table():
    """Map every accepted key to (target path, default value)."""
    base = RunConfig()
    table = {}
    for key, attr in _SPLIT_KEYS.items():
        table[key] = ((attr,), getattr(base, attr))
    for name, v in _scalar_fields(base.sim).items():
        table[f"sim.{name}"] = (("sim", name), v)
    for section in ("sonfis", "sorst"):
        cfg = getattr(base, section)
        for name, v in _scalar_fields(cfg).items():
            table[f"{section}.{name}"] = ((section, name), v)
        # nested seeds are replaced by per-iteration seeds derived from <section>.seed
        for name, v in _scalar_fields(cfg.som_train, skip=("seed",)).items():
            table[f"{section}.som.{name}"] = ((section, "som_train", name), v)
    for name, v in _scalar_fields(base.sonfis.nfis_train, skip=("seed",)).items():
        table[f"sonfis.nfis.{name}"] = (("sonfis", "nfis_train", name), v)
        table[f"nfis.{name}"] = (("sonfis", "nfis_train", name), v)
    for name, v in _scalar_fields(base.sonfis.som_train, skip=("seed",)).items():
        table[f"som.{name}"] = (("*", "som_train", name), v)
    return table


KEYS = _key_table()


def parse_config(text):
    """Parse config text into a validated :class:`RunConfig`."""
    overrides = {}
    shared_som = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KEYS:
            raise ConfigError(f"line {lineno}: unknown config key {key!r}")
        path, default = KEYS[key]
        try:
            parsed = _parse_value(path[-1], default, value)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {exc}") from None
        if path[0] == "*":
            shared_som[path[-1]] = parsed
        else:
            overrides[path] = parsed
    return _build(overrides, shared_som)


def _build(overrides, shared_som):
    base = RunConfig()
    top = {}
    sections = {}
    for path, v in overrides.items():
        if len(path) == 1:
            top[path[0]] = v
        else:
            sections.setdefault(path[0], {})[path[1:]] = v

    def direct(section):
        return {p[0]: v for p, v in sections.get(section, {}).items() if len(p) == 1}

    def nested(section, sub, shared=None):
        vals = dict(shared or {})
        vals.update({p[1]: v for p, v in sections.get(section, {}).items()
                     if len(p) == 2 and p[0] == sub})
        return replace(getattr(getattr(base, section), sub), **vals)

    sim = replace(base.sim, **direct("sim"))
    sonfis = replace(base.sonfis, som_train=nested("sonfis", "som_train", shared_som),
                     nfis_train=nested("sonfis", "nfis_train"), **direct("sonfis"))
    sorst = replace(base.sorst, som_train=nested("sorst", "som_train", shared_som),
                    **direct("sorst"))
    return replace(base, sim=sim, sonfis=sonfis, sorst=sorst, **top)


def load_config(path):
    if path is None:
        return RunConfig()
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def resolved_lines(cfg):
    """Every key with its effective value, for report headers."""
    lines = []
    for key, (path, _) in KEYS.items():
        if path[0] == "*" or key.startswith("nfis."):
            continue
        obj = cfg
        for part in path:
            obj = getattr(obj, part)
        lines.append(f"{key} = {_format_value(obj)}")
    return lines
