"""Command-line driver.

    hydrogran generate --config F --out D.csv
    hydrogran sonfis   --config F --data D.csv --out-dir R/
    hydrogran sorst    --config F --data D.csv --out-dir R/
    hydrogran report   --in R/ --format text|csv

Exit status: 0 success, 1 validation/usage error, 2 runtime or numeric error.
"""

import argparse
import csv
import io
import logging
import os
import sys

from . import __version__, kernels
from .config import load_config, resolved_lines
from .dataset import load_csv, split_train_test, write_csv
from .errors import HydrogranError, ValidationError
from .hydrosim import generate
from .sonfis import run_sonfis
from .sorst import run_sorst

log = logging.getLogger("hydrogran")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def build_parser():
    p = _Parser(prog="hydrogran", description="SONFIS-R / SORST-R granular knowledge discovery")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write a synthetic hydrocyclone dataset")
    g.add_argument("--config")
    g.add_argument("--out", required=True)

    for name, helptext in (("sonfis", "run SOM + neuro-fuzzy close-open iteration"),
                           ("sorst", "run SOM + rough-set rule extraction")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("--config")
        s.add_argument("--data", required=True)
        s.add_argument("--out-dir", required=True)

    r = sub.add_parser("report", help="re-render a stored run report")
    r.add_argument("--in", dest="in_dir", required=True)
    r.add_argument("--format", choices=("text", "csv"), default="text")
    return p


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _header(kind, cfg):
    return [f"hydrogran {__version__} {kind}", f"kernel backend = {kernels.BACKEND}"] + resolved_lines(cfg)


def _split(cfg, data_path):
    data = load_csv(data_path)
    return split_train_test(data, cfg.n_train, cfg.n_test, cfg.split_seed, stratify=cfg.stratify)


def cmd_generate(args):
    cfg = load_config(args.config)
    ds = generate(cfg.sim)
    write_csv(ds, args.out)
    log.info("wrote %d records to %s", len(ds), args.out)


def cmd_sonfis(args):
    cfg = load_config(args.config)
    train, test = _split(cfg, args.data)
    report = run_sonfis(train, test, cfg.sonfis, split_seed=cfg.split_seed)
    os.makedirs(args.out_dir, exist_ok=True)
    header = _header("sonfis", cfg)
    _write(os.path.join(args.out_dir, "config.txt"), "\n".join(header) + "\n")
    _write(os.path.join(args.out_dir, "report.csv"), report.to_csv())
    _write(os.path.join(args.out_dir, "report.txt"), report.to_text(header))
    _write(os.path.join(args.out_dir, "rules.txt"), report.rules_dump)
    b = report.best_entry
    log.info("best rmse %.4f (rules=%d, neurons=%d)", b.rmse, b.rule_count, b.neurons)


def cmd_sorst(args):
    cfg = load_config(args.config)
    train, test = _split(cfg, args.data)
    report = run_sorst(train, test, cfg.sorst, split_seed=cfg.split_seed)
    os.makedirs(args.out_dir, exist_ok=True)
    header = _header("sorst", cfg)
    _write(os.path.join(args.out_dir, "config.txt"), "\n".join(header) + "\n")
    _write(os.path.join(args.out_dir, "report.csv"), report.to_csv())
    _write(os.path.join(args.out_dir, "report.txt"), report.to_text(header))
    _write(os.path.join(args.out_dir, "rules.txt"), report.rules_dump)
    for k in range(len(report.structures)):
        _write(os.path.join(args.out_dir, f"structure_{k}_trace.csv"), report.trace_csv(k))
    s = report.best_structure
    log.info("best structure %d: EM %.4f with %d rules", report.best, s.final_em, s.rule_count)


def render_table(csv_text):
    rows = list(csv.reader(io.StringIO(csv_text)))
    if not rows:
        return ""
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "".join("  ".join(c.rjust(w) for c, w in zip(r, widths)) + "\n" for r in rows)


def cmd_report(args, out):
    csv_path = os.path.join(args.in_dir, "report.csv")
    if not os.path.exists(csv_path):
        raise ValidationError(f"no report.csv in {args.in_dir}")
    with open(csv_path, encoding="utf-8") as fh:
        csv_text = fh.read()
    if args.format == "csv":
        out.write(csv_text)
        return
    cfg_path = os.path.join(args.in_dir, "config.txt")
    if os.path.exists(cfg_path):
        with open(cfg_path, encoding="utf-8") as fh:
            out.write("".join(f"# {line}" for line in fh))
        out.write("\n")
    out.write(render_table(csv_text))
    rules_path = os.path.join(args.in_dir, "rules.txt")
    if os.path.exists(rules_path):
        with open(rules_path, encoding="utf-8") as fh:
            out.write("\nrules:\n" + fh.read())


def main(argv=None, out=None):
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(str(exc))
        return 1
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "generate":
            cmd_generate(args)
        elif args.command == "sonfis":
            cmd_sonfis(args)
        elif args.command == "sorst":
            cmd_sorst(args)
        else:
            cmd_report(args, out)
    except (ValidationError, FileNotFoundError) as exc:
        sys.stderr.write(f"hydrogran {args.command}: {type(exc).__name__}: {exc}\n")
        return 1
    except (HydrogranError, ArithmeticError, OSError) as exc:
        sys.stderr.write(f"hydrogran {args.command}: {type(exc).__name__}: {exc}\n")
        return 2
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
