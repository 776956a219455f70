import io
import os

import pytest

from hydrogran.cli import main
from hydrogran.config import KEYS, RunConfig, parse_config, resolved_lines
from hydrogran.errors import ConfigError, ValidationError
from hydrogran.sonfis import GrowthMode

FAST = """
split.n_train = 150
split.n_test = 19
sonfis.iterations_per_rule_count = 2
sonfis.max_rules = 2
sorst.n_structures = 2
som.epochs = 8
nfis.epochs = 8
"""


class TestConfig:
    def test_defaults(self):
        cfg = parse_config("")
        assert cfg == RunConfig()
        assert cfg.sonfis.iterations_per_rule_count == 10 and cfg.sonfis.max_rules == 4
        assert cfg.sorst.n_structures == 7
        assert (cfg.n_train, cfg.n_test) == (150, 19)

    def test_dotted_and_typed(self):
        cfg = parse_config(
            "som.epochs = 200\n"
            "sorst.som.epochs = 5  # specific wins\n"
            "sonfis.growth_mode = regular\n"
            "sonfis.neuron_range = 6, 20\n"
            "sim.size_fractions = 2, 5, 10\n"
            "sim.operating_points = 5:5, 10:7.5\n"
            "split.stratify = true\n"
        )
        assert cfg.sonfis.som_train.epochs == 200
        assert cfg.sorst.som_train.epochs == 5
        assert cfg.sonfis.growth_mode is GrowthMode.REGULAR
        assert cfg.sonfis.neuron_range == (6, 20)
        assert cfg.sim.size_fractions == (2.0, 5.0, 10.0)
        assert cfg.sim.operating_points == ((5.0, 5.0), (10.0, 7.5))
        assert cfg.stratify is True

    def test_unknown_key_named(self):
        with pytest.raises(ConfigError, match="sonfis.max_rulez"):
            parse_config("sonfis.max_rulez = 3")

    def test_bad_value(self):
        with pytest.raises(ConfigError, match="split.n_train"):
            parse_config("split.n_train = many")

    def test_module_validation_applies(self):
        with pytest.raises(ValidationError):
            parse_config("sorst.decision_bins = 5")

    def test_missing_equals(self):
        with pytest.raises(ConfigError, match="line 1"):
            parse_config("som.epochs 5")

    def test_resolved_lines_round_trip(self):
        cfg = parse_config(FAST)
        again = parse_config("\n".join(resolved_lines(cfg)))
        assert again == cfg

    def test_every_key_resolves(self):
        keys = {line.split(" = ")[0] for line in resolved_lines(RunConfig())}
        assert {k for k in KEYS if not k.startswith(("som.", "nfis."))} == keys


@pytest.fixture
def workdir(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(FAST)
    return tmp_path, str(cfg)


def run(*argv):
    out = io.StringIO()
    return main(list(argv), out=out), out.getvalue()


class TestCli:
    def test_full_flow(self, workdir):
        tmp, cfg = workdir
        data = str(tmp / "d.csv")
        assert run("generate", "--config", cfg, "--out", data)[0] == 0
        assert run("sonfis", "--config", cfg, "--data", data, "--out-dir", str(tmp / "s"))[0] == 0
        assert run("sorst", "--config", cfg, "--data", data, "--out-dir", str(tmp / "r"))[0] == 0
        assert sorted(os.listdir(tmp / "s")) == ["config.txt", "report.csv", "report.txt", "rules.txt"]
        assert "structure_1_trace.csv" in os.listdir(tmp / "r")
        code, text = run("report", "--in", str(tmp / "s"), "--format", "csv")
        assert code == 0 and text == (tmp / "s" / "report.csv").read_text()
        assert len(text.splitlines()) == 5
        code, text = run("report", "--in", str(tmp / "r"))
        assert code == 0 and "structure" in text and "# sorst.n_structures = 2" in text

    def test_header_embeds_config_and_seeds(self, workdir):
        tmp, cfg = workdir
        data = str(tmp / "d.csv")
        run("generate", "--config", cfg, "--out", data)
        run("sonfis", "--config", cfg, "--data", data, "--out-dir", str(tmp / "s"))
        text = (tmp / "s" / "report.txt").read_text()
        for key in ("split.seed", "sonfis.seed", "sorst.seed", "sim.seed"):
            assert f"# {key} = " in text

    def test_writes_only_into_out_dir(self, workdir):
        tmp, cfg = workdir
        data = str(tmp / "d.csv")
        run("generate", "--config", cfg, "--out", data)
        before = set(os.listdir(tmp))
        run("sorst", "--config", cfg, "--data", data, "--out-dir", str(tmp / "r"))
        assert set(os.listdir(tmp)) - before == {"r"}

    def test_unknown_subcommand(self, capsys):
        assert run("explode")[0] == 1
        assert "usage" in capsys.readouterr().err

    def test_unknown_flag(self):
        assert run("generate", "--out", "x.csv", "--bogus")[0] == 1

    def test_config_typo_exit_1(self, tmp_path, capsys):
        bad = tmp_path / "bad.cfg"
        bad.write_text("sonfis.iteratons = 3\n")
        assert run("generate", "--config", str(bad), "--out", str(tmp_path / "d.csv"))[0] == 1
        assert "sonfis.iteratons" in capsys.readouterr().err

    def test_bad_data_exit_1(self, tmp_path, capsys):
        d = tmp_path / "d.csv"
        d.write_text("pressure_psi,solids_pct,size_um,stream_flag,cum_passing_pct\n1,2,3,2,4\n")
        assert run("sonfis", "--data", str(d), "--out-dir", str(tmp_path / "o"))[0] == 1
        assert "row 1" in capsys.readouterr().err

    def test_missing_report_exit_1(self, tmp_path):
        assert run("report", "--in", str(tmp_path))[0] == 1
