import argparse
import json

import pytest

from vanetconn import cli
from vanetconn.cli import (
    CSV_HEADER,
    ConfigError,
    emit_csv,
    load_config_file,
    parse_config,
    read_csv,
    run_figure_preset,
)
from vanetconn.montecarlo import ConnectivityEstimate, ExperimentSpec, sweep
from vanetconn.ranges import FixedRange, UniformRange


def flags(**kwargs):
    return argparse.Namespace(**kwargs)


MINIMAL = {
    "densities_per_km": [5, 10, 15],
    "range_policy": {"type": "fixed", "range_m": 750},
}


class TestParseConfig:
    def test_minimal_config_fills_defaults(self):
        cfg = parse_config(dict(MINIMAL))
        assert cfg.segment_length_m == 10_000.0
        assert cfg.direction == "undirected"
        assert cfg.master_seed == 1
        assert cfg.trials == 2000  # spectral methods present in the defaults
        assert "laplacian" in cfg.methods and "analytic" in cfg.methods

    def test_traversal_only_default_trials(self):
        raw = dict(MINIMAL, methods=["oracle", "chain"])
        assert parse_config(raw).trials == 10_000

    def test_mixed_policy_defaults_to_upward(self):
        raw = dict(MINIMAL, range_policy={"type": "two_tier", "range_low_m": 500,
                                          "range_high_m": 1000, "fraction_high": 0.5})
        cfg = parse_config(raw)
        assert cfg.direction == "upward"
        assert "analytic-chain" in cfg.methods

    def test_density_range_object(self):
        raw = dict(MINIMAL, densities_per_km={"start": 2, "stop": 25, "step": 1})
        assert len(parse_config(raw).densities_per_km) == 24

    def test_fraction_out_of_range_names_key(self):
        raw = dict(MINIMAL, range_policy={"type": "two_tier", "range_low_m": 500,
                                          "range_high_m": 1000, "fraction_high": 1.5})
        with pytest.raises(ConfigError, match="range_policy.fraction_high"):
            parse_config(raw)

    def test_unknown_policy_key_rejected(self):
        raw = dict(MINIMAL, range_policy={"type": "fixed", "range_m": 750, "bogus": 1})
        with pytest.raises(ConfigError, match="bogus"):
            parse_config(raw)

    def test_unknown_method_names_index(self):
        raw = dict(MINIMAL, methods=["oracle", "psychic"])
        with pytest.raises(ConfigError, match=r"methods\[1\]"):
            parse_config(raw)

    def test_missing_density_grid(self):
        with pytest.raises(ConfigError, match="densities_per_km"):
            parse_config({"range_policy": {"type": "fixed", "range_m": 750}})

    def test_flags_override_file(self):
        cfg = parse_config(dict(MINIMAL, trials=2000), flags(trials=500))
        assert cfg.trials == 500

    def test_flag_policy_overrides_file(self):
        cfg = parse_config(dict(MINIMAL), flags(policy="uniform", mean=600.0, std=50.0,
                                                support=None))
        assert isinstance(cfg.policy, UniformRange)
        assert cfg.policy.mean_m == 600.0

    def test_flag_density_list(self):
        cfg = parse_config(dict(MINIMAL), flags(density=[7.0, 9.0]))
        assert cfg.densities_per_km == (7.0, 9.0)

    def test_invalid_direction_policy_combo_is_config_error(self):
        raw = dict(MINIMAL, direction="undirected",
                   range_policy={"type": "two_tier", "range_low_m": 500,
                                 "range_high_m": 1000, "fraction_high": 0.5})
        with pytest.raises(ConfigError):
            parse_config(raw)

    def test_config_file_round_trip(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps(MINIMAL))
        cfg = parse_config(load_config_file(path))
        assert cfg.densities_per_km == (5.0, 10.0, 15.0)

    def test_config_file_unknown_top_key(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps(dict(MINIMAL, extra=1)))
        with pytest.raises(ConfigError, match="extra"):
            load_config_file(path)


class TestEmitCsv:
    def spec(self, **kw):
        return ExperimentSpec((10.0,), 10_000.0, FixedRange(750.0),
                              ("oracle", "analytic"), "undirected", 25, 1)

    def test_single_estimate_two_lines(self, tmp_path):
        row = ConnectivityEstimate(10.0, "oracle", "fixed:R=750", 0.5, 0.1, 10, 20, 1)
        path = emit_csv([row], tmp_path / "out.csv")
        lines = path.read_text().splitlines()
        assert lines[0] == CSV_HEADER
        assert len(lines) == 2
        assert lines[1] == "10,oracle,fixed:R=750,0.5,0.1,20,1"

    def test_rerun_byte_identical(self, tmp_path):
        rows = sweep(self.spec())
        a = emit_csv(rows, tmp_path / "a.csv").read_bytes()
        b = emit_csv(sweep(self.spec()), tmp_path / "b.csv").read_bytes()
        assert a == b

    def test_analytic_rows_carry_zero_trials(self, tmp_path):
        rows = sweep(self.spec())
        parsed = read_csv(emit_csv(rows, tmp_path / "c.csv"))
        analytic = [r for r in parsed if r["method"] == "analytic"]
        assert analytic and all(r["trials"] == 0 and r["stderr"] == 0.0 for r in analytic)

    def test_round_trip_at_printed_precision(self, tmp_path):
        rows = sweep(self.spec())
        parsed = read_csv(emit_csv(rows, tmp_path / "d.csv"))
        by_key = {(r["density_per_km"], r["method"]): r for r in parsed}
        for row in rows:
            got = by_key[(row.density_per_km, row.method)]
            assert got["p_hat"] == float(f"{row.p_hat:.6g}")
            assert got["stderr"] == float(f"{row.stderr:.6g}")

    def test_rows_sorted_density_then_method(self, tmp_path):
        rows = [
            ConnectivityEstimate(12.0, "oracle", "fixed:R=750", 1.0, 0.0, 5, 5, 1),
            ConnectivityEstimate(4.0, "oracle", "fixed:R=750", 0.2, 0.1, 1, 5, 1),
            ConnectivityEstimate(4.0, "chain", "fixed:R=750", 0.2, 0.1, 1, 5, 1),
        ]
        parsed = read_csv(emit_csv(rows, tmp_path / "e.csv"))
        assert [(r["density_per_km"], r["method"]) for r in parsed] == [
            (4.0, "chain"), (4.0, "oracle"), (12.0, "oracle")]

    def test_empty_table_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            emit_csv([], tmp_path / "f.csv")


class TestFigurePresets:
    def test_fig1_row_coverage(self, tmp_path):
        path = run_figure_preset("fig1", master_seed=3, trials_traversal=2,
                                 trials_spectral=2, outdir=tmp_path)
        rows = read_csv(path)
        # 24 densities x 3 ranges x 5 methods
        assert len(rows) == 24 * 3 * 5
        assert {r["method"] for r in rows} == {"oracle", "chain", "laplacian",
                                               "exponent", "analytic"}
        assert len({r["range_policy"] for r in rows}) == 3

    def test_fig5_policies_and_methods(self, tmp_path):
        path = run_figure_preset("fig5", master_seed=3, trials_traversal=2,
                                 trials_spectral=2, outdir=tmp_path)
        rows = read_csv(path)
        assert len({r["range_policy"] for r in rows}) == 5
        assert {r["method"] for r in rows} == {"chain", "laplacian", "analytic",
                                               "analytic-chain"}

    def test_unknown_preset(self, tmp_path):
        with pytest.raises(ConfigError):
            run_figure_preset("fig9", outdir=tmp_path)

    def test_preset_rerun_identical(self, tmp_path):
        a = run_figure_preset("fig6", master_seed=5, trials_traversal=2,
                              trials_spectral=2, outdir=tmp_path / "a")
        b = run_figure_preset("fig6", master_seed=5, trials_traversal=2,
                              trials_spectral=2, outdir=tmp_path / "b")
        assert a.read_bytes() == b.read_bytes()


class TestMainEntry:
    def test_single_prints_table(self, capsys, tmp_path):
        code = cli.main(["single", "--density", "10", "--policy", "fixed",
                         "--range", "750", "--trials", "30", "--seed", "4",
                         "--method", "oracle", "--method", "analytic"])
        assert code == 0
        out = capsys.readouterr().out
        assert "oracle" in out and "analytic" in out

    def test_sweep_writes_csv(self, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        code = cli.main(["sweep", "--density-start", "4", "--density-stop", "8",
                         "--density-step", "2", "--policy", "fixed", "--range", "600",
                         "--trials", "10", "--method", "oracle", "--output", str(out)])
        assert code == 0
        assert len(read_csv(out)) == 3

    def test_analytic_subcommand(self, capsys):
        code = cli.main(["analytic", "--density", "10", "--policy", "fixed",
                         "--range", "1000"])
        assert code == 0
        assert "0.99551" in capsys.readouterr().out

    def test_compare_subcommand(self, capsys):
        code = cli.main(["compare", "--density", "10", "--policy", "fixed",
                         "--range", "750", "--trials", "20",
                         "--method", "oracle", "--method", "chain"])
        assert code == 0
        assert "total disagreements: 0" in capsys.readouterr().out

    def test_selftest_passes(self, capsys):
        assert cli.main(["selftest"]) == 0

    def test_config_error_exit_code(self, capsys):
        code = cli.main(["single", "--density", "10", "--policy", "two_tier",
                         "--range-low", "500", "--range-high", "1000",
                         "--fraction-high", "1.5"])
        assert code == 2
        assert "fraction_high" in capsys.readouterr().err

    def test_density_warning_over_free_flow(self, capsys):
        code = cli.main(["single", "--density", "40", "--policy", "fixed",
                         "--range", "750", "--trials", "5", "--method", "oracle"])
        assert code == 0
        assert "free-flow" in capsys.readouterr().err

    def test_figure_cli(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv(cli.OUTPUT_DIR_ENV, str(tmp_path))
        code = cli.main(["figure", "fig5", "--trials", "2", "--seed", "9"])
        assert code == 0
        assert (tmp_path / "fig5.csv").exists()
