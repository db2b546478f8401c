import json
import warnings
from pathlib import Path

import numpy as np
import pytest

from magicspread.cli import main
from magicspread.harness import (
    ConfigError,
    StarvationError,
    fit_early_slope,
    load_config,
    oracle_sweep,
    parse_config_text,
    run_ensemble,
    run_scenario,
    sdkif_prime_logicals,
    spec_from_config,
)
from magicspread.circuits import CircuitSpec
from magicspread.codestate import inject_t
from magicspread.circuits import initial_state
from magicspread.pauli import parse_pauli


class TestConfig:
    def test_parse(self):
        cfg = parse_config_text("L = 6\np=0.1  # doping\n\n# comment\nboundary=open\n")
        assert cfg == {"L": "6", "p": "0.1", "boundary": "open"}

    def test_bad_line(self):
        with pytest.raises(ConfigError):
            parse_config_text("L 6")

    def test_missing_required(self):
        with pytest.raises(ConfigError):
            spec_from_config({})

    def test_bad_value(self):
        with pytest.raises(ConfigError):
            spec_from_config({"L": "six"})

    def test_spec_round_trip(self):
        cfg = {"L": "6", "p": "0.25", "ensemble": "sdki_r", "t_max": "3"}
        spec = spec_from_config(cfg)
        assert (spec.L, spec.p, spec.ensemble, spec.t_max) == (6, 0.25, "sdki_r", 3)

    def test_seed_override(self):
        spec = spec_from_config({"L": "6", "seed": "5"}, seed_override=9)
        assert spec.seed == 9


class TestFit:
    def test_exact_line_velocity_two(self):
        series = [(t, 4.0 * t) for t in range(30)]
        fit = fit_early_slope(series, 8, 100)
        assert fit.velocity == pytest.approx(2.0)
        assert fit.residual_rms < 1e-9

    def test_exact_line_with_intercept(self):
        series = [(t, 2.0 * t + 3.0) for t in range(30)]
        fit = fit_early_slope(series, 8, 100)
        assert fit.velocity == pytest.approx(1.0)
        assert fit.intercept == pytest.approx(3.0)

    def test_noisy_line(self):
        rng = np.random.default_rng(0)
        series = [(t, 4.0 * t + rng.normal(0, 1.0)) for t in range(100)]
        fit = fit_early_slope(series, 8, 1e9)
        assert abs(fit.velocity - 2.0) < 0.05

    def test_window_filters(self):
        series = [(t, float(t)) for t in range(50)]
        fit = fit_early_slope(series, 8, 20)
        assert fit.window == (8, 20)

    def test_insufficient_points(self):
        with pytest.raises(ValueError):
            fit_early_slope([(0, 0.0), (1, 10.0)], 8, 20)


class TestEnsemble:
    def test_worker_invariance(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            spec = CircuitSpec(L=10, t_max=4, seed=3)
        a = run_ensemble(spec, 8, workers=1)
        b = run_ensemble(spec, 8, workers=2)
        assert np.allclose(a.mean_w, b.mean_w)
        assert np.allclose(a.mean_l, b.mean_l)
        assert a.width_hists == b.width_hists

    def test_starvation(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            spec = CircuitSpec(L=8, t_max=2, seed=0, initial="all_zero")
        with pytest.raises(StarvationError):
            run_ensemble(spec, 5)


class TestScenariosAndCli:
    def test_unknown_scenario(self, tmp_path):
        with pytest.raises(ConfigError):
            run_scenario("frobnicate", {}, tmp_path)

    def test_cli_bad_config_exit_2(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("L six\n")
        assert main(["spread", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2

    def test_cli_missing_config_exit_2(self, tmp_path):
        assert main(["spread", "--config", str(tmp_path / "nope.cfg"), "--out", str(tmp_path)]) == 2

    def test_cli_sdkif_exact_pass(self, tmp_path):
        out = tmp_path / "sdkif"
        assert main(["sdkif-exact", "--out", str(out)]) == 0
        status = (out / "sdkif_exact_status.txt").read_text()
        assert status.startswith("PASS")
        rows = (out / "sdkif_exact.csv").read_text().splitlines()
        assert rows[0] == "t,W,lml,n_mlmi,status"
        dump = [json.loads(ln) for ln in (out / "mlmi_dump.jsonl").read_text().splitlines()]
        assert dump[0]["intervals"] == [[14, 15, False]]

    def test_cli_interplay_starvation_exit_3(self, tmp_path):
        cfg = tmp_path / "starve.cfg"
        cfg.write_text(
            "L = 8\ninitial = all_zero\np = 1.0\nt_max = 2\nrealizations = 3\n"
            "cases = entanglement_only\nseed = 0\n"
        )
        assert main(["interplay", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 3

    def test_spread_outputs_and_determinism(self, tmp_path):
        cfg = tmp_path / "s.cfg"
        cfg.write_text("L = 10\nt_max = 4\nrealizations = 6\nseed = 2\nfit_lo = 2\nfit_hi = 5\n")
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert main(["spread", "--config", str(cfg), "--out", str(out1)]) == 0
        assert main(["spread", "--config", str(cfg), "--out", str(out2), "--workers", "2"]) == 0
        assert (out1 / "spread.csv").read_text() == (out2 / "spread.csv").read_text()
        assert (out1 / "mlmi_widths.csv").read_text() == (out2 / "mlmi_widths.csv").read_text()
        manifest = json.loads((out1 / "manifest.jsonl").read_text().splitlines()[-1])
        assert manifest["scenario"] == "spread"
        assert "version" in manifest and "wall_time_s" in manifest

    def test_velocities_table(self, tmp_path):
        out = tmp_path / "vel"
        assert main(["velocities", "--out", str(out)]) == 0
        lines = (out / "velocities.csv").read_text().splitlines()
        assert lines[0] == "ensemble,p,v_B,v_E,alpha_plus,alpha_minus"
        row0 = lines[1].split(",")
        assert row0[0] == "random_clifford" and float(row0[2]) == 0.6

    def test_oracle_check_small(self, tmp_path):
        cfg = tmp_path / "oc.cfg"
        cfg.write_text("Lmax = 4\nstates_per_L = 3\nrandom_regions = 5\nseed = 1\n")
        out = tmp_path / "oc"
        assert main(["oracle-check", "--config", str(cfg), "--out", str(out)]) == 0
        rows = [json.loads(ln) for ln in (out / "oracle_check.jsonl").read_text().splitlines()]
        assert all(r["match"] for r in rows)
        assert {"class_alg1", "class_alg2", "class_alg3", "oracle_value", "match"} <= rows[0].keys()

    def test_channel_csv_schema(self, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text(
            "L = 10\np = 0.1\nt_max = 20\nseed = 4\nf_grid = 0.2,0.8\n"
            "n_b_samples = 40\nt_grid = 20\n"
        )
        out = tmp_path / "chan"
        assert main(["channel", "--config", str(cfg), "--out", str(out)]) == 0
        lines = (out / "channel.csv").read_text().splitlines()
        assert lines[0] == "source,t,f,c_tilde,stderr,n_samples"
        assert any(ln.startswith("global_random") for ln in lines[1:])


class TestLogicalDump:
    def test_primed_pair_is_logical(self):
        zb, yb = sdkif_prime_logicals(18)
        cs = inject_t(initial_state("bell_pairs", 18), 8)
        for g in cs.stabilizers:
            assert zb.commutes_with(g) and yb.commutes_with(g)
        assert not zb.commutes_with(yb)
        assert not zb.commutes_with(cs.logical_x)
        assert not yb.commutes_with(cs.logical_x)

    def test_bad_size_raises(self):
        with pytest.raises(ValueError):
            sdkif_prime_logicals(20)

    def test_dump_shrinks_primed_operator(self, tmp_path):
        cfg = tmp_path / "d.cfg"
        cfg.write_text(
            "L = 18\nboundary = periodic\nensemble = sdki_f\np = 0.0\n"
            "t_max = 3\nseed = 0\ntrack_primed = yes\n"
        )
        out = tmp_path / "dump"
        assert main(["dump-logicals", "--config", str(cfg), "--out", str(out)]) == 0
        lines = (out / "logicals.tsv").read_text().splitlines()
        assert lines[0].split("\t") == ["t", "zbar", "ybar", "zbar_prime", "ybar_prime"]
        weight0 = sum(c != "I" for c in lines[1].split("\t")[3])
        weight3 = sum(c != "I" for c in lines[4].split("\t")[3])
        assert weight3 < weight0  # identity island nucleates and grows

    def test_constant_lines_when_frozen(self, tmp_path):
        cfg = tmp_path / "f.cfg"
        cfg.write_text("L = 18\np = 1.0\nt_max = 3\nseed = 0\n")
        out = tmp_path / "dumpf"
        assert main(["dump-logicals", "--config", str(cfg), "--out", str(out)]) == 0
        lines = (out / "logicals.tsv").read_text().splitlines()[1:]
        ops = {tuple(ln.split("\t")[1:]) for ln in lines}
        assert len(ops) == 1
