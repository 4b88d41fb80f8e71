"""Command-line surface: subcommands, exit codes, file outputs."""

import json

import numpy as np
import pytest

from evdisagg import energy_kwh, read_trace_csv
from evdisagg.cli import main


def run(*argv):
    return main(list(argv))


@pytest.fixture()
def synth_dir(tmp_path):
    out = tmp_path / "data"
    assert run("synth", "--preset", "clean-ev", "--seed", "1", "--days", "3",
               "--out-dir", str(out)) == 0
    return out


class TestSynth:
    def test_writes_all_channels(self, synth_dir):
        names = {p.name for p in synth_dir.iterdir()}
        assert "aggregate.csv" in names
        assert {"truth_ev.csv", "truth_ac_spikes.csv", "truth_ac_lump.csv",
                "truth_dryer.csv", "truth_noise.csv"} <= names
        assert "scenario.txt" in names

    def test_byte_identical_across_runs(self, tmp_path):
        d1, d2 = tmp_path / "one", tmp_path / "two"
        for d in (d1, d2):
            assert run("synth", "--preset", "fig2", "--seed", "9", "--days", "2",
                       "--out-dir", str(d)) == 0
        for name in ("aggregate.csv", "truth_ev.csv", "scenario.txt"):
            assert (d1 / name).read_bytes() == (d2 / name).read_bytes()

    def test_scenario_override(self, tmp_path):
        override = tmp_path / "scenario.txt"
        override.write_text("ev_duration_range = 90, 90\n")
        out = tmp_path / "d"
        assert run("synth", "--preset", "clean-ev", "--seed", "2", "--days", "1",
                   "--out-dir", str(out), "--scenario", str(override)) == 0
        ev = read_trace_csv(out / "truth_ev.csv")
        assert (ev.values > 0).sum() == 90


class TestDisaggregate:
    def test_clean_preset_one_event_per_day(self, synth_dir, tmp_path, capsys):
        report_path = tmp_path / "report.json"
        emitted = tmp_path / "estimate.csv"
        assert run("disaggregate", "--input", str(synth_dir / "aggregate.csv"),
                   "--window", "day", "--output", str(report_path),
                   "--emit-series", str(emitted)) == 0
        report = json.loads(report_path.read_text())
        assert report["n_windows"] == 3
        assert all(len(w["events"]) == 1 for w in report["windows"])
        # emitted series re-ingests to exactly the in-memory estimate
        from evdisagg import WindowSpec, disaggregate_windows
        results = disaggregate_windows(read_trace_csv(synth_dir / "aggregate.csv"),
                                       WindowSpec(kind="day"))
        in_memory = np.concatenate([r.estimated.values for r in results])
        estimate = read_trace_csv(emitted)
        assert np.array_equal(estimate.values, in_memory)
        assert energy_kwh(estimate) == pytest.approx(report["total_energy_kwh"],
                                                     abs=1e-9)

    def test_params_file(self, synth_dir, tmp_path):
        params = tmp_path / "params.txt"
        params.write_text("max_ev_width = 10\n")  # nothing can qualify
        report_path = tmp_path / "report.json"
        assert run("disaggregate", "--input", str(synth_dir / "aggregate.csv"),
                   "--output", str(report_path), "--params", str(params)) == 0
        assert json.loads(report_path.read_text())["n_events"] == 0

    def test_malformed_input_exits_one(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("timestamp,power_kw\n2013-06-01T00:00,1.0\n"
                       "2013-06-01T00:01,oops\n")
        assert run("disaggregate", "--input", str(bad),
                   "--output", str(tmp_path / "r.json")) == 1
        assert ":3:" in capsys.readouterr().err


class TestEvaluate:
    def test_perfect_estimate_scores_zero(self, synth_dir, tmp_path, capsys):
        truth = synth_dir / "truth_ev.csv"
        out = tmp_path / "eval.json"
        assert run("evaluate", "--estimate", str(truth), "--truth", str(truth),
                   "--output", str(out)) == 0
        report = json.loads(out.read_text())
        assert report["summary"]["err1_pct_mean"] == 0.0
        assert report["summary"]["err2_kwh_mean"] == 0.0
        assert report["summary"]["mse_mean"] == 0.0
        assert "±" in report["summary"]["table_row"]

    def test_zero_estimate_gives_unit_mse(self, synth_dir, tmp_path):
        truth = read_trace_csv(synth_dir / "truth_ev.csv")
        zero_path = tmp_path / "zero.csv"
        from evdisagg import PowerSeries, write_trace_csv
        write_trace_csv(zero_path, PowerSeries(truth.start_time,
                                               np.zeros(len(truth))))
        out = tmp_path / "eval.json"
        assert run("evaluate", "--estimate", str(zero_path),
                   "--truth", str(synth_dir / "truth_ev.csv"),
                   "--output", str(out)) == 0
        report = json.loads(out.read_text())
        assert report["summary"]["mse_mean"] == pytest.approx(1.0)
        assert report["summary"]["err1_pct_mean"] == pytest.approx(100.0)

    def test_misaligned_series_exit_two(self, synth_dir, tmp_path, capsys):
        truth = read_trace_csv(synth_dir / "truth_ev.csv")
        short_path = tmp_path / "short.csv"
        from evdisagg import write_trace_csv
        write_trace_csv(short_path, truth.slice(0, 100))
        assert run("evaluate", "--estimate", str(short_path),
                   "--truth", str(synth_dir / "truth_ev.csv"),
                   "--output", str(tmp_path / "e.json")) == 2
        assert "misaligned" in capsys.readouterr().err

    def test_table_row_printed(self, synth_dir, tmp_path, capsys):
        truth = synth_dir / "truth_ev.csv"
        assert run("evaluate", "--estimate", str(truth), "--truth", str(truth),
                   "--output", str(tmp_path / "e.json")) == 0
        out = capsys.readouterr().out
        assert "Err1" in out and "±" in out and "MSE" in out


class TestPlot:
    def test_writes_svg(self, synth_dir, tmp_path):
        out = tmp_path / "fig.svg"
        assert run("plot", "--input", str(synth_dir / "aggregate.csv"),
                   "--overlay", str(synth_dir / "truth_ev.csv"),
                   "--output", str(out)) == 0
        head = out.read_text()[:200]
        assert "<?xml" in head or "<svg" in head
