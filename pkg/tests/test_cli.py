"""CLI surface: exit codes, output schemas, reproducibility."""

from __future__ import annotations

import json

import jsonschema
import pytest

from tierplan.cli import EXIT_ARGUMENT, EXIT_CONFIG, EXIT_IO, EXIT_OK, main
from tierplan.schemas import (
    COMPARE_OUTPUT_SCHEMA,
    HEATMAP_OUTPUT_SCHEMA,
    PREDICT_OUTPUT_SCHEMA,
    SIMULATE_OUTPUT_SCHEMA,
    VALIDATE_OUTPUT_SCHEMA,
)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == EXIT_OK, err
    return json.loads(out)


class TestValidate:
    def test_warnings_only_exits_zero(self, capsys, full_config_file):
        code, out, _ = run(capsys, "validate", str(full_config_file))
        assert code == EXIT_OK
        assert "warning" in out
        assert "0 errors" in out

    def test_errors_exit_with_config_code(self, capsys, tmp_path):
        bad = tmp_path / "bad.conf"
        bad.write_text("[infrastructure]\ndevices_per_tier = 1,0\n")
        code, out, _ = run(capsys, "validate", str(bad))
        assert code == EXIT_CONFIG
        assert "error" in out

    def test_missing_file_is_an_io_error(self, capsys, tmp_path):
        code, _, err = run(capsys, "validate", str(tmp_path / "absent.conf"))
        assert code == EXIT_IO
        assert "absent.conf" in err

    def test_json_output_matches_schema(self, capsys, full_config_file):
        payload = run_json(capsys, "validate", str(full_config_file), "--json")
        jsonschema.validate(payload, VALIDATE_OUTPUT_SCHEMA)
        assert payload["ok"] is True
        assert {d["key"] for d in payload["diagnostics"]} == {
            "hypervisor", "thread_pinning", "machine_address",
        }


class TestPredict:
    def test_preset_report(self, capsys):
        code, out, _ = run(capsys, "predict", "edge-small")
        assert code == EXIT_OK
        assert "93.3" in out
        assert "NOT viable" in out  # the local check fails

    def test_json_output_matches_schema(self, capsys):
        payload = run_json(capsys, "predict", "edge-small", "--json")
        jsonschema.validate(payload, PREDICT_OUTPUT_SCHEMA)
        assert payload["local"]["viable"] is False
        assert payload["local"]["load_percent"] == pytest.approx(110.0)
        assert payload["offload"]["placement"] == "edge"
        assert payload["offload"]["load_percent"] == pytest.approx(280.0 / 3.0)

    def test_config_file_target(self, capsys, full_config_file):
        payload = run_json(capsys, "predict", str(full_config_file), "--json")
        assert payload["manifest"]["preset"] is None
        assert payload["offload"]["placement"] == "cloud"
        # the benchmark section pins the rate at 5 Hz
        assert payload["manifest"]["workload"]["rate_hz"] == 5.0

    def test_zero_rate_is_viable_everywhere(self, capsys):
        payload = run_json(capsys, "predict", "edge-small", "--json", "--rate", "0")
        assert payload["local"]["viable"] is True
        assert payload["local"]["load_percent"] == 0.0
        assert payload["offload"]["viable"] is True

    def test_workload_flags_override(self, capsys):
        payload = run_json(
            capsys, "predict", "edge-small", "--json",
            "--tproc", "endpoint=0.05", "--rate", "4",
        )
        assert payload["local"]["viable"] is True
        # 0.05 x 4 over half a core
        assert payload["local"]["load_percent"] == pytest.approx(40.0)

    def test_bad_tproc_spelling(self, capsys):
        code, _, err = run(capsys, "predict", "edge-small", "--tproc", "fog=1")
        assert code == EXIT_ARGUMENT
        assert "fog" in err

    def test_negative_rate(self, capsys):
        code, _, err = run(capsys, "predict", "edge-small", "--rate", "-2")
        assert code == EXIT_ARGUMENT

    def test_missing_target_file(self, capsys):
        code, _, _ = run(capsys, "predict", "no-such-preset")
        assert code == EXIT_IO

    def test_unparseable_config_file(self, capsys, tmp_path):
        bad = tmp_path / "bad.conf"
        bad.write_text("[infrastructure]\ndevices_per_tier = 1,0\n")
        code, _, err = run(capsys, "predict", str(bad))
        assert code == EXIT_CONFIG
        assert "error" in err


class TestHeatmap:
    def test_default_csv(self, capsys):
        code, out, _ = run(capsys, "heatmap")
        assert code == EXIT_OK
        lines = out.splitlines()
        assert lines[0].startswith("# manifest: ")
        assert lines[1].startswith("tproc_s/rate_hz,")
        assert len(lines[1].split(",")) == 22
        assert "marker,rate_hz,tproc_s,class" in out
        assert any(line.startswith("A,5,0.11,") for line in lines)

    def test_json_output_matches_schema(self, capsys):
        payload = run_json(capsys, "heatmap", "--json")
        jsonschema.validate(payload, HEATMAP_OUTPUT_SCHEMA)
        assert len(payload["grid"]["rates_hz"]) == 21
        assert len(payload["grid"]["cells"]) == 21
        labels = {cell for row in payload["grid"]["cells"] for cell in row}
        assert labels == {"endpoint", "edge", "cloud", "not-viable"}
        assert [m["class"] for m in payload["markers"]] == ["edge", "edge"]

    def test_preset_target(self, capsys):
        payload = run_json(capsys, "heatmap", "edge-small", "--json")
        # a single-deployment family classifies edge or not-viable only
        labels = {cell for row in payload["grid"]["cells"] for cell in row}
        assert labels <= {"endpoint", "edge", "not-viable"}

    def test_resolution_flag(self, capsys):
        payload = run_json(capsys, "heatmap", "--json", "--resolution", "2",
                           "--rmax", "10", "--tmax", "0.5")
        assert payload["grid"]["rates_hz"] == [0.0, 10.0]
        assert payload["grid"]["cells"][0][0] == "endpoint"
        assert payload["grid"]["cells"][1][1] == "not-viable"

    def test_zero_rmax_is_an_argument_error(self, capsys):
        code, _, err = run(capsys, "heatmap", "--rmax", "0")
        assert code == EXIT_ARGUMENT

    def test_out_writes_the_file(self, capsys, tmp_path):
        target = tmp_path / "grid.csv"
        code, out, _ = run(capsys, "heatmap", "--out", str(target))
        assert code == EXIT_OK
        assert out == ""
        assert target.read_text().startswith("# manifest: ")

    def test_unwritable_out_path(self, capsys, tmp_path):
        code, _, err = run(capsys, "heatmap", "--out", str(tmp_path / "no" / "dir.csv"))
        assert code == EXIT_IO


class TestSimulate:
    def test_json_output_matches_schema(self, capsys):
        payload = run_json(capsys, "simulate", "edge-small", "--duration", "5")
        jsonschema.validate(payload, SIMULATE_OUTPUT_SCHEMA)
        assert payload["manifest"]["seed"] == 42
        assert payload["report"]["generated"] > 0

    def test_same_seed_reproduces_the_report(self, capsys):
        first = run_json(capsys, "simulate", "edge-small", "--duration", "5", "--seed", "7")
        second = run_json(capsys, "simulate", "edge-small", "--duration", "5", "--seed", "7")
        assert first["report"] == second["report"]
        a, b = first["manifest"], second["manifest"]
        a.pop("timestamp"), b.pop("timestamp")
        assert a == b

    def test_duration_must_be_positive(self, capsys):
        code, _, _ = run(capsys, "simulate", "edge-small", "--duration", "-1")
        assert code == EXIT_ARGUMENT

    def test_warmup_must_precede_the_end(self, capsys):
        code, _, _ = run(capsys, "simulate", "edge-small", "--duration", "5", "--warmup", "5")
        assert code == EXIT_ARGUMENT

    def test_trace_file(self, capsys, tmp_path):
        trace = tmp_path / "trace.csv"
        payload = run_json(capsys, "simulate", "mist", "--duration", "3", "--trace", str(trace))
        lines = trace.read_text().splitlines()
        assert lines[0].startswith("# manifest: ")
        assert lines[1].split(",")[:3] == ["source", "worker", "index"]
        assert len(lines) - 2 >= payload["report"]["generated"]


class TestCompare:
    def test_table_lists_every_preset(self, capsys):
        code, out, _ = run(capsys, "compare", "cloud", "edge-large", "edge-small", "mist",
                           "--repeats", "1", "--duration", "4")
        assert code == EXIT_OK
        for name in ("cloud", "edge-large", "edge-small", "mist"):
            assert name in out

    def test_json_output_matches_schema(self, capsys):
        payload = run_json(capsys, "compare", "cloud", "edge-small", "--json",
                           "--repeats", "2", "--duration", "4")
        jsonschema.validate(payload, COMPARE_OUTPUT_SCHEMA)
        names = [row["name"] for row in payload["presets"]]
        assert names == ["cloud", "edge-small"]
        loads = {row["name"]: row["analytic_load_percent"] for row in payload["presets"]}
        assert loads["cloud"] == pytest.approx(70.0)
        assert loads["edge-small"] == pytest.approx(280.0 / 3.0)

    def test_single_repeat_has_zero_sd(self, capsys):
        payload = run_json(capsys, "compare", "cloud", "mist", "--json",
                           "--repeats", "1", "--duration", "4")
        assert all(row["latency_sd_s"] == 0.0 for row in payload["presets"])

    def test_single_preset_is_an_argument_error(self, capsys):
        code, _, err = run(capsys, "compare", "cloud")
        assert code == EXIT_ARGUMENT
        assert "two" in err

    def test_unknown_preset(self, capsys):
        code, _, err = run(capsys, "compare", "cloud", "fog")
        assert code == EXIT_ARGUMENT
        assert "fog" in err

    def test_repeats_use_consecutive_seeds(self, capsys):
        payload = run_json(capsys, "compare", "cloud", "mist", "--json", "--seed", "100",
                           "--repeats", "2", "--duration", "4")
        assert payload["manifest"]["seed"] == 100
        assert payload["manifest"]["parameters"]["repeats"] == 2


class TestParsing:
    def test_no_arguments(self, capsys):
        assert main([]) == EXIT_ARGUMENT
        capsys.readouterr()

    def test_unknown_subcommand(self, capsys):
        assert main(["frobnicate"]) == EXIT_ARGUMENT
        capsys.readouterr()

    def test_help_exits_cleanly(self, capsys):
        assert main(["--help"]) == EXIT_OK
        out = capsys.readouterr().out
        for name in ("validate", "predict", "heatmap", "simulate", "compare"):
            assert name in out
