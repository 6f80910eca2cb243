import json
import math
import os
import subprocess
import sys

from cuspspec import degeneration, fuchsian, zeta_engine
from cuspspec.fuchsian import SurfaceData


def run_cli(*argv, env_extra=None):
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "cuspspec.cli", *argv],
        capture_output=True, text=True, env=env)


class TestSpectrumCommand:
    def test_first_length(self):
        out = run_cli("spectrum", "--group", "thrice-punctured-sphere",
                      "--max-length", "6")
        assert out.returncode == 0
        data = [ln for ln in out.stdout.splitlines()
                if ln and not ln.startswith("#")]
        assert data[0] == "length,mult,pinched"
        first = float(data[1].split(",")[0])
        assert abs(first - 3.5254943) < 1e-6

    def test_csv_round_trips(self):
        out = run_cli("spectrum", "--group", "thrice-punctured-sphere",
                      "--max-length", "6")
        spec = fuchsian.spectrum_from_csv(
            out.stdout, 6.0, SurfaceData(genus=0, cusps=3))
        assert spec.entries[0].mult == 6

    def test_json_format_round_trips(self):
        out = run_cli("spectrum", "--group", "thrice-punctured-sphere",
                      "--max-length", "6", "--format", "json")
        spec = fuchsian.spectrum_from_json(json.loads(out.stdout))
        assert abs(spec.entries[0].length - 2.0 * math.acosh(3.0)) < 1e-12

    def test_deterministic_byte_identical(self):
        a = run_cli("spectrum", "--group", "thrice-punctured-sphere",
                    "--max-length", "7")
        b = run_cli("spectrum", "--group", "thrice-punctured-sphere",
                    "--max-length", "7")
        assert a.stdout == b.stdout

    def test_provenance_header_lists_defaults(self):
        out = run_cli("spectrum", "--group", "thrice-punctured-sphere",
                      "--max-length", "6")
        comments = [ln for ln in out.stdout.splitlines()
                    if ln.startswith("#")]
        joined = "\n".join(comments)
        assert "merge_tolerance" in joined and "word_radius" in joined


class TestTraceCommand:
    def test_columns_and_values(self):
        out = run_cli("trace", "--group", "thrice-punctured-sphere",
                      "--max-length", "8", "--t", "0.5,1")
        assert out.returncode == 0
        data = [ln for ln in out.stdout.splitlines()
                if ln and not ln.startswith("#")]
        header = data[0].split(",")
        assert header == ["t", "identity", "hyperbolic", "parabolic",
                          "cusp_start", "relative_trace"]
        row = [float(x) for x in data[1].split(",")]
        assert abs(sum(row[1:5]) - row[5]) < 1e-12


class TestDetCommand:
    def test_positive_determinant(self):
        out = run_cli("det", "--group", "thrice-punctured-sphere",
                      "--cutoff", "12", "--t-max", "8")
        assert out.returncode == 0
        obj = json.loads(out.stdout)
        assert obj["determinant"] > 0.0
        res = zeta_engine.zeta_result_from_json(obj)
        assert abs(res.determinant
                   - math.exp(-res.zeta_prime_zero)) < 1e-10 * res.determinant

    def test_truncation_refused(self):
        out = run_cli("det", "--group", "thrice-punctured-sphere",
                      "--cutoff", "6", "--t-max", "50")
        assert out.returncode == 2
        err = json.loads(out.stderr)
        assert err["error"] == "TruncationError"


class TestScatterCheckCommand:
    def test_residuals(self, tmp_path):
        model = {"q": 2.0, "phi_half": 1.0, "trace_c_half": 1.0,
                 "resonances": [{"re": -0.3, "im": 1.0, "order": 1},
                                {"re": -0.3, "im": -1.0, "order": 1}]}
        p = tmp_path / "model.json"
        p.write_text(json.dumps(model))
        out = run_cli("scatter-check", "--model", str(p),
                      "--t", "0.5,1,2")
        assert out.returncode == 0
        data = [ln for ln in out.stdout.splitlines()
                if ln and not ln.startswith("#")]
        resid = [float(ln.split(",")[3]) for ln in data[1:]]
        assert max(resid) <= 1e-6


class TestPinchSweepCommand:
    def test_csv_round_trips(self):
        out = run_cli("pinch-sweep", "--group", "thrice-punctured-sphere",
                      "--cutoff", "6", "--ell-num", "4")
        assert out.returncode == 0
        rows = degeneration.rows_from_csv(out.stdout)
        assert len(rows) == 4
        ests = [r.log_det_estimate for r in rows]
        assert all(b < a for a, b in zip(ests, ests[1:]))


class TestSelfcheck:
    def test_passes(self):
        out = run_cli("selfcheck")
        assert out.returncode == 0
        assert "FAIL" not in out.stdout


class TestConfigAndEnvironment:
    def test_config_supplies_defaults(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"max-length": 6.0, "word-radius": 6}))
        out = run_cli("--config", str(cfg), "spectrum",
                      "--group", "thrice-punctured-sphere")
        assert out.returncode == 0
        assert "3.5254943" in out.stdout

    def test_flag_overrides_config(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"max-length": 6.0}))
        out = run_cli("--config", str(cfg), "spectrum",
                      "--group", "thrice-punctured-sphere",
                      "--max-length", "4")
        data = [ln for ln in out.stdout.splitlines()
                if ln and not ln.startswith("#")]
        assert len(data) == 2  # header plus the systole only

    def test_missing_config_is_io_error(self):
        out = run_cli("--config", "/nonexistent/cfg.json", "selfcheck")
        assert out.returncode == 4

    def test_bad_thread_count_rejected(self):
        out = run_cli("selfcheck", env_extra={"CUSPSPEC_THREADS": "zero"})
        assert out.returncode == 2

    def test_thread_count_accepted(self):
        out = run_cli("spectrum", "--group", "thrice-punctured-sphere",
                      "--max-length", "4",
                      env_extra={"CUSPSPEC_THREADS": "2"})
        assert out.returncode == 0


class TestErrorChannel:
    def test_unknown_group(self):
        out = run_cli("spectrum", "--group", "nope", "--max-length", "5")
        assert out.returncode == 2
        err = json.loads(out.stderr)
        assert err["error"] == "UnknownGroupError"
        assert "nope" in err["message"]

    def test_output_path_failure(self):
        out = run_cli("spectrum", "--group", "thrice-punctured-sphere",
                      "--max-length", "5", "--out", "/nonexistent/dir/x.csv")
        assert out.returncode == 4
