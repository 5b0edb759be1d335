import json
import subprocess
import sys

import pytest

from zerocover.cli import main


def write_config(tmp_path, payload, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


class TestRatesCheck:
    def test_reference_parameters(self, capsys):
        code = main([
            "rates", "check",
            "--set", "d=2", "--set", "d0=1", "--set", "k_upper=4", "--set", "k_lower=4",
            "--set", "eta=0.21", "--set", "psi=0.01", "--set", "xi=0.05",
            "--set", "m_r=0.4", "--set", "m_eps=0.4",
        ])
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert report["condition_A_holds"] is True
        assert report["condition_B_holds"] is True
        assert report["condition_A_value"] == pytest.approx(0.08)
        assert report["condition_B_value"] == pytest.approx(-0.05)

    def test_model_driven_orders(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {
            "model": "powerlaw4_segment", "eta": 0.21, "psi": 0.01, "xi": 0.05,
            "m_r": 0.4, "m_eps": 0.4,
        })
        assert main(["rates", "check", "--config", cfg]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["inputs"]["k_upper"] == 4.0

    def test_out_of_range_eta_is_config_error(self, capsys):
        code = main([
            "rates", "check",
            "--set", "d=2", "--set", "d0=1", "--set", "k_upper=4", "--set", "k_lower=4",
            "--set", "eta=0.8", "--set", "psi=0.01", "--set", "xi=0.01",
            "--set", "m_r=0.4", "--set", "m_eps=0.4",
        ])
        assert code == 2
        err = json.loads(capsys.readouterr().err.splitlines()[-1])
        assert err["type"] == "config"


class TestValidation:
    def test_malformed_config_exits_2_without_outputs(self, tmp_path, capsys):
        out = tmp_path / "out"
        cfg = write_config(tmp_path, {"model": "f_quadratic"})  # n, seed missing
        code = main(["sample", "--config", cfg, "-o", str(out)])
        assert code == 2
        assert not out.exists()
        err = json.loads(capsys.readouterr().err.splitlines()[-1])
        assert err["type"] == "config"

    def test_unknown_model_exits_2(self, tmp_path):
        cfg = write_config(tmp_path, {"model": "nope", "n": 10, "seed": 1})
        assert main(["sample", "--config", cfg, "-o", str(tmp_path / "out")]) == 2

    def test_unparseable_json_exits_2(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert main(["sample", "--config", str(path), "-o", str(tmp_path / "out")]) == 2

    def test_infeasible_detect_exits_3(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {
            "model": "powerlaw4_segment", "n": 100, "m_r": 0.4, "m_eps": 0.05,
            "eta": 0.21, "psi": 0.01, "seed": 5,
        })
        code = main(["detect", "--config", cfg, "-o", str(tmp_path / "out")])
        assert code == 3
        err = json.loads(capsys.readouterr().err.splitlines()[-1])
        assert err["type"] == "infeasible"


class TestArtifacts:
    def test_sample_writes_csv(self, tmp_path):
        cfg = write_config(tmp_path, {"model": "f_quadratic", "n": 25, "seed": 3})
        out = tmp_path / "out"
        assert main(["sample", "--config", cfg, "-o", str(out)]) == 0
        lines = (out / "samples.csv").read_text().splitlines()
        assert lines[0] == "x1"
        assert len(lines) == 26

    def test_cover_writes_classified_csv(self, tmp_path):
        cfg = write_config(tmp_path, {
            "model": "powerlaw4_segment", "r": 0.1, "eps": 0.25, "n": 500, "seed": 9,
        })
        out = tmp_path / "out"
        assert main(["cover", "--config", cfg, "-o", str(out)]) == 0
        lines = (out / "covering.csv").read_text().splitlines()
        assert lines[0] == "center_1,center_2,radius,class,n_points"
        assert len(lines) == 441 + 1

    def test_detect_writes_full_artifact_set(self, tmp_path):
        cfg = write_config(tmp_path, {
            "model": "powerlaw4_segment", "n": 2000, "m_r": 0.4, "m_eps": 0.4,
            "eta": 0.21, "psi": 0.01, "seed": 11,
        })
        out = tmp_path / "out"
        assert main(["detect", "--config", cfg, "-o", str(out)]) == 0
        for name in ("balls.csv", "occupancy.csv", "reconstruction.json", "detection.svg"):
            assert (out / name).exists(), name
        summary = json.loads((out / "reconstruction.json").read_text())
        assert summary["n_empty_balls"] >= 0
        assert isinstance(summary["event_A"], bool)

    def test_sweep_writes_csv_and_svg_idempotently(self, tmp_path):
        cfg = write_config(tmp_path, {
            "model": "powerlaw4_segment", "ns": [100, 1000], "m_r_values": [0.2, 0.4],
            "m_eps_values": [0.4], "eta": 0.21, "psi": 0.01, "replications": 2,
            "base_seed": 17,
        })
        out = tmp_path / "out"
        assert main(["sweep", "--config", cfg, "-o", str(out)]) == 0
        first_csv = (out / "sweep.csv").read_bytes()
        first_svg = (out / "sweep.svg").read_bytes()
        assert main(["sweep", "--config", cfg, "-o", str(out)]) == 0
        assert (out / "sweep.csv").read_bytes() == first_csv
        assert (out / "sweep.svg").read_bytes() == first_svg

    def test_heatmap_writes_csv_and_svg(self, tmp_path):
        cfg = write_config(tmp_path, {
            "models": ["f_quadratic", "g_twobumps", "h_parabolic"],
            "n": 2000, "bins": 100, "seed": 23,
        })
        out = tmp_path / "out"
        assert main(["heatmap", "--config", cfg, "-o", str(out)]) == 0
        lines = (out / "heatmap.csv").read_text().splitlines()
        assert lines[0] == "model,bin,left,right,occupied"
        assert len(lines) == 1 + 3 * 100
        assert (out / "heatmap.svg").exists()

    def test_no_writes_outside_output_dir(self, tmp_path, monkeypatch):
        workdir = tmp_path / "cwd"
        workdir.mkdir()
        monkeypatch.chdir(workdir)
        cfg = write_config(tmp_path, {"model": "f_quadratic", "n": 10, "seed": 1})
        out = tmp_path / "only_here"
        assert main(["sample", "--config", cfg, "-o", str(out)]) == 0
        assert list(workdir.iterdir()) == []

    def test_flag_overrides_config(self, tmp_path):
        cfg = write_config(tmp_path, {"model": "f_quadratic", "n": 10, "seed": 1})
        out = tmp_path / "out"
        assert main(["sample", "--config", cfg, "--set", "n=40", "-o", str(out)]) == 0
        assert len((out / "samples.csv").read_text().splitlines()) == 41


class TestStdoutCommands:
    def test_tail_support_table(self, capsys):
        code = main([
            "tail-support", "--set", "model=polytail_1_3", "--set", "eta=0.31",
            "--set", "xi=0.1", "--set", "m_delta=0.25", "--set", "ns=[1000,10000,100000,1000000]",
        ])
        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "n,delta,B,eps,m_f"
        assert len(lines) == 5

    def test_tail_support_rejects_compact_model(self, capsys):
        code = main([
            "tail-support", "--set", "model=f_quadratic", "--set", "eta=0.31",
            "--set", "xi=0.1", "--set", "ns=[1000]",
        ])
        assert code == 2

    def test_boxdim_from_zero_set_json(self, capsys):
        code = main([
            "boxdim",
            "--set", 'zero_set={"components":[{"type":"segment","start":[0.5,0.25],"end":[0.5,0.75]}]}',
            "--set", "deltas=[0.05,0.025,0.0125,0.00625]",
        ])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["counts"][0] == 5
        assert payload["upper_estimate"] == pytest.approx(1.0, abs=0.15)

    def test_boxdim_from_model(self, capsys):
        code = main([
            "boxdim", "--set", "model=powerlaw4_segment",
            "--set", "deltas=[0.05,0.025,0.0125,0.00625]",
        ])
        assert code == 0


def test_console_entry_point_runs():
    result = subprocess.run(
        [sys.executable, "-m", "zerocover", "rates", "check",
         "--set", "d=2", "--set", "d0=1", "--set", "k_upper=4", "--set", "k_lower=4",
         "--set", "eta=0.21", "--set", "psi=0.01", "--set", "xi=0.05",
         "--set", "m_r=0.4", "--set", "m_eps=0.4"],
        capture_output=True, text=True,
    )
    assert result.returncode == 0
    assert json.loads(result.stdout)["condition_A_holds"] is True
