import hashlib
from pathlib import Path

import numpy as np
import pytest

from lppsim.cli import main
from lppsim.render import PALETTE, cluster_image, render_clusters
from lppsim import Seed, passage_times, sample_field, early_death_test

GOLDEN_PPM_SHA256 = "acd99c11209baa5b3afc68b7db94730b487575216903f3cfd1ba694600855dbb"
EARLY_DEATH_SEED = Seed(31, 4)  # 17x17 field passing the corner death test


def run_cli(args):
    return main(args)


class TestRunCommand:
    def test_n_law_rows(self, tmp_path, capsys):
        out = tmp_path / "n.csv"
        code = run_cli(
            ["run", "--experiment", "n-law", "--trials", "2000", "--seed", "7",
             "--out", str(out), "--no-plot"]
        )
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "experiment,parameter,trials,point,half_width,censored"
        assert lines[1].startswith("n-law,N>=1,2000,")
        assert len(lines) > 10

    def test_missing_trials_is_usage_error(self):
        with pytest.raises(SystemExit) as err:
            run_cli(["run", "--experiment", "coexistence", "--seed", "1", "--n-max", "16"])
        assert err.value.code == 2

    def test_unknown_experiment_is_usage_error(self):
        with pytest.raises(SystemExit) as err:
            run_cli(["run", "--experiment", "bogus", "--trials", "10", "--seed", "1"])
        assert err.value.code == 2

    def test_coexistence_rows_and_figure(self, tmp_path):
        out = tmp_path / "c.csv"
        code = run_cli(
            ["run", "--experiment", "coexistence", "--trials", "300", "--n-max", "32",
             "--seed", "7", "--out", str(out)]
        )
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert [line.split(",")[1] for line in lines[1:]] == ["16", "32"]
        assert (tmp_path / "c.png").exists()

    def test_no_plot_suppresses_figure(self, tmp_path):
        out = tmp_path / "c.csv"
        code = run_cli(
            ["run", "--experiment", "coexistence", "--trials", "200", "--n-max", "16",
             "--seed", "7", "--out", str(out), "--no-plot"]
        )
        assert code == 0
        assert not (tmp_path / "c.png").exists()

    def test_csv_identical_across_thread_counts(self, tmp_path):
        texts = []
        for threads in ("1", "2"):
            out = tmp_path / f"t{threads}.csv"
            run_cli(
                ["run", "--experiment", "coexistence", "--trials", "600", "--n-max", "16",
                 "--seed", "11", "--threads", threads, "--out", str(out), "--no-plot"]
            )
            texts.append(out.read_bytes())
        assert texts[0] == texts[1]

    def test_config_file_with_flag_override(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("experiment = n-law\ntrials = 500\nseed = 3\nno_plot = 1\n")
        out = tmp_path / "a.csv"
        code = run_cli(["run", "--config", str(cfg), "--out", str(out)])
        assert code == 0
        a_text = out.read_text()
        assert ",500," in a_text.splitlines()[1]
        # a flag overrides the file value
        out2 = tmp_path / "b.csv"
        code = run_cli(["run", "--config", str(cfg), "--trials", "700", "--out", str(out2)])
        assert code == 0
        assert ",700," in out2.read_text().splitlines()[1]

    def test_stdout_when_no_out(self, capsys):
        code = run_cli(["run", "--experiment", "n-law", "--trials", "300", "--seed", "5"])
        assert code == 0
        captured = capsys.readouterr()
        assert captured.out.startswith("experiment,parameter")


class TestRenderCommand:
    def test_header_and_determinism(self, tmp_path):
        a = tmp_path / "a.ppm"
        b = tmp_path / "b.ppm"
        assert run_cli(["render", "--n-max", "32", "--seed", "7", "--trial", "0",
                        "--out", str(a)]) == 0
        assert run_cli(["render", "--n-max", "32", "--seed", "7", "--trial", "0",
                        "--out", str(b)]) == 0
        data = a.read_bytes()
        assert data.startswith(b"P6\n33 33\n255\n")
        assert len(data) == 13 + 33 * 33 * 3
        assert data == b.read_bytes()

    def test_golden_hash(self, tmp_path):
        out = tmp_path / "g.ppm"
        run_cli(["render", "--n-max", "32", "--seed", "7", "--trial", "0", "--out", str(out)])
        assert hashlib.sha256(out.read_bytes()).hexdigest() == GOLDEN_PPM_SHA256

    def test_oversize_is_usage_error(self, tmp_path):
        with pytest.raises(SystemExit) as err:
            run_cli(["render", "--n-max", "5000", "--seed", "1", "--out", str(tmp_path / "x.ppm")])
        assert err.value.code == 2

    def test_unwritable_path_is_runtime_error(self):
        assert run_cli(["render", "--n-max", "16", "--seed", "1",
                        "--out", "/nonexistent-dir/x.ppm"]) == 1

    def test_early_death_renders_one_center_pixel(self, tmp_path):
        field = sample_field(EARLY_DEATH_SEED, 17, 17)
        assert early_death_test(field)
        out = tmp_path / "e.ppm"
        run_cli(["render", "--n-max", "16", "--seed", str(EARLY_DEATH_SEED.master),
                 "--trial", str(EARLY_DEATH_SEED.trial_index), "--out", str(out)])
        data = out.read_bytes()
        pixels = np.frombuffer(data[13:], dtype=np.uint8).reshape(17, 17, 3)
        center_color = PALETTE[2]
        count = int(np.all(pixels == center_color, axis=2).sum())
        assert count == 1

    def test_trace_export(self, tmp_path):
        out = tmp_path / "t.ppm"
        trace = tmp_path / "t.csv"
        code = run_cli(["render", "--n-max", "16", "--seed", "7", "--out", str(out),
                        "--trace", str(trace)])
        assert code == 0
        lines = trace.read_text().strip().splitlines()
        assert lines[0] == "n,x_minus,y_minus,x_plus,y_plus,met"
        assert lines[1] == "0,0,0,0,0,0"
        assert lines[2].startswith("1,0,1,1,0,")
        assert len(lines) == 17  # header plus n = 0..15
        for line in lines[1:]:
            n, xm, ym, xp_, yp, met = (int(v) for v in line.split(","))
            assert xm + ym == n and xp_ + yp == n
            assert met in (0, 1)

    def test_orientation_bottom_row_is_horizontal_cluster(self, tmp_path):
        # file row 0 is y = n: the top-left pixel is the upper cluster color,
        # the bottom-right pixel the right cluster color
        img = cluster_image(passage_times(sample_field(Seed(7, 0), 17, 17)), 16)
        assert tuple(img[0, 0]) == tuple(PALETTE[1])
        assert tuple(img[16, 16]) == tuple(PALETTE[3])
        # corner sites with x + y < 2 are black: (0,0) is file row 16, col 0
        assert tuple(img[16, 0]) == (0, 0, 0)


class TestVerifyCommand:
    def test_oracle_suite(self, capsys):
        assert run_cli(["verify", "--suite", "oracle", "--trials", "20", "--seed", "7"]) == 0
        assert "suite=oracle" in capsys.readouterr().out

    def test_couplings_suite(self):
        assert run_cli(
            ["verify", "--suite", "couplings", "--trials", "30", "--n-max", "16",
             "--seed", "7"]
        ) == 0

    def test_unknown_suite_is_usage_error(self):
        with pytest.raises(SystemExit) as err:
            run_cli(["verify", "--suite", "bogus"])
        assert err.value.code == 2
