import numpy as np
import pytest

from antnet import gen_dataset, load_csv, load_preset
from antnet.cli import _dataset_seed, _workers_from_env, main


def run_cli(*argv):
    return main(list(argv))


class TestGenerate:
    def test_writes_sixty_row_csv(self, tmp_path, capsys):
        out = tmp_path / "d1.csv"
        assert run_cli("generate", "dataset1", "--seed", "42", "--out", str(out)) == 0
        assert "wrote" in capsys.readouterr().out
        lines = out.read_text().strip().splitlines()
        assert len(lines) == 60
        assert all(line.count(",") == 2 for line in lines)

    def test_same_seed_same_bytes(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run_cli("generate", "dataset2", "--seed", "7", "--out", str(a))
        run_cli("generate", "dataset2", "--seed", "7", "--out", str(b))
        assert a.read_bytes() == b.read_bytes()

    def test_header_flag(self, tmp_path):
        out = tmp_path / "h.csv"
        run_cli("generate", "dataset1", "--header", "--out", str(out))
        assert out.read_text().splitlines()[0] == "x0,x1,label"

    def test_generate_writes_what_run_would_use(self, tmp_path):
        out = tmp_path / "d.csv"
        run_cli("generate", "dataset1", "--seed", "5", "--out", str(out))
        expected = gen_dataset(load_preset("dataset1"), _dataset_seed(5))
        back = load_csv(out)
        assert np.array_equal(back.points, expected.points)
        assert np.array_equal(back.labels, expected.labels)

    def test_unknown_preset_names_valid_ones(self, tmp_path, capsys):
        assert run_cli("generate", "nope", "--out", str(tmp_path / "x.csv")) == 2
        assert "dataset1" in capsys.readouterr().err


class TestRun:
    def _run_args(self, tmp_path, *extra):
        return (
            "run", "--dataset", "dataset1", "--reps", "2", "--iters", "20",
            "--seed", "3", "--out", str(tmp_path / "out"), *extra,
        )

    def test_writes_all_formats(self, tmp_path, capsys):
        assert run_cli(*self._run_args(tmp_path)) == 0
        out = tmp_path / "out"
        assert (out / "report.json").is_file()
        assert (out / "samples.csv").is_file()
        assert (out / "boxplots.svg").is_file()
        stdout = capsys.readouterr().out
        assert stdout.count("wrote") == 3
        assert "60 rows" in stdout

    def test_formats_subset(self, tmp_path):
        assert run_cli(*self._run_args(tmp_path, "--formats", "json")) == 0
        out = tmp_path / "out"
        assert (out / "report.json").is_file()
        assert not (out / "samples.csv").exists()
        assert not (out / "boxplots.svg").exists()

    def test_config_file_with_flag_overrides(self, tmp_path):
        cfg = tmp_path / "exp.conf"
        cfg.write_text(
            "dataset = dataset1\nreps = 2\niters = 15\nseed = 4\nformats = json\n"
        )
        out = tmp_path / "res"
        assert run_cli("run", "--config", str(cfg), "--out", str(out)) == 0
        report = (out / "report.json").read_text()
        assert '"n_iters": 15' in report
        assert '"repetitions": 2' in report

    def test_baseline_only_phases(self, tmp_path):
        cfg = tmp_path / "exp.conf"
        cfg.write_text(
            "dataset = dataset1\nreps = 2\niters = 10\nphases = 1\nformats = json\n"
        )
        out = tmp_path / "res"
        assert run_cli("run", "--config", str(cfg), "--out", str(out)) == 0
        report = (out / "report.json").read_text()
        assert '"phase_id": 1' in report
        assert '"phase_id": 2' not in report

    def test_kmeans_labels(self, tmp_path, capsys):
        args = self._run_args(tmp_path, "--labels", "kmeans", "--formats", "json")
        assert run_cli(*args) == 0
        assert "2 classes" in capsys.readouterr().out

    def test_csv_dataset_path(self, tmp_path):
        data = tmp_path / "data.csv"
        run_cli("generate", "dataset1", "--seed", "1", "--out", str(data))
        out = tmp_path / "out"
        assert (
            run_cli(
                "run", "--dataset", str(data), "--reps", "2", "--iters", "10",
                "--out", str(out), "--formats", "json",
            )
            == 0
        )
        assert (out / "report.json").is_file()

    def test_unknown_dataset_exit_2(self, tmp_path, capsys):
        args = ("run", "--dataset", "missing.csv", "--out", str(tmp_path / "o"))
        assert run_cli(*args) == 2
        assert "dataset1" in capsys.readouterr().err

    def test_bad_config_key_exit_2(self, tmp_path, capsys):
        cfg = tmp_path / "bad.conf"
        cfg.write_text("repz = 10\n")
        assert run_cli("run", "--config", str(cfg)) == 2
        assert "repz" in capsys.readouterr().err

    def test_config_file_missing_exit_2(self, tmp_path):
        assert run_cli("run", "--config", str(tmp_path / "none.conf")) == 2

    def test_target_class_out_of_range_exit_2(self, tmp_path, capsys):
        args = self._run_args(tmp_path, "--target-class", "9", "--formats", "json")
        assert run_cli(*args) == 2
        assert "target_class" in capsys.readouterr().err


class TestPlot:
    def _make_report(self, tmp_path):
        out = tmp_path / "out"
        run_cli(
            "run", "--dataset", "dataset1", "--reps", "2", "--iters", "10",
            "--seed", "2", "--out", str(out), "--formats", "json",
        )
        return out / "report.json"

    def test_renders_svg(self, tmp_path):
        report = self._make_report(tmp_path)
        svg = tmp_path / "plot.svg"
        assert run_cli("plot", str(report), "--out", str(svg)) == 0
        assert "<svg" in svg.read_text()

    def test_deterministic_bytes(self, tmp_path):
        report = self._make_report(tmp_path)
        a, b = tmp_path / "a.svg", tmp_path / "b.svg"
        run_cli("plot", str(report), "--out", str(a))
        run_cli("plot", str(report), "--out", str(b))
        assert a.read_bytes() == b.read_bytes()

    def test_malformed_json_exit_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{oops")
        assert run_cli("plot", str(bad), "--out", str(tmp_path / "x.svg")) == 2
        assert "JSON" in capsys.readouterr().err


class TestVerify:
    def test_small_sweep_passes(self, capsys):
        assert run_cli("verify", "--n-max", "4", "--trials", "2") == 0
        out = capsys.readouterr().out
        assert "exact optimum in" in out
        assert out.splitlines()[0].split() == ["n", "trial", "aco", "optimum", "gap"]

    def test_oversize_rejected(self, capsys):
        assert run_cli("verify", "--n-max", "12") == 2
        assert "capped" in capsys.readouterr().err


class TestWorkersEnv:
    def test_unset_means_serial(self, monkeypatch):
        monkeypatch.delenv("ANTNET_THREADS", raising=False)
        assert _workers_from_env() is None

    def test_empty_means_serial(self, monkeypatch):
        monkeypatch.setenv("ANTNET_THREADS", "")
        assert _workers_from_env() is None

    def test_explicit_count(self, monkeypatch):
        monkeypatch.setenv("ANTNET_THREADS", "3")
        assert _workers_from_env() == 3

    def test_zero_means_auto(self, monkeypatch):
        monkeypatch.setenv("ANTNET_THREADS", "0")
        assert _workers_from_env() == 0

    def test_garbage_rejected(self, monkeypatch):
        from antnet import InputError

        monkeypatch.setenv("ANTNET_THREADS", "lots")
        with pytest.raises(InputError):
            _workers_from_env()
