import numpy as np

import uncrowd as uc
from uncrowd import fileio
from uncrowd.cli import main


class TestRunCommand:
    def test_smoke_four_cluster(self, tmp_path):
        out = tmp_path / "out"
        code = main(["run", "--gen", "four-cluster", "--desk-scale",
                     "--iters", "2", "--k", "7", "--out", str(out),
                     "--export", "frames,fields,metrics"])
        assert code == 0
        assert (out / "metrics.jsonl").exists()
        assert (out / "frame_000.png").exists()
        assert (out / "frame_002.png").exists()
        assert (out / "field_001.bin").exists()
        records = fileio.read_metrics(out / "metrics.jsonl")
        assert len(records) == 3

    def test_negative_iterations_config_error(self, tmp_path):
        code = main(["run", "--gen", "diagonal", "--iters", "-1",
                     "--out", str(tmp_path / "x")])
        assert code == 2

    def test_missing_input_and_gen(self, tmp_path):
        assert main(["run", "--out", str(tmp_path / "x")]) == 2

    def test_unknown_subcommand_exits_2(self):
        assert main(["frobnicate"]) == 2

    def test_encodings_exported(self, tmp_path):
        out = tmp_path / "enc"
        code = main(["run", "--gen", "four-cluster", "--desk-scale",
                     "--iters", "1", "--k", "7", "--out", str(out),
                     "--encodings", "grid,contours", "--export", "metrics"])
        assert code == 0
        assert (out / "encoding_grid.json").exists()
        assert (out / "encoding_contours.json").exists()


class TestGenerateCommand:
    def test_writes_csv(self, tmp_path):
        path = tmp_path / "data.csv"
        code = main(["generate", "--gen", "diagonal", "--n", "500",
                     "--out", str(path)])
        assert code == 0
        ds = fileio.load_csv(path, normalize=False)
        assert ds.n == 500


class TestMetricsCommand:
    def test_against_prints_neighborhood_metrics(self, tmp_path, capsys):
        rng = np.random.default_rng(0)
        a = uc.ScatterDataset(positions=rng.random((100, 2)))
        fileio.save_csv(a, tmp_path / "a.csv")
        b = uc.ScatterDataset(positions=np.clip(
            a.positions + rng.normal(0, 0.01, (100, 2)), 0, 1))
        fileio.save_csv(b, tmp_path / "b.csv")
        code = main(["metrics", "--input", str(tmp_path / "a.csv"),
                     "--against", str(tmp_path / "b.csv")])
        out = capsys.readouterr().out
        assert code == 0
        assert "trustworthiness=" in out
        assert "ordering=" in out
        assert "binned_stddev=" in out
