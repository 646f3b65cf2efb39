import json

import pytest

from rutnet.cli import main, parse_mix_spec
from rutnet.errors import InvalidMixture
from rutnet.mixture import MixtureDesign


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    """A tiny generated dataset plus a quickly trained model."""
    root = tmp_path_factory.mktemp("cliws")
    data = root / "data.csv"
    model = root / "model.json"
    assert main(["gen", "--mixes", "6", "--seed", "3", "--out", str(data)]) == 0
    assert (
        main(
            [
                "train",
                "--data", str(data),
                "--out", str(model),
                "--seed", "3",
                "--epochs", "8",
                "--hidden", "16,8",
            ]
        )
        == 0
    )
    return root, data, model


class TestMixSpec:
    def test_production_mix_spec(self):
        mix = parse_mix_spec(
            "htpg_c=46,ltpg_c=-34,ac_pct=5.9,nmas_mm=12.5,rap_pct=25.0,ras_pct=16.1,crc_pct=10"
        )
        assert mix == MixtureDesign(
            htpg_c=46, ltpg_c=-34, ac_pct=5.9, nmas_mm=12.5, rap_pct=25.0, ras_pct=16.1, crc_pct=10
        )

    def test_defaults_fill_in(self):
        mix = parse_mix_spec("htpg_c=70,ltpg_c=-22")
        assert mix.gradation == "Dense" and mix.ac_pct == 5.5

    def test_unknown_key(self):
        with pytest.raises(InvalidMixture):
            parse_mix_spec("voids=4")

    def test_bad_number(self):
        with pytest.raises(InvalidMixture):
            parse_mix_spec("ac_pct=high")


class TestGen:
    def test_deterministic_bytes(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (a, b):
            assert main(["gen", "--mixes", "3", "--seed", "9", "--out", str(out)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_row_count(self, tmp_path):
        out = tmp_path / "c.csv"
        main(["gen", "--mixes", "2", "--points", "10", "--seed", "1", "--out", str(out)])
        assert len(out.read_text().splitlines()) == 1 + 20


class TestTrain:
    def test_outputs_exist(self, workspace):
        root, data, model = workspace
        assert model.exists()
        summary = json.loads((root / "model.json.summary.json").read_text())
        assert set(summary["eval"]) == {"train", "validation", "test"}
        assert summary["history"]["best_epoch"] >= 1

    def test_deterministic_artifact(self, workspace, tmp_path):
        _, data, model = workspace
        again = tmp_path / "again.json"
        main(
            [
                "train",
                "--data", str(data),
                "--out", str(again),
                "--seed", "3",
                "--epochs", "8",
                "--hidden", "16,8",
            ]
        )
        assert again.read_bytes() == model.read_bytes()

    def test_artifact_records_provenance(self, workspace):
        _, data, model = workspace
        doc = json.loads(model.read_text())
        assert doc["provenance"]["train_config"]["batch_size"] == 10
        assert doc["provenance"]["dataset"]["rows"] == 6 * 200
        assert len(doc["provenance"]["dataset"]["sha256"]) == 64


class TestEval:
    def test_report_to_stdout(self, workspace, capsys):
        _, data, model = workspace
        assert main(["eval", "--model", str(model), "--data", str(data)]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["test"]["n"] == 180
        assert report["test"]["rmse_mm"] >= 0


class TestPredict:
    def test_default_table(self, workspace, capsys):
        _, _, model = workspace
        code = main(
            ["predict", "--model", str(model), "--mix", "htpg_c=70,ltpg_c=-22", "--temp", "50"]
        )
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "pass,raw_mm,clamped_mm"
        assert len(lines) == 201
        last = lines[-1].split(",")
        assert float(last[0]) == 20000
        assert float(last[2]) >= 0

    def test_custom_grid(self, workspace, capsys):
        _, _, model = workspace
        main(
            [
                "predict",
                "--model", str(model),
                "--mix", "htpg_c=64,ltpg_c=-22",
                "--temp", "50",
                "--grid", "5000,10000,20000",
            ]
        )
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 4

    def test_extrapolation_warning_on_stderr(self, workspace, capsys):
        _, _, model = workspace
        main(
            ["predict", "--model", str(model), "--mix", "htpg_c=76,ltpg_c=-22", "--temp", "50"]
        )
        err = capsys.readouterr().err
        assert "warning:" in err and "htpg" in err

    def test_bad_spec_exits_1(self, workspace, capsys):
        _, _, model = workspace
        code = main(["predict", "--model", str(model), "--mix", "voids=4", "--temp", "50"])
        assert code == 1
        err = capsys.readouterr().err.strip()
        assert err.startswith("error:InvalidMixture:")
        assert "\n" not in err

    def test_missing_model_exits_1(self, workspace, capsys, tmp_path):
        code = main(
            ["predict", "--model", str(tmp_path / "nope.json"), "--mix", "htpg_c=70,ltpg_c=-22", "--temp", "50"]
        )
        assert code == 1
        assert capsys.readouterr().err.startswith("error:Io:")


class TestSweep:
    def test_table_rows(self, workspace, capsys):
        _, _, model = workspace
        code = main(
            [
                "sweep",
                "--model", str(model),
                "--mix", "htpg_c=58,ltpg_c=-28",
                "--temp", "50",
                "--factor", "temp_c",
                "--values", "40,50,64",
                ]
        )
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "factor,value,pass,raw_mm,clamped_mm"
        assert len(lines) == 1 + 3 * 200

    def test_grade_values(self, workspace, capsys):
        _, _, model = workspace
        code = main(
            [
                "sweep",
                "--model", str(model),
                "--mix", "htpg_c=58,ltpg_c=-28",
                "--temp", "50",
                "--factor", "grade",
                "--values", "46-34,70-22",
            ]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "grade,46/-34," in out and "grade,70/-22," in out


class TestUsage:
    def test_unknown_subcommand_exit_2(self):
        with pytest.raises(SystemExit) as err:
            main(["frobnicate"])
        assert err.value.code == 2

    def test_no_args_exit_2(self):
        with pytest.raises(SystemExit) as err:
            main([])
        assert err.value.code == 2

    def test_bad_factor_choice_exit_2(self, workspace):
        _, _, model = workspace
        with pytest.raises(SystemExit) as err:
            main(
                [
                    "sweep",
                    "--model", str(model),
                    "--mix", "htpg_c=58,ltpg_c=-28",
                    "--temp", "50",
                    "--factor", "weather",
                    "--values", "1",
                ]
            )
        assert err.value.code == 2
