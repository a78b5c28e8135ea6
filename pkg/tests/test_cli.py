import json
import os
import subprocess
import sys

import pytest

from advisory_miner import cli


@pytest.fixture
def cohort(tmp_path, capsys):
    path = tmp_path / "cohort.csv"
    assert cli.main(["generate", "--seed", "42", "--out", str(path)]) == 0
    capsys.readouterr()
    return path


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_args_mapping():
    args = cli.parse_args(["crossval", "--data", "c.csv", "--algo", "c45", "--folds", "10", "--seed", "7"])
    assert (args.command, args.algo, args.folds, args.seed) == ("crossval", ["c45"], 10, 7)


@pytest.mark.parametrize("argv,needle", [
    (["crossval", "--data", "c.csv", "--algo", "svm", "--seed", "1"], "c45, nb, knn"),
    (["crossval", "--data", "c.csv", "--algo", "knn"], "--seed"),
    (["crossval", "--data", "c.csv", "--folds", "1", "--seed", "1"], "folds must be >= 2"),
    (["train", "--data", "c.csv", "--algo", "nb", "--out", "m.json", "--bogus"], "unrecognized"),
    (["describe", "--data", ""], "--data"),
    (["rules"], "--model or --data"),
    ([], "required"),
])
def test_usage_errors_exit_2(argv, needle, capsys, monkeypatch):
    monkeypatch.delenv(cli.SEED_ENV, raising=False)
    code, _, err = run(capsys, *argv)
    assert code == 2 and needle in err


def test_seed_env_fallback(cohort, capsys, monkeypatch):
    monkeypatch.setenv(cli.SEED_ENV, "42")
    code, out, err = run(capsys, "crossval", "--data", str(cohort), "--algo", "nb", "--format", "json")
    assert code == 0 and "seed: 42" in err and json.loads(out)["seed"] == 42
    monkeypatch.setenv(cli.SEED_ENV, "abc")
    assert run(capsys, "generate")[0] == 2


def test_generate_is_reproducible(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        code, _, err = run(capsys, "generate", "--seed", "9", "--n", "50", "--out", str(p))
        assert code == 0 and "seed: 9" in err
    assert a.read_bytes() == b.read_bytes()
    assert len(a.read_text().splitlines()) == 51


def test_crossval_outputs(cohort, capsys):
    code, text, _ = run(capsys, "crossval", "--data", str(cohort), "--seed", "42")
    assert code == 0
    assert "correctly classified instances %" in text and "Weighted Avg." in text
    assert "K-nearest neighbour" in text
    outs = [run(capsys, "crossval", "--data", str(cohort), "--seed", "3", "--algo", "c45,knn",
                "--format", fmt)[1] for fmt in ("csv", "csv", "json", "json")]
    assert outs[0] == outs[1] and outs[2] == outs[3]
    assert outs[0].splitlines()[0].startswith("algo,class,precision")
    par = run(capsys, "crossval", "--data", str(cohort), "--seed", "3", "--algo", "c45,knn", "--format", "json",
              "--parallel")[1]
    assert par == outs[2]


def test_analyze(cohort, capsys):
    code, text, _ = run(capsys, "analyze", "--data", str(cohort))
    assert code == 0
    for part in ("Source of Variation", "Pooled Variance", "Standard Error", "Out of 249 students"):
        assert part in text
    code, series, _ = run(capsys, "analyze", "--data", str(cohort), "--format", "csv")
    lines = series.splitlines()
    assert lines[0] == "index,Sid,L_STATUS,Total_Reg_C_H,Total_Gain_C_H,Diff_G_R_C_H,CUM_GPA,band"
    assert len(lines) == 250
    data = json.loads(run(capsys, "analyze", "--data", str(cohort), "--format", "json")[1])
    assert data["anova"]["ok"] and data["anova"]["result"]["table"]["df_within"] == 37


def test_describe_formats(cohort, capsys):
    assert "Mean μ" in run(capsys, "describe", "--data", str(cohort))[1]
    csv_out = run(capsys, "describe", "--data", str(cohort), "--format", "csv")[1]
    assert csv_out.splitlines()[0].startswith("attribute,group,n,mean")
    by_gen = json.loads(run(capsys, "describe", "--data", str(cohort), "--group-by", "GEN", "--format", "json")[1])
    assert set(by_gen["CUM_GPA"]) == {"Male", "Female"}


def test_train_predict_rules_report(cohort, tmp_path, capsys):
    model = tmp_path / "m.json"
    assert run(capsys, "train", "--data", str(cohort), "--algo", "c45", "--out", str(model))[0] == 0
    one = tmp_path / "one.csv"
    one.write_text("\n".join(cohort.read_text().splitlines()[:2]) + "\n")
    code, out, _ = run(capsys, "predict", "--model", str(model), "--data", str(one))
    assert code == 0 and out.startswith("S001: ") and "Normal=" in out
    rules = run(capsys, "rules", "--model", str(model))[1]
    assert rules.startswith("1. IF Diff_G_R_C_H")
    code, report, _ = run(capsys, "report", "--model", str(model), "--data", str(cohort), "--sid", "S002",
                          "--advisor", "Dr. Amal")
    assert code == 0 and "Sid: S002" in report and "Risk prediction:" in report
    assert "Advisor's name: Dr. Amal" in report
    narrative = tmp_path / "n.json"
    narrative.write_text(json.dumps([{"recommended": ["IS 241"], "problem": True, "problem_type": "Social"},
                                     {}, {"solution": "lighter load"}]))
    js = json.loads(run(capsys, "report", "--model", str(model), "--data", str(cohort), "--narrative",
                        str(narrative), "--format", "json")[1])
    assert js["semesters"][0]["problem_type"] == "Social" and js["semesters"][2]["solution"] == "lighter load"


def test_excluded_features(cohort, tmp_path, capsys):
    model = tmp_path / "m.json"
    assert run(capsys, "train", "--data", str(cohort), "--algo", "c45", "--exclude", "Diff_G_R_C_H",
               "--out", str(model))[0] == 0
    assert "Diff_G_R_C_H" not in run(capsys, "rules", "--model", str(model))[1]
    assert run(capsys, "predict", "--model", str(model), "--data", str(cohort), "--format", "json")[0] == 0


def test_data_errors_exit_1_without_partial_output(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("Sid,Total_Reg_C_H,Total_Gain_C_H,Total_Cur_C_H,CUM_GPA,L_STATUS,GEN,Plan_Study,Ad_STATUS\n"
                   "S1,10,20,13,3.0,InStudy,M,Old,Normal\n")
    out = tmp_path / "m.json"
    code, _, err = run(capsys, "train", "--data", str(bad), "--algo", "nb", "--out", str(out))
    assert code == 1 and "NegativeDiff" in err and "row 2" in err and str(bad) in err
    assert not out.exists() and os.listdir(tmp_path) == ["bad.csv"]
    code, _, err = run(capsys, "describe", "--data", str(tmp_path / "missing.csv"))
    assert code == 1
    code, _, err = run(capsys, "rules", "--model", str(bad))
    assert code == 1 and "invalid JSON" in err


def test_rules_reject_non_tree_model(cohort, tmp_path, capsys):
    model = tmp_path / "nb.json"
    run(capsys, "train", "--data", str(cohort), "--algo", "nb", "--out", str(model))
    code, _, err = run(capsys, "rules", "--model", str(model))
    assert code == 1 and "c45" in err


def test_console_script_and_stdin(cohort):
    env = dict(os.environ)
    proc = subprocess.run([sys.executable, "-m", "advisory_miner", "describe", "--data", "-", "--format", "json"],
                          input=cohort.read_text(), capture_output=True, text=True, env=env)
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["Diff_G_R_C_H"]["ExpectedToGraduate"]["n"] == 39
    bad = subprocess.run([sys.executable, "-m", "advisory_miner", "describe", "--data", "-"],
                         input="nonsense\n", capture_output=True, text=True)
    assert bad.returncode == 1 and "<stdin>" in bad.stderr
