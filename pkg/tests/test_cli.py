import json
import os

import pytest

from abstain_lab.cli import main


def write(path, doc):
    with open(path, "w") as fh:
        json.dump(doc, fh)
    return str(path)


def test_run_writes_outputs(tmp_path, capsys):
    cfg = write(tmp_path / "cfg.json", {"learner": "baseline", "class": "thresholds", "T": 100,
                                         "replications": 3})
    assert main(["run", cfg, "--out", str(tmp_path / "out"), "--jobs", "1"]) == 0
    assert os.path.exists(tmp_path / "out" / "results.csv")
    assert "abstain_iid" in capsys.readouterr().out


def test_config_flag_and_seed_override(tmp_path):
    cfg = write(tmp_path / "cfg.json", {"learner": "baseline", "T": 50, "replications": 2})
    assert main(["run", "--config", cfg, "--seed", "9", "--out", str(tmp_path), "--jobs", "1"]) == 0
    with open(tmp_path / "results.csv") as fh:
        assert fh.read().splitlines()[1].split(",")[2] == "9"


def test_config_error_exit_code(tmp_path):
    cfg = write(tmp_path / "cfg.json", {"learner": "alg3", "class": "thresholds"})
    assert main(["run", cfg]) == 1
    assert main(["run", str(tmp_path / "missing.json")]) == 1


def test_unknown_flag_exits_one(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bounds", "--learner", "alg4", "--T", "10", "--frobnicate"])
    assert exc.value.code == 1
    assert "usage" in capsys.readouterr().err


def test_bounds_alg4(capsys):
    assert main(["bounds", "--learner", "alg4", "--eta", "0.1", "--T", "1000"]) == 0
    out = capsys.readouterr().out
    assert "M=173" in out and "Delta=0.4" in out and "1751.93" in out


def test_replay_vc1tree(data_dir, capsys):
    assert main(["replay", os.path.join(data_dir, "vc1tree.json")]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[10].startswith("t=11") and '"a0": 6' in lines[10]
    assert lines[11].startswith("t=12") and '"gamma": 6' in lines[11]


def test_replay_abort_exit_code(tmp_path):
    doc = {"class": "thresholds", "learner": "baseline", "T": 2,
           "rounds": [{"point": 0.5, "label": 0}, {"point": 0.7, "label": 1}]}
    assert main(["replay", write(tmp_path / "s.json", doc)]) == 2


def test_oracle_subcommand(capsys):
    assert main(["oracle", "gamma", "--instances", "50"]) == 0
    assert "0 mismatches" in capsys.readouterr().out


def test_sweep_subcommand(tmp_path):
    cfg = write(tmp_path / "cfg.json", {"learner": "baseline", "T": 50, "replications": 2,
                                         "sweep": {"T": [20, 40]}})
    assert main(["sweep", cfg, "--out", str(tmp_path), "--jobs", "1"]) == 0
