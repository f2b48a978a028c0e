import json
import pathlib
import subprocess
import sys

import pytest

import optimism.cli as cli
from optimism.estimators import EstimatorError

GOLDEN = pathlib.Path(__file__).parent / "golden"


def _run_to_string(capsys, argv):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_list_prints_every_scenario(capsys):
    code, out, _ = _run_to_string(capsys, ["list"])
    assert code == 0
    names = [line.split(":")[0] for line in out.strip().splitlines()]
    assert names == sorted(names)
    for expected in ("toy-segment-disk", "toy-segment-disk-gaussian",
                     "convexity-example", "example-4-lasso",
                     "genridge-monotonicity", "ridge-ellipsoid-profile",
                     "theorem2-sweep", "hetero-ridge-check"):
        assert expected in names


def test_describe_pins_the_scenario_constants(capsys):
    code, out, _ = _run_to_string(capsys, ["describe", "example-4-lasso"])
    assert code == 0
    assert "n=1001" in out and "R=5000" in out
    code, out, _ = _run_to_string(capsys, ["describe", "toy-segment-disk"])
    assert code == 0 and "y2 = 2" in out
    code, out, _ = _run_to_string(capsys, ["describe", "convexity-example"])
    assert code == 0 and "sigma = 0.1" in out
    code, out, _ = _run_to_string(capsys,
                                  ["describe", "ridge-ellipsoid-profile"])
    assert code == 0 and "--grid overrides the r_L grid" in out


def test_unknown_scenario_exits_2(capsys):
    code, _, err = _run_to_string(capsys, ["describe", "nope"])
    assert code == 2 and "unknown scenario" in err
    code, _, err = _run_to_string(capsys, ["run", "nope"])
    assert code == 2 and "unknown scenario" in err


def test_unusable_configuration_exits_2(capsys):
    code, _, err = _run_to_string(
        capsys, ["run", "toy-segment-disk", "--replicates", "1"])
    assert code == 2 and "--replicates" in err
    code, _, err = _run_to_string(
        capsys, ["run", "toy-segment-disk", "--threads", "0"])
    assert code == 2 and "--threads" in err
    code, _, err = _run_to_string(
        capsys, ["run", "ridge-ellipsoid-profile", "--replicates", "60",
                 "--grid", "0.5,2.0"])
    assert code == 2 and "invalid configuration" in err


def test_run_stdout_equals_file_output(capsys, tmp_path):
    path = tmp_path / "toy.csv"
    code, _, _ = _run_to_string(
        capsys, ["run", "toy-segment-disk", "--seed", "1",
                 "--replicates", "60", "--out", str(path)])
    assert code == 0
    code, out, _ = _run_to_string(
        capsys, ["run", "toy-segment-disk", "--seed", "1",
                 "--replicates", "60"])
    assert code == 0
    assert out == path.read_text(encoding="utf-8")


def test_reruns_and_thread_counts_are_byte_identical(capsys, tmp_path):
    argv = ["run", "ridge-ellipsoid-profile", "--seed", "2",
            "--replicates", "60", "--grid", "1.5,4.0"]
    paths = [tmp_path / f"run{i}.csv" for i in range(3)]
    extra = [[], [], ["--threads", "3"]]
    for path, more in zip(paths, extra):
        code, _, _ = _run_to_string(capsys,
                                    argv + more + ["--out", str(path)])
        assert code == 0
    blobs = [p.read_bytes() for p in paths]
    assert blobs[0] == blobs[1] == blobs[2]


def test_output_matches_golden_file(capsys):
    code, out, _ = _run_to_string(
        capsys, ["run", "toy-segment-disk", "--seed", "1",
                 "--replicates", "60"])
    assert code == 0
    golden = (GOLDEN / "toy_seed1_r60.csv").read_text(encoding="utf-8")
    assert out == golden


def test_json_format(capsys):
    code, out, _ = _run_to_string(
        capsys, ["run", "toy-segment-disk", "--seed", "1",
                 "--replicates", "60", "--format", "json"])
    assert code == 0
    blob = json.loads(out)
    assert blob["scenario"] == "toy-segment-disk"
    assert len(blob["rows"]) == 6
    assert "omega_gap" in blob["summary"]


def test_unwritable_output_exits_3(capsys, tmp_path):
    code, _, err = _run_to_string(
        capsys, ["run", "toy-segment-disk", "--replicates", "60",
                 "--out", str(tmp_path / "missing" / "out.csv")])
    assert code == 3 and "cannot write" in err


def test_estimator_failure_exits_4(capsys, monkeypatch):
    def boom(*args, **kwargs):
        raise EstimatorError("synthetic failure")

    monkeypatch.setattr(cli, "run_scenario", boom)
    code, _, err = _run_to_string(
        capsys, ["run", "toy-segment-disk", "--replicates", "60"])
    assert code == 4 and "synthetic failure" in err


def test_inapplicable_flags_warn_and_are_ignored(capsys):
    base = ["run", "toy-segment-disk", "--seed", "1", "--replicates", "60"]
    code, plain, _ = _run_to_string(capsys, base)
    assert code == 0
    code, out, err = _run_to_string(capsys, base + ["--grid", "1,2"])
    assert code == 0 and "ignoring --grid" in err and out == plain
    code, out, err = _run_to_string(capsys, base + ["--noise-as-sd"])
    assert code == 0 and "ignoring --noise-as-sd" in err and out == plain


def test_module_entry_point_runs():
    proc = subprocess.run([sys.executable, "-m", "optimism", "list"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "toy-segment-disk" in proc.stdout


def test_grid_argument_parsing():
    assert cli._grid_arg("1,2.5, 3") == [1.0, 2.5, 3.0]
    with pytest.raises(Exception):
        cli._grid_arg("1,abc")
