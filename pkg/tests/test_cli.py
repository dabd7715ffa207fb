import csv

import pytest

from hotplug_cc.cli import main
from hotplug_cc.designs import shipped_design_path


@pytest.fixture
def man_bundle(tmp_path):
    path = tmp_path / "man.txt"
    assert main(["construct", "man", "--K", "6", "--Kp", "4", "--t", "2", "--out", str(path)]) == 0
    return path


@pytest.fixture
def td_bundle(tmp_path):
    path = tmp_path / "td.txt"
    args = ["construct", "tdesign", "--design", str(shipped_design_path()), "--a", "1,2", "--out", str(path)]
    assert main(args) == 0
    return path


def test_construct_prints_parameters(capsys, man_bundle, td_bundle):
    out = capsys.readouterr().out.splitlines()
    assert out == ["6 4 15 6 5 3 4", "8 3 14 9 7 5 5"]
    assert man_bundle.read_text().splitlines()[0] == "6 4 15 6 5 3 4"


@pytest.mark.parametrize(
    "args, message",
    [
        (["construct", "man", "--K", "4", "--Kp", "6", "--t", "1"], "K' must be less than K"),
        (["construct", "man", "--K", "6", "--Kp", "4"], "needs --K, --Kp and --t"),
        (["construct", "tdesign", "--design", "x"], "needs --design and --a"),
        (["construct", "tdesign", "--design", "/nonexistent", "--a", "1,2"], "error"),
        (["verify", "/nonexistent"], "cannot read bundle"),
    ],
)
def test_usage_errors_exit_2(args, message, capsys):
    assert main(args) == 2
    assert message in capsys.readouterr().err


def test_bad_a_for_design(capsys):
    args = ["construct", "tdesign", "--design", str(shipped_design_path()), "--a", "5,0"]
    assert main(args) == 2
    assert "outside" in capsys.readouterr().err


def test_verify_valid(man_bundle, capsys):
    assert main(["verify", str(man_bundle)]) == 0
    assert capsys.readouterr().out.startswith("valid (exhaustive, 15 active sets)")
    assert main(["verify", str(man_bundle), "--mode", "sample", "--count", "7"]) == 0
    assert "sample" in capsys.readouterr().out


def test_verify_corrupted_bundle_reports_witness(td_bundle, capsys):
    lines = td_bundle.read_text().splitlines()
    # drop the star of user 1 from P's first row
    row = lines[1].split(",")
    row[0] = "-"
    lines[1] = ",".join(row)
    td_bundle.write_text("\n".join(lines) + "\n")
    assert main(["verify", str(td_bundle)]) == 1
    assert capsys.readouterr().out == "invalid: column 1 of P has 6 stars, expected Z=7\n"


def test_verify_not_hotplug_gives_witness(td_bundle, capsys):
    lines = td_bundle.read_text().splitlines()
    rows = [line.split(",") for line in lines[1:3]]
    # move a star between users 1 and 3 in P's first two rows: column counts stay at Z
    rows[0][0], rows[0][2], rows[1][0], rows[1][2] = "-", "*", "*", "-"
    lines[1:3] = [",".join(r) for r in rows]
    td_bundle.write_text("\n".join(lines) + "\n")
    assert main(["verify", str(td_bundle)]) == 1
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith("invalid: not an HpPDA")
    assert out[1] == "witness tau=1,2,3"


def test_simulate_single(man_bundle, tmp_path, capsys):
    dump = tmp_path / "x.txt"
    args = ["simulate", str(man_bundle), "--N", "6", "--tau", "1,4,5,6", "--demands", "2,3,1,5", "--dump", str(dump)]
    assert main(args) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[-1] == "rate=1/2"
    assert out.count("success=true") == 4
    assert dump.read_text().startswith("X_1 = ")


def test_simulate_bad_demand(man_bundle, capsys):
    args = ["simulate", str(man_bundle), "--N", "6", "--tau", "1,4,5,6", "--demands", "9,3,1,5"]
    assert main(args) == 2
    assert "demand out of range" in capsys.readouterr().err


def test_simulate_needs_tau(man_bundle, capsys):
    assert main(["simulate", str(man_bundle), "--N", "6"]) == 2


def test_simulate_exhaustive(td_bundle, capsys):
    args = ["simulate", str(td_bundle), "--N", "6", "--exhaustive", "--random-demands", "1"]
    assert main(args) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[-2] == f"runs={56 * 3} failures=0"
    assert out[-1] == "rate=5/11"


def test_sweep_and_bound(tmp_path, td_bundle, capsys):
    out = tmp_path / "man.csv"
    assert main(["sweep", "--man-family", "8", "3", "--N", "8", "--out", str(out), "--samples", "5"]) == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["scheme", "M", "R"] and len(rows) == 1 + 3 + 1 + 5
    out2 = tmp_path / "td.csv"
    assert main(["sweep", "--bundle", str(td_bundle), "--N", "8", "--out", str(out2), "--samples", "3"]) == 0
    assert (tmp_path / "td.exact.csv").exists()
    assert main(["sweep", "--N", "8", "--out", str(out2)]) == 2
    capsys.readouterr()
    assert main(["bound", "--N", "8", "--Kp", "3", "--M", "0"]) == 0
    assert capsys.readouterr().out == "3.000000\n"
    assert main(["bound", "--N", "8", "--Kp", "3", "--M", "9"]) == 2
    curve = tmp_path / "b.csv"
    assert main(["bound", "--N", "8", "--Kp", "3", "--samples", "3", "--out", str(curve)]) == 0
    assert curve.read_text().splitlines() == ["M,R", "0.000000,3.000000", "4.000000,0.500000", "8.000000,0.000000"]


def test_demo_matches_golden(capsys):
    assert main(["demo"]) == 0
    out = capsys.readouterr().out
    assert "example1: matches golden output" in out
    assert "example2: matches golden output" in out


def test_outputs_are_deterministic(man_bundle, capsys):
    args = ["simulate", str(man_bundle), "--N", "6", "--tau", "2,3,4,6", "--demands", "1,1,2,6", "--seed", "3"]
    main(args)
    first = capsys.readouterr().out
    main(args)
    assert capsys.readouterr().out == first
