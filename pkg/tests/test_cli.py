import csv
import io
import json
import math

import numpy as np
import pytest

from gmepauli import cli
from gmepauli.io import InvalidStateError, StateFileError, dumps_state, loads_state, read_state, write_csv, write_state
from gmepauli.sampling import random_mixed
from gmepauli.states import DensityMatrix, maximally_mixed
from gmepauli.zoo import w3, white_noise


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def parse_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


# -- state files ------------------------------------------------------------------


def test_state_file_round_trip(rng, tmp_path):
    rho = random_mixed((2, 3), rng)
    text = dumps_state(rho, {"name": "random", "source": "test"})
    sf = loads_state(text)
    np.testing.assert_array_equal(sf.state.matrix, rho.matrix)
    assert sf.dims == (2, 3)
    assert sf.metadata == {"name": "random", "source": "test"}
    assert dumps_state(sf.state, sf.metadata) == text
    path = tmp_path / "s.json"
    write_state(path, rho)
    assert path.read_text() == dumps_state(rho)
    assert dumps_state(read_state(path).state) == path.read_text()


def test_canonical_format_is_stable_for_awkward_values():
    m = np.array([[0.1 + 0j, 1 / 3 - 1e-300j], [1 / 3 + 1e-300j, 0.9 + 0j]])
    text = dumps_state(DensityMatrix(m, (2,)))
    assert "[0.10000000000000001, 0]" in text
    again = dumps_state(loads_state(text, check=False).state)
    assert again == text
    negzero = DensityMatrix(np.array([[1, -0.0], [-0.0, 0]], dtype=complex), (2,))
    assert "-0" not in dumps_state(negzero)


def test_state_file_is_json():
    doc = json.loads(dumps_state(w3(), {"name": "W"}))
    assert doc["dims"] == [2, 2, 2]
    assert len(doc["matrix"]) == 8 and len(doc["matrix"][0]) == 8
    assert doc["matrix"][1][2] == [pytest.approx(1 / 3), 0]


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        "[]",
        '{"dims": [2], "matrix": [[[1, 0], [0, 0]]]}',
        '{"dims": [1], "matrix": [[[1, 0]]]}',
        '{"dims": [2], "matrix": [[[1, 0], [0, 0]], [[0, 0], [0]]]}',
        '{"dims": [2], "matrix": [[[1, 0], [0, 0]], [[0, 0], ["0", 0]]]}',
        '{"dims": [2], "matrix": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]], "extra": 1}',
        '{"dims": [2], "matrix": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]], "metadata": 3}',
    ],
)
def test_malformed_state_files(text):
    with pytest.raises(StateFileError):
        loads_state(text)


def test_invalid_density_matrix_is_reported():
    text = dumps_state(DensityMatrix(np.diag([0.5, 0.4]), (2,)))
    with pytest.raises(InvalidStateError) as info:
        loads_state(text)
    assert info.value.report.trace_defect == pytest.approx(0.1)
    assert loads_state(text, check=False).state.dims == (2,)


def test_write_csv_full_precision():
    text = write_csv([{"a": 1 / 3, "b": None, "c": "x"}], ["a", "b", "c"])
    assert text == "a,b,c\n0.3333333333333333,,x\n"


# -- analyze ----------------------------------------------------------------------


def test_analyze_w_state(tmp_path, capsys):
    path = tmp_path / "w.json"
    write_state(path, white_noise(w3(), 1.0))
    code, out, _ = run(["analyze", str(path), "--alpha", "1", "--beta", "1", "--json", "-"], capsys)
    assert code == 0
    assert "verdict: GME-certified" in out
    assert "T(rho) = 3.7177" in out
    report = json.loads(out[out.index("{"):])
    assert report["score"] == pytest.approx(3.7177, abs=5e-4)
    assert report["threshold"] == pytest.approx(1 + math.sqrt(3))
    assert report["threshold_kind"] == "K"
    assert [b["bipartition"] for b in report["bipartitions"]] == ["1|23", "2|13", "3|12"]
    assert all(b["violated"] for b in report["bipartitions"])


def test_analyze_maximally_mixed(tmp_path, capsys):
    path = tmp_path / "mm.json"
    write_state(path, maximally_mixed((2, 2, 2)))
    out_json = tmp_path / "report.json"
    code, out, _ = run(["analyze", str(path), "--alpha", "1/2", "--beta", "2", "--json", str(out_json)], capsys)
    assert code == 0
    assert "verdict: inconclusive" in out
    report = json.loads(out_json.read_text())
    assert report["score"] == 0
    assert all(b["trace_norm"] == 0 and not b["violated"] for b in report["bipartitions"])


def test_analyze_perm_invariant_mode(tmp_path, capsys):
    path = tmp_path / "g.json"
    code, _, _ = run(["make-state", "ghz4_noise", "--x", "0.9", "-o", str(path)], capsys)
    assert code == 0
    code, out, _ = run(["analyze", str(path), "--alpha", "1", "--beta", "1", "--mode", "perm-invariant"], capsys)
    assert code == 0
    assert "J = 4.1773" in out
    assert "verdict: GME-certified" in out


def test_analyze_rejects_invalid_trace(tmp_path, capsys):
    path = tmp_path / "bad.json"
    m = np.eye(8) * 0.9 / 8
    path.write_text(dumps_state(DensityMatrix(m, (2, 2, 2))))
    code, _, err = run(["analyze", str(path), "--alpha", "1", "--beta", "1"], capsys)
    assert code == 2
    assert "trace off by 0.1" in err


def test_analyze_rejects_non_invariant_state_in_perm_mode(tmp_path, capsys):
    path = tmp_path / "e2.json"
    run(["make-state", "example2_noise", "-o", str(path)], capsys)
    code, _, err = run(["analyze", str(path), "--alpha", "1", "--beta", "1", "--mode", "perm-invariant"], capsys)
    assert code == 2
    assert "permutation" in err


def test_analyze_parse_errors(tmp_path, capsys):
    path = tmp_path / "junk.json"
    path.write_text("{")
    assert run(["analyze", str(path), "--alpha", "1", "--beta", "1"], capsys)[0] == 2
    assert run(["analyze", str(tmp_path / "missing.json"), "--alpha", "1", "--beta", "1"], capsys)[0] == 2


def test_bad_flags_exit_3(tmp_path, capsys):
    path = tmp_path / "w.json"
    write_state(path, w3())
    with pytest.raises(SystemExit) as info:
        cli.main(["analyze", str(path), "--alpha", "one", "--beta", "1"])
    assert info.value.code == 3
    with pytest.raises(SystemExit) as info:
        cli.main(["analyze", str(path), "--beta", "1"])
    assert info.value.code == 3
    with pytest.raises(SystemExit) as info:
        cli.main(["scan", "w3_noise", "--alpha", "1", "--beta", "1", "--tol", "-1"])
    assert info.value.code == 3
    capsys.readouterr()


# -- scan -------------------------------------------------------------------------


@pytest.mark.parametrize(
    "argv, expected",
    [
        (["w3_noise", "--alpha", "1/2", "--beta", "2"], 0.6022),
        (["example2_noise", "--alpha", "1", "--beta", "1"], 0.5635),
        (["example2_noise", "--alpha", "1", "--beta", "1", "--criterion", "bipartition", "--partition", "2|1,3"], 0.4852),
    ],
)
def test_scan_thresholds(argv, expected, capsys):
    code, out, _ = run(["scan", *argv], capsys)
    assert code == 0
    line = next(l for l in out.splitlines() if l.startswith("threshold x*"))
    assert float(line.split("=")[1].split()[0]) == pytest.approx(expected, abs=1e-3)


def test_scan_writes_csv(tmp_path, capsys):
    dest = tmp_path / "grid.csv"
    code, _, _ = run(["scan", "ghz4_noise", "--alpha", "1", "--beta", "1", "--criterion", "gme-perm", "--grid", "11", "--csv", str(dest)], capsys)
    assert code == 0
    rows = parse_csv(dest.read_text())
    assert len(rows) == 11
    assert float(rows[-1]["score"]) == pytest.approx((23 + 2 * math.sqrt(2)) / 5)


def test_scan_custom_family(tmp_path, capsys):
    path = tmp_path / "w.json"
    write_state(path, w3())
    code, out, _ = run(["scan", "custom", "--state", str(path), "--alpha", "1", "--beta", "1"], capsys)
    assert code == 0
    assert "threshold x* = 0.7349" in out


def test_scan_not_detected(capsys):
    code, out, _ = run(["scan", "ghz4_noise", "--alpha", "1", "--beta", "0"], capsys)
    assert code == 0
    assert "not detected" in out


def test_scan_argument_errors(capsys):
    assert run(["scan", "bell_noise", "--alpha", "1", "--beta", "1"], capsys)[0] == 3
    assert run(["scan", "custom", "--alpha", "1", "--beta", "1"], capsys)[0] == 3
    assert run(["scan", "w3_noise", "--alpha", "1", "--beta", "1", "--criterion", "bipartition"], capsys)[0] == 3
    assert run(["scan", "w3_noise", "--alpha", "1", "--beta", "1", "--criterion", "bipartition", "--partition", "1,2|3"], capsys)[0] == 3


# -- repro ------------------------------------------------------------------------


def test_repro_table1(capsys):
    code, out, _ = run(["repro", "table1"], capsys)
    assert code == 0
    rows = parse_csv(out)
    assert [float(r["slope"]) for r in rows] == pytest.approx([3.7177, 6.5825, 6.5225], abs=5e-4)
    assert [float(r["threshold"]) for r in rows] == pytest.approx([0.7349, 0.6022, 0.5464], abs=1e-3)


def test_repro_table2(tmp_path, capsys):
    dest = tmp_path / "t2.csv"
    assert run(["repro", "table2", "--csv", str(dest)], capsys)[0] == 0
    rows = parse_csv(dest.read_text())
    assert [float(r["slope"]) for r in rows[:3]] == pytest.approx([10.5292, 18.4650, 9.1321], abs=5e-4)
    assert [float(r["threshold"]) for r in rows[:3]] == pytest.approx([0.4852, 0.3909, 0.3405], abs=1e-3)
    assert rows[3]["criterion"] == "gme"
    assert float(rows[3]["threshold"]) == pytest.approx(0.5635, abs=1e-3)


def test_repro_example3(capsys):
    rows = parse_csv(run(["repro", "example3"], capsys)[1])
    assert rows[0]["criterion"] == "bipartition 1|234"
    assert float(rows[0]["slope"]) == pytest.approx(4 + math.sqrt(2))
    assert float(rows[1]["bound"]) == pytest.approx((11 + math.sqrt(22) + 3 * math.sqrt(3)) / 5)
    assert float(rows[2]["bound"]) == pytest.approx(3 + math.sqrt(3))


def test_repro_figures(capsys):
    rows = parse_csv(run(["repro", "fig1", "--grid", "1001"], capsys)[1])
    assert list(rows[0]) == ["x", "f1", "g1", "g2"]

    def first_positive(col):
        return next(float(r["x"]) for r in rows if float(r[col]) > 0)

    assert first_positive("f1") == pytest.approx(0.5464, abs=1e-3)
    assert first_positive("g1") == pytest.approx(0.7385, abs=1e-3)
    assert first_positive("g2") == pytest.approx(0.791, abs=1e-3)
    rows = parse_csv(run(["repro", "fig2"], capsys)[1])
    assert list(rows[0]) == ["x", "f3", "g3"]
    assert len(rows) == 101


def test_repro_is_deterministic(capsys):
    a = run(["repro", "fig2"], capsys)[1]
    b = run(["repro", "fig2"], capsys)[1]
    assert a == b


def test_sample_command(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["sample", "--dims", "2,2,2", "--seed", "5", "--kind", "separable", "--partition", "1|2,3", "-o", str(a)], capsys)[0] == 0
    run(["sample", "--dims", "2,2,2", "--seed", "5", "--kind", "separable", "--partition", "1|2,3", "-o", str(b)], capsys)
    assert a.read_text() == b.read_text()
    code, out, _ = run(["analyze", str(a), "--alpha", "1", "--beta", "1"], capsys)
    assert code == 0
    assert "1|23" in out
