import json

import pytest
from hypothesis import given, strategies as st
from mpmath import mp, mpf

from spiked_moments.cli import main
from spiked_moments.numerics import big
from spiked_moments.records import RunRecord, csv_text, decimal, hexify, parse_csv, write_atomic


@given(st.integers(-10**40, 10**40), st.integers(-400, 400))
def test_hex_roundtrip_is_exact(man, exp):
    x = mp.ldexp(mpf(man), exp)
    assert big(hexify(x)) == x


def test_output_keeps_precision_beyond_ambient():
    x = mpf(1) / 3
    expected_hex, expected_text = hexify(x), decimal(x, 40)
    with mp.workprec(53):
        assert hexify(x) == expected_hex
        assert decimal(x, 40) == expected_text == "0." + "3" * 40


def test_hex_of_zero_and_negative():
    assert hexify(0) == "0x0p0"
    assert big(hexify(mpf("-2.5"))) == mpf("-2.5")


def test_csv_roundtrip_keeps_twenty_digits():
    x = mpf(2) / 3
    text = csv_text(["k", "x", "empty"], [[1, x, None]])
    header, rows = parse_csv(text)
    assert header == ["k", "x", "empty"]
    assert rows[0][0] == 1 and rows[0][2] is None
    assert abs(rows[0][1] - x) < mpf(10) ** -19
    assert decimal(x) == "0.66666666666666666667"


def test_record_flattens_sequences_and_scan():
    rec = RunRecord("emm", mpf(1), "phi", 3, 0, 10, 320, (mpf(1), mpf(2)),
                    {"E_L": mpf("1.5"), "roots": [mpf(1), mpf(2)]}, 1.23456)
    flat = rec.flat()
    assert flat["scan_lo"] == hexify(1) and flat["result_roots_1"] == hexify(2)
    assert flat["wall_time"] == 1.235
    assert json.loads(rec.to_json())["result_E_L"] == hexify(mpf("1.5"))


def test_write_atomic_replaces_file(tmp_path):
    target = tmp_path / "out.csv"
    target.write_text("old")
    write_atomic(str(target), "new\n")
    assert target.read_text() == "new\n"
    assert [p.name for p in tmp_path.iterdir()] == ["out.csv"]


EMM_ARGS = ["emm", "--rep", "phi", "--sigma", "3", "--b", "1", "--pmax", "10"]


def test_emm_json_is_deterministic_apart_from_timing(tmp_path):
    outs = []
    for k in range(2):
        path = tmp_path / f"r{k}.json"
        assert main(EMM_ARGS + ["--format", "json", "--out", str(path)]) == 0
        rec = json.loads(path.read_text())
        rec.pop("wall_time")
        outs.append(rec)
    assert outs[0] == outs[1]
    mantissa = outs[0]["result_E_L"].split("p")[0]
    assert int(mantissa, 16).bit_length() > 53
    assert big(outs[0]["result_E_L"]) < mpf("1.0331033") < big(outs[0]["result_E_U"])


def test_emm_csv_to_stdout(capsys):
    assert main(EMM_ARGS) == 0
    header, rows = parse_csv(capsys.readouterr().out)
    assert header == ["method", "b", "state", "order", "E_L", "E_U"]
    assert rows[0][4] < rows[0][5]


@pytest.mark.parametrize("argv", [
    ["emm", "--rep", "psi2", "--sigma", "0", "--b", "1", "--pmax", "10"],
    ["emm", "--rep", "phi", "--sigma", "1", "--b", "1", "--pmax", "10"],
    ["emm", "--rep", "phi", "--sigma", "3", "--b", "1"],
    ["emm", "--rep", "phi", "--sigma", "3", "--b", "-1", "--pmax", "10"],
    ["emm", "--rep", "phi", "--sigma", "3", "--b", "1", "--pmax", "10", "--precision", "64"],
    ["oppq", "--mode", "am", "--b", "0:0.5:1"],
    ["oppq", "--mode", "bm-bounds", "--b", "0.5", "--n", "10"],
    ["nonsense"],
])
def test_usage_errors_exit_two(argv):
    assert main(argv) == 2


def test_empty_window_exits_one():
    assert main(EMM_ARGS + ["--scan", "1.5,1.9"]) == 1


def test_config_file_supplies_defaults(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\npmax = 10\nformat = json\n")
    assert main(["--config", str(cfg)] + EMM_ARGS[:-2]) == 0
    assert json.loads(capsys.readouterr().out)["order"] == 10


def test_bad_config_key_is_usage_error(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("colour = blue\n")
    assert main(["--config", str(cfg)] + EMM_ARGS) == 2


def test_precision_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("SPIKED_PRECISION", "400")
    assert main(EMM_ARGS + ["--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["precision_bits"] == 400


def test_flag_beats_environment(monkeypatch, capsys):
    monkeypatch.setenv("SPIKED_PRECISION", "400")
    assert main(EMM_ARGS + ["--format", "json", "--precision", "256"]) == 0
    assert json.loads(capsys.readouterr().out)["precision_bits"] == 256


def test_oppq_am_at_low_order(capsys):
    assert main(["oppq", "--mode", "am", "--b", "0", "--n", "20", "--scan", "1.5,4.5"]) == 0
    _, rows = parse_csv(capsys.readouterr().out)
    assert [abs(r[1] - e) < mpf(10) ** -12 for r, e in zip(rows, (2, 4))] == [True, True]


def test_oppq_reconstruct_writes_artifact(tmp_path, capsys):
    data = tmp_path / "psi.csv"
    argv = ["oppq", "--mode", "reconstruct", "--b", "0", "--n", "20", "--nmax", "10",
            "--states", "0", "--grid", "0.1:4:20", "--data", str(data)]
    assert main(argv) == 0
    header, rows = parse_csv(data.read_text())
    assert header == ["chi", "V", "psi_0"] and len(rows) == 20
    assert all(r[2] > 0 for r in rows)


def test_verify_rejects_unmatched_rows():
    assert main(["verify", "T5", "--rows", "N=999"]) == 2
