import csv
import io
import json
import subprocess
import sys

import pytest

from echembed import cli
from echembed.errors import InternalConsistencyError


def run(capsys, *argv):
    try:
        code = cli.main(list(argv))
    except SystemExit as exc:
        code = exc.code
    out = capsys.readouterr()
    return code, out.out, out.err


def rows_json(text):
    return json.loads(text)["rows"]


def rows_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_capacities_n23_prefix(capsys):
    code, out, _ = run(capsys, "capacities", "--a", "2", "--b", "3", "--count", "12", "--format", "csv")
    assert code == 0
    assert [r["value"] for r in rows_csv(out)] == "0 2 3 4 5 6 6 7 8 8 9 9".split()
    assert out.splitlines()[0] == "index,value"


@pytest.mark.parametrize(
    "a,b,count,expected",
    [("1", "1", "3", ["0", "1", "1"]), ("1/2", "3/4", "4", ["0", "1/2", "3/4", "1"])],
)
def test_capacities_examples(capsys, a, b, count, expected):
    code, out, _ = run(capsys, "capacities", "--a", a, "--b", b, "--count", count)
    assert code == 0
    assert [r["value"] for r in rows_json(out)] == expected


@pytest.mark.parametrize("bad", ["0.5", "1/0", "x", "1/2/3"])
def test_malformed_rational_exits_2(capsys, bad):
    code, out, err = run(capsys, "capacities", "--a", bad, "--b", "3")
    assert code == 2
    assert out == ""
    assert err


def test_nonpositive_parameter_exits_2(capsys):
    code, out, err = run(capsys, "capacities", "--a", "0", "--b", "3")
    assert code == 2
    assert "error" in err


@pytest.mark.parametrize(
    "src,dst,code,verdict,witness",
    [("1,4", "2,2", 0, "Embeds", None), ("1,1", "1,1", 0, "Embeds", None), ("2,3", "1,6", 1, "Obstructed", 1)],
)
def test_decide(capsys, src, dst, code, verdict, witness):
    got, out, _ = run(capsys, "decide", "--src", src, "--dst", dst)
    assert got == code
    (row,) = rows_json(out)
    assert (row["verdict"], row["witness"], row["scale"]) == (verdict, witness, 1)


def test_decide_rational_scale(capsys):
    code, out, _ = run(capsys, "decide", "--src", "1,7", "--dst", "79/30,79/30")
    assert code == 1
    (row,) = rows_json(out)
    assert row["scale"] == 30 and row["frame"] == "30,210,79,79"


def test_decide_usage(capsys):
    assert run(capsys, "decide", "--src", "1,2,3", "--dst", "1,1")[0] == 2
    assert run(capsys, "decide", "--src", "1,2")[0] == 2


@pytest.mark.parametrize("method", ["oracle", "capacities", "series", "recurrence", "epsilon"])
def test_counts_methods(capsys, method):
    code, out, _ = run(capsys, "counts", "--a", "2", "--b", "3", "--n", "12", "--method", method)
    assert code == 0
    assert rows_json(out) == [{"n": 12, "count": 19}]


def test_counts_all(capsys):
    code, out, _ = run(capsys, "counts", "--a", "1", "--b", "1", "--n", "3", "--all")
    assert [r["count"] for r in rows_json(out)] == [1, 3, 6, 10]


def test_counts_needs_integers_for_series(capsys):
    code, _, err = run(capsys, "counts", "--a", "1/2", "--b", "1", "--n", "3", "--method", "series")
    assert code == 2 and "integer" in err


def test_gf(capsys):
    code, out, _ = run(capsys, "gf", "--a", "1", "--b", "4", "--diff", "2,2", "--count", "8")
    assert code == 0
    assert [r["coefficient"] for r in rows_json(out)] == [0, 1, 0, 1, 0, 2, 0, 2]
    code, out, _ = run(capsys, "gf", "--a", "2", "--b", "3", "--epsilon")
    rows = rows_json(out)
    assert [r["epsilon"] for r in rows] == [1, 0, 1, 1, 1, 1]


def test_capacity_fn(capsys):
    code, out, _ = run(capsys, "capacity-fn", "--a", "8", "--tol", "1/1000")
    assert code == 0
    (row,) = rows_json(out)
    assert row["exact"] == "17/6"
    code, out, _ = run(capsys, "capacity-fn", "--sweep", "2:4:1/2", "--tol", "1/100", "--format", "csv")
    rows = rows_csv(out)
    assert out.splitlines()[0] == "a,lower,upper,exact"
    assert [r["a"] for r in rows] == ["2", "5/2", "3", "7/2", "4"]
    assert rows[-1]["exact"] == "2"


def test_capacity_fn_usage(capsys):
    assert run(capsys, "capacity-fn", "--tol", "1/10")[0] == 2
    assert run(capsys, "capacity-fn", "--a", "3", "--sweep", "1:2:1")[0] == 2
    assert run(capsys, "capacity-fn", "--a", "3", "--tol", "0")[0] == 2
    assert run(capsys, "capacity-fn", "--sweep", "3:2:1")[0] == 2


def test_verify_lemma(capsys):
    code, out, _ = run(capsys, "verify-lemma", "--a", "3", "--b", "1", "--c", "2", "--d", "2", "--grid", "4")
    assert code == 0
    assert set(rows_json(out)[0]) == {"z", "left", "right", "margin", "error"}
    code, _, err = run(capsys, "verify-lemma", "--a", "5", "--b", "1", "--c", "2", "--d", "2")
    assert code == 1 and err == ""
    assert run(capsys, "verify-lemma", "--a", "1", "--b", "3", "--c", "2", "--d", "2")[0] == 2


def test_fill_check(capsys):
    code, out, _ = run(capsys, "fill-check", "--n", "5")
    assert code == 0
    assert rows_json(out)[0]["verdict"] == "Embeds"
    code, out, _ = run(capsys, "fill-check", "--n", "3", "--convolution", "50")
    row = rows_json(out)[0]
    assert (row["convolution_rows"], row["convolution_holds"]) == (51, True)
    assert run(capsys, "fill-check", "--n", "1", "--convolution", "5")[0] == 2


def test_internal_error_exits_3(capsys, monkeypatch):
    def boom(*_):
        raise InternalConsistencyError("forced")

    monkeypatch.setattr(cli.decide, "embeds", boom)
    code, out, err = run(capsys, "decide", "--src", "1,1", "--dst", "1,1")
    assert code == 3 and out == "" and "forced" in err


def test_size_limit_exits_4(capsys):
    code, out, err = run(capsys, "decide", "--src", "101,2369", "--dst", "103,2323")
    assert code == 4 and out == ""
    assert "common period" in err


COMMANDS = [
    ["capacities", "--a", "1/2", "--b", "3/4", "--count", "7"],
    ["decide", "--src", "1,5", "--dst", "2,2"],
    ["counts", "--a", "3", "--b", "5", "--n", "20", "--all"],
    ["gf", "--a", "2", "--b", "3", "--diff", "1,6", "--count", "10"],
    ["capacity-fn", "--sweep", "5:7:1", "--tol", "1/100"],
    ["verify-lemma", "--a", "5", "--b", "1", "--c", "2", "--d", "2", "--grid", "3"],
    ["fill-check", "--n", "4", "--convolution", "20"],
]


@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: a[0])
def test_json_round_trip_and_determinism(capsys, argv):
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    assert json.dumps(json.loads(first), indent=2) + "\n" == first


def _same(json_value, csv_value):
    if json_value is None:
        return csv_value == ""
    return str(json_value) == csv_value


@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: a[0])
def test_csv_and_json_carry_the_same_data(capsys, argv):
    _, js, _ = run(capsys, *argv, "--format", "json")
    _, cs, _ = run(capsys, *argv, "--format", "csv")
    jrows, crows = rows_json(js), rows_csv(cs)
    assert len(jrows) == len(crows)
    for j, c in zip(jrows, crows):
        assert list(j) == list(c)
        assert all(_same(j[k], c[k]) for k in j), (j, c)


def test_out_writes_file(capsys, tmp_path):
    target = tmp_path / "n23.csv"
    code, out, _ = run(capsys, "capacities", "--a", "2", "--b", "3", "--format", "csv", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().splitlines()[1:4] == ["0,0", "1,2", "2,3"]


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "echembed", "counts", "--a", "2", "--b", "3", "--n", "6", "--format", "csv"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout == "n,count\n6,7\n"
