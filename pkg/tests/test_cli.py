import csv
import json
import subprocess
import sys

import pytest

from cantorhm.cli import main, parse_range
from cantorhm.colorings import c_min
from cantorhm.errors import UsageError


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def rows_csv(text):
    return list(csv.DictReader(text.splitlines()))


def test_parse_range():
    assert parse_range("3") == [3]
    assert parse_range("2..4") == [2, 3, 4]
    with pytest.raises(UsageError):
        parse_range("4..2")
    with pytest.raises(UsageError):
        parse_range("x")


def test_hm_cmin_range(capsys):
    code, out, _ = run(["hm", "--coloring", "cmin", "--depth", "2..4", "--format", "csv"], capsys)
    assert code == 0
    rows = rows_csv(out)
    assert [r["hm"] for r in rows] == ["2", "2", "4"]
    assert out.splitlines()[0] == "coloring,depth,points,hm,lower_bound"
    assert "\r" not in out


def test_hm_ars_and_table(tmp_path, capsys):
    code, out, _ = run(["hm", "--coloring", "ars", "--n", "3", "--format", "json"], capsys)
    assert code == 0 and json.loads(out)[0]["hm"] == 3
    table = tmp_path / "f.txt"
    table.write_text(c_min(4).to_table_text())
    for argv in (["hm", "--table", str(table)], ["hm", "--coloring", f"table:{table}"]):
        code, out, _ = run(argv + ["--format", "json"], capsys)
        assert code == 0 and json.loads(out)[0]["hm"] == 4


def test_hm_cap_row(capsys):
    code, out, _ = run(["hm", "--coloring", "cmax", "--depth", "3..4", "--cap", "10",
                        "--format", "csv"], capsys)
    assert code == 0
    assert [r["hm"] for r in rows_csv(out)] == ["2", "cap"]


def test_timing_column_is_opt_in(capsys):
    _, out, _ = run(["hm", "--depth", "2", "--format", "csv"], capsys)
    assert "seconds" not in out
    _, out, _ = run(["hm", "--depth", "2", "--format", "csv", "--timing"], capsys)
    assert out.splitlines()[0].endswith(",seconds")


def test_covlip_and_covfn(capsys):
    code, out, _ = run(["covlip", "--a-exp", "0", "--b-exp", "-1", "--depth", "1", "--format", "json"], capsys)
    assert code == 0 and json.loads(out)[0]["k"] == 2
    code, out, _ = run(["covfn", "--n", "1..5", "--format", "json"], capsys)
    assert [r["min_k"] for r in json.loads(out)] == [1, 2, 2, 3, 3]
    code, out, _ = run(["covfn", "--n", "7", "--format", "json"], capsys)
    assert json.loads(out)[0]["min_k"] == "cap"


def test_norm(capsys):
    code, out, _ = run(["norm", "--coloring", "cmax", "--depth", "4", "--format", "json"], capsys)
    assert code == 0 and json.loads(out)[0]["norm"] == 4


def test_perfect_is_seeded(capsys):
    argv = ["perfect", "--coloring", "cparity", "--depth", "6", "--samples", "5", "--format", "csv"]
    _, a, _ = run(argv + ["--seed", "7"], capsys)
    _, b, _ = run(argv + ["--seed", "7"], capsys)
    _, c, _ = run(argv + ["--seed", "8"], capsys)
    assert a == b and a != c
    rows = rows_csv(a)
    assert all(r["perfect"] == "1" and r["omega"] == r["chi"] == r["mirsky"] for r in rows)


def test_embed_and_rado(tmp_path, capsys):
    code, out, _ = run(["embed", "--graph", "C5", "--format", "json"], capsys)
    rows = json.loads(out)
    assert code == 0 and len(rows) == 5 and all(r["verified"] == 1 for r in rows)
    g = tmp_path / "g.txt"
    g.write_text("graph 3\ne 0 1\ne 1 2\n")
    code, out, _ = run(["embed", "--graph", str(g), "--format", "json"], capsys)
    assert code == 0 and all(r["verified"] == 1 for r in json.loads(out))
    code, out, _ = run(["rado", "--witness", "0;1", "--format", "json"], capsys)
    assert json.loads(out)[0]["witness"] == 5
    code, out, _ = run(["embed", "--graph", "C5", "--max-depth", "5"], capsys)
    assert code == 3


def test_certificates_verify(tmp_path, capsys):
    certs = tmp_path / "certs"
    assert main(["hm", "--coloring", "cmax", "--depth", "2..4", "--cert-dir", str(certs),
                 "--format", "csv"]) == 0
    assert main(["covlip", "--depth", "1..2", "--cert-dir", str(certs), "--format", "csv"]) == 0
    assert main(["covfn", "--n", "1..4", "--cert-dir", str(certs), "--format", "csv"]) == 0
    capsys.readouterr()
    files = sorted(certs.glob("*.json"))
    assert len(files) == 3 + 2 + 4
    for f in files:
        code, out, _ = run(["verify", str(f), "--format", "csv"], capsys)
        assert code == 0 and rows_csv(out)[0]["valid"] == "1"


def test_verify_rejects_tampering(tmp_path, capsys):
    certs = tmp_path / "certs"
    main(["hm", "--coloring", "cmin", "--depth", "4", "--cert-dir", str(certs)])
    main(["covlip", "--depth", "2", "--cert-dir", str(certs)])
    main(["covfn", "--n", "4", "--cert-dir", str(certs)])
    capsys.readouterr()
    hm = certs / "hm_cmin_4.json"
    doc = json.loads(hm.read_text())
    doc["sets"][0]["color"] ^= 1
    hm.write_text(json.dumps(doc))
    assert run(["verify", str(hm)], capsys)[0] == 1
    cl = certs / "covlip_0_-1_2.json"
    doc = json.loads(cl.read_text())
    doc["sets"].pop()
    doc["k"] -= 1
    cl.write_text(json.dumps(doc))
    assert run(["verify", str(cl)], capsys)[0] == 1
    cf = certs / "covfn_4.json"
    doc = json.loads(cf.read_text())
    doc["functions"][0] = [0, 0, 0, 0]
    cf.write_text(json.dumps(doc))
    assert run(["verify", str(cf)], capsys)[0] == 1


def test_usage_and_parse_errors(tmp_path, capsys):
    assert run(["hm", "--coloring", "nope"], capsys)[0] == 2
    assert run(["hm", "--depth", "3..1"], capsys)[0] == 2
    assert run(["bogus"], capsys)[0] == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("space binary:2\npair 00 01 1\npair 00 0x 1\n")
    code, _, err = run(["hm", "--table", str(bad)], capsys)
    assert code == 2 and "line 3" in err
    broken = tmp_path / "broken.json"
    broken.write_text('{"kind": "hm",\n "k": }')
    code, _, err = run(["verify", str(broken)], capsys)
    assert code == 2 and "line 2" in err
    assert run(["verify", str(tmp_path / "missing.json")], capsys)[0] == 2


def test_out_is_written_atomically(tmp_path, capsys):
    target = tmp_path / "sub" / "out.csv"
    assert main(["hm", "--depth", "2", "--format", "csv", "--out", str(target)]) == 0
    assert capsys.readouterr().out == ""
    assert target.read_bytes().startswith(b"coloring,depth")
    assert [p.name for p in target.parent.iterdir()] == ["out.csv"]


def test_table_format(capsys):
    _, out, _ = run(["hm", "--depth", "2"], capsys)
    lines = out.splitlines()
    assert lines[0].split() == ["coloring", "depth", "points", "hm", "lower_bound"]
    assert set(lines[1]) <= {"-", " "}


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "cantorhm", "covfn", "--n", "3", "--format", "csv"],
                         capture_output=True, text=True, check=True)
    assert res.stdout == "n,min_k,class_bound,construction\n3,2,2,3\n"
