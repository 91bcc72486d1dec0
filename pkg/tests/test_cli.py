"""Command-line surface: outputs, schemas and the exit-code contract."""

import json

import pytest

from tourflag.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_enumerate_count_only(capsys):
    code, out, _ = run(capsys, "enumerate", "5", "--count-only")
    assert code == 0 and out.strip() == "12"


def test_enumerate_names_size4(capsys):
    code, out, _ = run(capsys, "enumerate", "4")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 4
    names = {line.split("\t")[1] for line in lines if "\t" in line}
    assert names == {"Tr_4", "R4", "W4", "L4"}


def test_enumerate_deterministic(capsys):
    _, out1, _ = run(capsys, "enumerate", "6")
    _, out2, _ = run(capsys, "enumerate", "6")
    assert out1 == out2


def test_enumerate_too_large_exits_3(capsys):
    code, _, err = run(capsys, "enumerate", "9")
    assert code == 3 and "capability" in err


def test_enumerate_json_round_trip(capsys):
    code, out, _ = run(capsys, "enumerate", "5", "--json")
    payload = json.loads(out)
    assert payload["count"] == 12
    assert len(payload["tournaments"]) == 12
    assert payload["tournaments"][0]["encoding"].startswith("5:")


def test_density_transitive_host(capsys):
    code, out, _ = run(capsys, "density", "C3", "5:1111111111")
    assert code == 0 and out.startswith("0 ")


def test_density_carousel_host(capsys):
    code, out, _ = run(capsys, "density", "T5^12", "carousel:21", "--json")
    payload = json.loads(out)
    assert code == 0
    assert payload["density"] == "33/323"
    assert abs(payload["decimal"] - 1 / 16) < 0.05


def test_density_triangular_host(capsys):
    code, out, _ = run(capsys, "density", "T5^9", "triangular:27", "--json")
    payload = json.loads(out)
    assert code == 0
    assert payload["density"] == "261/598"
    assert abs(payload["decimal"] - 3 / 8) < 0.07


def test_density_bad_encoding_exits_2(capsys):
    code, _, err = run(capsys, "density", "C3", "5:10")
    assert code == 2 and err


def test_verify_t5_7_with_tables(capsys, repo_root):
    code, out, _ = run(
        capsys, "verify", str(repo_root / "certs" / "t5_7.json"), "--tables", "--charpoly"
    )
    assert code == 0
    assert "claimed bound 5/16" in out
    assert "RESULT: pass" in out


def test_verify_bare_name_resolves_builtin(capsys, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)  # no ./certs here: falls back to package data
    code, out, _ = run(capsys, "verify", "t5_9")
    assert code == 0 and "claimed bound 3/8" in out


def test_verify_json_schema(capsys):
    code, out, _ = run(capsys, "verify", "t5_12", "--tables", "--json")
    payload = json.loads(out)
    assert code == 0 and payload["ok"] is True
    assert payload["claimed_bound"] == "1/16"
    assert payload["slack_table"]["T5^11"] == "-39/80"


def test_verify_broken_certificate_exits_1(capsys, tmp_path, repo_root):
    data = json.loads((repo_root / "certs" / "t5_12.json").read_text())
    data["blocks"][0]["Q"][0][0] = "0"
    broken = tmp_path / "t5_12_broken.json"
    broken.write_text(json.dumps(data))
    code, out, _ = run(capsys, "verify", str(broken))
    assert code == 1 and "FAIL" in out


def test_verify_malformed_file_exits_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    code, _, err = run(capsys, "verify", str(bad))
    assert code == 2 and "error" in err


def test_verify_missing_file_exits_2(capsys):
    code, _, err = run(capsys, "verify", "no_such_cert")
    assert code == 2


def test_decompose_carousel_witness(capsys):
    code, out, _ = run(capsys, "decompose", "carousel:5")
    payload = json.loads(out)
    assert code == 0
    assert payload["decomposable"] is False
    assert payload["witness"]["pattern"] == "T5^12"


def test_decompose_triangular_tree(capsys):
    code, out, _ = run(capsys, "decompose", "triangular:9", "--json")
    payload = json.loads(out)
    assert code == 0 and payload["decomposable"]
    sizes = sorted(len(payload["tree"][part]["vertices"]) for part in "ABC")
    assert sizes == [3, 3, 3]


def test_decompose_transitive_chain(capsys):
    code, out, _ = run(capsys, "decompose", "3:111", "--json")
    payload = json.loads(out)
    assert code == 0 and payload["decomposable"]
    tree = payload["tree"]
    assert len(tree["A"]["vertices"]) == 1 and tree["C"] is None


def test_decompose_bad_encoding_exits_2(capsys):
    code, _, err = run(capsys, "decompose", "3:9")
    assert code == 2


def test_limits_carousel(capsys):
    code, out, _ = run(capsys, "limits", "carousel", "T5^7", "--max-size", "21", "--json")
    payload = json.loads(out)
    assert code == 0
    assert payload["limit"] == "5/16"
    assert [row["size"] for row in payload["rows"]] == [11, 21]
    assert payload["rows"][-1]["gap"] < 0.05


def test_limits_random_reports_stderr(capsys):
    code, out, _ = run(
        capsys, "limits", "random", "T5^8", "--max-size", "80", "--seed", "7",
        "--samples", "4000", "--json",
    )
    payload = json.loads(out)
    assert code == 0
    row = payload["rows"][0]
    assert row["samples"] == 4000 and row["stderr"] > 0
    assert abs(row["decimal"] - 15 / 128) < 0.03


def test_limits_bad_family_usage_error(capsys):
    with pytest.raises(SystemExit):
        main(["limits", "ladder", "T5^8"])
