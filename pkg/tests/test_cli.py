import io
import json

from sixterm import cli, serialize as se


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run(*argv, "--format", "json")
    doc = json.loads(out) if out else None
    return code, doc


def test_catalog_list():
    code, doc = run_json("catalog", "list")
    assert code == cli.OK
    assert len(doc["result"]) == 8
    assert doc["exit_code"] == 0


def test_unknown_subcommand_is_usage():
    code, _, _ = run("frobnicate")
    assert code == cli.USAGE


def test_verify_exit_codes():
    assert run("verify", "dihedral", "--k", "8")[0] == cli.OK
    assert run("verify", "sigma", "--k", "4", "--m", "2", "--solve-homotopy", "2")[0] == cli.OK
    assert run("verify", "dihedral", "--k", "6")[0] == cli.USAGE


def test_verify_reports_homotopy():
    code, doc = run_json("verify", "dihedral", "--k", "8")
    assert code == 0
    assert doc["result"]["report"]["homotopy_ok"] is True
    assert doc["result"]["scalar"] == 2


def test_cohomology_command():
    code, doc = run_json("cohomology", "--group", "cyclic:4", "--coeff", "trivial:2", "--nmax", "3")
    assert code == 0
    assert doc["result"]["divisors"] == [[2], [2], [2], [2]]
    code, doc = run_json("cohomology", "--group", "dihedral:4", "--coeff", "trivial:2", "--nmax", "2", "--resolution", "bar")
    assert [len(d) for d in doc["result"]["divisors"]] == [1, 2, 3]


def test_resource_ceiling():
    code, doc = run_json("cohomology", "--group", "symmetric:4", "--coeff", "trivial:2", "--nmax", "3",
                         "--resolution", "bar", "--ceiling", "1000")
    assert code == cli.RESOURCE
    assert doc["exit_code"] == cli.RESOURCE


def test_degree_cap_is_resource():
    code, _, _ = run("cohomology", "--group", "cyclic:2", "--coeff", "trivial:2", "--nmax", "3", "--degree-cap", "2")
    assert code == cli.RESOURCE


def test_sixterm_variants():
    assert run("sixterm", "--quadruple", "cyclic", "--k", "2", "--coeff", "trivial", "--m", "2", "--n", "0")[0] == 0
    assert run("sixterm", "--variant", "sigma", "--group", "cyclic:4", "--m", "2", "--n", "0")[0] == 0
    assert run("sixterm", "--variant", "biquadratic", "--n", "0")[0] == 0
    assert run("sixterm", "--variant", "dihedral", "--k", "8", "--n", "0")[0] == 0


def test_sixterm_unmet_precondition_exits_one():
    code, out, _ = run("sixterm", "--variant", "cyclic_quotient", "--group", "cyclic:4", "--subgroup", "2",
                       "--coeff", "trivial", "--m", "4", "--n", "1")
    assert code == cli.FALSE
    assert "nonvanishing Bocksteins: G, H" in out


def test_export_import(tmp_path):
    path = tmp_path / "q.json"
    assert run("export", "cyclic", "--k", "3", "--out", str(path))[0] == 0
    assert run("import", str(path))[0] == 0


def test_corrupt_file_exits_four(tmp_path):
    path = tmp_path / "q.json"
    run("export", "cyclic", "--k", "3", "--out", str(path))
    doc = json.loads(path.read_text())
    doc["maps"][1]["matrix"][0][0] += 1
    path.write_text(json.dumps(doc))
    assert run("import", str(path))[0] == cli.CORRUPT


def test_schema_violation_exits_two(tmp_path):
    path = tmp_path / "q.json"
    path.write_text('{"format": "nope"}')
    assert run("import", str(path))[0] == cli.USAGE
    path.write_text("not json")
    assert run("import", str(path))[0] == cli.USAGE


def test_config_file(tmp_path, monkeypatch):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"degree_cap": 1}))
    monkeypatch.setenv(cli.CONFIG_ENV, str(cfg))
    assert run("cohomology", "--group", "cyclic:2", "--coeff", "trivial:2", "--nmax", "2")[0] == cli.RESOURCE
    cfg.write_text(json.dumps({"bogus": 1}))
    assert run("catalog", "list")[0] == cli.USAGE


def test_reports_validate():
    for argv in (("catalog", "list"), ("verify", "cyclic", "--k", "3"),
                 ("sixterm", "--variant", "biquadratic", "--n", "1")):
        code, doc = run_json(*argv)
        se.validate_report(doc)
        assert doc["exit_code"] == code


def test_output_file(tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = run("verify", "cyclic", "--k", "2", "--output", str(path))
    assert code == 0
    assert json.loads(path.read_text())["command"] == "verify"
