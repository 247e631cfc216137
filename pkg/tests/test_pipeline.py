import json

import pytest

from tribrep import cli
from tribrep.errors import PrecisionError
from tribrep.pipeline import Config, load_config, run_pipeline


def test_config_file_and_flags(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("precision = 300\njobs = 2\nnmax-override = 90\n")
    config = load_config(path, jobs=1)
    assert (config.precision, config.jobs, config.nmax_override) == (300, 1, 90)
    path.write_text("colour = blue\n")
    with pytest.raises(ValueError):
        load_config(path)
    with pytest.raises(PrecisionError):
        Config(precision=40)


def test_certificate_contents(tmp_path):
    cert = run_pipeline("1", Config(out=tmp_path))
    body = cert.body
    assert cert.confirmed and body["schema_version"] == 1
    chain = body["bound_chain"]
    assert chain["chain"][1:] == ["104", "49"]
    assert int(chain["chain"][0]) <= 24 * 10**15
    assert chain["stage1"]["X0"] == str(7 * (int(chain["chain"][0]) - 1) + 28)
    assert body["search"]["solutions"] == []
    assert body["self_consistent"] and all(body["search_covers"][k] for k in ("bound_chain", "audited_chain"))
    locations = {d["location"] for d in body["published_discrepancies"]}
    assert "decay of the Gamma upper bound" in locations
    assert "minimal polynomial of c_alpha" in locations
    assert body["constants"]["minimal_polynomial"]["annihilating_polynomial"] == "44x^3+4x-1"
    path = cert.write(tmp_path)
    assert json.loads(path.read_text()) == body


def test_unshifted_certificate(tmp_path):
    cert = run_pipeline("bgl", Config(out=tmp_path))
    assert cert.confirmed
    assert cert.body["search"]["solutions"] == [{"n": 8, "k": 0, "l": 1, "m": 2, "d": 4}]


def test_cli_verify_writes_certificate(tmp_path, capsys):
    assert cli.main(["verify", "--equation", "2", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "certificate_eq2.json").exists()
    assert "102 -> 47" in capsys.readouterr().out


def test_cli_precision_failure(capsys):
    assert cli.main(["verify", "--equation", "1", "--precision", "50"]) == 2
    assert "stage constants" in capsys.readouterr().err
    assert cli.main(["constants", "--precision", "20"]) == 2


def test_cli_search_override(capsys):
    assert cli.main(["search", "--equation", "1", "--nmax-override", "100", "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["space"]["n_range"] == [1, 100] and report["solutions"] == []


@pytest.mark.parametrize("command", ["constants", "tables", "caps", "bound", "reduce"])
def test_cli_commands(command, capsys):
    assert cli.main([command, "--equation", "3", "--precision", "200"]) == 0
    assert capsys.readouterr().out.strip()


def test_cli_rejects_bad_equation(capsys):
    assert cli.main(["bound", "--equation", "bgl"]) == 2
    assert cli.main(["bound", "--equation", "7"]) == 2
