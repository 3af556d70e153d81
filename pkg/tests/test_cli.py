import json

import pytest

from suq2lc import cli, connection


def _write_metric(path, metric):
    path.write_text(json.dumps(metric.to_json()))
    return str(path)


def test_export_sigma_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(["--out", str(a), "export", "sigma"]) == 0
    assert cli.main(["--out", str(b), "export", "sigma"]) == 0
    assert a.read_bytes() == b.read_bytes()
    payload = json.loads(a.read_text())
    assert payload["rows"] == payload["cols"] == 16


def test_export_stdout(capsys):
    assert cli.main(["--out", "-", "export", "psym"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["rows"] == 16


def test_export_nabla0_respects_sign(tmp_path):
    p, m = tmp_path / "p.json", tmp_path / "m.json"
    assert cli.main(["--sign", "plus", "--out", str(p),
                     "export", "nabla0"]) == 0
    assert cli.main(["--sign", "minus", "--out", str(m),
                     "export", "nabla0"]) == 0
    assert p.read_bytes() != m.read_bytes()


def test_export_metric_basis(tmp_path):
    out = tmp_path / "basis.json"
    assert cli.main(["--out", str(out), "export", "metric-basis"]) == 0
    payload = json.loads(out.read_text())
    assert len(payload) == 10


def test_zero_t_is_config_error(tmp_path):
    assert cli.main(["--t", "0", "--out", str(tmp_path / "r.json"),
                     "export", "sigma"]) == 1


def test_bad_rational_is_config_error(tmp_path):
    assert cli.main(["--k", "three", "--out", str(tmp_path / "r.json"),
                     "export", "sigma"]) == 1


def test_paper_variant_fails_data_gate(tmp_path):
    assert cli.main(["--variant", "paper", "--out", str(tmp_path / "r.json"),
                     "export", "sigma"]) == 3


def test_lc_rejects_degenerate_metric(tmp_path, geo):
    basis = connection.metric_basis(geo)
    singular = next(m for m in basis
                    if connection.linalg.det(m.G).is_zero())
    path = _write_metric(tmp_path / "singular.json", singular)
    assert cli.main(["--out", str(tmp_path / "r.json"), "lc", path]) == 4


def test_lc_rejects_unreadable_metric(tmp_path):
    missing = str(tmp_path / "missing.json")
    assert cli.main(["--out", str(tmp_path / "r.json"), "lc", missing]) == 1


def test_lc_solves_example_metric(tmp_path, geo, example_metric):
    path = _write_metric(tmp_path / "metric.json", example_metric)
    out = tmp_path / "lc.json"
    assert cli.main(["--out", str(out), "lc", path]) == 0
    payload = json.loads(out.read_text())
    assert payload["verification"] == {"torsion_zero": True,
                                       "compatible": True}
    assert payload["sign"] == "plus"


def test_unknown_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 2
