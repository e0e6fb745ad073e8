import csv
import io
import json
import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

from cli_corpus import CORPUS, X2, argv_for
from hmconvex.cli import CSV_COLUMNS, OUTPUT_DIR_ENV, exit_code, main

VERDICTS = ["Holds", "Violated", "Inconclusive", "Error"]


def write(tmp_path, cfg, name="case.json"):
    p = tmp_path / name
    p.write_text(json.dumps(cfg), encoding="utf-8")
    return p


def base_cfg(**kw):
    cfg = {"alpha": 1.0, "m": 1.0, "h": {"kind": "power_alpha"}, "G": X2, "interval": [0.0, 2.0],
           "theorem": "hh_hm"}
    cfg.update(kw)
    return cfg


@pytest.mark.parametrize("entry", CORPUS, ids=[e.name for e in CORPUS])
def test_corpus_exit_codes(entry, tmp_path):
    path = entry.write(tmp_path)
    out = tmp_path / "out"
    assert main(argv_for(entry, path, out)) == entry.expected


@given(st.lists(st.sampled_from(VERDICTS), max_size=8))
def test_exit_code_precedence(vs):
    code = exit_code(vs)
    if "Violated" in vs:
        assert code == 2
    elif "Error" in vs:
        assert code == 1
    elif "Inconclusive" in vs:
        assert code == 3
    else:
        assert code == 0


@pytest.mark.parametrize("entry", [e for e in CORPUS if e.command == "verify" and e.expected in (0, 2)],
                         ids=lambda e: e.name)
def test_json_verdicts_agree_with_exit_code(entry, tmp_path):
    path = entry.write(tmp_path)
    out = tmp_path / "r.json"
    code = main(argv_for(entry, path, out))
    verdicts = [r["verdict"] for r in json.loads(out.read_text())]
    assert exit_code(verdicts) == code


def test_verify_is_deterministic(tmp_path):
    cfg = write(tmp_path, base_cfg(alpha=0.6, m=0.8, theorem="all", weight=X2))
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["verify", str(cfg), "--out", str(a), "--force"])
    main(["verify", str(cfg), "--out", str(b), "--force"])
    assert a.read_bytes() == b.read_bytes()


def test_sweep_workers_match_serial(tmp_path):
    cfg = write(tmp_path, base_cfg())
    axes = ["--axis", "alpha=0.5,0.75,1.0", "--axis", "m=0.5,1.0"]
    one, two = tmp_path / "1.csv", tmp_path / "2.csv"
    assert main(["sweep", str(cfg), "--out", str(one), *axes]) == 0
    assert main(["sweep", str(cfg), "--out", str(two), "--workers", "2", *axes]) == 0
    assert one.read_bytes() == two.read_bytes()


def test_sweep_csv_shape(tmp_path):
    cfg = write(tmp_path, base_cfg())
    out = tmp_path / "s.csv"
    main(["sweep", str(cfg), "--out", str(out), "--axis", "alpha=0.5,1.0", "--axis", "m=0.9"])
    rows = list(csv.reader(io.StringIO(out.read_text())))
    assert rows[0] == CSV_COLUMNS
    assert len(rows) == 3
    body = [dict(zip(rows[0], r)) for r in rows[1:]]
    assert [float(r["alpha"]) for r in body] == [0.5, 1.0]
    assert all(r["verdict"] == "Holds" and len(r["side_bases"].split(";")) == 3 for r in body)


def test_sweep_bad_axis_is_config_error(tmp_path):
    cfg = write(tmp_path, base_cfg())
    assert main(["sweep", str(cfg), "--axis", "beta=1,2"]) == 1
    assert main(["sweep", str(cfg), "--axis", "alpha"]) == 1


def test_sweep_invalid_cell_becomes_error_row(tmp_path):
    cfg = write(tmp_path, base_cfg())
    out = tmp_path / "s.csv"
    assert main(["sweep", str(cfg), "--out", str(out), "--axis", "alpha=0.5,1.5"]) == 1
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert [r["verdict"] for r in rows] == ["Holds", "Error"]


def test_output_precedence(tmp_path, monkeypatch, capsys):
    envdir = tmp_path / "env"
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(envdir))
    cfg = write(tmp_path, base_cfg())
    assert main(["verify", str(cfg)]) == 0
    assert (envdir / "case.json").exists()
    from_cfg = tmp_path / "cfg_out.json"
    cfg2 = write(tmp_path, base_cfg(output=str(from_cfg)), name="case2.json")
    main(["verify", str(cfg2)])
    assert from_cfg.exists() and not (envdir / "case2.json").exists()
    explicit = tmp_path / "explicit.json"
    main(["verify", str(cfg2), "--out", str(explicit)])
    assert explicit.exists()
    monkeypatch.delenv(OUTPUT_DIR_ENV)
    capsys.readouterr()
    main(["verify", str(cfg)])
    assert json.loads(capsys.readouterr().out)[0]["verdict"] == "Holds"


def test_toml_config(tmp_path, capsys):
    p = tmp_path / "case.toml"
    p.write_text('alpha = 1.0\nm = 1.0\ninterval = [0.0, 2.0]\ntheorem = "hh_hm"\n'
                 '[h]\nkind = "power_alpha"\n[G]\nkind = "monomial_series"\nterms = [[2, 1.0]]\n')
    assert main(["verify", str(p)]) == 0
    rep = json.loads(capsys.readouterr().out)[0]
    assert [s["base"] for s in rep["sides"]] == pytest.approx([1.0, 4 / 3, 2.0])


def test_config_errors_name_the_field(tmp_path, capsys):
    cfg = write(tmp_path, base_cfg(alpha=1.5))
    assert main(["verify", str(cfg)]) == 1
    assert "alpha" in capsys.readouterr().err


def test_quadrature_json_output(tmp_path):
    cfg = write(tmp_path, base_cfg(interval=[0.0, 1.0], quadrature={"partition": [0.0, 0.5, 1.0]}))
    out = tmp_path / "q.json"
    assert main(["quadrature", str(cfg), "--out", str(out)]) == 0
    js = json.loads(out.read_text())
    assert js["value"] == pytest.approx(0.375) and js["certified_bound"] == pytest.approx(0.125)


def test_module_entry_point(tmp_path):
    cfg = write(tmp_path, base_cfg())
    proc = subprocess.run([sys.executable, "-m", "hmconvex", "verify", str(cfg)], capture_output=True,
                          text=True, timeout=120)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)[0]["theorem"] == "hh_hm"
