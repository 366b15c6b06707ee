import json
import os

import numpy as np
import pytest

from dressedlat.cli.config import parse_config
from dressedlat.cli.main import main, run
from dressedlat.errors import ConfigError
from dressedlat.io import read_csv, sha256
from dressedlat.lattice import cell_flags

from conftest import CONFIGS

BASE = """
[species]
preset = "li6"

[field]
variant = "linear"
b = "200 G/cm"

[comb]
frequencies = ["2 kHz", "4 kHz", "8 kHz"]
rabi = "700 Hz"

[grid]
z_min = "0 um"
z_max = "0.6 um"
points = 1001
"""


def test_gradient_resolves_to_si():
    cfg = parse_config(BASE)
    assert cfg.field.b == 2.0
    assert cfg.resolved["field"]["b_T_per_m"] == 2.0


def test_default_eta():
    assert parse_config(BASE).analysis.eta == 10


def test_default_output_dir_from_env(monkeypatch):
    monkeypatch.setenv("DRESSEDLAT_OUT", "/tmp/somewhere")
    assert parse_config(BASE).output.directory == "/tmp/somewhere"


def test_missing_unit():
    with pytest.raises(ConfigError, match="unit"):
        parse_config(BASE.replace('"200 G/cm"', "200"))


def test_unknown_key():
    with pytest.raises(ConfigError, match="unknown key"):
        parse_config(BASE.replace('rabi = "700 Hz"', 'rabi = "700 Hz"\ncolour = "red"'))


def test_unknown_section():
    with pytest.raises(ConfigError, match="unknown key"):
        parse_config(BASE + "\n[extras]\n")


def test_unsorted_comb_names_entries():
    with pytest.raises(ConfigError, match=r"#2 \(8 kHz\) >= #3 \(4 kHz\)"):
        parse_config(BASE.replace('"2 kHz", "4 kHz", "8 kHz"', '"2 kHz", "8 kHz", "4 kHz"'))


def test_negative_gradient():
    with pytest.raises(ConfigError, match="non-negative"):
        parse_config(BASE.replace('"200 G/cm"', '"-200 G/cm"'))


def test_syntax_error_reports_line():
    with pytest.raises(ConfigError, match="line 4"):
        parse_config("[species]\npreset = 'li6'\n\nb = = 3\n")


def test_potentials_csv_structure(tmp_path):
    text = open(os.path.join(CONFIGS, "fig1.toml")).read()
    m = run("potentials", text, out=str(tmp_path))
    _, cols, data = read_csv(tmp_path / "potentials.csv")
    assert cols == ["z_m", "region", "branch_1_J", "branch_2_J"]
    assert np.all(np.diff(data[:, 0]) > 0)
    names = {f["name"] for f in m.files}
    assert {"potentials.csv", "local.csv"} <= names
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["constants"] == "CODATA-2018"
    for f in manifest["files"]:
        assert f["sha256"] == sha256(tmp_path / f["name"])


def test_regime_csv_reverifies(tmp_path):
    text = open(os.path.join(CONFIGS, "fig4.toml")).read().replace("resolution = 60", "resolution = 12")
    cfg = parse_config(text)
    run("regime", cfg, out=str(tmp_path), formats=["csv"])
    _, cols, data = read_csv(tmp_path / "regime.csv")
    assert len(data) == 144
    for O, d, adi, deep, bloch, *_ in data:
        flags = cell_flags(cfg.species, O, d, cfg.field.b, cfg.manifold.g_F, cfg.analysis.acceleration, 10.0)
        assert tuple(bool(x) for x in (adi, deep, bloch)) == flags


def test_missing_section_is_config_error(tmp_path):
    with pytest.raises(ConfigError):
        run("shaping", BASE, out=str(tmp_path))


def test_exit_codes(tmp_path, capsys):
    good = tmp_path / "good.toml"
    good.write_text(BASE)
    assert main(["potentials", "--config", str(good), "--out", str(tmp_path / "o")]) == 0
    bad = tmp_path / "bad.toml"
    bad.write_text(BASE.replace('"200 G/cm"', "200"))
    assert main(["potentials", "--config", str(bad), "--out", str(tmp_path / "o")]) == 1
    coarse = tmp_path / "coarse.toml"
    coarse.write_text(BASE.replace("points = 1001", "points = 12"))
    assert main(["potentials", "--config", str(coarse), "--out", str(tmp_path / "o")]) == 2
    assert main(["potentials", "--config", str(tmp_path / "missing.toml")]) == 3
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["potentials", "--config", str(good), "--out", str(blocker / "sub")]) == 3
    out = capsys.readouterr().out
    assert '"parameters"' in out and '"files"' in out


def test_format_selection(tmp_path):
    m = run("potentials", BASE, out=str(tmp_path), formats=["csv"])
    assert all(f["kind"] == "csv" for f in m.files)
    assert not list(tmp_path.glob("*.svg"))
