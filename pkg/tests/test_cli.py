"""CLI: config round-trips, sweeps, caching, determinism."""

import json

import numpy as np
import pytest

import geoscat as gs
from geoscat import cli
from geoscat.presets import CurvePreset

RECT_INI = """
[geometry]
kind = rectangle
c1 = 2.0
c2 = 1.0

[junctions]
x1 = 0.2, 0.1
x2 = 1.8, 0.9

[coupling]
preset = natural
rho = 0.05

[greens]
lambda_max = 2000.0
tail_tolerance = 1e-2

[sweep]
variable = lambda
start = 10.0
stop = 60.0
count = 40
Vg = 0.0

[output]
path = t2.csv
threads = 2
"""

CURRENT_INI = """
[geometry]
kind = triangle

[junctions]
x1 = 0.1, 0.2
x2 = 1.0, 2.886751345948129

[coupling]
a = 0.0
c = 5.0
d = 0.0

[greens]
lambda_max = 3000.0
tail_tolerance = 1e-2

[quadrature]
abs_tol = 1e-7
rel_tol = 1e-5

[sweep]
variable = V
start = 0.0
stop = 2.0
count = 7
mu1 = 5.0
beta = 25.0
Vg = 0.0
conductance = false
"""

GENERAL_INI = """
[geometry]
kind = rectangle
c1 = 1.5
c2 = 1.1
shift = 2.5

[junctions]
x1 = 0.3, 0.4
x2 = 1.2, 0.8

[coupling]
a1 = 1.0
c1 = 1+2j
d1 = 0.5
a2 = 2.0
c2 = 0.7-0.1j
d2 = -0.25

[greens]
lambda_max = 500.0

[sweep]
variable = mu1
start = 1.0
stop = 9.0
count = 5
scale = linear
V = 1.0
beta = 10.0
"""


def test_config_round_trip_identity():
    for text in (RECT_INI, CURRENT_INI, GENERAL_INI):
        cfg = cli.parse_config(text)
        again = cli.parse_config(cli.serialize_config(cfg))
        assert again == cfg
        assert cli.serialize_config(again) == cli.serialize_config(cfg)


def test_config_parsing_details():
    cfg = cli.parse_config(GENERAL_INI)
    assert isinstance(cfg.geometry, gs.Shifted)
    assert cfg.geometry.shift == 2.5
    assert cfg.coupling.c1 == 1.0 + 2.0j
    assert not cfg.coupling.symmetric
    assert cfg.sweep.variable == "mu1"
    cfg2 = cli.parse_config(CURRENT_INI)
    assert cfg2.coupling.symmetric
    assert cfg2.quad.abs_tol == 1e-7


def test_config_errors(tmp_path):
    with pytest.raises(gs.ConfigError):
        cli.parse_config("[geometry]\nkind = pentagon\n")
    with pytest.raises(gs.ConfigError):
        cli.parse_config(str(tmp_path / "missing.ini"))


def test_cmd_modes_weyl_and_cache_hit(tmp_path, capsys):
    # the leading Weyl estimate carries a perimeter correction of relative
    # size P/(|G| sqrt(lambda_max)); 1% accuracy needs lambda_max >~ 1e5
    ini = tmp_path / "modes.ini"
    ini.write_text(RECT_INI.replace("lambda_max = 2000.0",
                                    "lambda_max = 1.5e5"))
    cfg = cli.parse_config(ini)
    summary = cli.cmd_modes(cfg, tmp_path / "cache", None, verbose=False)
    weyl = 2.0 * 1.5e5 / (4.0 * np.pi)
    assert abs(summary["n_modes"] - weyl) / weyl < 0.01
    # at lambda_max = 1e4 the deviation is the perimeter term, about 3%
    low = gs.enumerate_modes(gs.Rectangle(2.0, 1.0), 1e4)
    two_term = weyl / 15.0 - 6.0 * 100.0 / (4.0 * np.pi)
    assert abs(len(low) - two_term) / two_term < 0.005
    assert not summary["cache_hit"]
    again = cli.cmd_modes(cfg, tmp_path / "cache", None, verbose=False)
    assert again["cache_hit"]
    assert again["n_modes"] == summary["n_modes"]
    out = capsys.readouterr().out
    assert "cache hit" in out


def test_transmission_sweep_rows_and_bounds(tmp_path):
    cfg = cli.parse_config(RECT_INI)
    table, _ = cli.acquire_table(cfg.geometry, cfg.table_lambda_max,
                                 tmp_path / "cache")
    header, rows = cli.run_transmission_sweep(cfg, table, threads=2)
    assert header[0] == "lambda" and "diag_status" in header
    assert len(rows) == 40
    for row in rows:
        assert row[2] == "ok"
        assert 0.0 <= float(row[1]) <= 1.0 + 1e-8  # ballistic bound


def test_transmission_pole_rows_flagged_not_dropped(tmp_path):
    # aim one grid point exactly at an eigenvalue: flagged, row retained
    lam1 = 5.0 * np.pi ** 2 / 4.0
    text = RECT_INI.replace("start = 10.0", f"start = {lam1!r}")
    text = text.replace("stop = 60.0", f"stop = {lam1 + 40.0!r}")
    cfg = cli.parse_config(text)
    table, _ = cli.acquire_table(cfg.geometry, cfg.table_lambda_max,
                                 tmp_path / "cache")
    header, rows = cli.run_transmission_sweep(cfg, table, threads=1)
    assert len(rows) == 40
    assert rows[0][2] == "pole_guard"
    assert rows[0][1] == "nan"


def test_transmission_grid_mostly_on_poles_rejected(tmp_path):
    lam1 = 5.0 * np.pi ** 2 / 4.0
    text = RECT_INI.replace("start = 10.0", f"start = {lam1!r}")
    text = text.replace("stop = 60.0", f"stop = {lam1!r}")
    text = text.replace("count = 40", "count = 3")
    cfg = cli.parse_config(text)
    table, _ = cli.acquire_table(cfg.geometry, cfg.table_lambda_max,
                                 tmp_path / "cache")
    with pytest.raises(gs.ConfigError):
        cli.run_transmission_sweep(cfg, table, threads=1)


def test_current_sweep_columns_and_determinism(tmp_path):
    cfg = cli.parse_config(CURRENT_INI)
    table, _ = cli.acquire_table(cfg.geometry, cfg.table_lambda_max,
                                 tmp_path / "cache")
    header, rows1 = cli.run_current_sweep(cfg, table, threads=1)
    _, rows4 = cli.run_current_sweep(cfg, table, threads=4)
    assert rows1 == rows4
    assert header[:2] == ["V", "current"]
    assert "diag_evaluations" in header
    assert len(rows1) == 7
    currents = [float(r[1]) for r in rows1]
    assert currents[0] == 0.0
    assert all(c >= 0.0 for c in currents)
    statuses = {r[-1] for r in rows1}
    assert statuses <= {"ok", "quad_warning"}


def test_current_sweep_with_conductance_column(tmp_path):
    text = CURRENT_INI.replace("conductance = false", "conductance = true")
    cfg = cli.parse_config(text)
    table, _ = cli.acquire_table(cfg.geometry, cfg.table_lambda_max,
                                 tmp_path / "cache")
    header, rows = cli.run_current_sweep(cfg, table, threads=2)
    assert header[2] == "sigma"
    assert all(len(r) == len(header) for r in rows)


def test_cli_main_end_to_end(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    ini = tmp_path / "run.ini"
    ini.write_text(RECT_INI)
    code = cli.main(["transmission", "--config", str(ini),
                     "--cache", str(tmp_path / "c"),
                     "--out", str(tmp_path / "out.csv")])
    assert code == 0
    lines = (tmp_path / "out.csv").read_text().splitlines()
    assert len(lines) == 41
    assert lines[0].startswith("lambda,t2,")


def test_cli_unknown_figure_rejected(tmp_path):
    with pytest.raises(SystemExit):
        cli.main(["reproduce", "fig99", "--cache", str(tmp_path / "c")])


def test_reproduce_writes_manifest_and_curves(tmp_path, monkeypatch):
    tiny = {
        "figtest": (
            CurvePreset(name="figtest-a", kind="current",
                        geometry=gs.Triangle(), x1=gs.Junction(0.1, 0.2),
                        x2=gs.Junction(1.0, 2.886751345948129),
                        axis="V", start=0.0, stop=1.0, count=3,
                        fixed={"mu1": 3.0, "beta": 25.0, "Vg": 0.0}),
            CurvePreset(name="figtest-b", kind="transmission",
                        geometry=gs.Rectangle(2.0, 1.0),
                        x1=gs.Junction(0.2, 0.1), x2=gs.Junction(1.8, 0.9),
                        axis="lambda", start=5.0, stop=30.0, count=4,
                        fixed={"Vg": 0.0}),
        ),
    }
    monkeypatch.setattr(cli.presets, "FIGURES", tiny)
    out = cli.cmd_reproduce("figtest", tmp_path / "cache",
                            str(tmp_path / "fig"), threads=1, verbose=False)
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["figure"] == "figtest"
    assert len(manifest["curves"]) == 2
    for curve in manifest["curves"]:
        csv = out / curve["file"]
        assert csv.exists()
        assert len(csv.read_text().splitlines()) == curve["count"] + 1


def test_cache_env_var_override(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.CACHE_ENV_VAR, str(tmp_path / "envcache"))
    assert cli.resolve_cache_dir(None) == tmp_path / "envcache"
    assert cli.resolve_cache_dir(str(tmp_path / "flag")) == tmp_path / "flag"
    monkeypatch.delenv(cli.CACHE_ENV_VAR)
    assert cli.resolve_cache_dir(None) == cli.Path(cli.DEFAULT_CACHE_DIR)
