"""Command-line interface: formats, precedence, exit codes, determinism."""

from __future__ import annotations

import json
import math
import os
from pathlib import Path

import pytest

import twisted_emission.specfun
from twisted_emission.cli import main

THETA_PW_FULL = 1.5307856524409076


def _read_csv(path: Path) -> tuple[dict[str, str], list[str], list[list[float]]]:
    config: dict[str, str] = {}
    header: list[str] = []
    rows: list[list[float]] = []
    for line in path.read_text().splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition("=")
            config[key] = value
        elif not header:
            header = line.split(",")
        else:
            rows.append([float(tok) for tok in line.split(",")])
    return config, header, rows


def test_scan_smoke_csv(tmp_path: Path, monkeypatch, capsys) -> None:
    monkeypatch.chdir(tmp_path)
    rc = main(["scan", "--channel", "planewave", "--grid", "1.52:1.54:5"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "theta_pw: 1.5307856524409076" in out
    assert "wrote: scan.csv" in out
    config, header, rows = _read_csv(tmp_path / "scan.csv")
    assert header == ["theta_p", "density_raw", "density_normalized"]
    assert len(rows) == 5
    assert config["channel"] == "planewave"
    assert config["grid"].endswith(":5")
    normalized = [r[2] for r in rows]
    assert max(normalized) == 1.0


def test_scan_json_structure(tmp_path: Path, monkeypatch) -> None:
    monkeypatch.chdir(tmp_path)
    rc = main(["scan", "--format", "json", "--grid", "1.4:1.7:40", "--out", "s.json"])
    assert rc == 0
    doc = json.loads((tmp_path / "s.json").read_text())
    assert set(doc) == {"config", "columns", "peaks", "theta_pw"}
    assert doc["theta_pw"] == pytest.approx(THETA_PW_FULL, abs=1e-15)
    assert set(doc["columns"]) == {"theta_p", "density_raw", "density_normalized"}
    assert len(doc["columns"]["theta_p"]) == 40


def test_csv_floats_round_trip(tmp_path: Path, monkeypatch) -> None:
    # 17 significant digits must reproduce the binary doubles exactly.
    monkeypatch.chdir(tmp_path)
    args = ["--grid", "1.5:1.56:17"]
    assert main(["scan", "--out", "a.csv", *args]) == 0
    assert main(["scan", "--format", "json", "--out", "a.json", *args]) == 0
    _, _, rows = _read_csv(tmp_path / "a.csv")
    doc = json.loads((tmp_path / "a.json").read_text())
    for i, row in enumerate(rows):
        assert row[0] == doc["columns"]["theta_p"][i]
        assert row[1] == doc["columns"]["density_raw"][i]
        assert row[2] == doc["columns"]["density_normalized"][i]


def test_byte_determinism_all_commands(tmp_path: Path, monkeypatch, capsys) -> None:
    monkeypatch.chdir(tmp_path)

    def run(tag: str) -> tuple[bytes, bytes, bytes]:
        assert main(["scan", "--out", f"s{tag}.csv"]) == 0
        assert main(["compare", "--theta-a", "0.02", "--out", f"c{tag}.csv"]) == 0
        assert main(["ring", "--n-samples", "64", "--out", f"r{tag}.csv"]) == 0
        return (
            (tmp_path / f"s{tag}.csv").read_bytes(),
            (tmp_path / f"c{tag}.csv").read_bytes(),
            (tmp_path / f"r{tag}.csv").read_bytes(),
        )

    first = run("1")
    capsys.readouterr()
    second = run("2")
    assert first == second


def test_config_file_and_flag_precedence(tmp_path: Path, monkeypatch) -> None:
    monkeypatch.chdir(tmp_path)
    cfg = tmp_path / "run.cfg"
    cfg.write_text("theta_a = 0.25\nomega = 0.12  # trailing comment\n\n# full line comment\n")
    assert main(["scan", "--config", str(cfg), "--out", "c.csv"]) == 0
    config, _, _ = _read_csv(tmp_path / "c.csv")
    assert float(config["theta_a"]) == 0.25
    assert float(config["omega"]) == 0.12
    # A flag must beat the file.
    assert main(["scan", "--config", str(cfg), "--theta-a", "0.3", "--out", "d.csv"]) == 0
    config, _, _ = _read_csv(tmp_path / "d.csv")
    assert float(config["theta_a"]) == 0.3
    assert float(config["omega"]) == 0.12


def test_env_var_config(tmp_path: Path, monkeypatch) -> None:
    monkeypatch.chdir(tmp_path)
    cfg = tmp_path / "env.cfg"
    cfg.write_text("m_oam = 4\n")
    monkeypatch.setenv("TWISTED_EMISSION_CONFIG", str(cfg))
    assert main(["scan", "--out", "e.csv"]) == 0
    config, _, _ = _read_csv(tmp_path / "e.csv")
    assert config["m_oam"] == "4"


def test_explicit_config_beats_env(tmp_path: Path, monkeypatch) -> None:
    monkeypatch.chdir(tmp_path)
    (tmp_path / "env.cfg").write_text("theta_a = 0.2\n")
    (tmp_path / "cli.cfg").write_text("theta_a = 0.4\n")
    monkeypatch.setenv("TWISTED_EMISSION_CONFIG", str(tmp_path / "env.cfg"))
    assert main(["scan", "--config", str(tmp_path / "cli.cfg"), "--out", "f.csv"]) == 0
    config, _, _ = _read_csv(tmp_path / "f.csv")
    assert float(config["theta_a"]) == 0.4


@pytest.mark.parametrize(
    "argv",
    [
        ["scan", "--grid", "2:1:50"],
        ["scan", "--grid", "0:4:50"],
        ["scan", "--grid", "nonsense"],
        ["scan", "--sigma-e", "-1"],
        ["scan", "--P", "0"],
        ["ring", "--theta-a", "0"],
        ["ring", "--n-samples", "0"],
    ],
)
def test_config_errors_exit_2(tmp_path: Path, monkeypatch, argv) -> None:
    monkeypatch.chdir(tmp_path)
    assert main(argv) == 2


def test_unknown_config_key_exits_2(tmp_path: Path, monkeypatch, capsys) -> None:
    monkeypatch.chdir(tmp_path)
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("wavelength = 3\n")
    assert main(["scan", "--config", str(cfg)]) == 2
    assert "config error" in capsys.readouterr().err
    cfg.write_text("omega\n")
    assert main(["scan", "--config", str(cfg)]) == 2
    assert main(["scan", "--config", str(tmp_path / "missing.cfg")]) == 2


def test_pinned_discontinuity_exits_3(tmp_path: Path, monkeypatch, capsys) -> None:
    monkeypatch.chdir(tmp_path)
    lo = THETA_PW_FULL - math.pi / 6
    hi = THETA_PW_FULL + math.pi / 6
    rc = main(
        ["scan", "--channel", "twisted-exact", "--inset", "0", "--grid", f"{lo!r}:{hi!r}:2"]
    )
    assert rc == 3
    assert "numerical failure" in capsys.readouterr().err


def test_empty_channel_exits_3(tmp_path: Path, monkeypatch) -> None:
    monkeypatch.chdir(tmp_path)
    assert main(["scan", "--channel", "twisted-exact", "--grid", "0.1:0.3:20"]) == 3


def test_exact_grid_drops_inset_points(tmp_path: Path, monkeypatch) -> None:
    monkeypatch.chdir(tmp_path)
    lo = THETA_PW_FULL - math.pi / 6
    # The middle three of the five points sit inside the exclusion inset
    # and must be dropped rather than evaluated into a divergence.
    grid = f"{lo - 0.01!r}:{lo + 0.01!r}:5"
    rc = main(
        ["scan", "--channel", "twisted-exact", "--grid", grid, "--inset", "0.006", "--out", "g.csv"]
    )
    assert rc == 0
    _, _, rows = _read_csv(tmp_path / "g.csv")
    assert len(rows) == 2


def test_ring_defaults_and_echo(tmp_path: Path, monkeypatch, capsys) -> None:
    monkeypatch.chdir(tmp_path)
    assert main(["ring", "--n-samples", "12"]) == 0
    out = capsys.readouterr().out
    assert "radius: 0.499" in out  # kappa_a = sin(pi/6)
    config, header, rows = _read_csv(tmp_path / "ring.csv")
    assert header == ["kappa_x", "kappa_y"]
    assert len(rows) == 12
    assert float(config["kappa_b"]) == pytest.approx(0.25, rel=1e-12)
    ka = math.sin(math.pi / 6)
    for x, y in [(r[0], r[1]) for r in rows]:
        assert (x + 0.25) ** 2 + y**2 == pytest.approx(ka**2, abs=1e-12)


def test_compare_reports_limit_deviation(tmp_path: Path, monkeypatch, capsys) -> None:
    monkeypatch.chdir(tmp_path)
    assert main(["compare", "--theta-a", "0.001", "--format", "json", "--out", "cm.json"]) == 0
    out = capsys.readouterr().out
    assert "limit_deviation:" in out
    doc = json.loads((tmp_path / "cm.json").read_text())
    assert doc["limit_deviation"] < 0.01
    assert set(doc["columns"]) == {"theta_p", "pw", "tw_quad", "tw_exact"}
    # Wide cones are far from the limit; no deviation line then.
    assert main(["compare", "--out", "cw.csv"]) == 0
    assert "limit_deviation" not in capsys.readouterr().out


def test_plot_writes_figure(tmp_path: Path, monkeypatch) -> None:
    monkeypatch.chdir(tmp_path)
    rc = main(["scan", "--grid", "1.4:1.7:30", "--plot", "fig.png"])
    assert rc == 0
    assert (tmp_path / "fig.png").stat().st_size > 1000
    rc = main(["ring", "--n-samples", "16", "--plot", "ring.png"])
    assert rc == 0
    assert (tmp_path / "ring.png").stat().st_size > 1000


def test_verify_fast_passes(capsys) -> None:
    assert main(["verify", "--level", "fast"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") >= 7
    assert "FAIL" not in out


def test_verify_catches_a_broken_closed_form(monkeypatch, capsys) -> None:
    # Sanity check that the oracle suite has teeth: corrupt the closed form
    # and the verify gate must go red.
    real = twisted_emission.specfun.triple_bessel_closed

    def corrupted(m_a, m_b, tri):
        return -real(m_a, m_b, tri)

    monkeypatch.setattr(twisted_emission.specfun, "triple_bessel_closed", corrupted)
    assert main(["verify", "--level", "fast"]) == 1
    assert "FAIL" in capsys.readouterr().out
