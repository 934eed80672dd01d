"""Config parsing, scenario files, CLI verbs, determinism."""

import os

import numpy as np
import pytest

import kinshock as ks
from kinshock.cli import main
from kinshock.config import ConfigError, parse_config
from kinshock.runner import riemann_table, run_scenario, run_sweep

MINIMAL = """
flux = burgers
eps = 0.25
extents = 32
dx = 0.03125
t_final = 0.1
ic = riemann:0.8,0.2,0.4
outdir = mini
"""


# ── parsing ────────────────────────────────────────────────────────────

def test_parse_minimal_config_materializes_defaults():
    cfg = parse_config(MINIMAL)
    assert cfg.flux_name == "burgers"
    assert cfg.cells_per_band == 4
    assert cfg.cfl == 0.9
    assert cfg.bc == "periodic"
    assert cfg.stride == 10
    assert cfg.level == pytest.approx(0.5)       # riemann midpoint
    assert cfg.seed == 0 and cfg.reference is False


def test_parse_rejects_unknown_and_duplicate_keys():
    with pytest.raises(ConfigError, match="unknown key"):
        parse_config(MINIMAL + "\nviscosity = 0.1\n")
    with pytest.raises(ConfigError, match="duplicate"):
        parse_config(MINIMAL + "\neps = 0.5\n")


def test_parse_rejects_eps_not_dividing_v_max():
    bad = MINIMAL.replace("eps = 0.25", "eps = 0.3")
    with pytest.raises(ConfigError) as err:
        parse_config(bad)
    assert "0.3" in str(err.value) and "1.0" in str(err.value)


def test_parse_rejects_out_of_range_states():
    bad = MINIMAL.replace("riemann:0.8,0.2,0.4", "riemann:1.2,0.2,0.4")
    with pytest.raises(ConfigError, match="outside"):
        parse_config(bad)
    bad_sine = MINIMAL.replace("ic = riemann:0.8,0.2,0.4", "ic = sine:0.9,0.3")
    with pytest.raises(ConfigError, match="outside"):
        parse_config(bad_sine)


def test_parse_missing_required_key():
    with pytest.raises(ConfigError, match="missing required"):
        parse_config("flux = burgers\neps = 0.25\n")


def test_parse_reads_files(tmp_path):
    path = tmp_path / "scenario.cfg"
    path.write_text(MINIMAL)
    cfg = parse_config(str(path))
    assert cfg.extents == (32,)
    with pytest.raises(ConfigError, match="not found"):
        parse_config(str(tmp_path / "missing.cfg"))


def test_parse_file_initial_condition(tmp_path):
    data = tmp_path / "rho.txt"
    np.savetxt(data, np.full(32, 0.4))
    cfg = parse_config(MINIMAL.replace("ic = riemann:0.8,0.2,0.4",
                                       f"ic = file:{data}"))
    from kinshock.config import initial_density
    rho = initial_density(cfg, (32,), (0.03125,))
    assert np.allclose(rho, 0.4)


# ── scenario outputs ───────────────────────────────────────────────────

def test_run_scenario_writes_documented_files(tmp_path):
    cfg = parse_config(MINIMAL)
    summary = run_scenario(cfg, str(tmp_path))
    outdir = tmp_path / "mini"
    diag = (outdir / "diagnostics.csv").read_text().splitlines()
    assert diag[0] == "step,time,mass,entropy,defect,defect_total,budget"
    assert len(diag) > 2
    snaps = sorted(outdir.glob("rho_*.csv"))
    assert snaps, "expected density snapshots"
    assert snaps[0].read_text().splitlines()[0] == "x,rho,phi_1"
    front = (outdir / "front.csv").read_text().splitlines()
    assert front[0] == "time,position"
    summary_lines = (outdir / "summary.csv").read_text().splitlines()
    assert summary_lines[0].startswith("eps,dx,dt,steps")
    assert summary["front_speed"] is not None
    # entropy column non-increasing, per the file itself
    entropy = [float(line.split(",")[3]) for line in diag[1:]]
    assert all(a >= b - 1e-12 for a, b in zip(entropy, entropy[1:]))


def test_run_scenario_is_byte_deterministic(tmp_path):
    cfg = parse_config(MINIMAL)
    run_scenario(cfg, str(tmp_path / "a"))
    run_scenario(cfg, str(tmp_path / "b"))
    for name in ("diagnostics.csv", "summary.csv", "front.csv"):
        assert ((tmp_path / "a" / "mini" / name).read_bytes()
                == (tmp_path / "b" / "mini" / name).read_bytes())
    snaps_a = sorted((tmp_path / "a" / "mini").glob("rho_*.csv"))
    snaps_b = sorted((tmp_path / "b" / "mini").glob("rho_*.csv"))
    assert [p.name for p in snaps_a] == [p.name for p in snaps_b]
    assert snaps_a[-1].read_bytes() == snaps_b[-1].read_bytes()


def test_run_scenario_dump_final_roundtrips(tmp_path):
    cfg = parse_config(MINIMAL + "dump_final = true\n")
    run_scenario(cfg, str(tmp_path))
    field, t = ks.load_snapshot(tmp_path / "mini" / "field_final.csv")
    assert t == pytest.approx(0.1)
    assert field.sgrid.extents == (32,)


def test_run_sweep_writes_table(tmp_path):
    cfg = parse_config(MINIMAL + "reference = true\n")
    rows = run_sweep(cfg, [0.5, 0.25], str(tmp_path))
    table = (tmp_path / "mini" / "sweep.csv").read_text().splitlines()
    assert table[0].startswith("eps,dx,front_speed")
    assert len(table) == 3
    assert (tmp_path / "mini" / "eps_0.5" / "summary.csv").exists()
    assert all(r["l1_to_reference"] is not None for r in rows)


def test_run_scenario_two_dimensional(tmp_path):
    cfg = parse_config("""
flux = poly:0,1;0
eps = 0.25
extents = 12,8
dx = 0.08,0.125
t_final = 0.05
ic = sine:0.5,0.2
stride = 100
outdir = plane2d
""")
    run_scenario(cfg, str(tmp_path))
    snaps = sorted((tmp_path / "plane2d").glob("rho_*.csv"))
    header = snaps[-1].read_text().splitlines()[0]
    assert header == "x,y,rho,phi_1,phi_2"
    assert len(snaps[-1].read_text().splitlines()) == 1 + 12 * 8


def test_riemann_table_matches_oracle(tmp_path):
    cfg = parse_config(MINIMAL)
    path = riemann_table(cfg, str(tmp_path))
    rows = [line.split(",") for line in open(path).read().splitlines()[1:]]
    x = np.array([float(r[0]) for r in rows])
    rho = np.array([float(r[1]) for r in rows])
    assert np.allclose(rho, ks.exact_riemann_burgers(0.8, 0.2, (x - 0.4) / 0.1))


# ── command-line entry ─────────────────────────────────────────────────

def test_cli_run_and_exit_codes(tmp_path, capsys):
    cfg_path = tmp_path / "mini.cfg"
    cfg_path.write_text(MINIMAL)
    assert main(["run", str(cfg_path), "--out-root", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "front_speed" in out


def test_cli_uses_env_output_root(tmp_path, monkeypatch):
    cfg_path = tmp_path / "mini.cfg"
    cfg_path.write_text(MINIMAL)
    monkeypatch.setenv("KINSHOCK_OUT", str(tmp_path / "envroot"))
    assert main(["run", str(cfg_path)]) == 0
    assert (tmp_path / "envroot" / "mini" / "summary.csv").exists()


def test_cli_config_error_is_exit_1(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text(MINIMAL.replace("eps = 0.25", "eps = 0.3"))
    assert main(["run", str(bad)]) == 1


def test_cli_usage_error_is_exit_1():
    assert main(["frobnicate"]) == 1
    assert main(["sweep"]) == 1


def test_cli_invariant_violation_is_exit_2(tmp_path, monkeypatch, capsys):
    cfg_path = tmp_path / "mini.cfg"
    cfg_path.write_text(MINIMAL)

    def broken(cfg, out_root=None):
        raise ks.InvariantViolation("step 3: synthetic violation")

    monkeypatch.setattr("kinshock.cli.run_scenario", broken)
    assert main(["run", str(cfg_path)]) == 2
    assert "invariant violation" in capsys.readouterr().err


def test_cli_verify_passes_and_emits_csv(capsys):
    assert main(["verify", "--seed", "3", "--n-random", "300"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "check,cases,violations,worst_margin"


def test_cli_verify_inject_bug_self_test(capsys):
    assert main(["verify", "--seed", "3", "--n-random", "300",
                 "--inject-bug"]) == 0
    err = capsys.readouterr().err
    assert "counterexample profile" in err
    assert "detected" in err


def test_cli_sweep(tmp_path, capsys):
    cfg_path = tmp_path / "mini.cfg"
    cfg_path.write_text(MINIMAL)
    assert main(["sweep", str(cfg_path), "--eps", "0.5,0.25",
                 "--out-root", str(tmp_path)]) == 0
    assert (tmp_path / "mini" / "sweep.csv").exists()


def test_cli_riemann_table(tmp_path, capsys):
    cfg_path = tmp_path / "mini.cfg"
    cfg_path.write_text(MINIMAL)
    assert main(["riemann-table", str(cfg_path), "--out-root", str(tmp_path)]) == 0
    assert (tmp_path / "mini" / "riemann_table.csv").exists()


# ── shipped scenarios stay green ───────────────────────────────────────

REPO_CONFIGS = os.path.join(os.path.dirname(__file__), "..", "configs")


@pytest.mark.parametrize("name", ["dispersion_band.cfg", "linear_translation.cfg"])
def test_small_shipped_scenarios_run_clean(name, tmp_path):
    cfg = parse_config(os.path.join(REPO_CONFIGS, name))
    summary = run_scenario(cfg, str(tmp_path))
    assert summary["defect_total"] <= summary["entropy_budget"]
    if name == "dispersion_band.cfg":
        assert summary["defect_total"] <= 1e-12