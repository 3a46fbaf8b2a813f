import json

import numpy as np
import pytest

from acoustics2d.cli import load_config, main
from acoustics2d.core import FieldSet, Grid2D
from acoustics2d.exact import evolve_point
from acoustics2d.experiments import (
    Experiment,
    ExperimentConfig,
    RadialProfile,
    VortexData,
    default_config,
    extract_axis_profile,
    init_experiment,
    kinetic_energy,
    profile_l1_error,
    run_experiment,
)
from acoustics2d.io import read_fields_csv, write_fields_csv, write_vtk


# -- initial data ------------------------------------------------------------------


def test_vortex_initial_profile():
    cfg = default_config("Vortex", nx=9, ny=9, xlim=(-0.45, 0.45), ylim=(-0.45, 0.45))
    g = cfg.grid()
    f = init_experiment(cfg, g)
    X, Y = g.centers()
    r = np.hypot(X, Y)
    speed = np.hypot(f.u, f.v)
    half = np.isclose(r, 0.1)                       # r = r0 / 2
    assert half.any() and np.allclose(speed[half], 0.5)
    assert np.all(speed[r >= 0.4 - 1e-12] == 0)
    assert np.all(f.p == 1.0)
    centre = np.argmin(r)
    assert speed.ravel()[centre] == 0.0
    # e_phi direction: velocity is perpendicular to the position vector
    assert np.allclose(f.u * X + f.v * Y, 0.0, atol=1e-14)


def test_sign_xy_initial_data():
    cfg = default_config("RiemannSignXY", nx=11, ny=11)
    g = cfg.grid()
    f = init_experiment(cfg, g)
    X, Y = g.centers()
    sel = (X > 0.1) & (Y < -0.1)
    assert np.all(f.u[sel] == -1) and np.all(f.v[sel] == -1)
    assert np.all(f.u[np.isclose(X, 0, atol=1e-12)] == 0)


def test_corner_initial_data_jump_cells():
    cfg = default_config("RiemannCorner", nx=5, ny=5)
    f = init_experiment(cfg)
    assert f.u[4, 4] == 1 and f.u[0, 4] == 0
    assert f.u[2, 4] == 0.5 and f.u[2, 2] == 0.25
    assert np.all(f.v == 0) and np.all(f.p == 0)


def test_init_rejects_mismatched_grid():
    with pytest.raises(ValueError):
        init_experiment(default_config("Vortex"), Grid2D(5, 5, 1, 1))


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(cfl=-1.0)
    with pytest.raises(ValueError):
        ExperimentConfig(t_end=-0.1)
    with pytest.raises(ValueError):
        ExperimentConfig(experiment="Nope")
    with pytest.raises(ValueError):
        ExperimentConfig(experiment="Custom")


def test_vortex_oracle_stationary_under_exact_evolution():
    cfg = default_config("Vortex", nx=21, ny=21)
    g = cfg.grid()
    X, Y = g.centers()
    pick = [(4, 7), (10, 13), (15, 9)]
    pts = np.array([[X[i, j], Y[i, j], 0.0] for i, j in pick])
    v, p = evolve_point(VortexData(cfg.r0), 0.02, pts, n_radial=24)
    v0, p0 = VortexData(cfg.r0).value(pts)
    assert np.allclose(v, v0, atol=1e-3) and np.allclose(p, p0, atol=1e-12)


# -- profiles ----------------------------------------------------------------------


def test_axis_profile_exact_column():
    cfg = default_config("RiemannCorner", nx=9, ny=9, xlim=(-0.5, 0.5), ylim=(-0.5, 0.5),
                         t_end=4 * 1 / 9 * 2)
    g = cfg.grid()
    f = FieldSet.zeros(g)
    ct = cfg.t_end
    prof = extract_axis_profile(f, g, cfg, t=ct)
    assert np.all(np.diff(prof.r) > 0)
    # cells at r = 1/9, 2/9, 3/9, 4/9; ct = 8/9 so r/ct = 1/8 ... 1/2
    half = np.isclose(prof.r / ct, 0.5)
    assert prof.exact[half][0] == pytest.approx(1.3169579 / (2 * np.pi), abs=1e-7)
    far = extract_axis_profile(f, g, cfg, t=0.1)
    assert np.all(far.exact[far.r > 0.1] == 0)
    at = extract_axis_profile(f, g, cfg, t=2 / 9)
    assert at.exact[np.isclose(at.r, 2 / 9)][0] == 0.0


def test_axis_profile_requires_corner_experiment():
    cfg = default_config("Vortex", nx=5, ny=5)
    with pytest.raises(ValueError):
        extract_axis_profile(FieldSet.zeros(cfg.grid()), cfg.grid(), cfg)


def test_profile_rejects_unsorted_radii():
    with pytest.raises(ValueError):
        RadialProfile([0.2, 0.1], [1, 2])


def test_profile_l1_error():
    prof = RadialProfile([0.1, 0.2, 0.3], [1.0, 1.0, 1.0], [1.0, 0.5, 1.0])
    assert profile_l1_error(prof) == pytest.approx(0.05)
    with pytest.raises(ValueError):
        profile_l1_error(RadialProfile([0.1], [1.0]))


# -- I/O -----------------------------------------------------------------------------


def test_csv_has_header_and_one_row_per_cell(tmp_path):
    g = Grid2D(3, 3, 0.5, 0.5)
    f = FieldSet.from_array(np.arange(27.0).reshape(3, 3, 3))
    path = write_fields_csv(f, g, tmp_path / "f.csv")
    lines = path.read_text().splitlines()
    assert lines[0] == "x,y,u,v,p" and len(lines) == 10
    assert lines[1].split(",")[:2] == ["0.25", "0.25"]
    assert lines[2].split(",")[:2] == ["0.25", "0.75"]


def test_csv_round_trip(tmp_path):
    g = Grid2D(5, 4, 0.1, 0.3, x0=-0.2, y0=1.0)
    f = FieldSet.from_array(np.random.default_rng(30).normal(size=(3, 5, 4)) * 1e3)
    path = write_fields_csv(f, g, tmp_path / "f.csv")
    back, g2 = read_fields_csv(path)
    assert np.max(np.abs(back.as_array() - f.as_array())) <= 1e-15 * 1e3
    assert g2.shape == g.shape and g2.dx == pytest.approx(g.dx) and g2.y0 == pytest.approx(g.y0)
    again = write_fields_csv(f, g, tmp_path / "g.csv")
    assert path.read_bytes() == again.read_bytes()


def test_vtk_output(tmp_path):
    g = Grid2D(3, 4, 1.0, 1.0)
    f = FieldSet.from_array(np.random.default_rng(31).normal(size=(3, 3, 4)))
    text = write_vtk(f, g, tmp_path / "f.vtk").read_text().splitlines()
    assert text[0].startswith("# vtk DataFile")
    assert "DIMENSIONS 3 4 1" in text
    i = text.index("LOOKUP_TABLE default")
    assert float(text[i + 2]) == f.p[1, 0]      # x runs fastest


# -- runner --------------------------------------------------------------------------


def test_run_experiment_outputs_and_determinism(tmp_path):
    cfg = default_config("RiemannCorner", nx=21, ny=21, out_dir=str(tmp_path / "a"))
    r1 = run_experiment(cfg)
    r2 = run_experiment(cfg)
    for key in ("fields", "profile", "report"):
        assert r1.paths[key].exists()
    report = json.loads(r1.paths["report"].read_text())
    assert report["steps"] == r1.report["steps"] > 0
    assert report["finite"] is True
    assert "wall_time_s" in json.loads(r1.paths["timing"].read_text())
    assert r1.fields.isfinite()
    assert np.array_equal(r1.fields.as_array(), r2.fields.as_array())
    assert r1.paths["report"].read_bytes() == (tmp_path / "a" / "report.json").read_bytes()


def test_rerun_byte_identical(tmp_path):
    cfg = default_config("Vortex", nx=15, ny=15, t_end=0.01, out_dir=str(tmp_path / "v"))
    a = run_experiment(cfg)
    blobs = {k: a.paths[k].read_bytes() for k in ("fields", "profile", "report")}
    b = run_experiment(cfg)
    assert all(b.paths[k].read_bytes() == v for k, v in blobs.items())


def test_zero_end_time_reproduces_initial_condition(tmp_path):
    cfg = default_config("RiemannSignXY", nx=9, ny=9, t_end=0.0, out_dir=str(tmp_path))
    res = run_experiment(cfg)
    f, g = read_fields_csv(res.paths["fields"])
    assert np.array_equal(f.as_array(), init_experiment(cfg).as_array())
    assert res.report["steps"] == 0


def test_report_totals_match_step_reports():
    from acoustics2d.schemes import run
    cfg = default_config("PlaneWave", nx=16, ny=16, t_end=0.05)
    res = run_experiment(cfg, write=False)
    g = cfg.grid()
    _, reps = run(init_experiment(cfg), cfg.acoustic(), cfg.boundary, cfg.scheme, cfg.t_end)
    assert res.report["totals_initial"] == list(reps[0].totals_before)
    assert res.report["totals_final"] == list(reps[-1].totals_after)
    assert abs(res.report["max_step_drift"]) < 1e-12
    assert res.report["reference_error"]["p"]["L2"] < 0.5
    assert res.report["kinetic_energy"][0] == pytest.approx(kinetic_energy(init_experiment(cfg), g))


def test_custom_experiment_reads_initial_csv(tmp_path):
    g = Grid2D.from_extents(8, 8)
    f = FieldSet.from_array(np.random.default_rng(32).normal(size=(3, 8, 8)))
    path = write_fields_csv(f, g, tmp_path / "init.csv")
    cfg = default_config("Custom", nx=8, ny=8, xlim=(0, 1), ylim=(0, 1), initial=str(path),
                         t_end=0.0)
    assert np.array_equal(init_experiment(cfg).as_array(), f.as_array())


def test_corner_reference_field(tmp_path):
    cfg = default_config("RiemannCorner", nx=9, ny=9, reference=True)
    res = run_experiment(cfg, write=False)
    assert res.report["reference_error"]["v"]["Linf"] < 0.5


# -- CLI -------------------------------------------------------------------------------


def test_config_file_loading(tmp_path):
    ini = tmp_path / "c.ini"
    ini.write_text("[experiment]\nexperiment = Vortex\nscheme = split\n"
                   "[grid]\nnx = 11\nny = 13\nxlim = -1, 1\n[time]\ncfl = 0.3\n")
    cfg = load_config(ini, {"tend": "0.5", "n": None})
    assert cfg.experiment is Experiment.VORTEX
    assert (cfg.nx, cfg.ny, cfg.xlim, cfg.cfl, cfg.t_end) == (11, 13, (-1.0, 1.0), 0.3, 0.5)
    assert cfg.epsilon == 1e-2                      # registry default retained
    with pytest.raises(ValueError):
        load_config(ini, {"bogus": "1"})


def test_cli_run_and_presets(tmp_path, capsys):
    ini = tmp_path / "c.ini"
    ini.write_text(f"[experiment]\nexperiment = RiemannCorner\n[grid]\nnx = 11\nny = 11\n"
                   f"[output]\nout_dir = {tmp_path / 'o'}\n")
    assert main(["run", str(ini), "--cfl", "0.9"]) == 0
    assert (tmp_path / "o" / "fields.csv").exists()
    assert main(["riemann", "--n", "11", "--out", str(tmp_path / "r")]) == 0
    assert main(["vortex", "--n", "11", "--tend", "0.01", "--out", str(tmp_path / "v"),
                 "--scheme", "split"]) == 0
    assert json.loads((tmp_path / "v" / "report.json").read_text())["config"]["scheme"] == "split"


def test_cli_run_keeps_file_values_and_applies_set(tmp_path):
    ini = tmp_path / "c.ini"
    ini.write_text("[experiment]\nexperiment = PlaneWave\nscheme = split\n"
                   "[grid]\nnx = 8\nny = 8\n[time]\ncfl = 0.45\nt_end = 0.01\n")
    assert main(["run", str(ini), "--set", "cfl=0.4", "--out", str(tmp_path / "o")]) == 0
    cfg = json.loads((tmp_path / "o" / "report.json").read_text())["config"]
    assert (cfg["scheme"], cfg["cfl"], cfg["nx"]) == ("split", 0.4, 8)


def test_cli_tables(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["stability", "--scheme", "split", "--cfl", "0.6", "--n", "64",
                 "--out", str(out)]) == 0
    rows = out.read_text().splitlines()
    assert rows[0] == "theta_x,theta_y,spectral_radius" and len(rows) == 64 * 64 + 1
    assert max(float(r.split(",")[2]) for r in rows[1:]) > 1.0
    out2 = tmp_path / "d.csv"
    assert main(["stationarity", "--n", "5", "--out", str(out2)]) == 0
    rows = [r.split(",") for r in out2.read_text().splitlines()[1:]]
    assert len(rows) == 25 and all(float(r[3]) < 1e-12 for r in rows)


def test_cli_failure_exit_code(tmp_path, capsys):
    assert main(["run", str(tmp_path / "missing.ini")]) != 0
    err = capsys.readouterr().err.strip().splitlines()
    assert len(err) == 1 and "error" in err[0]
    assert main(["riemann", "--cfl", "-1"]) != 0
    with pytest.raises(SystemExit) as exc:
        main(["riemann", "--scheme", "nonsense"])
    assert exc.value.code != 0
