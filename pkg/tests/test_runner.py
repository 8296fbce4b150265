import csv
import io
import json
import math

import pytest
from hydra import compose, initialize

import src.runner as runner
from src.exceptions import ShootingError


def _config(name, overrides=()):
    with initialize(config_path="../conf"):
        return compose(config_name=name, overrides=list(overrides))


def test_geodesic_csv_on_a_line(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    cfg = _config("geodesic", [f"state.nu0={math.pi}", "state.c0=0", "t_max=2", "samples=3", "format=csv"])
    assert runner.guarded(runner.geodesic, cfg) == runner.EXIT_OK

    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert rows[0] == ["t", "x", "y", "theta", "curvature"]
    assert [[float(v) for v in row[:4]] for row in rows[1:]] == pytest.approx(
        [[0, 0, 0, 0], [1, 1, 0, 0], [2, 2, 0, 0]], abs=1e-12
    )
    assert (tmp_path / "geodesic.csv").exists()


def test_geodesic_json_and_svg(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    cfg = _config("geodesic", ["state=rotating", "format=json", "echo=false", "samples=50"])
    assert runner.guarded(runner.geodesic, cfg) == runner.EXIT_OK
    document = json.loads((tmp_path / "geodesic.json").read_text())
    assert document["schema"] == "sr-se2/geodesic/1"
    assert document["cusp_times"]

    cfg = _config("geodesic", ["state=rotating", "format=svg"])
    assert runner.guarded(runner.geodesic, cfg) == runner.EXIT_OK
    first = (tmp_path / "geodesic.svg").read_text()
    assert runner.guarded(runner.geodesic, cfg) == runner.EXIT_OK
    assert (tmp_path / "geodesic.svg").read_text() == first


@pytest.mark.parametrize(
    "name, overrides",
    [
        ("geodesic", ["samples=1"]),
        ("geodesic", ["t_max=0"]),
        ("geodesic", ["format=png"]),
        ("solve", ["format=svg"]),
        ("solve", ["xi=-1"]),
        ("exists", ["target.x=nan"]),
        ("atlas", ["grid.n=1"]),
        ("atlas", ["num_workers=0"]),
    ],
)
def test_usage_errors(tmp_path, monkeypatch, capsys, name, overrides):
    monkeypatch.chdir(tmp_path)
    cfg = _config(name, overrides)
    assert runner.guarded(getattr(runner, name), cfg) == runner.EXIT_USAGE
    error = json.loads(capsys.readouterr().err)
    assert error["error"] == "UsageError"


def test_numerical_failure(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)

    def failing(*args, **kwargs):
        raise ShootingError("Multi-start shooting exhausted its budget", 0.03125)

    monkeypatch.setattr(runner, "solve_report", failing)
    assert runner.guarded(runner.solve, _config("solve")) == runner.EXIT_FAILURE
    error = json.loads(capsys.readouterr().err)
    assert error["error"] == "ShootingError"
    assert error["best_residual"] == 0.03125


def test_solve_unit_line(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    cfg = _config("solve", ["solver=fast", "echo=false"])
    assert runner.guarded(runner.solve, cfg) == runner.EXIT_OK
    document = json.loads((tmp_path / "solve.json").read_text())
    assert document["length"] == pytest.approx(1.0, abs=1e-6)
    assert document["minimizers"][0]["class"] == "U"


def test_solve_rotation_and_projective(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    cfg = _config("solve", ["target=quarter_turn", "solver=fast", "echo=false"])
    assert runner.guarded(runner.solve, cfg) == runner.EXIT_OK
    document = json.loads((tmp_path / "solve.json").read_text())
    assert document["length"] == pytest.approx(0.5 * math.pi, abs=1e-6)
    assert document["minimizers"][0]["class"] == "S"

    cfg = _config("solve", ["projective=true", "solver=fast", "echo=false"])
    assert runner.guarded(runner.solve, cfg) == runner.EXIT_OK
    assert json.loads((tmp_path / "solve.json").read_text())["length"] == pytest.approx(1.0, abs=1e-6)


def test_exists_behind(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    cfg = _config("exists", ["target=behind", "solver=fast", "echo=false"])
    assert runner.guarded(runner.exists, cfg) == runner.EXIT_OK
    document = json.loads((tmp_path / "exists.json").read_text())
    assert document["tag"] == "NoSolutionInternalCusp"
    assert document["backward"]


@pytest.mark.slow
def test_atlas_is_deterministic(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    overrides = ["grid=ring", "grid.n=8", "grid.n_theta=4", "solver=fast", "format=csv"]
    assert runner.guarded(runner.atlas, _config("atlas", overrides)) == runner.EXIT_OK
    first = (tmp_path / "atlas.csv").read_text()
    assert runner.guarded(runner.atlas, _config("atlas", overrides + ["num_workers=2"])) == runner.EXIT_OK
    assert (tmp_path / "atlas.csv").read_text() == first
    assert len(first.strip().splitlines()) == 1 + 8 * 4


def test_solver_seed_follows_global_seed():
    assert runner._shooting_config(_config("solve")).seed == 0
    assert runner._shooting_config(_config("solve", ["global_seed=7"])).seed == 7


def test_geodesic_near_the_saddle_is_a_line(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    cfg = _config("geodesic", ["state.nu0=3.14159265", "state.c0=0", "t_max=2", "samples=3", "format=json"])
    assert runner.guarded(runner.geodesic, cfg) == runner.EXIT_OK
    document = json.loads((tmp_path / "geodesic.json").read_text())
    assert document["class"] == "U"
    assert [s["x"] for s in document["samples"]] == pytest.approx([0.0, 1.0, 2.0], abs=1e-12)
