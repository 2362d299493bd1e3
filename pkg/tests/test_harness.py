import csv
import io
import json

import numpy as np
import pytest
from pydantic import ValidationError

from entbound.config import config as app_config
from entbound.config.models import AscentConfig, SweepGrid, SweepRow, SweepSpec
from entbound.core.errors import UsageError
from entbound.core.matrix_io import write_matrix
from entbound.harness import compare_bounds, run_sweep
from entbound.harness.compare import parse_dims
from entbound.harness.experiments import EXPERIMENTS, get_experiment, grid_points, jsonable
from entbound.harness.output import COLUMNS, render, rows_to_csv, sweep_document, validate_document
from entbound.harness.sweep import point_seeds
from entbound.states import werner


def _spec(**overrides) -> SweepSpec:
    data = {
        "experiment": "ghz-w-mix",
        "grid": SweepGrid(name="p", values=[0.0, 0.5, 1.0]),
        "lb_method": "lb1",
        "ascent": AscentConfig(restarts=2, seed=0, max_iterations=300),
        "workers": 2,
        "seed": 5,
    }
    data.update(overrides)
    return SweepSpec(**data)


# -- rejillas y experimentos -------------------------------------------------------------


def test_default_grids():
    name, points = grid_points(get_experiment("horodecki"), None)
    assert name == "a"
    assert len(points) == 100 and points[0] == 0.01 and points[-1] == 1.0
    _, beta = grid_points(get_experiment("xxx-beta"), None)
    assert beta[0] == 0.3 and beta[-1] == 10.0
    assert beta.count(6.0) == 1
    assert all(b > a for a, b in zip(beta, beta[1:]))
    assert grid_points(get_experiment("noise-dep"), None)[1] == pytest.approx([0.1 * i for i in range(1, 10)])


def test_explicit_grid_overrides_default():
    name, points = grid_points(get_experiment("xx-thermal"), SweepGrid(name="beta", start=0.5, stop=0.7, step=0.1))
    assert name == "beta" and points == [0.5, 0.6, 0.7]
    with pytest.raises(ValidationError):
        SweepGrid(name="x", start=1.0, stop=0.0, step=0.1)
    with pytest.raises(ValidationError):
        SweepGrid(name="x", values=[])


def test_unknown_experiment():
    with pytest.raises(UsageError):
        get_experiment("nope")
    with pytest.raises(ValidationError):
        SweepSpec(experiment="nope")


def test_experiment_extras():
    rho, extras = EXPERIMENTS["horodecki"].build(0.3, {})
    assert rho.layout.dims == (3, 3)
    assert extras["negativity"] <= 1e-12
    _, extras = EXPERIMENTS["xx-ppt-window"].build(0.7, {})
    assert isinstance(extras["ppt"], bool)
    assert set(extras["negativity"]) == {"0", "1", "2"}
    _, extras = EXPERIMENTS["hexagon"].build(0.5, {"beta": 2.0})
    assert set(extras["pairwise"]) == {"B|D", "B|F", "D|F"}
    rho, extras = EXPERIMENTS["noise-ad"].build(0.2, {"state": "w", "n": 3})
    assert extras == {"state": "w", "n": 3}


def test_jsonable_converts_numpy_values():
    data = jsonable({"a": np.float64(0.5), 1: [np.int64(2), np.bool_(True)]})
    assert data == {"a": 0.5, "1": [2, True]}
    assert json.dumps(data)


def test_point_seeds_are_stable_and_distinct():
    seeds = point_seeds(42, 6)
    assert seeds == point_seeds(42, 6)
    assert len(set(seeds)) == 6
    assert point_seeds(42, 3) == seeds[:3]


# -- barridos ---------------------------------------------------------------------------


def test_sweep_rows_follow_grid_order():
    rows = run_sweep(_spec())
    assert [r.param for r in rows] == [0.0, 0.5, 1.0]
    for row in rows:
        assert row.status in ("ok", "precision-limited")
        assert row.lb_method == "lb1"
        assert row.gap == pytest.approx(row.upper - row.lower)
        if row.status == "ok":
            assert row.lower <= row.upper + 1e-7
    # p = 0 es W puro: ninguna cota superior baja de 5/9
    assert rows[0].upper >= 5.0 / 9.0 - 1e-6


def test_sweep_is_deterministic_across_worker_counts():
    first = rows_to_csv(run_sweep(_spec(workers=1)), no_timings=True)
    second = rows_to_csv(run_sweep(_spec(workers=3)), no_timings=True)
    assert first == second


def test_failed_point_becomes_error_row():
    rows = run_sweep(_spec(experiment="custom-file", grid=None))
    assert len(rows) == 1
    assert rows[0].status.startswith("error: ")
    assert rows[0].lower is None and rows[0].gap is None


def test_missing_file_fails_only_its_point(tmp_path):
    good = tmp_path / "werner.txt"
    state = werner(0.8)
    write_matrix(good, state.matrix, state.layout.dims)
    files = [str(good), str(tmp_path / "missing.txt"), str(good)]
    spec = _spec(
        experiment="custom-file",
        grid=SweepGrid(name="index", values=[0.0, 1.0, 2.0]),
        options={"files": files},
    )
    rows = run_sweep(spec)
    assert [r.param for r in rows] == [0.0, 1.0, 2.0]
    assert rows[1].status.startswith("error: ")
    assert "missing.txt" in rows[1].status
    assert rows[1].lower is None
    for row in (rows[0], rows[2]):
        assert not row.status.startswith("error")
        assert row.lower is not None and row.upper is not None


def test_capacity_error_degrades_to_lb1(monkeypatch):
    monkeypatch.setattr(app_config, "SDP_DIMENSION_CAP", 12)
    rows = run_sweep(_spec(lb_method="lb4", grid=SweepGrid(name="p", values=[0.5])))
    assert rows[0].lb_method == "lb1"
    assert rows[0].extras["degraded_from"] == "lb4"


def test_row_gap_is_validated():
    with pytest.raises(ValidationError):
        SweepRow(experiment="x", param_name="p", param=0.0, lower=0.5, upper=0.4, lb_method="lb1")
    row = SweepRow(experiment="x", param_name="p", param=0.0, lower=0.5, upper=0.4, lb_method="lb1",
                   status="precision-limited")
    assert row.gap == pytest.approx(-0.1)


# -- salida ----------------------------------------------------------------------------


def _rows() -> list[SweepRow]:
    return [
        SweepRow(experiment="ghz-w-mix", param_name="p", param=0.0, lower=0.5, upper=0.5000001,
                 lb_method="lb1", lb_status="optimal", wall_time_seconds=1.5, extras={"n": 3}),
        SweepRow(experiment="ghz-w-mix", param_name="p", param=0.1, lb_method="lb1", status="error: boom"),
    ]


def test_csv_columns_and_blank_nulls():
    text = rows_to_csv(_rows(), no_timings=True)
    reader = csv.DictReader(io.StringIO(text))
    assert reader.fieldnames == COLUMNS
    assert COLUMNS[:4] == ["schema_version", "experiment", "param_name", "param"]
    records = list(reader)
    assert records[0]["wall_time_seconds"] == "0.0"
    assert json.loads(records[0]["extras"]) == {"n": 3}
    assert records[1]["lower"] == ""


def test_json_document_validates_against_schema():
    spec = _spec()
    document = sweep_document(_rows(), spec)
    assert document["schema_version"] == "1"
    assert "out" not in document["spec"]
    parsed = json.loads(render(_rows(), spec, "json"))
    assert len(parsed["rows"]) == 2
    document["rows"][0]["unexpected"] = 1
    with pytest.raises(UsageError):
        validate_document(document)
    with pytest.raises(UsageError):
        render(_rows(), spec, "xml")


# -- comparación de cotas ---------------------------------------------------------------------


def test_parse_dims():
    assert parse_dims("3x3") == (3, 3)
    assert parse_dims("2X2x2") == (2, 2, 2)
    for bad in ("3", "axb", "1x4"):
        with pytest.raises(UsageError):
            parse_dims(bad)


def test_compare_bounds_on_separable_samples():
    report = compare_bounds(2, dims=(2, 2), seed=3, separable=True, methods=("lb1", "lb3"))
    assert report.n_samples == 2 and report.dims == [2, 2]
    assert [e.method for e in report.entries] == ["lb1", "lb3"]
    assert all(e.evaluated == 2 and e.failures == 0 for e in report.entries)
    assert sum(e.wins for e in report.entries) >= 2
    assert "lb1|lb3" in report.max_deviation
    for row in report.values:
        assert all(v <= 1e-6 for v in row.values())


def test_compare_bounds_skips_over_capacity():
    report = compare_bounds(1, dims=(3, 3), methods=("lb2k6",))
    entry = report.entries[0]
    assert entry.skipped == 1 and entry.evaluated == 0
    assert entry.mean_wall_time_seconds is None
    assert report.values == [{"lb2k6": None}]
    with pytest.raises(UsageError):
        compare_bounds(0)
