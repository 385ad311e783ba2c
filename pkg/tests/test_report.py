import math
import re

import numpy as np
import pytest

from casimir_plasma.errors import DomainError, ReportError
from casimir_plasma.factors import correction_report
from casimir_plasma.report import (
    CSV_COLUMNS,
    NUMERIC_COLUMNS,
    SweepSpec,
    csv_text,
    emit_csv,
    emit_svg,
    read_csv,
    run_sweep,
    table_digest,
    write_figures,
)
from casimir_plasma.units import MICRON, NANOMETER, material_preset, perfect_mirror, plasma_mirror


@pytest.fixture(scope="module")
def small_table():
    return run_sweep(SweepSpec(L_min=0.5 * MICRON, L_max=2 * MICRON, points_per_decade=5))


def test_grid_endpoints_and_density():
    grid = SweepSpec().grid()
    assert len(grid) == 101
    assert grid[0] == pytest.approx(0.1 * MICRON, rel=1e-15) and grid[-1] == pytest.approx(10 * MICRON, rel=1e-15)


def test_spec_validation():
    with pytest.raises(DomainError):
        SweepSpec(L_min=2e-6, L_max=1e-6)
    with pytest.raises(DomainError):
        SweepSpec(materials=(material_preset("Al"), material_preset("Al")))
    with pytest.raises(DomainError):
        SweepSpec(quantities=("torque",))
    with pytest.raises(DomainError):
        SweepSpec(T=-5.0)


def test_single_point_matches_direct_report(al, room):
    table = run_sweep(SweepSpec(L_min=1 * MICRON, L_max=1 * MICRON, materials=(al,)))
    assert len(table.rows) == 1
    assert table.rows[0].report == correction_report(1 * MICRON, al, room)


def test_csv_schema_and_determinism(small_table, tmp_path):
    a = emit_csv(small_table, tmp_path / "a.csv").read_bytes()
    b = emit_csv(small_table, tmp_path / "a.csv").read_bytes()
    assert a == b
    rerun = run_sweep(SweepSpec(L_min=0.5 * MICRON, L_max=2 * MICRON, points_per_decade=5))
    assert csv_text(rerun) == a.decode()
    assert table_digest(rerun) == table_digest(small_table)
    lines = a.decode().split("\n")
    assert b"\r" not in a
    header = next(line for line in lines if not line.startswith("#"))
    assert header == ",".join(CSV_COLUMNS)
    value = lines[len([line for line in lines if line.startswith("#")]) + 1].split(",")[2]
    assert re.fullmatch(r"\d\.\d{11}e[+-]\d\d", value)


def test_csv_round_trip(small_table, tmp_path):
    path = emit_csv(small_table, tmp_path / "t.csv")
    metadata, rows = read_csv(path)
    assert metadata["constants"] == "CODATA 2018"
    assert "config_digest" in metadata and "spec" in metadata
    assert len(rows) == len(small_table.rows)
    for parsed, row in zip(rows, small_table.rows):
        values = row.values()
        assert parsed["material"] == values["material"]
        for c in NUMERIC_COLUMNS:
            assert parsed[c] == float(format(values[c], ".11e"))


def test_timestamp_optional(small_table):
    assert "created_utc" not in csv_text(small_table)
    assert "# created_utc:" in csv_text(small_table, include_timestamp=True)


def test_parallel_matches_serial():
    spec = SweepSpec(L_min=0.5 * MICRON, L_max=1 * MICRON, points_per_decade=4,
                     materials=(material_preset("Al"), plasma_mirror(300 * NANOMETER)))
    assert csv_text(run_sweep(spec, workers=2)) == csv_text(run_sweep(spec))


def test_figure_shapes(default_table):
    for mat in ("Al", "CuAu"):
        eta = default_table.column("eta_F", mat)
        eta_P = default_table.column("eta_F_P", mat)
        eta_T = default_table.column("eta_F_T", mat)
        assert np.all(np.diff(eta_P) > 0)
        assert np.all(np.diff(eta_T) > 0)
        assert np.all(eta < eta_T) and np.all(eta > eta_P * eta_T)


def test_svg_structure(small_table, tmp_path):
    path = emit_svg(small_table, "components", tmp_path / "f.svg")
    text = path.read_text()
    assert text.startswith("<svg") and text.rstrip().endswith("</svg>")
    polylines = re.findall(r"<polyline[^>]*data-material=\"(\w+)\"[^>]*data-quantity=\"(\w+)\"", text)
    assert len(polylines) == 2 * 6
    assert {m for m, _ in polylines} == {"Al", "CuAu"}
    assert "L (µm)" in text
    # log axis: decade tick labels within the range
    assert ">1</text>" in text


def test_empty_column_is_structured_error(tmp_path):
    table = run_sweep(SweepSpec(L_min=1 * MICRON, L_max=1 * MICRON, materials=(perfect_mirror(),)))
    target = tmp_path / "empty.svg"
    with pytest.raises(ReportError):
        emit_svg(table, "delta", target)
    assert not target.exists()
    assert list(tmp_path.iterdir()) == []


def test_io_error_has_path(small_table, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(ReportError, match="file"):
        emit_csv(small_table, blocker / "sub" / "t.csv")


def test_write_figures(tmp_path):
    paths = write_figures(tmp_path, points_per_decade=3)
    names = sorted(p.name for p in paths)
    assert names == sorted(f"fig{i}_{n}.{ext}" for i, n in
                           ((1, "force"), (2, "energy"), (3, "delta"), (4, "rescaled")) for ext in ("csv", "svg"))
    _, rows = read_csv(tmp_path / "fig3_delta.csv")
    assert {r["material"] for r in rows} == {"Al", "CuAu", "lambdaP=300nm", "lambdaP=500nm"}
    _, rows = read_csv(tmp_path / "fig4_rescaled.csv")
    by_mat = {}
    for r in rows:
        by_mat.setdefault(r["material"], []).append(r["Delta_F"])
    curves = np.array(list(by_mat.values()))
    # rescaled curves nearly coincide
    assert np.max(np.ptp(curves, axis=0)) / np.max(np.abs(curves)) < 0.1
    assert all(math.isfinite(v) for v in curves.ravel())
