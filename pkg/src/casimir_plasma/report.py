"""Distance sweeps, CSV tables and minimal SVG line plots."""
from __future__ import annotations

import csv
import datetime as _dt
import hashlib
import io
import math
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .config import DEFAULT_CONFIG, QuadratureConfig
from .errors import ConvergenceError, DomainError, ReportError
from .factors import CorrectionReport, PerfectThermalCache, correction_reports
from .units import CONSTANTS, MICRON, NANOMETER, Mirror, material_preset, plasma_mirror, thermal_state

CSV_COLUMNS = (
    "L_um", "material",
    "eta_F", "eta_F_P", "eta_F_T", "delta_F", "Delta_F",
    "eta_E", "eta_E_P", "eta_E_T", "delta_E", "Delta_E",
    "phi_F", "phi_E",
)
NUMERIC_COLUMNS = tuple(c for c in CSV_COLUMNS if c != "material")
QUANTITY_GROUPS = {
    "eta_F": ("eta_F",),
    "eta_E": ("eta_E",),
    "components": ("eta_F", "eta_F_P", "eta_F_T", "eta_E", "eta_E_P", "eta_E_T"),
    "delta": ("delta_F", "delta_E"),
    "Delta": ("Delta_F", "Delta_E"),
}


def _fmt(x: float) -> str:
    # 12 significant digits
    return format(x, ".11e") if math.isfinite(x) else "nan"


@dataclass(frozen=True)
class SweepSpec:
    L_min: float = 0.1 * MICRON
    L_max: float = 10.0 * MICRON
    points_per_decade: int = 50
    materials: tuple[Mirror, ...] = field(
        default_factory=lambda: (material_preset("Al"), material_preset("CuAu"))
    )
    T: float = 300.0
    quantities: tuple[str, ...] = ("eta_F", "eta_E", "components", "delta", "Delta")

    def __post_init__(self):
        if not 0.0 < self.L_min <= self.L_max:
            raise DomainError("need 0 < L_min <= L_max")
        if self.points_per_decade < 1:
            raise DomainError("points_per_decade must be >= 1")
        if not self.materials:
            raise DomainError("at least one material is required")
        names = [m.name for m in self.materials]
        if len(set(names)) != len(names):
            raise DomainError(f"duplicate material names in {names}")
        unknown = set(self.quantities) - set(QUANTITY_GROUPS)
        if unknown:
            raise DomainError(f"unknown quantities {sorted(unknown)}; valid: {sorted(QUANTITY_GROUPS)}")
        thermal_state(self.T)

    def grid(self) -> np.ndarray:
        """Log-spaced separations including both ends."""
        if self.L_min == self.L_max:
            return np.array([self.L_min])
        decades = math.log10(self.L_max / self.L_min)
        n = max(1, round(self.points_per_decade * decades))
        return np.logspace(math.log10(self.L_min), math.log10(self.L_max), n + 1)

    def describe(self) -> str:
        mats = ",".join(
            f"{m.name}={'perfect' if m.is_perfect else format(m.lambda_P / NANOMETER, 'g') + 'nm'}"
            for m in self.materials
        )
        return (f"T={self.T:g}K L=[{self.L_min / MICRON:g},{self.L_max / MICRON:g}]um "
                f"points_per_decade={self.points_per_decade} materials={mats}")


@dataclass(frozen=True)
class SweepRow:
    material: str
    report: CorrectionReport

    def values(self) -> dict:
        d = self.report.as_dict()
        out = {"L_um": d.pop("L") / MICRON, "material": self.material}
        out.update(d)
        return out


@dataclass
class SweepTable:
    rows: list[SweepRow]
    metadata: dict

    def column(self, name: str, material: str | None = None) -> np.ndarray:
        return np.array([r.values()[name] for r in self.rows
                         if material is None or r.material == material])

    @property
    def materials(self) -> list[str]:
        seen = []
        for r in self.rows:
            if r.material not in seen:
                seen.append(r.material)
        return seen

    def subset(self, materials: Sequence[str]) -> "SweepTable":
        rows = [r for m in materials for r in self.rows if r.material == m]
        if not rows:
            raise ReportError(f"no rows for materials {list(materials)}")
        return SweepTable(rows, dict(self.metadata))


def _rows_for(mirror: Mirror, grid, thermal, config, cache) -> list[SweepRow]:
    try:
        reports = correction_reports(list(grid), mirror, thermal, config, strict=False, cache=cache)
    except ConvergenceError as exc:
        raise ConvergenceError(f"sweep failed for material {mirror.name}: {exc}",
                               exc.error_estimate, material=mirror.name, **exc.context) from exc
    return [SweepRow(mirror.name, r) for r in reports]


def _material_rows(args):
    mirror, grid, T, config = args
    thermal = thermal_state(T)
    return _rows_for(mirror, grid, thermal, config, PerfectThermalCache(thermal, config))


def run_sweep(spec: SweepSpec, config: QuadratureConfig = DEFAULT_CONFIG,
              workers: int = 1) -> SweepTable:
    """Correction reports for every material over the log-spaced grid.

    With ``workers > 1`` materials run in separate processes; rows are
    always ordered by material (spec order) then ``L``.
    """
    grid = spec.grid()
    thermal = thermal_state(spec.T)
    if workers > 1 and len(spec.materials) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_material_rows, [(m, grid, spec.T, config) for m in spec.materials]))
    else:
        cache = PerfectThermalCache(thermal, config)
        chunks = [_rows_for(m, grid, thermal, config, cache) for m in spec.materials]
    rows = [row for chunk in chunks for row in chunk]
    metadata = {
        "constants": CONSTANTS.version,
        "config_digest": config.digest(),
        "spec": spec.describe(),
        "created_utc": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }
    return SweepTable(rows, metadata)


def _atomic_write(destination: str | os.PathLike, text: str) -> Path:
    path = Path(destination)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    except OSError as exc:
        raise ReportError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def csv_text(table: SweepTable, include_timestamp: bool = False) -> str:
    if not table.rows:
        raise ReportError("empty table")
    buf = io.StringIO()
    buf.write("# casimir_plasma correction-factor sweep\n")
    for key in ("constants", "config_digest", "spec"):
        if key in table.metadata:
            buf.write(f"# {key}: {table.metadata[key]}\n")
    if include_timestamp and "created_utc" in table.metadata:
        buf.write(f"# created_utc: {table.metadata['created_utc']}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in table.rows:
        vals = row.values()
        writer.writerow([vals["material"] if c == "material" else _fmt(vals[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def emit_csv(table: SweepTable, destination, include_timestamp: bool = False) -> Path:
    """Write the table as UTF-8 CSV with ``#`` metadata lines; the write is atomic."""
    return _atomic_write(destination, csv_text(table, include_timestamp))


def read_csv(source) -> tuple[dict, list[dict]]:
    """Parse a file written by :func:`emit_csv` into ``(metadata, rows)``."""
    metadata, lines = {}, []
    with open(source, encoding="utf-8", newline="") as fh:
        for line in fh:
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition(": ")
                if value:
                    metadata[key] = value
            else:
                lines.append(line)
    rows = []
    for rec in csv.DictReader(lines):
        rows.append({k: (v if k == "material" else float(v)) for k, v in rec.items()})
    return metadata, rows


def table_digest(table: SweepTable) -> str:
    return hashlib.sha256(csv_text(table).encode()).hexdigest()[:16]


_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
_DASHES = ("", "6,4", "2,3", "8,3,2,3")


def _nice_ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((s * mag for s in (1, 2, 2.5, 5, 10) if s * mag >= raw), default=raw)
    start = math.ceil(lo / step) * step
    return [start + i * step for i in range(int((hi - start) / step + 1e-9) + 1)]


def svg_text(table: SweepTable, quantity: str | Sequence[str], title: str = "") -> str:
    columns = QUANTITY_GROUPS.get(quantity, (quantity,)) if isinstance(quantity, str) else tuple(quantity)
    for c in columns:
        if c not in NUMERIC_COLUMNS or c == "L_um":
            raise ReportError(f"unknown quantity column {c!r}")
    series = []
    for c in columns:
        found = False
        for mat in table.materials:
            x = table.column("L_um", mat)
            y = table.column(c, mat)
            ok = np.isfinite(y)
            if ok.any():
                series.append((mat, c, x[ok], y[ok]))
                found = True
        if not found:
            raise ReportError(f"column {c!r} has no finite values")

    W, H, ml, mr, mt, mb = 760, 500, 80, 200, 40, 60
    pw, ph = W - ml - mr, H - mt - mb
    xs = np.concatenate([s[2] for s in series])
    ys = np.concatenate([s[3] for s in series])
    lx0, lx1 = math.floor(math.log10(xs.min()) + 1e-12), math.ceil(math.log10(xs.max()) - 1e-12)
    lx1 = max(lx1, lx0 + 1)
    y0, y1 = float(ys.min()), float(ys.max())
    pad = 0.05 * (y1 - y0) if y1 > y0 else max(abs(y0) * 0.05, 1e-12)
    y0, y1 = y0 - pad, y1 + pad

    def px(x):
        return ml + (math.log10(x) - lx0) / (lx1 - lx0) * pw

    def py(y):
        return mt + (y1 - y) / (y1 - y0) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
           f'viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">',
           f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>']
    if title:
        out.append(f'<text x="{ml + pw / 2:.1f}" y="{mt - 14}" text-anchor="middle">{title}</text>')
    for d in range(lx0, lx1 + 1):
        x = px(10.0**d)
        out.append(f'<line x1="{x:.1f}" y1="{mt + ph}" x2="{x:.1f}" y2="{mt + ph + 6}" stroke="black"/>')
        out.append(f'<text x="{x:.1f}" y="{mt + ph + 20}" text-anchor="middle">{10.0**d:g}</text>')
        for k in range(2, 10):
            if d < lx1:
                xm = px(k * 10.0**d)
                out.append(f'<line x1="{xm:.1f}" y1="{mt + ph}" x2="{xm:.1f}" y2="{mt + ph + 3}" stroke="black"/>')
    for t in _nice_ticks(y0, y1):
        y = py(t)
        out.append(f'<line x1="{ml - 6}" y1="{y:.1f}" x2="{ml}" y2="{y:.1f}" stroke="black"/>')
        out.append(f'<text x="{ml - 9}" y="{y + 4:.1f}" text-anchor="end">{t:.4g}</text>')
    out.append(f'<text x="{ml + pw / 2:.1f}" y="{H - 15}" text-anchor="middle">L (µm)</text>')
    mats = table.materials
    for i, (mat, c, x, y) in enumerate(series):
        color = _COLORS[mats.index(mat) % len(_COLORS)]
        dash = _DASHES[columns.index(c) % len(_DASHES)]
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x, y))
        style = f' stroke-dasharray="{dash}"' if dash else ""
        out.append(f'<polyline data-material="{mat}" data-quantity="{c}" fill="none" '
                   f'stroke="{color}" stroke-width="1.5"{style} points="{pts}"/>')
        ly = mt + 10 + 18 * i
        out.append(f'<line x1="{ml + pw + 15}" y1="{ly}" x2="{ml + pw + 45}" y2="{ly}" '
                   f'stroke="{color}" stroke-width="1.5"{style}/>')
        out.append(f'<text x="{ml + pw + 50}" y="{ly + 4}">{mat}: {c}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg(table: SweepTable, quantity: str | Sequence[str], destination, title: str = "") -> Path:
    """Log-x line plot, one polyline per (material, column); atomic write."""
    if not table.rows:
        raise ReportError("empty table")
    return _atomic_write(destination, svg_text(table, quantity, title))


FIGURES = {
    "fig1_force": (("Al", "CuAu"), ("eta_F", "eta_F_P", "eta_F_T"), "Force correction factors"),
    "fig2_energy": (("Al", "CuAu"), ("eta_E", "eta_E_P", "eta_E_T"), "Energy correction factors"),
    "fig3_delta": (("Al", "CuAu", "lambdaP=300nm", "lambdaP=500nm"), ("delta_F", "delta_E"),
                   "Deviation from the product approximation"),
    "fig4_rescaled": (("Al", "CuAu", "lambdaP=300nm"), ("Delta_F", "Delta_E"),
                      "Rescaled deviation (lambda_T/lambda_P) delta"),
}


def figure_materials() -> tuple[Mirror, ...]:
    return (material_preset("Al"), material_preset("CuAu"),
            plasma_mirror(300 * NANOMETER), plasma_mirror(500 * NANOMETER))


def write_figures(out_dir, T: float = 300.0, points_per_decade: int = 50,
                  config: QuadratureConfig = DEFAULT_CONFIG, workers: int = 1) -> list[Path]:
    """Data and plots for the four figures: one CSV and one SVG each."""
    spec = SweepSpec(points_per_decade=points_per_decade, T=T, materials=figure_materials())
    table = run_sweep(spec, config, workers)
    out = Path(out_dir)
    written = []
    for name, (mats, columns, title) in FIGURES.items():
        sub = table.subset(mats)
        written.append(emit_csv(sub, out / f"{name}.csv"))
        written.append(emit_svg(sub, columns, out / f"{name}.svg", title=f"{title}, T={T:g} K"))
    return written
