"""Self-convergence studies in space and time.

No closed-form solution is available for the nonlinear scenarios, so every
error is measured against a reference run: one grid level finer (compared
on the coarse nodes) for spatial studies, ``dt_min / 4`` on the same grid
for temporal studies.
"""

import enum
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

import numpy as np

from .diagnostics import DEFAULT_THRESHOLD_FACTOR, l2_error
from .grid import Field2D, GridError, GridSpec, make_grid
from .model import GaussianData, ModelSpec, NonlinearitySpec, QuadraticPotential, ZeroPotential
from .stepper import EvolutionSpec, Scheme, Status, run_model


class Axis(enum.Enum):
    SPATIAL = "spatial"
    TEMPORAL = "temporal"


@dataclass(frozen=True)
class ScenarioSpec:
    """Grid bounds, model and final time of one convergence experiment.

    Only the bounds of ``grid`` matter; studies choose the point counts.
    """

    grid: GridSpec
    model: ModelSpec
    T: float = 1.0
    label: str = ""
    scheme: Scheme = Scheme.STRANG
    threshold_factor: float = DEFAULT_THRESHOLD_FACTOR


@dataclass
class ConvergenceTable:
    axis: Axis
    label: str
    resolutions: list[float] = field(default_factory=list)
    errors: list[float] = field(default_factory=list)
    reference: str = ""
    complete: bool = True

    @property
    def rows(self) -> list[tuple[float, float]]:
        return list(zip(self.resolutions, self.errors))

    @property
    def fitted_order(self) -> float | None:
        if len(self.errors) < 2 or min(self.errors) <= 0:
            return None
        return estimate_order(self.rows)

    def ratios(self) -> list[float]:
        e = self.errors
        return [e[i] / e[i + 1] for i in range(len(e) - 1)]

    def metadata(self) -> list[str]:
        lines = [f"axis: {self.axis.value}", f"scenario: {self.label}",
                 f"reference: {self.reference}",
                 "psi_exact: self-convergence reference solution (no closed form)"]
        if not self.complete:
            lines.append("status: incomplete (blow-up during study)")
        order = self.fitted_order
        if order is not None:
            lines.append(f"fitted_order: {order!r}")
        return lines

    def to_csv(self) -> str:
        buf = io.StringIO()
        for line in self.metadata():
            buf.write(f"# {line}\n")
        buf.write("resolution,error\n")
        for r, e in self.rows:
            buf.write(f"{r!r},{e!r}\n")
        return buf.getvalue()


def estimate_order(rows: Sequence[tuple[float, float]]) -> float:
    """Least-squares slope of ``log(error)`` against ``log(resolution)``."""
    if len(rows) < 2:
        raise ValueError("need at least two rows to fit an order")
    res = np.array([r for r, _ in rows], dtype=float)
    err = np.array([e for _, e in rows], dtype=float)
    if (err <= 0).any() or (res <= 0).any():
        raise ValueError("resolutions and errors must be positive")
    slope, _ = np.polyfit(np.log(res), np.log(err), 1)
    return float(slope)


def nested_restrict(fine: Field2D, coarse_grid: GridSpec) -> Field2D:
    """Subsample ``fine`` onto the nodes of ``coarse_grid``."""
    g = fine.grid
    if not g.same_bounds(coarse_grid):
        raise GridError("nested_restrict needs identical bounds")
    if g.nx % coarse_grid.nx or g.ny % coarse_grid.ny:
        raise GridError(
            f"fine grid {g.nx}x{g.ny} is not an integer refinement of "
            f"{coarse_grid.nx}x{coarse_grid.ny}")
    sx, sy = g.nx // coarse_grid.nx, g.ny // coarse_grid.ny
    return Field2D(coarse_grid, fine.values[::sy, ::sx].copy())


def _points(length: float, h: float) -> int:
    n = length / h
    if abs(n - round(n)) > 1e-9 * n:
        raise ValueError(f"mesh size {h} does not divide the domain length {length}")
    return int(round(n))


def _grid_for(template: GridSpec, h: float) -> GridSpec:
    return make_grid(template.a, template.b, template.c, template.d,
                     _points(template.lx, h), _points(template.ly, h))


def _check_halving(values: Sequence[float], what: str) -> None:
    for u, v in zip(values, values[1:]):
        if not np.isclose(u, 2 * v, rtol=1e-12, atol=0):
            raise ValueError(f"{what} must halve at each row, got {list(values)}")


def _final(scenario: ScenarioSpec, grid: GridSpec, dt: float):
    ev = EvolutionSpec(scenario.T, dt, scenario.scheme, sample_every=max(1, int(round(scenario.T / dt))))
    return run_model(scenario.model, grid, ev, threshold_factor=scenario.threshold_factor)


def run_spatial_study(scenario: ScenarioSpec, h_list: Sequence[float],
                      dt_ref: float) -> ConvergenceTable:
    """Errors at ``t = T`` for each mesh size, ``dt_ref`` held fixed.

    The reference is computed at half the smallest mesh size.
    """
    h_list = [float(h) for h in h_list]
    if not h_list:
        raise ValueError("empty h_list")
    _check_halving(h_list, "h_list")
    grids = [_grid_for(scenario.grid, h) for h in h_list]
    ref_grid = _grid_for(scenario.grid, h_list[-1] / 2)
    table = ConvergenceTable(Axis.SPATIAL, scenario.label,
                             reference=f"h = {h_list[-1] / 2!r}, dt = {dt_ref!r}, nested restriction")
    ref = _final(scenario, ref_grid, dt_ref)
    if ref.status is Status.BLOWN_UP:
        table.complete = False
        return table
    for h, g in zip(h_list, grids):
        res = _final(scenario, g, dt_ref)
        if res.status is Status.BLOWN_UP:
            table.complete = False
            break
        table.resolutions.append(h)
        table.errors.append(l2_error(res.final, nested_restrict(ref.final, g)))
    return table


def run_temporal_study(scenario: ScenarioSpec, dt_list: Sequence[float],
                       h_fixed: float) -> ConvergenceTable:
    """Errors at ``t = T`` for each time step on a fixed grid.

    The reference uses a quarter of the smallest step.
    """
    dt_list = [float(dt) for dt in dt_list]
    if not dt_list:
        raise ValueError("empty dt_list")
    _check_halving(dt_list, "dt_list")
    grid = _grid_for(scenario.grid, h_fixed)
    dt_ref = dt_list[-1] / 4
    table = ConvergenceTable(Axis.TEMPORAL, scenario.label,
                             reference=f"dt = {dt_ref!r}, h = {h_fixed!r}, same grid")
    rows = []
    for dt in dt_list:
        res = _final(scenario, grid, dt)
        if res.status is Status.BLOWN_UP:
            table.complete = False
            break
        rows.append((dt, res.final))
    ref = _final(scenario, grid, dt_ref)
    if ref.status is Status.BLOWN_UP:
        table.complete = False
        return table
    for dt, f in rows:
        table.resolutions.append(dt)
        table.errors.append(l2_error(f, ref.final))
    return table


def _run_one(args):
    kind, scenario, resolutions, other = args
    if kind == Axis.SPATIAL:
        return run_spatial_study(scenario, resolutions, other)
    return run_temporal_study(scenario, resolutions, other)


def run_studies(axis: Axis, scenarios: Sequence[ScenarioSpec], resolutions: Sequence[float],
                other: float, max_workers: int | None = 1) -> list[ConvergenceTable]:
    """Run one study per scenario, in worker processes when ``max_workers > 1``.

    ``other`` is ``dt_ref`` for spatial studies and ``h_fixed`` for temporal ones.
    """
    jobs = [(Axis(axis), s, list(resolutions), other) for s in scenarios]
    if max_workers == 1 or len(jobs) == 1:
        return [_run_one(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(_run_one, jobs))


def format_tables(tables: Sequence[ConvergenceTable]) -> str:
    """Aligned text table: one row per scenario, one column per resolution."""
    if not tables:
        return ""
    axis = tables[0].axis
    symbol = "h" if axis is Axis.SPATIAL else "dt"
    resolutions = max((t.resolutions for t in tables), key=len)

    def head(r):
        if axis is Axis.SPATIAL:
            frac = Fraction(r).limit_denominator(1 << 20)
            if float(frac) == r:
                return f"{symbol} = {frac}"
        return f"{symbol} = {r:g}"

    header = ["Potential V"] + [head(r) for r in resolutions] + ["order"]
    body = []
    for t in tables:
        cells = [t.label] + [f"{e:.4e}" for e in t.errors]
        cells += ["-"] * (len(resolutions) - len(t.errors))
        order = t.fitted_order
        cells.append("-" if order is None else f"{order:.3f}")
        body.append(cells)
    widths = [max(len(r[i]) for r in [header] + body) for i in range(len(header))]
    fmt = lambda cells: " | ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()
    lines = [fmt(header), "-+-".join("-" * w for w in widths)]
    lines += [fmt(r) for r in body]
    return "\n".join(lines) + "\n"


# Table-style scenarios: kappa = 1, Gaussian sigma = 1 on [-8, 8]^2, t = 1.
TABLE_POTENTIALS = (
    ("0", ZeroPotential()),
    ("(x^2+y^2)/2eps", QuadraticPotential(1.0, 1.0)),
    ("-(x^2+y^2)/2eps", QuadraticPotential(-1.0, -1.0)),
    ("(x^2+10y^2)/2eps", QuadraticPotential(1.0, 10.0)),
    ("(x^2-10y^2)/2eps", QuadraticPotential(1.0, -10.0)),
)


def table_scenarios(eps: float = 1.0, T: float = 1.0, scheme: Scheme = Scheme.STRANG,
                    half_width: float = 8.0) -> list[ScenarioSpec]:
    grid = make_grid(-half_width, half_width, -half_width, half_width, 4, 4)
    out = []
    for label, pot in TABLE_POTENTIALS:
        if isinstance(pot, QuadraticPotential):
            pot = replace(pot, eps=eps)
        model = ModelSpec(pot, NonlinearitySpec(1.0, 3.0), GaussianData(1.0))
        out.append(ScenarioSpec(grid, model, T, label, scheme))
    return out
