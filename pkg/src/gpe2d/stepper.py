"""Lie and Strang compositions of the kinetic and pointwise flows.

Writing ``A(t)`` for the exact kinetic flow and ``B(t)`` for the exact
potential + nonlinear flow, one Strang step is ``B(dt/2) A(dt) B(dt/2)`` and
one Lie step is ``B(dt) A(dt)`` (``A`` applied first).  Negative ``dt`` runs
the same composition backwards; for Strang this is the exact inverse step.
"""

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .diagnostics import DEFAULT_THRESHOLD_FACTOR, DiagnosticsRecord, blowup_check, record
from .grid import Field2D, GridError, GridSpec
from .model import ModelSpec, NonlinearitySpec, apply_pointwise, eval_potential, init_field
from .spectral import SpectralPlan


class Scheme(enum.Enum):
    LIE = "lie"
    STRANG = "strang"


class Status(enum.Enum):
    COMPLETED = "completed"
    BLOWN_UP = "blown_up"


@dataclass(frozen=True)
class EvolutionSpec:
    T: float
    dt: float
    scheme: Scheme = Scheme.STRANG
    sample_every: int = 1
    snapshot_times: tuple[float, ...] = ()

    def __post_init__(self):
        if not self.T > 0:
            raise ValueError(f"T must be > 0, got {self.T}")
        if not self.dt > 0:
            raise ValueError(f"dt must be > 0, got {self.dt}")
        ratio = self.T / self.dt
        if abs(ratio - round(ratio)) > 1e-9 * ratio:
            raise ValueError(f"T/dt = {ratio!r} is not an integer")
        if int(self.sample_every) != self.sample_every or self.sample_every < 1:
            raise ValueError(f"sample_every must be an integer >= 1, got {self.sample_every}")
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        times = tuple(float(t) for t in self.snapshot_times)
        if list(times) != sorted(times):
            raise ValueError("snapshot_times must be sorted")
        for t in times:
            if t < 0 or t > self.T:
                raise ValueError(f"snapshot time {t} outside [0, {self.T}]")
            if abs(t / self.dt - round(t / self.dt)) * self.dt > self.dt / 2:
                raise ValueError(f"snapshot time {t} is not on a step boundary")
        object.__setattr__(self, "snapshot_times", times)

    @property
    def n_steps(self) -> int:
        return int(round(self.T / self.dt))

    def snapshot_steps(self) -> list[int]:
        return [int(round(t / self.dt)) for t in self.snapshot_times]


def _strang(values, V, nl, plan, dt):
    half = 0.5 * dt
    values = apply_pointwise(values, V, nl, half)
    values = plan.apply_kinetic(values, dt)
    return apply_pointwise(values, V, nl, half)


def _lie(values, V, nl, plan, dt):
    values = plan.apply_kinetic(values, dt)
    return apply_pointwise(values, V, nl, dt)


_KERNELS = {Scheme.STRANG: _strang, Scheme.LIE: _lie}


def _check_inputs(f: Field2D, V: np.ndarray, plan: SpectralPlan) -> np.ndarray:
    V = np.asarray(V, dtype=np.float64)
    if plan.grid != f.grid:
        raise GridError("plan and field live on different grids")
    if V.shape != f.grid.shape:
        raise GridError(f"potential shape {V.shape} does not match grid {f.grid.shape}")
    return V


def strang_step(f: Field2D, V: np.ndarray, nl: NonlinearitySpec,
                plan: SpectralPlan, dt: float) -> Field2D:
    """One second-order step ``B(dt/2) A(dt) B(dt/2)``.

    Raises ``FloatingPointError`` if the result is not finite.
    """
    V = _check_inputs(f, V, plan)
    out = _strang(f.values, V, nl, plan, dt)
    if not np.isfinite(out).all():
        raise FloatingPointError("non-finite field after Strang step")
    return Field2D(f.grid, out)


def lie_step(f: Field2D, V: np.ndarray, nl: NonlinearitySpec,
             plan: SpectralPlan, dt: float) -> Field2D:
    """One first-order step ``B(dt) A(dt)``."""
    V = _check_inputs(f, V, plan)
    out = _lie(f.values, V, nl, plan, dt)
    if not np.isfinite(out).all():
        raise FloatingPointError("non-finite field after Lie step")
    return Field2D(f.grid, out)


def propagate(f: Field2D, V: np.ndarray, nl: NonlinearitySpec, plan: SpectralPlan,
              dt: float, n_steps: int, scheme: Scheme = Scheme.STRANG) -> Field2D:
    """Take ``n_steps`` steps of size ``dt`` (may be negative) with no diagnostics."""
    V = _check_inputs(f, V, plan)
    step = _KERNELS[Scheme(scheme)]
    values = f.values
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(n_steps):
            values = step(values, V, nl, plan, dt)
    if not np.isfinite(values).all():
        raise FloatingPointError("non-finite field after propagation")
    return Field2D(f.grid, values)


Observer = Callable[[int, float, Field2D], None]


@dataclass
class EvolutionResult:
    final: Field2D
    t_final: float
    diagnostics: list[DiagnosticsRecord]
    status: Status
    blowup_time: Optional[float] = None
    snapshots: dict[float, Field2D] = field(default_factory=dict)

    @property
    def completed(self) -> bool:
        return self.status is Status.COMPLETED


def evolve(f0: Field2D, model: ModelSpec, evolution: EvolutionSpec,
           observer: Optional[Observer] = None,
           threshold_factor: float = DEFAULT_THRESHOLD_FACTOR,
           plan: Optional[SpectralPlan] = None,
           V: Optional[np.ndarray] = None) -> EvolutionResult:
    """Run ``evolution.n_steps`` steps from ``f0``.

    Diagnostics are recorded at t = 0, every ``sample_every`` steps and at
    the final step.  The observer is called at the same points and at every
    snapshot time.  Blow-up (non-finite samples, or peak density above
    ``threshold_factor`` times the initial peak) ends the run early with
    ``Status.BLOWN_UP``; the last finite field is returned.
    """
    grid = f0.grid
    plan = plan if plan is not None else SpectralPlan(grid)
    V = eval_potential(model.potential, grid) if V is None else np.asarray(V, dtype=np.float64)
    V = _check_inputs(f0, V, plan)
    nl = model.nonlinearity
    step = _KERNELS[evolution.scheme]
    dt = evolution.dt
    n_steps = evolution.n_steps
    snap_steps = set(evolution.snapshot_steps())

    values = f0.values
    rec0 = record(values, 0.0, V, nl, plan)
    initial_peak = rec0.max_density
    series = [rec0]
    snapshots: dict[float, Field2D] = {}

    def emit(n, t, vals, sampled):
        if n in snap_steps:
            snapshots[round(t, 12)] = Field2D(grid, vals.copy())
        if observer is not None and (sampled or n in snap_steps):
            observer(n, t, Field2D(grid, vals))

    emit(0, 0.0, values, True)

    for n in range(1, n_steps + 1):
        with np.errstate(over="ignore", invalid="ignore"):
            new = step(values, V, nl, plan, dt)
        t = n * dt
        if not np.isfinite(new).all():
            series.append(DiagnosticsRecord(t, np.nan, np.nan, np.inf, False))
            return EvolutionResult(Field2D(grid, values), (n - 1) * dt, series,
                                   Status.BLOWN_UP, t, snapshots)
        values = new
        sampled = n % evolution.sample_every == 0 or n == n_steps
        if sampled:
            rec = record(values, t, V, nl, plan)
            series.append(rec)
            if blowup_check(rec, initial_peak, threshold_factor):
                emit(n, t, values, True)
                return EvolutionResult(Field2D(grid, values), t, series,
                                       Status.BLOWN_UP, t, snapshots)
        emit(n, t, values, sampled)

    return EvolutionResult(Field2D(grid, values), n_steps * dt, series,
                           Status.COMPLETED, None, snapshots)


def run_model(model: ModelSpec, grid: GridSpec, evolution: EvolutionSpec,
              **kwargs) -> EvolutionResult:
    """Sample the model's initial data on ``grid`` and evolve it."""
    return evolve(init_field(model.initial, grid), model, evolution, **kwargs)
