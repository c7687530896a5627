"""Time-splitting Fourier spectral solver for the 2D Gross-Pitaevskii equation

    i psi_t = -1/2 Lap psi + V psi + kappa |psi|^(p-1) psi

on a periodic rectangle, with conservation diagnostics, blow-up detection
and self-convergence studies.
"""

from .diagnostics import (DiagnosticsRecord, blowup_check, diagnose, energy, l2_error,
                          max_density, relative_drift)
from .experiments import (Axis, ConvergenceTable, ScenarioSpec, estimate_order, format_tables,
                          nested_restrict, run_spatial_study, run_studies, run_temporal_study,
                          table_scenarios)
from .grid import (Field2D, GridError, GridSpec, WaveNumbers, coordinates, l2_norm, make_grid,
                   mesh, sample, square_grid, wavenumbers)
from .io import (ConfigError, RunConfig, SnapshotFormatError, load_config, parse_config,
                 read_snapshot, read_timeseries, serialize_config, write_snapshot,
                 write_timeseries)
from .model import (CustomData, GaussianData, HatData, ModelSpec, NonlinearitySpec,
                    QuadraticPotential, TabulatedPotential, ZeroPotential, eval_potential,
                    init_field, potential_nonlinear_step)
from .spectral import SpectralPlan, forward, inverse, kinetic_energy_integral, kinetic_step
from .stepper import (EvolutionResult, EvolutionSpec, Scheme, Status, evolve, lie_step,
                      propagate, run_model, strang_step)

__version__ = "0.1.0"
