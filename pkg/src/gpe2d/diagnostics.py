"""Mass, energy, peak density, error norms and blow-up detection."""

from dataclasses import dataclass

import numpy as np

from .grid import Field2D, check_same_grid, l2_norm, weighted_norm
from .model import NonlinearitySpec, modulus_power
from .spectral import SpectralPlan

DEFAULT_THRESHOLD_FACTOR = 100.0


@dataclass(frozen=True)
class DiagnosticsRecord:
    t: float
    mass: float
    energy: float
    max_density: float
    finite: bool = True


def energy_values(values: np.ndarray, V: np.ndarray, nl: NonlinearitySpec,
                  plan: SpectralPlan) -> float:
    w = plan.grid.cell_area
    rho = values.real**2 + values.imag**2
    e = plan.kinetic_energy_values(values) + float(np.sum(V * rho)) * w
    if nl.kappa != 0.0:
        p = nl.p
        e += 2.0 * nl.kappa / (p + 1.0) * float(np.sum(modulus_power(values, p + 1.0))) * w
    return e


def energy(f: Field2D, V: np.ndarray, nl: NonlinearitySpec,
           plan: SpectralPlan | None = None) -> float:
    """``int 1/2|grad psi|^2 + V|psi|^2 + 2 kappa/(p+1) |psi|^(p+1)``.

    The gradient term is evaluated spectrally, the rest by nodal quadrature.
    """
    plan = plan if plan is not None else SpectralPlan(f.grid)
    check_same_grid(plan.grid, f.grid)
    if not np.isfinite(f.values).all():
        raise ValueError("energy of a field with non-finite samples")
    return energy_values(f.values, np.asarray(V, dtype=np.float64), nl, plan)


def max_density_values(values: np.ndarray) -> float:
    m = float(np.max(values.real**2 + values.imag**2))
    return m if np.isfinite(m) else np.inf


def max_density(f: Field2D) -> float:
    """Peak of ``|psi|^2``; ``inf`` if any sample is NaN or infinite."""
    return max_density_values(f.values)


def l2_error(f: Field2D, ref: Field2D) -> float:
    check_same_grid(f.grid, ref.grid)
    return weighted_norm(f.values - ref.values, f.grid.cell_area)


def record(values: np.ndarray, t: float, V: np.ndarray, nl: NonlinearitySpec,
           plan: SpectralPlan) -> DiagnosticsRecord:
    if not np.isfinite(values).all():
        return DiagnosticsRecord(t, np.nan, np.nan, np.inf, False)
    mass = float(np.sqrt(np.sum(values.real**2 + values.imag**2) * plan.grid.cell_area))
    return DiagnosticsRecord(t, mass, energy_values(values, V, nl, plan),
                             max_density_values(values), True)


def diagnose(f: Field2D, t: float, V: np.ndarray, nl: NonlinearitySpec,
             plan: SpectralPlan | None = None) -> DiagnosticsRecord:
    plan = plan if plan is not None else SpectralPlan(f.grid)
    return record(f.values, t, np.asarray(V, dtype=np.float64), nl, plan)


def blowup_check(rec: DiagnosticsRecord, initial_max_density: float,
                 threshold_factor: float = DEFAULT_THRESHOLD_FACTOR) -> bool:
    """True iff the record is non-finite or its peak density exceeds
    ``threshold_factor * initial_max_density``."""
    if not initial_max_density > 0:
        raise ValueError("initial_max_density must be > 0")
    if not rec.finite:
        return True
    return rec.max_density > threshold_factor * initial_max_density


def relative_drift(series, attr: str = "mass") -> float:
    """Largest ``|q(t) - q(0)| / |q(0)|`` over a record series."""
    q = np.array([getattr(r, attr) for r in series])
    return float(np.max(np.abs(q - q[0])) / abs(q[0]))


__all__ = [
    "DEFAULT_THRESHOLD_FACTOR", "DiagnosticsRecord", "blowup_check", "diagnose",
    "energy", "l2_error", "l2_norm", "max_density", "record", "relative_drift",
]
