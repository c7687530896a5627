"""Problem definition: potential, power nonlinearity, initial data.

The equation solved is::

    i psi_t = -1/2 Lap psi + V psi + kappa |psi|^(p-1) psi

on a periodic rectangle.  This module also holds the exact solution of the
pointwise part ``i psi_t = (V + kappa |psi|^(p-1)) psi``; since the
multiplier is real, ``|psi|`` is frozen along that flow and the solution is
a phase rotation.
"""

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .grid import Field2D, GridError, GridSpec, mesh


@dataclass(frozen=True)
class QuadraticPotential:
    """``V = (cx x^2 + cy y^2) / (2 eps)``; negative coefficients give inverted traps."""

    cx: float = 1.0
    cy: float = 1.0
    eps: float = 1.0

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError(f"eps must be > 0, got {self.eps}")
        if not (np.isfinite(self.cx) and np.isfinite(self.cy) and np.isfinite(self.eps)):
            raise ValueError("quadratic potential coefficients must be finite")

    def label(self) -> str:
        def term(c, v):
            return v if c == 1 else f"{c:g}{v}"
        num = term(self.cx, "x^2")
        if self.cy < 0:
            num += " - " + term(-self.cy, "y^2")
        else:
            num += " + " + term(self.cy, "y^2")
        denom = "2" if self.eps == 1 else f"2*{self.eps:g}"
        return f"({num})/{denom}"


@dataclass(frozen=True)
class ZeroPotential:
    def label(self) -> str:
        return "0"


@dataclass(frozen=True, eq=False)
class TabulatedPotential:
    samples: np.ndarray

    def __post_init__(self):
        samples = np.asarray(self.samples)
        if np.iscomplexobj(samples) or not np.isfinite(samples).all():
            raise ValueError("tabulated potential must be real and finite")
        object.__setattr__(self, "samples", samples.astype(np.float64))

    def label(self) -> str:
        return "tabulated"


PotentialSpec = Union[QuadraticPotential, ZeroPotential, TabulatedPotential]


@dataclass(frozen=True)
class NonlinearitySpec:
    """``kappa |psi|^(p-1) psi``; ``kappa > 0`` defocusing, ``kappa < 0`` focusing."""

    kappa: float = 1.0
    p: float = 3.0

    def __post_init__(self):
        if not np.isfinite(self.kappa):
            raise ValueError(f"kappa must be finite, got {self.kappa}")
        if not (np.isfinite(self.p) and self.p >= 1):
            raise ValueError(f"p must be >= 1, got {self.p}")


@dataclass(frozen=True)
class GaussianData:
    """``exp(-(x^2+y^2)/(2 sigma)) / sqrt(sigma pi)``, unit L2 norm on the plane."""

    sigma: float = 1.0
    amplitude: float = 1.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be > 0, got {self.sigma}")


@dataclass(frozen=True)
class HatData:
    """``(L - |x|)(L - |y|)`` on ``[-L, L]^2``.

    ``half_width=None`` means the standard ``L = 8``, and then the grid must
    be exactly ``[-8, 8]^2``.  Passing ``half_width`` explicitly allows other
    bounds.
    """

    half_width: float | None = None


@dataclass(frozen=True, eq=False)
class CustomData:
    samples: np.ndarray


InitialDataSpec = Union[GaussianData, HatData, CustomData]


@dataclass(frozen=True)
class ModelSpec:
    potential: PotentialSpec = field(default_factory=ZeroPotential)
    nonlinearity: NonlinearitySpec = field(default_factory=NonlinearitySpec)
    initial: InitialDataSpec = field(default_factory=GaussianData)


def eval_potential(spec: PotentialSpec, grid: GridSpec) -> np.ndarray:
    """Real ``(ny, nx)`` array of ``V`` at the grid nodes."""
    if isinstance(spec, ZeroPotential):
        return np.zeros(grid.shape)
    if isinstance(spec, QuadraticPotential):
        X, Y = mesh(grid)
        return (spec.cx * X**2 + spec.cy * Y**2) / (2.0 * spec.eps)
    if isinstance(spec, TabulatedPotential):
        samples = spec.samples
        if samples.size != grid.nx * grid.ny:
            raise GridError(
                f"tabulated potential has {samples.size} samples, grid needs {grid.nx * grid.ny}")
        return samples.reshape(grid.shape).copy()
    raise TypeError(f"unknown potential spec {spec!r}")


def gaussian(grid: GridSpec, sigma: float = 1.0) -> Field2D:
    X, Y = mesh(grid)
    values = np.exp(-(X**2 + Y**2) / (2.0 * sigma)) / np.sqrt(sigma * np.pi)
    return Field2D(grid, values.astype(np.complex128))


def hat(grid: GridSpec, half_width: float | None = None) -> Field2D:
    if half_width is None:
        if (grid.a, grid.b, grid.c, grid.d) != (-8.0, 8.0, -8.0, 8.0):
            raise GridError(
                "hat initial data needs the [-8, 8]^2 domain; pass half_width for other bounds")
        half_width = 8.0
    X, Y = mesh(grid)
    hx = np.clip(half_width - np.abs(X), 0.0, None)
    hy = np.clip(half_width - np.abs(Y), 0.0, None)
    return Field2D(grid, (hx * hy).astype(np.complex128))


def init_field(spec: InitialDataSpec, grid: GridSpec) -> Field2D:
    if isinstance(spec, GaussianData):
        f = gaussian(grid, spec.sigma)
        return f if spec.amplitude == 1.0 else f * spec.amplitude
    if isinstance(spec, HatData):
        return hat(grid, spec.half_width)
    if isinstance(spec, CustomData):
        return Field2D(grid, np.asarray(spec.samples).reshape(grid.shape).copy())
    raise TypeError(f"unknown initial data spec {spec!r}")


def modulus_power(values: np.ndarray, q: float) -> np.ndarray:
    """``|psi|^q`` with integer fast paths; zero nodes give 0 for ``q > 0``."""
    if q == 0:
        return np.ones(values.shape)
    if q == 2:
        return values.real**2 + values.imag**2
    if q == 4:
        rho = values.real**2 + values.imag**2
        return rho * rho
    mod = np.abs(values)
    out = np.zeros(values.shape)
    nz = mod > 0
    out[nz] = np.exp(q * np.log(mod[nz]))
    return out


def apply_pointwise(values: np.ndarray, V: np.ndarray, nl: NonlinearitySpec,
                    dt: float) -> np.ndarray:
    """Array kernel of :func:`potential_nonlinear_step`."""
    if dt == 0.0:
        return values
    if nl.kappa == 0.0:
        phase = V * dt
    else:
        phase = (V + nl.kappa * modulus_power(values, nl.p - 1.0)) * dt
    return values * np.exp(-1j * phase)


def potential_nonlinear_step(f: Field2D, V: np.ndarray, nl: NonlinearitySpec,
                             dt: float) -> Field2D:
    """Exact flow of ``i psi_t = (V + kappa |psi|^(p-1)) psi`` over ``dt``."""
    V = np.asarray(V, dtype=np.float64)
    if V.shape != f.grid.shape:
        raise GridError(f"potential shape {V.shape} does not match grid {f.grid.shape}")
    if not np.isfinite(f.values).all():
        raise ValueError("potential_nonlinear_step: non-finite input field")
    out = apply_pointwise(f.values, V, nl, dt)
    if not np.isfinite(out).all():
        raise FloatingPointError("non-finite phase in pointwise step")
    return Field2D(f.grid, out)
