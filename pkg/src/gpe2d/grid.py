"""Periodic rectangle discretization and complex fields sampled on it."""

from dataclasses import dataclass, field

import numpy as np


class GridError(ValueError):
    """Invalid grid parameters or mismatched grids."""


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid on ``[a, b) x [c, d)``.

    Right and top endpoints are excluded: node ``(ix, iy)`` sits at
    ``(a + ix*dx, c + iy*dy)``.
    """

    a: float
    b: float
    c: float
    d: float
    nx: int
    ny: int

    def __post_init__(self):
        if not (np.isfinite([self.a, self.b, self.c, self.d]).all()
                and self.b > self.a and self.d > self.c):
            raise GridError(
                f"invalid bounds: need b > a and d > c, got "
                f"[{self.a}, {self.b}] x [{self.c}, {self.d}]")
        for name in ("nx", "ny"):
            n = getattr(self, name)
            if isinstance(n, bool) or int(n) != n:
                raise GridError(f"{name} must be an integer, got {n!r}")
            if n < 4 or n % 2:
                raise GridError(f"{name} must be even and >= 4, got {n}")
            object.__setattr__(self, name, int(n))

    @property
    def dx(self) -> float:
        return (self.b - self.a) / self.nx

    @property
    def dy(self) -> float:
        return (self.d - self.c) / self.ny

    @property
    def lx(self) -> float:
        return self.b - self.a

    @property
    def ly(self) -> float:
        return self.d - self.c

    @property
    def shape(self) -> tuple[int, int]:
        """Array shape of a field: ``(ny, nx)``, x varying fastest."""
        return (self.ny, self.nx)

    @property
    def cell_area(self) -> float:
        return self.dx * self.dy

    def same_bounds(self, other: "GridSpec") -> bool:
        return (self.a, self.b, self.c, self.d) == (other.a, other.b, other.c, other.d)


def make_grid(a: float, b: float, c: float, d: float, nx: int, ny: int) -> GridSpec:
    return GridSpec(float(a), float(b), float(c), float(d), nx, ny)


def square_grid(half_width: float = 8.0, m: int = 128) -> GridSpec:
    """``[-L, L]^2`` with ``m`` points per direction (mesh size ``2L/m``)."""
    return make_grid(-half_width, half_width, -half_width, half_width, m, m)


def coordinates(grid: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    x = grid.a + grid.dx * np.arange(grid.nx)
    y = grid.c + grid.dy * np.arange(grid.ny)
    return x, y


def mesh(grid: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    """Broadcast-ready ``X`` of shape (1, nx) and ``Y`` of shape (ny, 1)."""
    x, y = coordinates(grid)
    return x[np.newaxis, :], y[:, np.newaxis]


@dataclass(frozen=True)
class WaveNumbers:
    kx: np.ndarray
    ky: np.ndarray


def _bin_wavenumbers(n: int, length: float) -> np.ndarray:
    j = np.arange(n)
    f = np.where(j < n // 2, j, j - n)
    return 2.0 * np.pi * f / length


def wavenumbers(grid: GridSpec) -> WaveNumbers:
    """Angular wavenumbers in DFT bin order (Nyquist bin is negative)."""
    kx = _bin_wavenumbers(grid.nx, grid.lx)
    ky = _bin_wavenumbers(grid.ny, grid.ly)
    kx.flags.writeable = False
    ky.flags.writeable = False
    return WaveNumbers(kx, ky)


@dataclass(eq=False)
class Field2D:
    """Complex samples of a wave function on ``grid``.

    ``values`` has shape ``(ny, nx)`` in C order, so its flat view is
    row-major with x varying fastest.
    """

    grid: GridSpec
    values: np.ndarray
    blown_up: bool = field(default=False)

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=np.complex128)
        if values.ndim == 1 and values.size == self.grid.nx * self.grid.ny:
            values = values.reshape(self.grid.shape)
        if values.shape != self.grid.shape:
            raise GridError(
                f"field shape {values.shape} does not match grid shape {self.grid.shape}")
        if not self.blown_up and not np.isfinite(values).all():
            raise ValueError("field has non-finite samples and is not flagged as blown up")
        self.values = values

    @property
    def flat(self) -> np.ndarray:
        return self.values.reshape(-1)

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    def copy(self) -> "Field2D":
        return Field2D(self.grid, self.values.copy(), self.blown_up)

    def __mul__(self, scalar) -> "Field2D":
        return Field2D(self.grid, self.values * scalar, self.blown_up)

    __rmul__ = __mul__

    def __sub__(self, other: "Field2D") -> "Field2D":
        check_same_grid(self.grid, other.grid)
        return Field2D(self.grid, self.values - other.values)

    def __add__(self, other: "Field2D") -> "Field2D":
        check_same_grid(self.grid, other.grid)
        return Field2D(self.grid, self.values + other.values)


def sample(grid: GridSpec, fn) -> Field2D:
    """Field with ``fn(X, Y)`` evaluated at every node."""
    X, Y = mesh(grid)
    values = np.broadcast_to(np.asarray(fn(X, Y), dtype=np.complex128), grid.shape)
    return Field2D(grid, values.copy())


def check_same_grid(g1: GridSpec, g2: GridSpec) -> None:
    if g1 != g2:
        raise GridError(f"grid mismatch: {g1} vs {g2}")


def l2_norm(f: Field2D) -> float:
    """Discrete L2 norm ``sqrt(sum |psi|^2 dx dy)``."""
    if not np.isfinite(f.values).all():
        raise ValueError("l2_norm of a field with non-finite samples")
    return weighted_norm(f.values, f.grid.cell_area)


def weighted_norm(values: np.ndarray, weight: float) -> float:
    """``sqrt(sum |v|^2 * weight)``, rescaled by the peak to avoid under/overflow."""
    mod = np.abs(values)
    peak = float(mod.max()) if mod.size else 0.0
    if peak == 0.0 or not np.isfinite(peak):
        return peak
    return peak * float(np.sqrt(np.sum((mod / peak) ** 2) * weight))
