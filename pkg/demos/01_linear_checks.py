"""Linear sanity checks: free spreading and the harmonic ground state.

With kappa = 0 and V = 0 the kinetic step is exact, so the only difference
from the free-space closed form is the periodic box: by t = 1 the Gaussian's
images on [-8, 8]^2 start to overlap.  Summing the closed form over images
removes that difference completely.
"""

import numpy as np

from gpe2d import (EvolutionSpec, Field2D, GaussianData, ModelSpec, NonlinearitySpec,
                   QuadraticPotential, ZeroPotential, energy, eval_potential, evolve, l2_error,
                   make_grid, mesh, run_model)


def spreading_gaussian(X, Y, t, images=0, period=16.0):
    out = 0
    for a in range(-images, images + 1):
        for b in range(-images, images + 1):
            r2 = (X + a * period) ** 2 + (Y + b * period) ** 2
            out = out + np.exp(-r2 / (2 * (1 + 1j * t)))
    return out / (np.sqrt(np.pi) * (1 + 1j * t))


grid = make_grid(-8, 8, -8, 8, 256, 256)
X, Y = mesh(grid)
free = ModelSpec(ZeroPotential(), NonlinearitySpec(0.0), GaussianData(1.0))
res = run_model(free, grid, EvolutionSpec(1.0, 0.01, sample_every=100))

for images in (0, 2):
    exact = Field2D(grid, np.broadcast_to(spreading_gaussian(X, Y, 1.0, images), grid.shape))
    print(f"free Gaussian, t = 1, images = {images}: L2 error {l2_error(res.final, exact):.3e}")

# harmonic ground state pi^{-1/2} e^{-r^2/2}: energy 1, density stationary
ground = Field2D(grid, np.broadcast_to(np.exp(-(X**2 + Y**2) / 2) / np.sqrt(np.pi), grid.shape))
trap = ModelSpec(QuadraticPotential(1, 1), NonlinearitySpec(0.0))
V = eval_potential(trap.potential, grid)
print(f"ground-state energy: {energy(ground, V, trap.nonlinearity):.12f}")
res = evolve(ground, trap, EvolutionSpec(1.0, 1e-3, sample_every=1000))
print(f"max density change after t = 1: {np.abs(res.final.density - ground.density).max():.2e}")
