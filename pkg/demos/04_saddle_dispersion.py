"""Saddle potential (x^2 - y^2)/2: the x direction stays trapped while the
y direction disperses.  Second moments are printed every half time unit and
the final density is written as a snapshot."""

import numpy as np

from gpe2d import (GaussianData, ModelSpec, NonlinearitySpec, QuadraticPotential, EvolutionSpec,
                   init_field, evolve, make_grid, mesh, write_snapshot)

grid = make_grid(-8, 8, -8, 8, 256, 256)
X, Y = mesh(grid)
model = ModelSpec(QuadraticPotential(1, -1), NonlinearitySpec(1.0), GaussianData(1.0))


def moments(step, t, f):
    rho = f.density * grid.cell_area
    print(f"t = {t:4.1f}   <x^2> = {np.sum(X**2 * rho):7.4f}   <y^2> = {np.sum(Y**2 * rho):8.4f}")


res = evolve(init_field(model.initial, grid), model, EvolutionSpec(5.0, 0.01, sample_every=50),
             observer=moments)
write_snapshot(res.final, "saddle_t5.gpe2")
print("wrote saddle_t5.gpe2")
