"""Exit criteria for the solver, one test per criterion.

Each test records a PASS/FAIL line that is printed in the pytest terminal
summary.  Tolerances are fixed here and are not tuned per run.
"""

from pathlib import Path

import numpy as np
import pytest

from gpe2d import (EvolutionSpec, Field2D, GaussianData, ModelSpec, NonlinearitySpec,
                   QuadraticPotential, SpectralPlan, Status, ZeroPotential, energy,
                   eval_potential, evolve, init_field, l2_error, make_grid, mesh, parse_config,
                   propagate, read_snapshot, run_model, run_spatial_study, run_temporal_study,
                   serialize_config, table_scenarios, write_snapshot)
from gpe2d.diagnostics import relative_drift
from gpe2d.io import load_config

RESULTS: dict[str, tuple[bool, str]] = {}

CONFIG_DIR = Path(__file__).resolve().parents[1] / "configs"
TABLE2_DT = [0.01, 0.005, 0.0025, 0.00125, 0.000625]
FOCUSING = -1.9718


def report(cid: str, ok: bool, detail: str) -> None:
    RESULTS[cid] = (bool(ok), detail)
    print(f"{'PASS' if ok else 'FAIL'}  {cid}  {detail}")
    assert ok, f"{cid}: {detail}"


def square(m: int):
    return make_grid(-8, 8, -8, 8, m, m)


def test_c1_mass_conservation_table_scenarios():
    drifts = {}
    for scen in table_scenarios():
        res = run_model(scen.model, square(128), EvolutionSpec(1.0, 1e-3))
        assert res.status is Status.COMPLETED
        drifts[scen.label] = relative_drift(res.diagnostics, "mass")
    worst = max(drifts.values())
    report("C1", worst <= 1e-10,
           f"max relative mass drift {worst:.2e} over {len(drifts)} scenarios (tol 1e-10)")


@pytest.mark.parametrize("index", [0, 1], ids=["V=0", "V=harmonic"])
def test_c2_temporal_second_order(index):
    scen = table_scenarios()[index]
    table = run_temporal_study(scen, TABLE2_DT, 1 / 8)
    ratios = table.ratios()
    order = table.fitted_order
    ok = all(3.5 <= r <= 4.5 for r in ratios) and 1.85 <= order <= 2.15
    cid = "C2" if index == 0 else "C2b"
    report(cid, ok, f"{scen.label}: ratios {[round(r, 3) for r in ratios]}, "
                    f"fitted order {order:.4f} (ratios in [3.5, 4.5], order in [1.85, 2.15])")


def test_c3_spatial_spectral_accuracy():
    # runtime-constrained variant: dt = 2e-4 to T = 0.25
    scen = table_scenarios(T=0.25)[0]
    table = run_spatial_study(scen, [1 / 4, 1 / 8, 1 / 16], 2e-4)
    fine = table.errors[1:]
    report("C3", len(table.errors) == 3 and max(fine) <= 1e-9,
           f"V=0 errors {['%.3e' % e for e in table.errors]} at h = 1/4, 1/8, 1/16 "
           f"(h <= 1/8 tol 1e-9)")


def test_c4_free_gaussian_closed_form():
    g = square(256)
    model = ModelSpec(ZeroPotential(), NonlinearitySpec(0.0), GaussianData(1.0))
    res = run_model(model, g, EvolutionSpec(1.0, 1e-3, sample_every=1000))
    X, Y = mesh(g)
    t = 1.0
    exact = np.exp(-(X**2 + Y**2) / (2 * (1 + 1j * t))) / (np.sqrt(np.pi) * (1 + 1j * t))
    err = l2_error(res.final, Field2D(g, np.broadcast_to(exact, g.shape)))
    report("C4", err <= 1e-8,
           f"L2 error vs free-space spreading Gaussian {err:.3e} on [-8,8]^2, M=256 (tol 1e-8)")


def test_c5_harmonic_stationary_state():
    g = square(128)
    X, Y = mesh(g)
    psi0 = Field2D(g, np.broadcast_to(np.exp(-(X**2 + Y**2) / 2) / np.sqrt(np.pi), g.shape))
    model = ModelSpec(QuadraticPotential(1, 1, 1), NonlinearitySpec(0.0))
    res = evolve(psi0, model, EvolutionSpec(1.0, 1e-3, sample_every=1000))
    dev = float(np.abs(res.final.density - psi0.density).max())
    e0 = energy(psi0, eval_potential(model.potential, g), model.nonlinearity)
    report("C5", dev <= 1e-6 and abs(e0 - 1) <= 1e-8,
           f"max |psi|^2 deviation {dev:.2e} (tol 1e-6), energy {e0:.12f} (1 +- 1e-8)")


def test_c6_focusing_blowup_and_delay():
    g = square(512)
    times = {}
    for sign in (1, -1):
        model = ModelSpec(QuadraticPotential(sign, sign, 0.3), NonlinearitySpec(FOCUSING, 3),
                          GaussianData(1.0))
        res = run_model(model, g, EvolutionSpec(1.0, 0.01))
        peak = max(r.max_density for r in res.diagnostics) / res.diagnostics[0].max_density
        times[sign] = (res.blowup_time, peak)
    (tp, peak_p), (tm, peak_m) = times[1], times[-1]
    ok_a = tp is not None and 0.2 <= tp <= 0.6
    ok_b = ok_a and tm is not None and tm > tp
    detail = (f"V=+: blow-up at {tp} (peak {peak_p:.2f}x initial); "
              f"V=-: blow-up at {tm} (peak {peak_m:.2f}x initial); threshold 100x")
    report("C6", ok_a and ok_b, detail)


def second_moments(f: Field2D) -> tuple[float, float]:
    X, Y = mesh(f.grid)
    rho = f.density * f.grid.cell_area
    return float(np.sum(X**2 * rho)), float(np.sum(Y**2 * rho))


def test_c7_saddle_anisotropic_dispersion():
    g = square(256)
    model = ModelSpec(QuadraticPotential(1, -1, 1), NonlinearitySpec(1.0), GaussianData(1.0))
    f0 = init_field(model.initial, g)
    res = evolve(f0, model, EvolutionSpec(5.0, 0.01, sample_every=100))
    x0, y0 = second_moments(f0)
    x5, y5 = second_moments(res.final)
    ok = res.completed and y5 > 3 * y0 and x5 < 2 * x0
    report("C7", ok, f"y-variance ratio {y5 / y0:.3f} (> 3), x-variance ratio {x5 / x0:.3f} (< 2)")


def test_c8_strang_reversibility():
    g = square(128)
    model = ModelSpec(QuadraticPotential(1, 4, 1), NonlinearitySpec(1.0), GaussianData(1.0))
    plan = SpectralPlan(g)
    V = eval_potential(model.potential, g)
    f0 = init_field(model.initial, g)
    fwd = propagate(f0, V, model.nonlinearity, plan, 1e-3, 1000)
    back = propagate(fwd, V, model.nonlinearity, plan, -1e-3, 1000)
    err = l2_error(back, f0)
    report("C8", err <= 1e-8, f"forward/backward L2 error {err:.3e} (tol 1e-8)")


def test_c9_round_trips(tmp_path):
    rng = np.random.default_rng(9)
    exact = 0
    for i in range(100):
        nx, ny = 2 * rng.integers(2, 33, size=2)
        g = make_grid(-rng.random() * 10, rng.random() * 10 + 0.1,
                      -rng.random() * 10, rng.random() * 10 + 0.1, nx, ny)
        scale = 10.0 ** rng.integers(-300, 300)
        f = Field2D(g, (rng.standard_normal(g.shape) + 1j * rng.standard_normal(g.shape)) * scale)
        path = tmp_path / f"f{i}.gpe2"
        write_snapshot(f, path)
        back = read_snapshot(path)
        exact += back.grid == g and back.values.tobytes() == f.values.tobytes()
    configs = sorted(CONFIG_DIR.glob("*.ini"))
    fixed = 0
    for path in configs:
        cfg = load_config(path)
        text = serialize_config(cfg)
        again = parse_config(text)
        fixed += again == cfg and serialize_config(again) == text
    report("C9", exact == 100 and fixed == len(configs) and len(configs) > 0,
           f"{exact}/100 snapshots bit-exact, {fixed}/{len(configs)} configs fixed points")
