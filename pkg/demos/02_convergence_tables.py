"""Spatial and temporal self-convergence tables for the five trap shapes.

Pass ``--full`` for the full temporal table (several minutes on one core);
the default runs a shortened version.
"""

import sys

from gpe2d import format_tables, run_spatial_study, run_temporal_study, table_scenarios

full = "--full" in sys.argv

# Temporal: fixed mesh, halving dt, reference at dt_min/4.
dts = [0.01, 0.005, 0.0025, 0.00125, 0.000625] if full else [0.01, 0.005, 0.0025]
h = 1 / 8 if full else 1 / 4
tables = [run_temporal_study(s, dts, h) for s in table_scenarios()]
print(f"Temporal error at t = 1 (h = {h})")
print(format_tables(tables))

# Spatial: fixed small dt, halving h, reference one level finer.  Short final
# time keeps the finest (reference) grid affordable.
T = 1.0 if full else 0.25
hs = [1 / 4, 1 / 8, 1 / 16] if full else [1, 1 / 2, 1 / 4]
tables = [run_spatial_study(s, hs, 1e-3) for s in table_scenarios(T=T)]
print(f"Spatial error at t = {T} (dt = 1e-3)")
print(format_tables(tables))
print(tables[0].to_csv())
