"""Config files, overrides and the command-line entry point.

Equivalent shell usage::

    gpe2d describe configs/fig1_anisotropic_trap.ini --set grid.nx=128
    gpe2d run configs/fig1_anisotropic_trap.ini --set grid.nx=128 --set grid.ny=128
    gpe2d converge-time configs/table2_free.ini --dt 0.01,0.005,0.0025 --h-fixed 1/4
"""

from pathlib import Path

from gpe2d import parse_config, serialize_config
from gpe2d.cli import main
from gpe2d.io import describe_schema, load_config

root = Path(__file__).resolve().parents[1]
print(describe_schema())

cfg = load_config(root / "configs" / "fig1_anisotropic_trap.ini",
                  ["grid.nx=64", "grid.ny=64"])
text = serialize_config(cfg)
assert parse_config(text) == cfg
print(text)

code = main(["run", str(root / "configs" / "fig1_anisotropic_trap.ini"),
             "--set", "grid.nx=64", "--set", "grid.ny=64", "--out", "out/demo_fig1"])
print("exit code", code)
