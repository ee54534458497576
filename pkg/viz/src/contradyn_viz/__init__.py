"""Figure renderer for the simulator's CSV and JSON exports.

This package never recomputes model quantities.  It reads the files the
`contradyn` command line tool writes (trajectories, attractor samples,
orbits, discrepancy tables, spectra) and turns them into static images
with fixed styling, so two runs on the same inputs produce identical
bytes.
"""

from .render import KINDS, PlotSpec, SchemaError, main, render

__all__ = ["KINDS", "PlotSpec", "SchemaError", "main", "render"]

__version__ = "0.1.0"
