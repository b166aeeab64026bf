"""
Singularity map
===============

``det J`` over the tilt cone. Where it changes sign between neighbouring
grid points the mechanism crosses a singularity curve. The symmetric design
keeps one sign; nearly parallel platform levers put a singular curve inside
the cone.
"""

import math

import numpy as np

from mechopt import DesignParameters, WorkspaceSpec, expand_reduced, singularity_map
from mechopt.workspace import sign_changes

spec = WorkspaceSpec(theta_max=math.radians(30), resolution=13)
designs = {
    "symmetric": expand_reduced((0.06, 0.03, math.radians(30), 0.10)),
    "parallel levers": DesignParameters((0.06, 0.04, 0), (0.06, -0.04, 0),
                                        (0.03, 0.01, 0), (0.03, 0.005, 0), 0.10),
}


def ascii_map(points):
    """'+' / '-' / '0' for the sign of det J, alpha down the rows."""
    axis = np.linspace(-spec.theta_max, spec.theta_max, spec.resolution)
    grid = [[" "] * spec.resolution for _ in axis]
    for (a, b), det in points:
        i, j = np.searchsorted(axis, a), np.searchsorted(axis, b)
        grid[i][j] = "+" if det > 0 else "-" if det < 0 else "0"
    return "\n".join(" ".join(row) for row in grid)


for name, design in designs.items():
    points = singularity_map(design, spec)
    crossings = sign_changes(spec, [det for _, det in points])
    print(f"{name}: {len(crossings)} sign changes between neighbours")
    print(ascii_map(points))
    print()
