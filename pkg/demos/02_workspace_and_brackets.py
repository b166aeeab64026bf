"""
Dexterous workspace and actuator brackets
=========================================

Scan a tilt cone, see which orientations stay well conditioned, then look
for prismatic actuator windows ``[L, L + stroke]`` that hold every leg length
the workspace needs.
"""

import math

from mechopt import ActuatorModel, WorkspaceSpec, actuator_bracket_search, evaluate_design, expand_reduced, scan_grid

design = expand_reduced((0.06, 0.03, math.radians(30), 0.10))
spec = WorkspaceSpec(theta_max=math.radians(25), resolution=15, dexterity_threshold=0.3)

scan = scan_grid(design, spec)
print(f"{scan.alpha.size} orientations in the cone, {scan.covered.sum()} above dexterity 0.3")

###############################################################################
# Leg lengths needed over the covered orientations.

rho = scan.rho[scan.covered]
lo, hi = rho.min(), rho.max()
print(f"leg lengths span {lo * 1e3:.2f} .. {hi * 1e3:.2f} mm ({(hi - lo) * 1e3:.2f} mm of travel)")

###############################################################################
# Candidate windows start every millimetre above the shortest closed length.
# A longer stroke leaves more room to place the window.

for stroke in (0.015, 0.025, 0.04):
    act = ActuatorModel(min_closed_length=0.07, stroke=stroke, search_step=0.001)
    windows = actuator_bracket_search(rho, act)
    first = f", first [{windows[0][0] * 1e3:.0f}, {windows[0][1] * 1e3:.0f}] mm" if windows else ""
    print(f"stroke {stroke * 1e3:.0f} mm: {len(windows)} feasible windows{first}")

###############################################################################
# The same information, summarised.

ev = evaluate_design(design, spec, ActuatorModel(0.07, 0.025, 0.001))
print(f"coverage {ev.coverage:.3f}, min dexterity {ev.min_dexterity:.3f}, feasible {ev.feasible}")
