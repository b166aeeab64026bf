"""
Kinematics of a symmetric 2-UPS + 1-U design
============================================

Inverse and forward kinematics, the leg-rate Jacobian and the dexterity
index for one mirror-symmetric design.
"""

import math

import numpy as np

from mechopt import (
    dexterity,
    expand_reduced,
    forward_kinematics,
    inverse_kinematics,
    jacobian,
    rotation_from_tilt,
    scale_design,
)

# base radius 60 mm, platform radius 30 mm, legs at +-30 deg, U joint 100 mm up
design = expand_reduced((0.06, 0.03, math.radians(30), 0.10))
print(design)

###############################################################################
# Tilting the platform by (alpha, beta) stretches the two legs differently.

for deg in [(0, 0), (20, 0), (0, 20), (15, -10)]:
    q = tuple(math.radians(v) for v in deg)
    rho = inverse_kinematics(design, q)
    print(f"tilt {deg} deg -> legs {rho.rho1 * 1e3:.3f} mm, {rho.rho2 * 1e3:.3f} mm")

###############################################################################
# The design is mirror-symmetric about the xz-plane, so leg 1 at (alpha, beta)
# matches leg 2 at (-alpha, beta). A pure beta tilt keeps both legs equal.

q = (math.radians(12), math.radians(7))
print(inverse_kinematics(design, q).rho1, inverse_kinematics(design, (-q[0], q[1])).rho2)

###############################################################################
# Forward kinematics inverts the map with Newton iterations from a seed.

lengths = inverse_kinematics(design, q)
recovered = forward_kinematics(design, lengths, seed=(0.0, 0.0))
print("recovered tilt (deg):", np.degrees(recovered))

###############################################################################
# The Jacobian holds d(rho_i)/d(q_j). Its inverse condition number is the
# dexterity index; it is unitless, so scaling the whole design leaves it alone.

print("J =\n", jacobian(design, q))
print("R =\n", rotation_from_tilt(q))
for s in (0.5, 1.0, 4.0):
    print(f"scale {s}: dexterity {dexterity(scale_design(design, s), q):.12f}")
