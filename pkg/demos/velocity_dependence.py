"""
Friction versus velocity for linear dipoles
===========================================

Ground-state friction on an atom at height d = 0.1 with transition
frequency omega0 = 0.1, in the lossless limit, for dipoles along x, y and z.
"""

import numpy as np

from chiralfriction import AtomKinematics, TransitionDipole, friction_force_lossless, optimal_velocity

# velocities in units of c
velocities = np.linspace(0.005, 0.12, 24)
dipoles = {axis: TransitionDipole.linear(axis) for axis in "xyz"}

print(f"{'v':>8s}" + "".join(f"{'|F| ' + a:>14s}" for a in dipoles))
for v in velocities:
    kin = AtomKinematics(omega0=0.1, d=0.1, v=v)
    forces = [abs(friction_force_lossless(kin, dip, pe=0.0).total) for dip in dipoles.values()]
    print(f"{v:8.4f}" + "".join(f"{f:14.4g}" for f in forces))

# the vertical dipole couples best; the curve peaks near (4/7)(omega0 + 1) d
fine = np.linspace(0.005, 0.12, 1000)
fz = [abs(friction_force_lossless(AtomKinematics(0.1, 0.1, v), dipoles["z"], 0.0).total) for v in fine]
print(f"\nargmax over v (z dipole): {fine[int(np.argmax(fz))]:.4f}")
print(f"scaling estimate:         {optimal_velocity(0.1, 0.1):.4f}")
