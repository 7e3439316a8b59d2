"""
Ground-state friction over transition frequency and height
==========================================================

The same grid the CLI ``map`` command writes, printed coarsely.  For
5v/(4d) < 1 the force at every height is largest for the smallest
transition frequency, and it falls off quickly with height.
"""

import numpy as np

from chiralfriction import AtomKinematics, DrudeMetal, TransitionDipole, optimal_frequency
from chiralfriction.friction import ground_state_force

metal = DrudeMetal(0.2)
dip = TransitionDipole.chiral(-1)
omegas = np.linspace(0, 1, 6)
heights = np.linspace(0.07, 0.3, 6)

print(f"{'d':>6s}" + "".join(f"{'w0=' + format(w, '.1f'):>12s}" for w in omegas) + "   best w0 (estimate)")
for d in heights:
    row = [ground_state_force(AtomKinematics(w, d, 0.05), dip, metal) for w in omegas]
    print(f"{d:6.3f}" + "".join(f"{f:12.4g}" for f in row)
          + f"   {omegas[int(np.argmax(np.abs(row)))]:.1f} ({optimal_frequency(0.05, d):.1f})")
