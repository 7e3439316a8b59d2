"""
Effect of Drude damping
=======================

Damping broadens the plasmon resonance.  Slow atoms, whose resonant
plasmons are exponentially suppressed, gain friction from the broadened
tail; fast atoms lose some of the resonant peak.
"""

import numpy as np

from chiralfriction import AtomKinematics, DrudeMetal, TransitionDipole, friction_force

dip = TransitionDipole.linear("z")
metals = {"lossless": None, "gamma_c=0.05": DrudeMetal(0.05), "gamma_c=0.2": DrudeMetal(0.2)}

print(f"{'v':>8s}" + "".join(f"{name:>15s}" for name in metals))
for v in np.geomspace(0.005, 0.12, 14):
    kin = AtomKinematics(0.1, 0.1, v)
    forces = [friction_force(kin, dip, 0.0, metal).total for metal in metals.values()]
    print(f"{v:8.4f}" + "".join(f"{f:15.5g}" for f in forces))
