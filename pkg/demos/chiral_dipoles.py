"""
Handedness selects the plasmon that drags the atom
==================================================

A circularly polarized dipole rotating in the xz plane couples to plasmons
travelling in one direction only.  In the ground state the atom emits into
plasmons at negative kx, so (x - iz)/sqrt(2) feels a strong drag and
(x + iz)/sqrt(2) almost none.  The excited state favours the opposite
handedness.
"""

import numpy as np

from chiralfriction import AtomKinematics, TransitionDipole, friction_force_lossless

plus = TransitionDipole.chiral(+1)
minus = TransitionDipole.chiral(-1)
print(f"spin s_y: plus {plus.s_y:+.0f}, minus {minus.s_y:+.0f}")

print(f"\n{'v':>8s} {'F_g(minus)':>12s} {'F_g(plus)':>12s} {'ratio':>8s}")
for v in np.linspace(0.01, 0.12, 12):
    kin = AtomKinematics(0.1, 0.1, v)
    fm = friction_force_lossless(kin, minus, 0.0).total
    fp = friction_force_lossless(kin, plus, 0.0).total
    print(f"{v:8.3f} {fm:12.5g} {fp:12.5g} {fm / fp:8.1f}")

# channel dominance flips with handedness
kin = AtomKinematics(0.1, 0.1, 0.05)
for name, dip in (("minus", minus), ("plus", plus)):
    f = friction_force_lossless(kin, dip, 0.0)
    print(f"\n{name}: ground channel {f.ground_channel:.5g}, excited channel {f.excited_channel:.5g}")
