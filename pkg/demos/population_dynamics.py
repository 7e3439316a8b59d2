"""
Relaxation of the atomic populations
====================================

A moving atom is excited by the surface even when it starts in the ground
state.  Both initial states relax to the same mixture and the friction force
settles to its steady-state value.
"""

import numpy as np

from chiralfriction import (
    AtomKinematics,
    DrudeMetal,
    TransitionDipole,
    decay_rates,
    force_trajectory,
    steady_state_force,
)

kin = AtomKinematics(omega0=0.1, d=0.1, v=0.05)
dip = TransitionDipole.linear("z")

for label, metal in (("lossless", None), ("gamma_c = 0.2", DrudeMetal(0.2))):
    rates = decay_rates(kin, dip, metal)
    # ten relaxation times, in units of 1/Gamma_0
    times = np.linspace(0, 10 / rates.total, 11)
    print(f"\n{label}: G+ = {rates.gamma_plus:.4g}, G- = {rates.gamma_minus:.4g}, "
          f"Pe(inf) = {rates.pe_infinity:.4f}")
    runs = [force_trajectory(kin, dip, pe0, times, metal) for pe0 in (0.0, 1.0)]
    print(f"{'t':>10s} {'Pe (from g)':>12s} {'F (from g)':>12s} {'Pe (from e)':>12s} {'F (from e)':>12s}")
    for g, e in zip(*runs):
        print(f"{g.t:10.4g} {g.pe:12.4f} {g.force.total:12.5g} {e.pe:12.4f} {e.force.total:12.5g}")
    print(f"steady state: {steady_state_force(kin, dip, metal).total:.6g}")
