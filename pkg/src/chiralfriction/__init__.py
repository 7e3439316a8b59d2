"""Quantum friction on a moving two-level atom above a Drude metal,
with arbitrary (including chiral) transition dipoles."""
from .errors import DegenerateRatesError, DomainError, FrictionError, PoleError, QuadratureError
from .friction import (
    AtomKinematics,
    DecayRates,
    ForceValue,
    TrajectoryPoint,
    decay_rates,
    decay_rates_lossless,
    decay_rates_lossy,
    excited_probability,
    force_trajectory,
    friction_force,
    friction_force_lossless,
    friction_force_lossy,
    optimal_frequency,
    optimal_velocity,
    plasmon_wavenumbers,
    steady_state_force,
    steady_state_force_lossless,
)
from .material import DrudeMetal
from .polarization import TransitionDipole
from .quadrature import QuadratureSpec

__version__ = "0.1.0"
