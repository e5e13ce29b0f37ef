"""Arrival-time operators, distributions and measurement models."""

from ._arrival import (
    CrossingResult,
    DomainError,
    GaussianSpec,
    GridSpec,
    NumericError,
    PhysConsts,
    WaveFunction,
    bessel_j,
    classical_arrival,
    classical_current_moment,
    classical_stopwatch,
    crossing_probability,
    current_expectation,
    distribution,
    eigenstate,
    evolve_free,
    family_names,
    gamma,
    inner_product,
    kijowski_distribution,
    low_momentum_coefficient,
    make_gaussian,
    make_reflected_state,
    mean_momentum,
    mean_position,
    run_verification,
    to_momentum,
    to_position,
)

__all__ = [name for name in dir() if not name.startswith("_")]
