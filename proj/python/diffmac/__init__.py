"""Distortion bounds, lattice schemes and Monte Carlo simulation for
communicating the difference of correlated Gaussian sources over a Gaussian
multiple-access channel."""

from ._core import (
    ChannelModel,
    ExperimentConfig,
    Lattice,
    Rng,
    SimulationReport,
    SnrThresholdError,
    SourceModel,
    __version__,
    calibrate_second_moment,
    common_dither_alpha,
    common_dither_distortion,
    common_dither_feasible,
    common_dither_k,
    cvp_quantize,
    distortion_lower_bound,
    estimate_rho_prime,
    gap_bits,
    lattice_alpha,
    lattice_distortion,
    lattice_gamma,
    lattice_k,
    make_lattice,
    mod_lattice,
    run_experiment,
    sample_dither,
    scale_to_power,
    scheme_crossover,
    sweep,
    uncoded_distortion,
    uncoded_mmse_coefficient,
)

__all__ = [
    "ChannelModel",
    "ExperimentConfig",
    "Lattice",
    "Rng",
    "SimulationReport",
    "SnrThresholdError",
    "SourceModel",
    "__version__",
    "calibrate_second_moment",
    "common_dither_alpha",
    "common_dither_distortion",
    "common_dither_feasible",
    "common_dither_k",
    "cvp_quantize",
    "distortion_lower_bound",
    "estimate_rho_prime",
    "gap_bits",
    "lattice_alpha",
    "lattice_distortion",
    "lattice_gamma",
    "lattice_k",
    "make_lattice",
    "mod_lattice",
    "run_experiment",
    "sample_dither",
    "scale_to_power",
    "scheme_crossover",
    "sweep",
    "uncoded_distortion",
    "uncoded_mmse_coefficient",
]
