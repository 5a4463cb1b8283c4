"""Fractional-Laplacian semi-supervised regression on random geometric graphs."""

from ._fraclap import (
    Error,
    InvalidArgument,
    IoError,
    NumericalError,
    __version__,
    apply_fractional,
    brute_force_oracle,
    classify,
    connectivity_radius,
    continuum_energy,
    continuum_solve,
    continuum_spectrum,
    eigendecompose,
    fractional_energy,
    graph_laplacian,
    is_connected,
    run_cli,
    sample_uniform,
    sigma_eta,
    solve_constrained,
    torus_distance,
    tl2_distance,
    weight_matrix,
)

__all__ = [name for name in dir() if not name.startswith("_")]
