"""Gyroscope fault detection and isolation for formation-flying satellites."""

from ._core import (
    Campaign,
    Config,
    ConfigError,
    CsvError,
    CsvTable,
    PsiCoefficients,
    Simulation,
    SimulationError,
    __version__,
    b_plus_coefficient,
    bounds,
    calibrate,
    campaign,
    drag_bounds,
    expected_psi,
    parse_csv,
    preset_names,
    psi,
    psi_coefficients,
    psi_gradient,
    psi_variance,
    read_csv,
    s_plus_coefficient,
    simulate,
    sweep,
    write_csv,
)

__all__ = [
    "Campaign",
    "Config",
    "ConfigError",
    "CsvError",
    "CsvTable",
    "PsiCoefficients",
    "Simulation",
    "SimulationError",
    "__version__",
    "b_plus_coefficient",
    "bounds",
    "calibrate",
    "campaign",
    "drag_bounds",
    "expected_psi",
    "parse_csv",
    "preset_names",
    "psi",
    "psi_coefficients",
    "psi_gradient",
    "psi_variance",
    "read_csv",
    "s_plus_coefficient",
    "simulate",
    "sweep",
    "write_csv",
]
