"""Density evolution, EXIT analysis and BP simulation for non-binary LDPC codes on the BEC."""

__version__ = "0.1.0"

from .density import DeOptions, bp_threshold, evolve, stability_bound  # noqa: E402
from .ensemble import EnsembleSpec, parse_config, parse_polynomial  # noqa: E402
from .exitchart import exit_curve, map_upper_bound  # noqa: E402

__all__ = [
    "__version__",
    "DeOptions",
    "EnsembleSpec",
    "bp_threshold",
    "evolve",
    "exit_curve",
    "map_upper_bound",
    "parse_config",
    "parse_polynomial",
    "stability_bound",
]
