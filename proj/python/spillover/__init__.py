"""Python bindings for the spillover library.

Arrays are NumPy float64. Months are "YYYY-MM" strings, days "YYYY-MM-DD".
Library failures raise ``spillover.SpilloverError`` whose ``code`` attribute
names the error category.
"""

from ._spillover import (
    SpilloverError,
    __version__,
    admissible_angles,
    bvar_irf,
    decompose,
    identify,
    lp_irf,
    poor_mans_split,
    run,
    simulate,
)

__all__ = [
    "SpilloverError",
    "__version__",
    "admissible_angles",
    "bvar_irf",
    "decompose",
    "identify",
    "lp_irf",
    "poor_mans_split",
    "run",
    "simulate",
]
