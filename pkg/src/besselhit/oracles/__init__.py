"""Independent reference computations: Laplace inversion and Monte Carlo."""
from .laplace import forward_transform, invert_laplace, laplace_check, laplace_transform
from .montecarlo import (
    McConfig,
    McResult,
    bin_average_density,
    hitting_times,
    set_threads,
    simulate_hitting,
    z_scores,
)

__all__ = [
    "McConfig",
    "McResult",
    "bin_average_density",
    "forward_transform",
    "hitting_times",
    "invert_laplace",
    "laplace_check",
    "laplace_transform",
    "set_threads",
    "simulate_hitting",
    "z_scores",
]
