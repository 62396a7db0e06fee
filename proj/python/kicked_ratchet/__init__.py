"""Delta-kicked quantum ratchet: quantum evolution, resonance scans, classical
chaos diagnostics and Bloch-band counts."""

from ._core import (
    AliasingError,
    CutoffError,
    __version__,
    acceleration_rate,
    barrier_height,
    bloch_eigenvalues,
    chaos_fraction,
    classify_resonance,
    count_bands_below_barrier,
    detect_peaks,
    evolve,
    find_chaos_threshold,
    fit_sqrt_scaling,
    hbar_from_physical,
    lyapunov,
    map_step,
    phase_portrait,
    scan,
)

__all__ = [
    "AliasingError",
    "CutoffError",
    "__version__",
    "acceleration_rate",
    "barrier_height",
    "bloch_eigenvalues",
    "chaos_fraction",
    "classify_resonance",
    "count_bands_below_barrier",
    "detect_peaks",
    "evolve",
    "find_chaos_threshold",
    "fit_sqrt_scaling",
    "hbar_from_physical",
    "lyapunov",
    "map_step",
    "phase_portrait",
    "scan",
]
