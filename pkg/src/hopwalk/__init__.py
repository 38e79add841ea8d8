"""Random walks on random point sets with distance-decaying hop rates.

Subpackages map onto the pipeline: sample an environment (pointprocess),
assemble a reversible generator (walk), bound its Cheeger constant and
isoperimetric profiles (isoperimetry), compute gaps, heat kernels and
mixing times (spectral), study the coarse-grained percolation structure
(percolation), and run reproducible sweeps (experiments, cli).
"""

from . import (  # noqa: F401
    experiments,
    isoperimetry,
    percolation,
    pointprocess,
    spectral,
    walk,
)

__version__ = "0.1.0"
