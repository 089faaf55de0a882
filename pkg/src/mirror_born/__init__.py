"""Mirror-image measurement model alongside standard spectral Born-rule machinery."""

from mirror_born.grid import (
    GridSpec,
    WaveFunction,
    inner,
    make_grid,
    norm,
    normalize,
    to_momentum,
    to_position,
)

__version__ = "0.1.0"

__all__ = [
    "GridSpec",
    "WaveFunction",
    "inner",
    "make_grid",
    "norm",
    "normalize",
    "to_momentum",
    "to_position",
    "__version__",
]
