"""Desk-scale covering and packing computations.

Subpackages cover six concerns: exact covering/packing numbers on finite
metric spaces (`spaces`), lattice coverings of sup-norm balls (`grids`),
Poincare-disk geometry with triangle straightening and point pushes
(`hyperbolic`), polynomial quadratic differentials and their net-sampling
maps (`quaddiff`), combinatorial maps on oriented surfaces (`maps`), a
census of finite covers of the genus-2 surface (`covers`), and log-scale
evaluation of headline counting bounds (`bounds`).
"""

__version__ = "0.1.0"

from . import bounds, covers, grids, hyperbolic, maps, quaddiff, spaces

__all__ = ["bounds", "covers", "grids", "hyperbolic", "maps", "quaddiff",
           "spaces", "__version__"]
