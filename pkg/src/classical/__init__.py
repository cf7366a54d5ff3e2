"""Classical baselines: deterministic interpolation and the classical pipelines.

The pipelines live in src.classical.pipelines, which depends on the operator
estimators; this package itself only exports the interpolants.
"""

from src.classical.interpolant import (
    BoxUnionInterpolant,
    DetInterpolant,
    det_interp,
    det_interp_on_boxes,
)

__all__ = ["BoxUnionInterpolant", "DetInterpolant", "det_interp", "det_interp_on_boxes"]
