"""Symmetric norming functions, operator ideals and matrix cross norms."""

from .estimate import APPROXIMATE, EXACT, LOWER_BOUND, NormEstimate
from .seqnorm import (
    INF,
    SnSpec,
    Spectrum,
    binorm_harmonic,
    binorm_pow,
    binorm_values,
    dual_evaluate,
    evaluate,
    kyfan,
    kyfan_theta,
    lorentz,
    parse_spec,
    schatten,
)
from .mcn import MCNConfig, MatrixTuple, mcn_norm

__version__ = "0.1.0"
