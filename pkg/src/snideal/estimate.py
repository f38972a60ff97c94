"""Norm estimates carrying their own certificates."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

EXACT = "exact"
LOWER_BOUND = "lower_bound"
APPROXIMATE = "approximate"
EXACTNESS = (EXACT, LOWER_BOUND, APPROXIMATE)


@dataclass
class NormEstimate:
    """A computed norm value with the witnesses that produced it.

    For matrix cross norms ``witness_a``/``witness_b`` are the PSD pair of the
    trace-duality formula, so ``tr(a rho_T(b)) == value**2``.  For sequence
    quantities (multiplicators) ``witness_a`` holds the maximizing sequence.
    """

    value: float
    exactness: str
    witness_a: Optional[np.ndarray] = None
    witness_b: Optional[np.ndarray] = None
    method: str = ""
    iterations: int = 0
    restarts_used: int = 0
    trace: list = field(default_factory=list)
    diagnostic: str = ""

    def __post_init__(self):
        if self.exactness not in EXACTNESS:
            raise ValueError(f"unknown exactness {self.exactness!r}")

    def __float__(self):
        return float(self.value)

    def to_dict(self, with_trace=False):
        from .matrix import cmatrix_to_json

        def wit(w):
            if w is None:
                return None
            w = np.asarray(w)
            if w.ndim == 1:
                return [float(v) for v in w.real]
            return cmatrix_to_json(w)

        out = {
            "value": float(self.value),
            "exactness": self.exactness,
            "method": self.method,
            "iterations": int(self.iterations),
            "restarts_used": int(self.restarts_used),
            "diagnostic": self.diagnostic,
            "witness_a": wit(self.witness_a),
            "witness_b": wit(self.witness_b),
        }
        if with_trace:
            out["trace"] = [float(t) for t in self.trace]
        return out
