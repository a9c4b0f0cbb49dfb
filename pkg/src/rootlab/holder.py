"""Hölder-modulus fitting shared by the quadratic atlas and stability scans."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["HolderReport", "fit_constant", "fit_exponent"]


@dataclass(frozen=True)
class HolderReport:
    """Sampled modulus-of-continuity fit ``jump <= C * dist^exponent``.

    ``constant`` is the smallest such C over the sample set.  When an
    exponent was estimated by log-log regression it lands in
    ``fitted_exponent``; when the scan re-ran at doubled sampling, the
    refined constant and the refined/base ratio are recorded.
    """

    exponent: float
    constant: float
    samples: int
    fitted_exponent: float | None = None
    refined_constant: float | None = None

    @property
    def refinement_ratio(self) -> float | None:
        if self.refined_constant is None or self.constant == 0.0:
            return None
        return self.refined_constant / self.constant

    def as_dict(self) -> dict:
        out: dict = {
            "exponent": self.exponent,
            "constant": self.constant,
            "samples": self.samples,
        }
        if self.fitted_exponent is not None:
            out["fitted_exponent"] = self.fitted_exponent
        if self.refined_constant is not None:
            out["refined_constant"] = self.refined_constant
            out["refinement_ratio"] = self.refinement_ratio
        return out


def fit_constant(dists: np.ndarray, jumps: np.ndarray, exponent: float) -> float:
    """Smallest C with ``jump <= C * dist^exponent`` over the samples."""
    dists = np.asarray(dists, dtype=float)
    jumps = np.asarray(jumps, dtype=float)
    mask = dists > 0.0
    if not mask.any():
        return 0.0
    return float((jumps[mask] / dists[mask] ** exponent).max())


def fit_exponent(dists: np.ndarray, jumps: np.ndarray) -> float:
    """Least-squares slope of ``log jump`` against ``log dist``.

    Zero jumps/distances are dropped; they carry no scaling information.
    """
    dists = np.asarray(dists, dtype=float)
    jumps = np.asarray(jumps, dtype=float)
    mask = (dists > 0.0) & (jumps > 0.0)
    if mask.sum() < 2:
        return float("nan")
    x = np.log(dists[mask])
    y = np.log(jumps[mask])
    slope = np.polyfit(x, y, 1)[0]
    return float(slope)
