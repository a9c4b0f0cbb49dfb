"""Simultaneous polynomial root finding.

The workhorse is an Aberth–Ehrlich iteration started on a circle of radius
``1 + max_k |a_k|`` with a seed-dependent angular offset.  It is deterministic
for a fixed seed, works on batches of polynomials of a common degree, and
serves as the independent oracle for tracking and certification.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .poly import InvalidInputError, MonicPoly, RootMultiset

__all__ = [
    "SolveControls",
    "NoConvergenceError",
    "aberth_roots",
    "solve_all",
    "polish",
]

_DERIV_FLOOR = 1e-30  # below this the Newton/Aberth denominator is unusable


@dataclass(frozen=True)
class SolveControls:
    """Targets and determinism knobs for the root solver."""

    tol: float = 1e-12
    max_iter: int = 200
    seed: int = 0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.tol) and self.tol >= 1e-14):
            raise InvalidInputError("tol must be finite and >= 1e-14")
        if self.max_iter < 1:
            raise InvalidInputError("max_iter must be >= 1")


class NoConvergenceError(RuntimeError):
    """Residual target not met within the iteration budget."""

    def __init__(self, iterations: int, worst_residual: float):
        super().__init__(
            f"no convergence after {iterations} iterations "
            f"(worst relative residual {worst_residual:.3e})"
        )
        self.iterations = iterations
        self.worst_residual = worst_residual


def _horner_batch(coeffs: np.ndarray, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Values and derivatives of monic polynomials at ``z``.

    ``coeffs`` is ``(m, n)`` ascending without the leading 1, ``z`` is
    ``(m, k)``; returns ``p(z)`` and ``p'(z)`` with shape ``(m, k)``.
    """
    n = coeffs.shape[1]
    p = np.ones_like(z)
    dp = np.zeros_like(z)
    for idx in range(n - 1, -1, -1):
        dp = dp * z + p
        p = p * z + coeffs[:, idx : idx + 1]
    return p, dp


def _initial_circle(coeffs: np.ndarray, seed: int) -> np.ndarray:
    m, n = coeffs.shape
    radius = 1.0 + np.abs(coeffs).max(axis=1)
    rng = np.random.default_rng(seed)
    offset = 2.0 * math.pi * rng.random()
    angles = offset + 2.0 * math.pi * (np.arange(n) + 0.5) / n
    return radius[:, None] * np.exp(1j * angles)[None, :]


def _spread_duplicates(z: np.ndarray, scale: np.ndarray) -> np.ndarray:
    """Nudge coincident start points apart so the repulsion term is finite."""
    m, n = z.shape
    out = z.copy()
    for i in range(m):
        floor = 1e-12 * scale[i]
        for a in range(n):
            for b in range(a + 1, n):
                if abs(out[i, a] - out[i, b]) < floor:
                    out[i, b] += (b - a) * 1e-8 * scale[i] * complex(0.6, 0.8)
    return out


def cluster_radius_for(tol: float, scale: float) -> float:
    # A p-fold root of a polynomial perturbed at relative level tol splits by
    # ~(tol*scale)^(1/p); the radius covers the dominant p=2 case with margin.
    return 4.0 * math.sqrt(tol * scale)


def aberth_roots(
    coeffs: np.ndarray,
    controls: SolveControls = SolveControls(),
    initial: np.ndarray | None = None,
) -> np.ndarray:
    """All roots of each monic polynomial row, sorted by (re, im).

    Raises :class:`NoConvergenceError` unless every root reaches relative
    residual ``tol``, or ``sqrt(tol)`` for roots inside a cluster (mutual
    distance below the multiple-root conditioning radius).
    """
    coeffs = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    if not np.isfinite(coeffs).all():
        raise InvalidInputError("non-finite coefficient in solve input")
    m, n = coeffs.shape
    scale = 1.0 + np.abs(coeffs).max(axis=1)

    if n == 1:
        roots = -coeffs.copy()
    else:
        if initial is None:
            z = _initial_circle(coeffs, controls.seed)
        else:
            z = np.atleast_2d(np.asarray(initial, dtype=complex)).copy()
            if z.shape != (m, n):
                raise InvalidInputError("initial guesses must match (batch, degree)")
            z = _spread_duplicates(z, scale)

        active = np.ones(m, dtype=bool)
        for _ in range(controls.max_iter):
            if not active.any():
                break
            za = z[active]
            ca = coeffs[active]
            p, dp = _horner_batch(ca, za)

            bad_dp = np.abs(dp) < _DERIV_FLOOR
            if bad_dp.any():
                za = za + bad_dp * (controls.tol * scale[active][:, None])
                p, dp = _horner_batch(ca, za)
                dp = np.where(np.abs(dp) < _DERIV_FLOOR, 1.0, dp)
            w = p / dp

            diffs = za[:, :, None] - za[:, None, :]
            idx = np.arange(n)
            diffs[:, idx, idx] = np.inf
            s = (1.0 / diffs).sum(axis=2)

            denom = 1.0 - w * s
            corr = np.where(np.abs(denom) < 1e-12, w, w / denom)
            za = za - corr
            z[active] = za

            res = np.abs(p) / scale[active][:, None]
            step = np.abs(corr) / (1.0 + np.abs(za))
            done_rows = np.all((res <= controls.tol) | (step <= 1e-16), axis=1)
            still = np.flatnonzero(active)
            active[still[done_rows]] = False
        roots = z

    # Final validation with the multiple-root exemption.
    p, _ = _horner_batch(coeffs, roots)
    res = np.abs(p) / scale[:, None]
    radius = 4.0 * np.sqrt(controls.tol * scale)
    d = np.abs(roots[:, :, None] - roots[:, None, :])
    idx = np.arange(n)
    d[:, idx, idx] = np.inf
    in_cluster = (d < radius[:, None, None]).any(axis=2) if n > 1 else np.zeros_like(res, bool)
    limit = np.where(in_cluster, math.sqrt(controls.tol), controls.tol)
    if (res > limit).any():
        raise NoConvergenceError(controls.max_iter, float(res.max()))

    order = np.lexsort((roots.imag, roots.real), axis=1)
    return np.take_along_axis(roots, order, axis=1)


def solve_all(p: MonicPoly, controls: SolveControls = SolveControls()) -> RootMultiset:
    """Solve for all roots of ``p``; deterministic for a fixed seed."""
    roots = aberth_roots(p.coeff_array()[None, :], controls)[0]
    radius = cluster_radius_for(controls.tol, p.scale())
    n = roots.size
    if n > 1:
        d = np.abs(roots[:, None] - roots[None, :])
        np.fill_diagonal(d, np.inf)
        clustered = tuple(bool(v) for v in (d < radius).any(axis=1))
    else:
        clustered = (False,)
    return RootMultiset(tuple(roots.tolist()), radius, clustered)


def polish(p: MonicPoly, z0: complex, controls: SolveControls = SolveControls()) -> complex:
    """Newton refinement of a single root estimate.

    Returns a point with relative residual ``<= tol``, or the best iterate
    when that floor is unreachable but still ``<= sqrt(tol)`` (multiple-root
    quality); otherwise raises :class:`NoConvergenceError`.
    """
    z = complex(z0)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise InvalidInputError("z0 must be finite")
    coeffs = p.coeff_array()[None, :]
    scale = p.scale()
    best_z, best_res = z, math.inf
    for _ in range(controls.max_iter):
        val, der = _horner_batch(coeffs, np.array([[z]], dtype=complex))
        res = abs(val[0, 0]) / scale
        if res < best_res:
            best_z, best_res = z, res
        if res <= controls.tol:
            return z
        if abs(der[0, 0]) < _DERIV_FLOOR:
            z = z + controls.tol
            continue
        z = z - val[0, 0] / der[0, 0]
    if best_res <= math.sqrt(controls.tol):
        return best_z
    raise NoConvergenceError(controls.max_iter, best_res)
