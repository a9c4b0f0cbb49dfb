"""Continuous tracking of all roots along a one-parameter coefficient path.

The tracker advances a full ordered root tuple through a time grid.  Each
step re-solves the polynomial (warm-started from the previous roots) and
matches the new multiset to the previous ordering by minimal-total-distance
assignment.  A collision guard keeps that matching the unique geometric
continuation: the step is halved whenever the maximum displacement reaches a
fraction of the smallest guarded pairwise root separation.  Reaching the
minimum step with the guard still violated raises :class:`StepUnderflowError`
— the path is at (or crossing) a root collision and the continuation order is
not ours to guess.

Paths may *start* at a collision (e.g. a fold that splits immediately): roots
that are initially coincident are continued as a cluster, with their pairwise
guard suppressed until they separate cleanly.  Label assignment inside such a
cluster is arbitrary; the trajectory values are continuous regardless.  Swap
protection is therefore only meaningful for roots separated by more than the
release radius (~1e-2 times the root scale) at the start.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .poly import InvalidInputError, MonicPoly
from .solver import NoConvergenceError, SolveControls, aberth_roots, solve_all

__all__ = [
    "CoefficientPath",
    "TrackControls",
    "TrajectoryBundle",
    "LocalSelectionReport",
    "StepUnderflowError",
    "match_roots",
    "track",
    "local_selection",
]

_INITIAL_CLUSTER_FACTOR = 1e-3  # pair exemption radius, times root scale
_RELEASE_FACTOR = 8e-3  # exempt pairs re-enter the guard past this separation


class StepUnderflowError(RuntimeError):
    """Minimum step reached with the collision guard still violated."""

    def __init__(self, t: float):
        super().__init__(f"step underflow near t = {t!r}: root collision at or near this point")
        self.t = t


@dataclass(frozen=True)
class CoefficientPath:
    """Continuous map ``t in [t_start, t_end] -> ascending coefficient tuple``."""

    degree: int
    t_start: float
    t_end: float
    field_tag: str
    source: str
    fn: Callable[[float], np.ndarray] = field(repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.degree < 1:
            raise InvalidInputError("degree must be >= 1")
        if not (self.t_start < self.t_end):
            raise InvalidInputError("path domain must satisfy t_start < t_end")
        if self.field_tag not in ("real", "complex"):
            raise InvalidInputError("field_tag must be 'real' or 'complex'")

    @staticmethod
    def from_function(
        degree: int,
        t_start: float,
        t_end: float,
        fn: Callable[[float], np.ndarray],
        field_tag: str = "complex",
        source: str = "function",
    ) -> "CoefficientPath":
        return CoefficientPath(degree, float(t_start), float(t_end), field_tag, source, fn)

    @staticmethod
    def from_samples(
        samples: Sequence[tuple[float, Sequence[complex]]], field_tag: str = "complex"
    ) -> "CoefficientPath":
        """Piecewise-linear path through ``(t, coefficient tuple)`` knots."""
        if len(samples) < 2:
            raise InvalidInputError("sampled path requires at least 2 knots")
        ts = np.array([float(t) for t, _ in samples])
        if not np.all(np.diff(ts) > 0.0):
            raise InvalidInputError("sample times must be strictly increasing")
        coeffs = np.array([[complex(c) for c in row] for _, row in samples], dtype=complex)
        if not np.isfinite(ts).all() or not np.isfinite(coeffs).all():
            raise InvalidInputError("non-finite entry in sampled path")
        degree = coeffs.shape[1]
        if field_tag == "real" and (coeffs.imag != 0.0).any():
            raise InvalidInputError("real sampled path with nonzero imaginary coefficient")

        def interp(t: float) -> np.ndarray:
            re = np.array([np.interp(t, ts, coeffs[:, k].real) for k in range(degree)])
            im = np.array([np.interp(t, ts, coeffs[:, k].imag) for k in range(degree)])
            return re + 1j * im

        return CoefficientPath(degree, float(ts[0]), float(ts[-1]), field_tag, "sampled", interp)

    def at(self, t: float) -> np.ndarray:
        span = self.t_end - self.t_start
        if t < self.t_start - 1e-9 * span or t > self.t_end + 1e-9 * span:
            raise InvalidInputError(f"t = {t!r} outside path domain")
        t = min(max(t, self.t_start), self.t_end)
        return np.asarray(self.fn(t), dtype=complex).reshape(self.degree)

    def poly_at(self, t: float) -> MonicPoly:
        coeffs = self.at(t)
        if self.field_tag == "real":
            return MonicPoly(tuple(complex(c.real, 0.0) for c in coeffs), field="real")
        return MonicPoly(tuple(coeffs.tolist()), field="complex")

    def reversed(self) -> "CoefficientPath":
        a, b = self.t_start, self.t_end
        return CoefficientPath(
            self.degree, a, b, self.field_tag, self.source + ":reversed",
            lambda t: self.fn(a + b - t),
        )

    def closure_defect(self) -> float:
        return float(np.abs(self.at(self.t_start) - self.at(self.t_end)).max())


@dataclass(frozen=True)
class TrackControls:
    """Step-size policy and continuity budget for :func:`track`.

    ``h0``/``h_min`` default to ``span/256`` and ``span * 1e-6``.  A step is
    accepted only when the maximum root displacement stays below ``eps_cont``
    and below ``1/guard`` times the smallest guarded pairwise separation.
    """

    h0: float | None = None
    h_min: float | None = None
    eps_cont: float = 0.1
    guard: float = 4.0
    solve: SolveControls = SolveControls()

    def __post_init__(self) -> None:
        if self.eps_cont <= 0.0:
            raise InvalidInputError("eps_cont must be positive")
        if self.guard < 2.0:
            raise InvalidInputError("guard factor must be >= 2")

    def resolve_steps(self, span: float) -> tuple[float, float]:
        h0 = self.h0 if self.h0 is not None else span / 256.0
        h_min = self.h_min if self.h_min is not None else span * 1e-6
        if not (0.0 < h_min <= h0 <= span):
            raise InvalidInputError("steps must satisfy 0 < h_min <= h0 <= span")
        return h0, h_min


@dataclass(frozen=True)
class TrajectoryBundle:
    """Ordered root trajectories over a time grid, with continuity gauges."""

    grid: np.ndarray  # (m,)
    values: np.ndarray  # (m, n); row j holds the ordered roots at grid[j]
    matchings: tuple[tuple[int, ...], ...]  # per-step assignment provenance
    delta_max: float  # max adjacent displacement
    rho_max: float  # max relative residual over the grid
    s_min: float  # min pairwise root separation over the grid

    @property
    def degree(self) -> int:
        return self.values.shape[1]

    @property
    def steps(self) -> int:
        return self.values.shape[0] - 1

    def initial(self) -> np.ndarray:
        return self.values[0]

    def final(self) -> np.ndarray:
        return self.values[-1]


def match_roots(reference: np.ndarray, candidates: np.ndarray) -> np.ndarray:
    """Minimal-total-distance perfect matching.

    Returns indices ``perm`` such that ``candidates[perm]`` aligns with
    ``reference`` at minimal total Euclidean cost.
    """
    reference = np.asarray(reference, dtype=complex)
    candidates = np.asarray(candidates, dtype=complex)
    if reference.shape != candidates.shape:
        raise InvalidInputError("matching requires equally sized root tuples")
    cost = np.abs(reference[:, None] - candidates[None, :])
    rows, cols = linear_sum_assignment(cost)
    perm = np.empty_like(cols)
    perm[rows] = cols
    return perm


def _residual_max(coeffs: np.ndarray, roots: np.ndarray) -> float:
    from .solver import _horner_batch

    vals, _ = _horner_batch(coeffs[None, :], roots[None, :])
    scale = 1.0 + float(np.abs(coeffs).max())
    return float(np.abs(vals).max() / scale)


def _pair_distances(roots: np.ndarray) -> np.ndarray:
    d = np.abs(roots[:, None] - roots[None, :])
    np.fill_diagonal(d, np.inf)
    return d


def _solve_point(coeffs: np.ndarray, controls: SolveControls,
                 warm: np.ndarray | None) -> np.ndarray:
    if warm is not None:
        try:
            return aberth_roots(coeffs[None, :], controls, initial=warm[None, :])[0]
        except NoConvergenceError:
            pass
    return aberth_roots(coeffs[None, :], controls)[0]


def track(
    path: CoefficientPath,
    controls: TrackControls = TrackControls(),
    initial_order: Sequence[complex] | None = None,
) -> TrajectoryBundle:
    """Track all roots of ``path`` from ``t_start`` to ``t_end``.

    The initial ordering comes from the solver at ``t_start`` (or from
    ``initial_order``, matched against that multiset).  Raises
    :class:`StepUnderflowError` at root collisions; solver failures propagate.
    """
    span = path.t_end - path.t_start
    h0, h_min = controls.resolve_steps(span)
    sc = controls.solve
    n = path.degree

    t = path.t_start
    current = solve_all(path.poly_at(t), sc).as_array()
    if initial_order is not None:
        ref = np.asarray(initial_order, dtype=complex)
        current = current[match_roots(ref, current)]

    root_scale = 1.0 + float(np.abs(current).max())
    release = _RELEASE_FACTOR * root_scale
    if n > 1:
        d0 = _pair_distances(current)
        exempt = d0 <= _INITIAL_CLUSTER_FACTOR * root_scale
    else:
        exempt = np.zeros((1, 1), dtype=bool)

    ts = [t]
    rows = [current]
    matchings: list[tuple[int, ...]] = []
    delta_max = 0.0
    rho_max = _residual_max(path.at(t), current)
    s_min = float(_pair_distances(current).min()) if n > 1 else math.inf

    h = h0
    while t < path.t_end - 1e-12 * span:
        while True:
            t_new = min(t + h, path.t_end)
            coeffs_new = path.at(t_new)
            candidates = _solve_point(coeffs_new, sc, warm=current)
            perm = match_roots(current, candidates)
            ordered = candidates[perm]
            disp = float(np.abs(ordered - current).max())
            if n > 1:
                d_prev = _pair_distances(current)
                guarded = np.where(exempt, np.inf, d_prev)
                s_guard = float(guarded.min())
            else:
                s_guard = math.inf
            if disp <= controls.eps_cont and disp < s_guard / controls.guard:
                break
            h *= 0.5
            if h < h_min:
                raise StepUnderflowError(t)

        if n > 1:
            exempt = exempt & (_pair_distances(ordered) <= release)
            s_min = min(s_min, float(_pair_distances(ordered).min()))
        delta_max = max(delta_max, disp)
        rho_max = max(rho_max, _residual_max(coeffs_new, ordered))
        ts.append(t_new)
        rows.append(ordered)
        matchings.append(tuple(int(i) for i in perm))
        current = ordered
        t = t_new
        h = min(2.0 * h, h0)

    return TrajectoryBundle(
        grid=np.array(ts),
        values=np.vstack(rows),
        matchings=tuple(matchings),
        delta_max=delta_max,
        rho_max=rho_max,
        s_min=s_min,
    )


@dataclass(frozen=True)
class LocalSelectionReport:
    """Maximum root displacement over shrinking perturbation radii."""

    m0: tuple[complex, ...]
    base_roots: tuple[complex, ...]
    radii: tuple[float, ...]
    deltas: tuple[float, ...]
    samples: int

    def as_dict(self) -> dict:
        return {
            "m0": [[z.real, z.imag] for z in self.m0],
            "base_roots": [[z.real, z.imag] for z in self.base_roots],
            "radii": list(self.radii),
            "deltas": list(self.deltas),
            "samples": self.samples,
        }


def local_selection(
    m0: Sequence[complex],
    radius: float,
    samples: int,
    controls: TrackControls = TrackControls(),
    ladder: int = 4,
    shrink: float = 2.0,
) -> LocalSelectionReport:
    """Exhibit a root selection continuous at the coefficient point ``m0``.

    Solves at ``m0``, then at ``samples`` random points inside each ball of
    the radius ladder ``radius, radius/shrink, ...`` assigns roots back to
    the base ordering by minimal matching and records the worst displacement.
    A ladder that decays to zero witnesses continuity at ``m0``.
    """
    if radius < 0.0 or samples < 1 or ladder < 1 or shrink <= 1.0:
        raise InvalidInputError("invalid local selection parameters")
    m0_arr = np.asarray([complex(c) for c in m0], dtype=complex)
    n = m0_arr.size
    sc = controls.solve
    base = solve_all(MonicPoly(tuple(m0_arr.tolist())), sc).as_array()

    rng = np.random.default_rng(sc.seed)
    radii: list[float] = []
    deltas: list[float] = []
    for j in range(ladder):
        r = radius / shrink**j
        directions = rng.standard_normal((samples, n)) + 1j * rng.standard_normal((samples, n))
        norms = np.linalg.norm(directions, axis=1, keepdims=True)
        norms[norms == 0.0] = 1.0
        lengths = r * rng.random(samples) ** (1.0 / (2 * n))
        points = m0_arr[None, :] + directions / norms * lengths[:, None]
        roots = aberth_roots(points, sc)
        worst = 0.0
        for row in roots:
            perm = match_roots(base, row)
            worst = max(worst, float(np.abs(row[perm] - base).max()))
        radii.append(r)
        deltas.append(worst)

    return LocalSelectionReport(
        m0=tuple(m0_arr.tolist()),
        base_roots=tuple(base.tolist()),
        radii=tuple(radii),
        deltas=tuple(deltas),
        samples=samples,
    )
