"""Spectral abscissa, Hurwitz certification, and the exponential bound check.

For a coefficient tuple ``M = (a_0, ..., a_{n-1})`` the associated linear ODE
``w^(n) = a_{n-1} w^(n-1) + ... + a_0 w`` has the characteristic polynomial
``lam^n - a_{n-1} lam^{n-1} - ... - a_0``.  The module centralizes that sign
convention, computes the spectral abscissa (max real part of the spectrum),
certifies stability by Hurwitz minors, integrates the initial value problem
with classical RK4, and verifies the bound

    |w^(i)(xi)| <= C * (1 + xi^(n-1)) * exp(abscissa * xi)

as a grid supremum over compact coefficient and initial-value boxes.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .holder import HolderReport, fit_constant, fit_exponent
from .poly import InvalidInputError, MonicPoly
from .solver import SolveControls, aberth_roots

__all__ = [
    "StepTooLargeError",
    "DomainBox",
    "Ivp",
    "BoundReport",
    "char_coeffs",
    "char_poly",
    "lambda_bar",
    "lambda_bar_many",
    "hurwitz_matrix",
    "hurwitz_stable",
    "hurwitz_stable_many",
    "hurwitz_raster",
    "solve_ivp",
    "verify_bound",
    "lambda_bar_modulus_scan",
    "holder_exponent_at",
]

_STEP_GUARD = 0.1  # explicit RK4 stability guard: h * max|lam| must stay below


class StepTooLargeError(ValueError):
    """Requested step violates the ``h * max|lam| <= 0.1`` integration guard."""


def char_coeffs(m: np.ndarray | list | tuple) -> np.ndarray:
    """Ascending coefficients of ``lam^n - a_{n-1} lam^{n-1} - ... - a_0``."""
    arr = np.asarray(m, dtype=complex).reshape(-1)
    if arr.size < 1 or not np.isfinite(arr).all():
        raise InvalidInputError("coefficient tuple must be nonempty and finite")
    return -arr


def char_poly(m: np.ndarray | list | tuple) -> MonicPoly:
    return MonicPoly(tuple(char_coeffs(m).tolist()))


def _char_spectrum_many(
    ms: np.ndarray, controls: SolveControls
) -> tuple[np.ndarray, np.ndarray]:
    """Per row: spectral abscissa and max root modulus of the char polynomial."""
    ms = np.atleast_2d(np.asarray(ms, dtype=complex))
    roots = aberth_roots(-ms, controls)
    return roots.real.max(axis=1), np.abs(roots).max(axis=1)


def lambda_bar(m, controls: SolveControls = SolveControls()) -> float:
    """Max real part of the characteristic roots of ``M``."""
    lam, _ = _char_spectrum_many(np.asarray(m, dtype=complex)[None, :], controls)
    return float(lam[0])


def lambda_bar_many(ms: np.ndarray, controls: SolveControls = SolveControls()) -> np.ndarray:
    lam, _ = _char_spectrum_many(ms, controls)
    return lam


def _real_coeff_rows(ms: np.ndarray) -> np.ndarray:
    arr = np.atleast_2d(np.asarray(ms))
    if np.iscomplexobj(arr):
        if (arr.imag != 0.0).any():
            raise InvalidInputError("Hurwitz criterion is stated for real coefficients")
        arr = arr.real
    return arr.astype(float)


def hurwitz_matrix(m) -> np.ndarray:
    """Hurwitz matrix of the characteristic polynomial of a real tuple ``M``."""
    row = _real_coeff_rows(np.asarray(m).reshape(1, -1))[0]
    n = row.size
    full = np.zeros(n + 1)
    full[:n] = -row  # c_k = -a_k
    full[n] = 1.0
    h = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            k = n + i - 2 * j - 1
            if 0 <= k <= n:
                h[i, j] = full[k]
    return h


def hurwitz_stable_many(ms: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized Hurwitz test; returns (stable flags, leading minors)."""
    rows = _real_coeff_rows(ms)
    b, n = rows.shape
    full = np.zeros((b, n + 1))
    full[:, :n] = -rows
    full[:, n] = 1.0
    h = np.zeros((b, n, n))
    for i in range(n):
        for j in range(n):
            k = n + i - 2 * j - 1
            if 0 <= k <= n:
                h[:, i, j] = full[:, k]
    minors = np.empty((b, n))
    for k in range(1, n + 1):
        minors[:, k - 1] = np.linalg.det(h[:, :k, :k]) if k > 1 else h[:, 0, 0]
    return (minors > 0.0).all(axis=1), minors


def hurwitz_stable(m) -> tuple[bool, tuple[float, ...]]:
    """True iff every leading principal Hurwitz minor is positive."""
    stable, minors = hurwitz_stable_many(np.asarray(m).reshape(1, -1))
    return bool(stable[0]), tuple(float(v) for v in minors[0])


@dataclass(frozen=True)
class DomainBox:
    """Per-coordinate closed rectangles in the complex plane.

    Each interval is ``(re_lo, re_hi, im_lo, im_hi)``; real boxes carry zero
    imaginary spans.  Grids are cartesian products of per-coordinate
    (endpoint-inclusive) linspaces.
    """

    intervals: tuple[tuple[float, float, float, float], ...]

    def __post_init__(self) -> None:
        if not self.intervals:
            raise InvalidInputError("box must have at least one coordinate")
        for lo, hi, ilo, ihi in self.intervals:
            if not all(map(math.isfinite, (lo, hi, ilo, ihi))) or lo > hi or ilo > ihi:
                raise InvalidInputError("box intervals must be finite and ordered")

    @staticmethod
    def real(intervals: list[tuple[float, float]] | tuple) -> "DomainBox":
        return DomainBox(tuple((float(lo), float(hi), 0.0, 0.0) for lo, hi in intervals))

    @property
    def dimension(self) -> int:
        return len(self.intervals)

    @property
    def is_real(self) -> bool:
        return all(ilo == 0.0 == ihi for _, _, ilo, ihi in self.intervals)

    def _axis_values(self, interval, points: int) -> np.ndarray:
        lo, hi, ilo, ihi = interval
        res = np.linspace(lo, hi, points) if hi > lo else np.array([lo])
        ims = np.linspace(ilo, ihi, points) if ihi > ilo else np.array([ilo])
        return (res[:, None] + 1j * ims[None, :]).reshape(-1)

    def grid(self, points: int) -> np.ndarray:
        """All grid combinations, shape ``(N, dimension)`` complex."""
        if points < 1:
            raise InvalidInputError("grid size must be >= 1")
        axes = [self._axis_values(iv, points) for iv in self.intervals]
        combos = list(itertools.product(*axes))
        return np.array(combos, dtype=complex).reshape(len(combos), self.dimension)

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        """Uniform random points, shape ``(count, dimension)`` complex."""
        out = np.empty((count, self.dimension), dtype=complex)
        for k, (lo, hi, ilo, ihi) in enumerate(self.intervals):
            out[:, k] = rng.uniform(lo, hi, count) + 1j * rng.uniform(ilo, ihi, count)
        return out


@dataclass(frozen=True)
class Ivp:
    """Initial value problem for the constant-coefficient linear ODE."""

    coeffs: tuple[complex, ...]
    init: tuple[complex, ...]
    xi_max: float
    h: float

    def __post_init__(self) -> None:
        if len(self.coeffs) != len(self.init) or not self.coeffs:
            raise InvalidInputError("coefficient and initial tuples must match, length >= 1")
        for v in (*self.coeffs, *self.init):
            z = complex(v)
            if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                raise InvalidInputError("non-finite IVP data")
        if not (0.0 < self.h <= self.xi_max):
            raise InvalidInputError("step must satisfy 0 < h <= xi_max")


def _rk4_states(
    coeff_rows: np.ndarray, init_rows: np.ndarray, xi_max: float, h: float
) -> tuple[np.ndarray, np.ndarray]:
    """Fixed-step RK4 on the companion system for a batch of problems.

    Returns the grid and states with shape ``(steps + 1, batch, n)``.
    """
    steps = max(1, int(math.ceil(xi_max / h - 1e-12)))
    h_eff = xi_max / steps

    def deriv(y: np.ndarray) -> np.ndarray:
        dy = np.empty_like(y)
        dy[:, :-1] = y[:, 1:]
        dy[:, -1] = (coeff_rows * y).sum(axis=1)
        return dy

    y = init_rows.astype(complex).copy()
    states = np.empty((steps + 1, *y.shape), dtype=complex)
    states[0] = y
    for j in range(steps):
        k1 = deriv(y)
        k2 = deriv(y + 0.5 * h_eff * k1)
        k3 = deriv(y + 0.5 * h_eff * k2)
        k4 = deriv(y + h_eff * k3)
        y = y + (h_eff / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        states[j + 1] = y
    grid = np.linspace(0.0, xi_max, steps + 1)
    return grid, states


def solve_ivp(ivp: Ivp, controls: SolveControls = SolveControls()) -> tuple[np.ndarray, np.ndarray]:
    """Integrate the IVP; returns ``(grid, states)`` with ``states[j] = (w, w', ...)``.

    The step is shrunk uniformly so the grid lands exactly on ``xi_max``.
    Raises :class:`StepTooLargeError` when ``h * max|lam| > 0.1``.
    """
    coeffs = np.asarray(ivp.coeffs, dtype=complex)
    _, max_mod = _char_spectrum_many(coeffs[None, :], controls)
    if ivp.h * float(max_mod[0]) > _STEP_GUARD:
        raise StepTooLargeError(
            f"h = {ivp.h} violates h * max|lam| <= {_STEP_GUARD} (max|lam| = {float(max_mod[0]):.3g})"
        )
    grid, states = _rk4_states(coeffs[None, :], np.asarray(ivp.init, dtype=complex)[None, :],
                               ivp.xi_max, ivp.h)
    return grid, states[:, 0, :]


@dataclass(frozen=True)
class BoundReport:
    """Grid supremum of the bound ratio plus the stability margin, when any."""

    degree: int
    c_tilde: float
    c_tilde_base: float
    refine_rel_change: float | None
    kappa: float | None
    hurwitz_all_stable: bool | None
    decayed_margin: float | None
    xi_max: float
    step: float
    grid_a: int
    grid_w: int
    argmax_m: tuple[complex, ...]
    argmax_w: tuple[complex, ...]
    argmax_xi: float

    def as_dict(self) -> dict:
        out: dict = {
            "degree": self.degree,
            "c_tilde": self.c_tilde,
            "c_tilde_base": self.c_tilde_base,
            "refine_rel_change": self.refine_rel_change,
            "kappa": self.kappa,
            "hurwitz_all_stable": self.hurwitz_all_stable,
            "decayed_margin": self.decayed_margin,
            "xi_max": self.xi_max,
            "step": self.step,
            "grid_a": self.grid_a,
            "grid_w": self.grid_w,
            "argmax_m": [[z.real, z.imag] for z in self.argmax_m],
            "argmax_w": [[z.real, z.imag] for z in self.argmax_w],
            "argmax_xi": self.argmax_xi,
        }
        return out


def _poly_factor(n: int, xi: np.ndarray | float):
    # (1 + xi^(n-1)) with xi^0 == 1, so the factor is the constant 2 at n = 1.
    if n == 1:
        return 2.0 if np.isscalar(xi) else np.full(np.shape(xi), 2.0)
    return 1.0 + xi ** (n - 1)


def _bound_scan(
    ms: np.ndarray,
    ws: np.ndarray,
    lams: np.ndarray,
    xi_max: float,
    h: float,
    kappa: float | None,
) -> tuple[float, int, int, float, float | None, np.ndarray, np.ndarray]:
    """Max bound ratio over the (M, W) product grid along the integration."""
    a_count, n = ms.shape
    w_count = ws.shape[0]
    coeff_rows = np.repeat(ms, w_count, axis=0)
    init_rows = np.tile(ws, (a_count, 1))
    lam_rows = np.repeat(lams, w_count)

    steps = max(1, int(math.ceil(xi_max / h - 1e-12)))
    h_eff = xi_max / steps

    def deriv(y: np.ndarray) -> np.ndarray:
        dy = np.empty_like(y)
        dy[:, :-1] = y[:, 1:]
        dy[:, -1] = (coeff_rows * y).sum(axis=1)
        return dy

    y = init_rows.astype(complex).copy()
    best_ratio = -math.inf
    best_flat = 0
    best_xi = 0.0
    decayed = -math.inf if kappa is not None else None
    curve_xi = np.empty(steps + 1)
    curve_ratio = np.empty(steps + 1)
    for j in range(steps + 1):
        xi = j * h_eff
        num = np.abs(y).max(axis=1)
        den = _poly_factor(n, xi) * np.exp(lam_rows * xi)
        ratio = num / den
        flat = int(np.argmax(ratio))
        if ratio[flat] > best_ratio:
            best_ratio = float(ratio[flat])
            best_flat = flat
            best_xi = xi
        if kappa is not None:
            dec = num / (_poly_factor(n, xi) * math.exp(-kappa * xi))
            decayed = max(decayed, float(dec.max()))
        curve_xi[j] = xi
        curve_ratio[j] = float(ratio.max())
        if j < steps:
            k1 = deriv(y)
            k2 = deriv(y + 0.5 * h_eff * k1)
            k3 = deriv(y + 0.5 * h_eff * k2)
            k4 = deriv(y + h_eff * k3)
            y = y + (h_eff / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return best_ratio, best_flat // w_count, best_flat % w_count, best_xi, decayed, curve_xi, curve_ratio


def verify_bound(
    box_a: DomainBox,
    box_w: DomainBox,
    grid_a: int = 4,
    grid_w: int = 3,
    xi_max: float = 50.0,
    h: float | None = None,
    refine: bool = True,
    controls: SolveControls = SolveControls(),
) -> tuple[BoundReport, np.ndarray, np.ndarray]:
    """Empirical check of the exponential-polynomial solution bound.

    Scans the cartesian grid of coefficient and initial-value boxes,
    integrates each problem to ``xi_max`` and records the supremum of
    ``max_i |w^(i)(xi)| / ((1 + xi^(n-1)) * exp(abscissa * xi))``.  With
    ``refine`` the scan repeats at doubled grid density (step halved, base
    nodes kept) and reports the relative change.  When the coefficient box is
    real and every sampled tuple is Hurwitz stable, the stability margin
    ``kappa = -max abscissa > 0`` and the supremum against the decayed form
    ``exp(-kappa * xi)`` are reported as well.

    Returns the report plus the (xi, max-ratio) curve of the finest pass.
    """
    n = box_a.dimension
    if box_w.dimension != n:
        raise InvalidInputError("coefficient and initial boxes must share the dimension")
    ms_base = box_a.grid(grid_a)
    ws_base = box_w.grid(grid_w)
    if refine:
        ms_fine = box_a.grid(2 * grid_a - 1)
        ws_fine = box_w.grid(2 * grid_w - 1)
    else:
        ms_fine, ws_fine = ms_base, ws_base

    lam_fine, mod_fine = _char_spectrum_many(ms_fine, controls)
    lam_base, _ = _char_spectrum_many(ms_base, controls)
    max_mod = float(mod_fine.max())
    if h is None:
        h = _STEP_GUARD / max(max_mod, 1e-6)
    elif h * max_mod > _STEP_GUARD:
        raise StepTooLargeError(
            f"h = {h} violates h * max|lam| <= {_STEP_GUARD} (max|lam| = {max_mod:.3g})"
        )

    hurwitz_flag: bool | None = None
    kappa: float | None = None
    if box_a.is_real:
        stable, _ = hurwitz_stable_many(ms_fine.real)
        hurwitz_flag = bool(stable.all())
        if hurwitz_flag:
            kappa = float(-lam_fine.max())

    c_base, _, _, _, _, _, _ = _bound_scan(ms_base, ws_base, lam_base, xi_max, h, None)
    if refine:
        c_fine, ai, wi, xi_at, decayed, cx, cr = _bound_scan(
            ms_fine, ws_fine, lam_fine, xi_max, h, kappa
        )
        rel = abs(c_fine - c_base) / c_base if c_base > 0 else None
    else:
        c_fine, ai, wi, xi_at, decayed, cx, cr = _bound_scan(
            ms_base, ws_base, lam_base, xi_max, h, kappa
        )
        rel = None

    report = BoundReport(
        degree=n,
        c_tilde=float(c_fine),
        c_tilde_base=float(c_base),
        refine_rel_change=rel,
        kappa=kappa,
        hurwitz_all_stable=hurwitz_flag,
        decayed_margin=decayed,
        xi_max=xi_max,
        step=h,
        grid_a=grid_a,
        grid_w=grid_w,
        argmax_m=tuple(ms_fine[ai].tolist()),
        argmax_w=tuple(ws_fine[wi].tolist()),
        argmax_xi=float(xi_at),
    )
    return report, cx, cr


def hurwitz_raster(box_a: DomainBox, grid: int) -> tuple[np.ndarray, np.ndarray]:
    """Stability flags over a real coefficient grid; returns (points, flags)."""
    if not box_a.is_real:
        raise InvalidInputError("Hurwitz raster requires a real coefficient box")
    pts = box_a.grid(grid).real
    stable, _ = hurwitz_stable_many(pts)
    return pts, stable


def lambda_bar_modulus_scan(
    box: DomainBox,
    pairs: int = 2000,
    seed: int = 0,
    controls: SolveControls = SolveControls(),
) -> HolderReport:
    """Fit the Hölder-(1/n) constant of the spectral abscissa over a box.

    Samples random point pairs, fits the smallest L with
    ``|abscissa(M) - abscissa(M')| <= L * ||M - M'||^(1/n)`` and repeats with
    the pair count doubled (superset) to expose sampling stability.
    """
    if pairs < 1:
        raise InvalidInputError("pairs must be >= 1")
    n = box.dimension
    rng = np.random.default_rng(seed)
    pts = box.sample(4 * pairs, rng)
    lams = lambda_bar_many(pts, controls)
    a = pts[0::2]
    b = pts[1::2]
    dist = np.linalg.norm(a - b, axis=1)
    jump = np.abs(lams[0::2] - lams[1::2])
    exponent = 1.0 / n
    base = fit_constant(dist[:pairs], jump[:pairs], exponent)
    refined = fit_constant(dist, jump, exponent)
    return HolderReport(
        exponent=exponent,
        constant=base,
        samples=pairs,
        refined_constant=refined,
    )


def holder_exponent_at(
    m0,
    radii: tuple[float, ...] = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6),
    samples: int = 64,
    seed: int = 0,
    controls: SolveControls = SolveControls(),
) -> HolderReport:
    """Empirical continuity exponent of the spectral abscissa at ``m0``.

    For each radius the worst abscissa jump over random directions is
    recorded; the fitted exponent is the log-log slope of jump against
    radius (1/n at an n-fold characteristic root, 1 at simple spectra).
    """
    m0_arr = np.asarray(m0, dtype=complex).reshape(-1)
    n = m0_arr.size
    lam0 = lambda_bar(m0_arr, controls)
    rng = np.random.default_rng(seed)
    dists = []
    jumps = []
    for r in radii:
        dirs = rng.standard_normal((samples, n)) + 1j * rng.standard_normal((samples, n))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        pts = m0_arr[None, :] + r * dirs
        lams = lambda_bar_many(pts, controls)
        dists.append(r)
        jumps.append(float(np.abs(lams - lam0).max()))
    dist_arr = np.asarray(dists)
    jump_arr = np.asarray(jumps)
    return HolderReport(
        exponent=1.0 / n,
        constant=fit_constant(dist_arr, jump_arr, 1.0 / n),
        samples=samples * len(radii),
        fitted_exponent=fit_exponent(dist_arr, jump_arr),
    )
