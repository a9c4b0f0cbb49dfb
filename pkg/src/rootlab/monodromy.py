"""Obstruction certificates against globally continuous root selectors.

Two mechanisms are implemented.  Loop monodromy tracks every root around a
closed, collision-free coefficient loop and reads off the induced index
permutation; a fixed-point-free permutation means no continuous single-valued
root exists on any domain containing the loop.  Branch elimination works on
families whose coefficient path is periodic over an interval while every
closed-form branch is pointwise separated from the others and moves across
the period: a continuous selector would be locked to a single branch yet
forced to equal endpoint values, which no branch provides.  The degree-5
variant chains three such interval arguments into a numeric contradiction.

Every certified claim is backed by a recorded check (name, margin, threshold,
direction); the verdict is recomputable from the record alone.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .families import (
    BranchFamily,
    quintic_interval_coeff_formula,
    quintic_real_family,
)
from .solver import SolveControls, solve_all
from .tracking import (
    CoefficientPath,
    StepUnderflowError,
    TrackControls,
    TrajectoryBundle,
    match_roots,
    track,
)

__all__ = [
    "CheckRecord",
    "LoopPermutation",
    "BranchCertificate",
    "CollisionOnLoopError",
    "NotClosedError",
    "PeriodicityViolatedError",
    "SeparationFailureError",
    "loop_permutation",
    "branch_elimination_certificate",
    "degree5_certificate",
    "QUAD_LOOP_ENDPOINTS",
    "QUARTIC_LOOP_ENDPOINTS",
]

OBSTRUCTION_CERTIFIED = "ObstructionCertified"
INCONCLUSIVE = "Inconclusive"

CLOSURE_TOL = 1e-10
PERIODICITY_TOL = 1e-10
ENDPOINT_TOL = 1e-9
SEPARATION_FLOOR = 1e-9
MOVEMENT_FLOOR = 1e-6
RESIDUAL_FLOOR = 1e-10
# A multiple root at the loop base point leaves the permutation undefined;
# the solver resolves such roots only to ~sqrt(residual) so the floor is
# far above cluster splitting noise.
BASE_SEPARATION_FLOOR = 1e-5

TWO_PI = 2.0 * math.pi

# Branch endpoint tables of the built-in loop families (start, end) per branch.
QUAD_LOOP_ENDPOINTS: tuple[tuple[complex, complex], ...] = (
    (1.0 + 0.0j, -1.0 + 0.0j),
    (-1.0 + 0.0j, 1.0 + 0.0j),
)
QUARTIC_LOOP_ENDPOINTS: tuple[tuple[complex, complex], ...] = (
    (0.0j, 2.0j),
    (2.0j, 0.0j),
    (0.0j, -2.0j),
    (-2.0j, 0.0j),
)
_QUINTIC_LIMITS: tuple[tuple[tuple[complex, complex], ...], ...] = (
    (  # first interval
        (0.0j, 2.0j),
        (2.0j, 0.0j),
        (0.0j, -2.0j),
        (-2.0j, 0.0j),
        (complex(-TWO_PI), complex(-TWO_PI)),
    ),
    (  # middle interval
        (2.0j, 2.0j),
        (0.0j, 0.0j),
        (-2.0j, -2.0j),
        (0.0j, complex(TWO_PI)),
        (complex(-TWO_PI), 0.0j),
    ),
    (  # last interval
        (2.0j, 0.0j),
        (0.0j, 2.0j),
        (-2.0j, 0.0j),
        (complex(TWO_PI), complex(TWO_PI)),
        (0.0j, -2.0j),
    ),
)


class CollisionOnLoopError(RuntimeError):
    """Loop passes through or near the discriminant locus; permutation undefined."""

    def __init__(self, t: float, reason: str):
        super().__init__(f"collision on loop near t = {t!r}: {reason}")
        self.t = t
        self.reason = reason


class NotClosedError(ValueError):
    def __init__(self, defect: float):
        super().__init__(f"loop closure defect {defect:.3e} exceeds {CLOSURE_TOL:.0e}")
        self.defect = defect


class PeriodicityViolatedError(ValueError):
    def __init__(self, defect: float):
        super().__init__(f"coefficient periodicity defect {defect:.3e} exceeds {PERIODICITY_TOL:.0e}")
        self.defect = defect


class SeparationFailureError(RuntimeError):
    def __init__(self, t: float, j: int, k: int, distance: float):
        super().__init__(
            f"branches x{j + 1} and x{k + 1} separated by only {distance:.3e} at t = {t!r}"
        )
        self.t = t
        self.j = j
        self.k = k
        self.distance = distance


@dataclass(frozen=True)
class CheckRecord:
    """One numeric premise: ``margin`` compared against ``threshold``.

    ``op`` is ``"le"`` or ``"ge"``; keeping the direction in the record makes
    pass/fail recomputable without re-running any numerics.
    """

    name: str
    margin: float
    threshold: float
    op: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "margin", float(self.margin))
        object.__setattr__(self, "threshold", float(self.threshold))
        if self.op not in ("le", "ge"):
            raise ValueError(f"unknown comparison op {self.op!r}")

    @property
    def passed(self) -> bool:
        if self.op == "le":
            return self.margin <= self.threshold
        return self.margin >= self.threshold

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "margin": self.margin,
            "threshold": self.threshold,
            "op": self.op,
            "pass": self.passed,
        }


def _cycle_string(mapping: tuple[int, ...]) -> str:
    seen = [False] * len(mapping)
    parts = []
    for start in range(len(mapping)):
        if seen[start] or mapping[start] == start + 1:
            seen[start] = True
            continue
        cycle = [start]
        seen[start] = True
        nxt = mapping[start] - 1
        while nxt != start:
            cycle.append(nxt)
            seen[nxt] = True
            nxt = mapping[nxt] - 1
        parts.append("(" + " ".join(str(i + 1) for i in cycle) + ")")
    return "".join(parts) if parts else "()"


@dataclass(frozen=True)
class LoopPermutation:
    """Root-index permutation induced by tracking around a closed loop."""

    family: str
    mapping: tuple[int, ...]  # 1-based: trajectory k ends at initial root mapping[k-1]
    cycles: str
    has_fixed_point: bool
    s_min: float
    rho_max: float
    closure_defect: float
    match_defect: float

    @property
    def is_identity(self) -> bool:
        return all(v == k + 1 for k, v in enumerate(self.mapping))

    @property
    def fixed_point_free(self) -> bool:
        return not self.has_fixed_point

    def as_dict(self) -> dict:
        return {
            "family": self.family,
            "mapping": list(self.mapping),
            "permutation": self.cycles,
            "has_fixed_point": self.has_fixed_point,
            "fixed_point_free": self.fixed_point_free,
            "identity": self.is_identity,
            "s_min": self.s_min,
            "rho_max": self.rho_max,
            "closure_defect": self.closure_defect,
            "match_defect": self.match_defect,
        }


def loop_permutation(
    target: CoefficientPath | BranchFamily,
    controls: TrackControls = TrackControls(),
) -> LoopPermutation:
    """Track all roots around a closed loop and match the ends.

    Raises :class:`NotClosedError` when the coefficients do not return to
    their start, and :class:`CollisionOnLoopError` when the base point holds
    a multiple root or the tracker hits a collision along the loop.
    """
    if isinstance(target, BranchFamily):
        name = target.name
        path = target.path()
    else:
        name = target.source
        path = target

    defect = path.closure_defect()
    if defect > CLOSURE_TOL:
        raise NotClosedError(defect)

    base = solve_all(path.poly_at(path.t_start), controls.solve)
    base_arr = base.as_array()
    if len(base_arr) > 1:
        d = np.abs(base_arr[:, None] - base_arr[None, :])
        np.fill_diagonal(d, np.inf)
        scale = 1.0 + float(np.abs(base_arr).max())
        if float(d.min()) < BASE_SEPARATION_FLOOR * scale:
            raise CollisionOnLoopError(path.t_start, "multiple root at the loop base point")

    try:
        bundle: TrajectoryBundle = track(path, controls)
    except StepUnderflowError as exc:
        raise CollisionOnLoopError(exc.t, "tracking guard hit the discriminant locus") from exc

    perm = match_roots(bundle.final(), bundle.initial())
    match_defect = float(np.abs(bundle.final() - bundle.initial()[perm]).max())
    mapping = tuple(int(j) + 1 for j in perm)
    return LoopPermutation(
        family=name,
        mapping=mapping,
        cycles=_cycle_string(mapping),
        has_fixed_point=any(v == k + 1 for k, v in enumerate(mapping)),
        s_min=bundle.s_min,
        rho_max=bundle.rho_max,
        closure_defect=defect,
        match_defect=match_defect,
    )


@dataclass(frozen=True)
class BranchCertificate:
    """Machine-checkable obstruction verdict with recorded margins."""

    family: str
    samples: int
    eps_end: float
    checks: tuple[CheckRecord, ...]
    endpoints: tuple[tuple[tuple[complex, complex], ...], ...]  # [interval][branch]
    chain: tuple[str, ...]
    contradiction: tuple[complex, complex] | None
    verdict: str

    @property
    def failing(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.checks if not c.passed)

    def as_dict(self) -> dict:
        endpoints = [
            {
                f"x{k + 1}": [[v[0].real, v[0].imag], [v[1].real, v[1].imag]]
                for k, v in enumerate(interval)
            }
            for interval in self.endpoints
        ]
        out: dict = {
            "family": self.family,
            "samples": self.samples,
            "eps_end": self.eps_end,
            "checks": [c.as_dict() for c in self.checks],
            "endpoints": endpoints,
            "chain": list(self.chain),
            "verdict": self.verdict,
            "failing": list(self.failing),
        }
        if self.contradiction is not None:
            left, right = self.contradiction
            out["contradiction"] = {
                "left": [left.real, left.imag],
                "right": [right.real, right.imag],
                "gap": abs(left - right),
            }
        return out


def _min_separation_over(values: np.ndarray) -> tuple[float, int, int, int]:
    """Min pairwise branch distance over samples; returns (d, sample, j, k)."""
    m, n = values.shape
    d = np.abs(values[:, :, None] - values[:, None, :])
    idx = np.arange(n)
    d[:, idx, idx] = np.inf
    flat = int(np.argmin(d))
    si, j, k = np.unravel_index(flat, d.shape)
    return float(d[si, j, k]), int(si), int(j), int(k)


def _residuals_against_derived(values: np.ndarray, coeffs: np.ndarray) -> float:
    """Max relative residual of each branch value in its own derived polynomial."""
    m, n = values.shape
    p = np.ones_like(values)
    for idx in range(n - 1, -1, -1):
        p = p * values + coeffs[:, idx : idx + 1]
    scale = 1.0 + np.abs(coeffs).max(axis=1, keepdims=True)
    return float((np.abs(p) / scale).max())


def branch_elimination_certificate(
    family: BranchFamily,
    samples: int = 4096,
    eps_end: float | None = None,
    expected_endpoints: tuple[tuple[complex, complex], ...] | None = None,
) -> BranchCertificate:
    """Certify that a coefficient-periodic family admits no continuous selector.

    Premises checked at ``samples`` interior points of the (endpoint-excluded)
    interval: the branches stay pairwise separated, every branch moves across
    the period, and the derived coefficients close up.  A separated continuous
    branch system locks any continuous selector to one branch over the open
    interval; periodic coefficients force equal endpoint values, which no
    moving branch provides.
    """
    a, b = family.t_start, family.t_end
    if eps_end is None:
        eps_end = 1e-3 * (b - a)

    coeff_a = family.coefficients(a)
    coeff_b = family.coefficients(b)
    periodicity = float(np.abs(coeff_a - coeff_b).max())
    if periodicity > PERIODICITY_TOL:
        raise PeriodicityViolatedError(periodicity)

    ts = np.linspace(a + eps_end, b - eps_end, samples)
    values = family.branch_values(ts)
    sep, si, j, k = _min_separation_over(values)
    if sep <= SEPARATION_FLOOR:
        raise SeparationFailureError(float(ts[si]), j, k, sep)

    coeffs = family.coefficients(ts)
    residual = _residuals_against_derived(values, coeffs)

    last_piece = family.piece_count - 1
    starts = np.array([family.branch_value_piece(i, 0, a) for i in range(family.degree)])
    ends = np.array([family.branch_value_piece(i, last_piece, b) for i in range(family.degree)])
    movement = float(np.abs(ends - starts).min())

    checks = [
        CheckRecord("coefficient_periodicity", periodicity, PERIODICITY_TOL, "le"),
        CheckRecord("branch_separation", sep, SEPARATION_FLOOR, "ge"),
        CheckRecord("branch_consistency", residual, RESIDUAL_FLOOR, "le"),
        CheckRecord("branch_movement", movement, MOVEMENT_FLOOR, "ge"),
    ]
    if expected_endpoints is not None:
        dev = max(
            max(abs(starts[i] - expected_endpoints[i][0]), abs(ends[i] - expected_endpoints[i][1]))
            for i in range(family.degree)
        )
        checks.append(CheckRecord("endpoint_table", float(dev), ENDPOINT_TOL, "le"))

    records = tuple(checks)
    verdict = OBSTRUCTION_CERTIFIED if all(c.passed for c in records) else INCONCLUSIVE
    return BranchCertificate(
        family=family.name,
        samples=samples,
        eps_end=eps_end,
        checks=records,
        endpoints=(tuple(zip(starts.tolist(), ends.tolist())),),
        chain=(),
        contradiction=None,
        verdict=verdict,
    )


def degree5_certificate(
    samples: int = 4096,
    eps_end: float | None = None,
    perturb: tuple[int, complex] | None = None,
) -> BranchCertificate:
    """Run the full degree-5 forced-chain contradiction.

    Verifies the branch junctions, the coefficient periodicity over the two
    outer intervals, the closed-form coefficient identities there, pointwise
    branch separation on all three open intervals, and the endpoint-limit
    table; then eliminates branches interval by interval.  Exactly one branch
    survives elimination on each outer interval and continuity locks the
    middle one, yet the two one-sided limits at the junction disagree by
    ``2 pi`` — the contradiction the certificate records.

    ``perturb=(branch_index, offset)`` rebuilds the family with one branch
    shifted (0-based index); any offset of magnitude well above the check
    tolerances must flip the verdict to Inconclusive.
    """
    family = quintic_real_family()
    if perturb is not None:
        family = family.perturbed(perturb[0], perturb[1])
    n = family.degree
    if eps_end is None:
        eps_end = 1e-3 * TWO_PI

    checks: list[CheckRecord] = []

    junction = 0.0
    for bp_idx, bp in enumerate(family.breakpoints):
        for i in range(n):
            left = family.branch_value_piece(i, bp_idx, bp)
            right = family.branch_value_piece(i, bp_idx + 1, bp)
            junction = max(junction, abs(left - right))
    checks.append(CheckRecord("branch_junction_continuity", junction, ENDPOINT_TOL, "le"))

    bounds = (family.t_start, *family.breakpoints, family.t_end)
    per_first = float(np.abs(family.coefficients(bounds[0]) - family.coefficients(bounds[1])).max())
    per_third = float(np.abs(family.coefficients(bounds[2]) - family.coefficients(bounds[3])).max())
    checks.append(CheckRecord("coefficient_periodicity_first", per_first, ENDPOINT_TOL, "le"))
    checks.append(CheckRecord("coefficient_periodicity_last", per_third, ENDPOINT_TOL, "le"))

    t_outer = np.concatenate(
        [np.linspace(bounds[0], bounds[1], 512), np.linspace(bounds[2], bounds[3], 512)]
    )
    derived = family.coefficients(t_outer)
    formula = quintic_interval_coeff_formula(t_outer)
    closed_form = float(np.abs(derived - formula).max())
    checks.append(CheckRecord("closed_form_coefficients", closed_form, ENDPOINT_TOL, "le"))

    endpoints: list[tuple[tuple[complex, complex], ...]] = []
    movements = np.empty((3, n))
    limits_start = np.empty((3, n), dtype=complex)
    limits_end = np.empty((3, n), dtype=complex)
    for piece in range(3):
        lo, hi = family.piece_interval(piece)
        ts = np.linspace(lo + eps_end, hi - eps_end, samples)
        sep, _, _, _ = _min_separation_over(family.branch_values(ts))
        checks.append(
            CheckRecord(f"branch_separation_interval_{piece + 1}", sep, SEPARATION_FLOOR, "ge")
        )
        starts = np.array([family.branch_value_piece(i, piece, lo) for i in range(n)])
        ends = np.array([family.branch_value_piece(i, piece, hi) for i in range(n)])
        limits_start[piece] = starts
        limits_end[piece] = ends
        movements[piece] = np.abs(ends - starts)
        endpoints.append(tuple(zip(starts.tolist(), ends.tolist())))

    table_dev = 0.0
    for piece in range(3):
        for i in range(n):
            exp_s, exp_e = _QUINTIC_LIMITS[piece][i]
            table_dev = max(
                table_dev,
                abs(limits_start[piece, i] - exp_s),
                abs(limits_end[piece, i] - exp_e),
            )
    checks.append(CheckRecord("endpoint_table", table_dev, ENDPOINT_TOL, "le"))

    # Interval 1: the only branch with equal endpoint limits survives.
    surv1 = int(np.argmin(movements[0]))
    others1 = np.delete(movements[0], surv1)
    checks.append(
        CheckRecord("interval1_survivor_fixed", float(movements[0, surv1]), ENDPOINT_TOL, "le")
    )
    checks.append(CheckRecord("interval1_others_move", float(others1.min()), 1.0, "ge"))
    r_after_first = limits_end[0, surv1]

    # Interval 2: continuity from the left locks the branch holding that value.
    at_mid = np.array(
        [family.branch_value_piece(i, 1, family.breakpoints[0]) for i in range(n)]
    )
    dist_mid = np.abs(at_mid - r_after_first)
    lock2 = int(np.argmin(dist_mid))
    others2 = np.delete(dist_mid, lock2)
    checks.append(CheckRecord("interval2_lock_matched", float(dist_mid[lock2]), ENDPOINT_TOL, "le"))
    checks.append(CheckRecord("interval2_lock_unique", float(others2.min()), 1.0, "ge"))
    r_left_limit = limits_end[1, lock2]

    # Interval 3: the same elimination as on the first interval.
    surv3 = int(np.argmin(movements[2]))
    others3 = np.delete(movements[2], surv3)
    checks.append(
        CheckRecord("interval3_survivor_fixed", float(movements[2, surv3]), ENDPOINT_TOL, "le")
    )
    checks.append(CheckRecord("interval3_others_move", float(others3.min()), 1.0, "ge"))
    r_right_limit = limits_start[2, surv3]

    gap = abs(r_left_limit - r_right_limit)
    checks.append(CheckRecord("chain_contradiction", float(gap), 1.0, "ge"))

    records = tuple(checks)
    verdict = OBSTRUCTION_CERTIFIED if all(c.passed for c in records) else INCONCLUSIVE
    return BranchCertificate(
        family=family.name,
        samples=samples,
        eps_end=eps_end,
        checks=records,
        endpoints=tuple(endpoints),
        chain=(f"x{surv1 + 1}", f"x{lock2 + 1}", f"x{surv3 + 1}"),
        contradiction=(complex(r_left_limit), complex(r_right_limit)),
        verdict=verdict,
    )
