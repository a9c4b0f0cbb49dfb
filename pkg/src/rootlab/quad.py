"""Continuous root selectors of the real quadratic family.

The coefficient plane ``(a_0, a_1)`` splits along the parabola ``4 a_0 =
a_1^2`` into the region with two real roots (``D > 0``), the parabola itself
(``D = 0``) and the region with a conjugate pair (``D < 0``), where ``D =
a_1^2 - 4 a_0``.  A selector picks one root per coefficient point via

    root = -a_1/2 + sign * sqrt(|D|)/2        (real direction when D > 0,
                                               imaginary direction when D < 0)

with ``sign`` in {-1, 0, +1} driven by a membership set of off-parabola
points.  Exactly four membership sets yield a globally continuous selector:
the empty set, the full off-parabola plane, and the two open regions.  This
module implements those four, arbitrary table/rule-driven selectors, and the
half-space sign test that certifies every other selector discontinuous.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .holder import HolderReport, fit_constant
from .poly import InvalidInputError

__all__ = [
    "Region",
    "Selector",
    "CustomSelector",
    "FullRootSet",
    "WitnessReport",
    "classify",
    "complement",
    "continuity_scan",
    "custom_root",
    "discontinuity_witness",
    "discriminant",
    "enumerate_continuous",
    "selector_sign",
    "xi_root",
    "xi_root_grid",
]

# Dead zone for the half-space sign test; avoids certificates built from
# rounding noise.
SIGN_DEAD_ZONE = 1e-12


class Region(str, enum.Enum):
    PLUS = "PlusRegion"  # D > 0, two real roots
    PARABOLA = "Parabola"  # D = 0
    MINUS = "MinusRegion"  # D < 0, conjugate pair


class Selector(str, enum.Enum):
    EMPTY = "EmptySet"
    FULL = "FullSet"
    PLUS = "PlusSet"
    MINUS = "MinusSet"


_COMPLEMENT = {
    Selector.EMPTY: Selector.FULL,
    Selector.FULL: Selector.EMPTY,
    Selector.PLUS: Selector.MINUS,
    Selector.MINUS: Selector.PLUS,
}


def complement(sel: Selector) -> Selector:
    return _COMPLEMENT[sel]


def _check_point(a0: float, a1: float) -> tuple[float, float]:
    a0, a1 = float(a0), float(a1)
    if not (math.isfinite(a0) and math.isfinite(a1)):
        raise InvalidInputError("coefficient point must be finite")
    return a0, a1


def discriminant(a0: float, a1: float) -> float:
    """``a_1^2 - 4 a_0``, exactly as written."""
    a0, a1 = _check_point(a0, a1)
    return a1 * a1 - 4.0 * a0


def classify(a0: float, a1: float) -> Region:
    """Strict sign of the discriminant; no tolerance band around zero."""
    d = discriminant(a0, a1)
    if d > 0.0:
        return Region.PLUS
    if d < 0.0:
        return Region.MINUS
    return Region.PARABOLA


def selector_sign(sel: Selector, a0: float, a1: float) -> int:
    """Sign ``S``: -1 on the membership set, 0 on the parabola, +1 elsewhere."""
    region = classify(a0, a1)
    if region is Region.PARABOLA:
        return 0
    member = (
        sel is Selector.FULL
        or (sel is Selector.PLUS and region is Region.PLUS)
        or (sel is Selector.MINUS and region is Region.MINUS)
    )
    return -1 if member else +1


def _root_from_sign(sign: int, a0: float, a1: float) -> complex:
    d = discriminant(a0, a1)
    if d > 0.0:
        return complex(-a1 / 2.0 + sign * math.sqrt(d) / 2.0, 0.0)
    if d < 0.0:
        return complex(-a1 / 2.0, sign * math.sqrt(-d) / 2.0)
    return complex(-a1 / 2.0, 0.0)


def xi_root(sel: Selector, a0: float, a1: float) -> complex:
    """Value of the canonical selector ``sel`` at ``(a_0, a_1)``."""
    a0, a1 = _check_point(a0, a1)
    return _root_from_sign(selector_sign(sel, a0, a1), a0, a1)


def xi_root_grid(sel: Selector, a0: np.ndarray, a1: np.ndarray) -> np.ndarray:
    """Vectorized :func:`xi_root` over arrays of coefficient points."""
    a0 = np.asarray(a0, dtype=float)
    a1 = np.asarray(a1, dtype=float)
    d = a1 * a1 - 4.0 * a0
    plus = d > 0.0
    minus = d < 0.0
    if sel is Selector.EMPTY:
        sign = np.where(plus | minus, 1.0, 0.0)
    elif sel is Selector.FULL:
        sign = np.where(plus | minus, -1.0, 0.0)
    elif sel is Selector.PLUS:
        sign = np.where(plus, -1.0, np.where(minus, 1.0, 0.0))
    else:
        sign = np.where(minus, -1.0, np.where(plus, 1.0, 0.0))
    half = 0.5 * np.sqrt(np.abs(d))
    re = -0.5 * a1 + np.where(plus, sign * half, 0.0)
    im = np.where(minus, sign * half, 0.0)
    return re + 1j * im


@dataclass(frozen=True)
class CustomSelector:
    """Membership predicate on off-parabola coefficient points.

    Reproducible, serializable encodings only:

    * ``member_set`` — membership is containment in a finite point set
      (every other off-parabola point is a non-member),
    * ``table`` — a finite decision table ``{(a0, a1): bool}``; the predicate
      is undefined anywhere else,
    * ``halfplane`` — a sign rule ``(c, cx, cy)`` with membership
      ``c + cx*a0 + cy*a1 > 0``, defined on the whole off-parabola plane,
    * ``base`` — the membership set of a canonical selector.
    """

    member_set: frozenset[tuple[float, float]] | None = None
    table: tuple[tuple[tuple[float, float], bool], ...] = ()
    halfplane: tuple[float, float, float] | None = None
    base: Selector | None = None

    @staticmethod
    def from_member_set(members) -> "CustomSelector":
        return CustomSelector(member_set=frozenset((float(p[0]), float(p[1])) for p in members))

    @staticmethod
    def from_table(entries: dict) -> "CustomSelector":
        table = tuple(((float(p[0]), float(p[1])), bool(flag)) for p, flag in entries.items())
        return CustomSelector(table=table)

    @staticmethod
    def from_halfplane(c: float, cx: float, cy: float) -> "CustomSelector":
        return CustomSelector(halfplane=(float(c), float(cx), float(cy)))

    @staticmethod
    def from_canonical(sel: Selector) -> "CustomSelector":
        return CustomSelector(base=sel)

    def member(self, a0: float, a1: float) -> bool:
        a0, a1 = _check_point(a0, a1)
        if classify(a0, a1) is Region.PARABOLA:
            raise InvalidInputError("membership is defined off the parabola only")
        if self.member_set is not None:
            return (a0, a1) in self.member_set
        if self.halfplane is not None:
            c, cx, cy = self.halfplane
            return c + cx * a0 + cy * a1 > 0.0
        if self.base is not None:
            return selector_sign(self.base, a0, a1) < 0
        for point, flag in self.table:
            if point == (a0, a1):
                return flag
        raise InvalidInputError(f"membership predicate undefined at ({a0}, {a1})")

    def describe(self) -> str:
        if self.member_set is not None:
            return f"member set of {len(self.member_set)} points"
        if self.halfplane is not None:
            c, cx, cy = self.halfplane
            return f"halfplane {c:+g} {cx:+g}*a0 {cy:+g}*a1 > 0"
        if self.base is not None:
            return f"canonical {self.base.value}"
        return f"table over {len(self.table)} points"


def custom_root(sel: CustomSelector, a0: float, a1: float) -> complex:
    """Selector value with the sign driven by a custom membership predicate."""
    a0, a1 = _check_point(a0, a1)
    if classify(a0, a1) is Region.PARABOLA:
        return complex(-a1 / 2.0, 0.0)
    sign = -1 if sel.member(a0, a1) else +1
    return _root_from_sign(sign, a0, a1)


@dataclass(frozen=True)
class FullRootSet:
    """Complementary selector pair whose values factor the quadratic."""

    first: Selector
    second: Selector

    def __post_init__(self) -> None:
        if complement(self.first) is not self.second:
            raise InvalidInputError("full root set requires complementary selectors")

    def values(self, a0: float, a1: float) -> tuple[complex, complex]:
        return xi_root(self.first, a0, a1), xi_root(self.second, a0, a1)


def enumerate_continuous() -> tuple[tuple[Selector, ...], tuple[FullRootSet, ...]]:
    """The four continuous selectors and the two complete sets they form."""
    selectors = (Selector.EMPTY, Selector.FULL, Selector.PLUS, Selector.MINUS)
    pairs = (
        FullRootSet(Selector.EMPTY, Selector.FULL),
        FullRootSet(Selector.PLUS, Selector.MINUS),
    )
    return selectors, pairs


@dataclass(frozen=True)
class WitnessReport:
    """Outcome of the half-space sign test on a same-region point pair."""

    selector: str
    region: Region
    m1: tuple[float, float]
    m2: tuple[float, float]
    root1: complex
    root2: complex
    sigma1: int
    sigma2: int
    verdict: str  # "Discontinuous" | "Inconclusive"
    reason: str

    def as_dict(self) -> dict:
        return {
            "selector": self.selector,
            "region": self.region.value,
            "m1": list(self.m1),
            "m2": list(self.m2),
            "root1": [self.root1.real, self.root1.imag],
            "root2": [self.root2.real, self.root2.imag],
            "sigma1": self.sigma1,
            "sigma2": self.sigma2,
            "verdict": self.verdict,
            "reason": self.reason,
        }


def _halfspace_sigma(region: Region, root: complex, a1: float) -> int:
    # PlusRegion: the two root branches live in the disjoint open half-spaces
    # 2z < -a1 and 2z > -a1.  MinusRegion: in Im z < 0 and Im z > 0.
    if region is Region.PLUS:
        value = 2.0 * root.real + a1
    else:
        value = root.imag
    if abs(value) < SIGN_DEAD_ZONE:
        return 0
    return -1 if value < 0.0 else +1


def discontinuity_witness(
    sel: CustomSelector, m1: tuple[float, float], m2: tuple[float, float]
) -> WitnessReport:
    """Certify discontinuity from two same-region points with opposite signs.

    The selector restricted to a connected open region takes values in two
    disjoint open half-spaces; a continuous selection cannot meet both.  A
    sign flip between ``m1`` and ``m2`` therefore certifies a discontinuity
    somewhere in that region (hence on any domain containing it).
    """
    r1_region = classify(*m1)
    r2_region = classify(*m2)
    if r1_region is Region.PARABOLA or r2_region is Region.PARABOLA:
        raise InvalidInputError("witness points must lie off the parabola")
    if r1_region is not r2_region:
        raise InvalidInputError("witness points must lie in the same region")

    root1 = custom_root(sel, *m1)
    root2 = custom_root(sel, *m2)
    s1 = _halfspace_sigma(r1_region, root1, m1[1])
    s2 = _halfspace_sigma(r2_region, root2, m2[1])
    if s1 * s2 == -1:
        verdict = "Discontinuous"
        reason = (
            "selector values fall in disjoint open half-spaces over a "
            "connected region; no continuous selection can bridge them"
        )
    else:
        verdict = "Inconclusive"
        reason = "no sign flip observed between the witness points"
    return WitnessReport(
        selector=sel.describe(),
        region=r1_region,
        m1=(float(m1[0]), float(m1[1])),
        m2=(float(m2[0]), float(m2[1])),
        root1=root1,
        root2=root2,
        sigma1=s1,
        sigma2=s2,
        verdict=verdict,
        reason=reason,
    )


def continuity_scan(
    sel: Selector,
    box: tuple[float, float, float, float] = (-4.0, 4.0, -4.0, 4.0),
    grid: int = 200,
) -> HolderReport:
    """Fit the square-root modulus of a canonical selector across the parabola.

    Parabola points inside ``box`` are approached from both open regions and
    along the parabola itself over a geometric distance ladder; the report
    carries the smallest C with ``|r(M) - r(M0)| <= C * ||M - M0||^(1/2)``
    observed over all samples.
    """
    a0_lo, a0_hi, a1_lo, a1_hi = box
    if grid < 2:
        raise InvalidInputError("grid must be at least 2")
    ys = np.linspace(a1_lo, a1_hi, grid)
    ys = ys[(ys * ys / 4.0 >= a0_lo) & (ys * ys / 4.0 <= a0_hi)]
    if ys.size == 0:
        raise InvalidInputError("box does not intersect the parabola")

    deltas = 0.5 * 4.0 ** (-np.arange(0, 9, dtype=float))
    dists: list[np.ndarray] = []
    jumps: list[np.ndarray] = []
    for y in ys:
        m0 = np.array([y * y / 4.0, y])
        r0 = xi_root_grid(sel, m0[0], m0[1])
        grad = np.array([4.0, -2.0 * y])  # points into the conjugate-pair region
        grad /= np.hypot(*grad)
        for direction in (grad, -grad):
            pts = m0[None, :] + deltas[:, None] * direction[None, :]
            roots = xi_root_grid(sel, pts[:, 0], pts[:, 1])
            dists.append(np.full(deltas.shape, np.nan))
            dists[-1][:] = np.hypot(pts[:, 0] - m0[0], pts[:, 1] - m0[1])
            jumps.append(np.abs(roots - r0))
        # Along-parabola approach.
        y2 = y + deltas
        pts = np.stack([y2 * y2 / 4.0, y2], axis=1)
        roots = xi_root_grid(sel, pts[:, 0], pts[:, 1])
        dists.append(np.hypot(pts[:, 0] - m0[0], pts[:, 1] - m0[1]))
        jumps.append(np.abs(roots - r0))

    dist_all = np.concatenate(dists)
    jump_all = np.concatenate(jumps)
    constant = fit_constant(dist_all, jump_all, 0.5)
    return HolderReport(exponent=0.5, constant=constant, samples=int(dist_all.size))
