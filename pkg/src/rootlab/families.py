"""Built-in root-branch families and coefficient-path presets.

A :class:`BranchFamily` carries closed-form root branches ``x_1..x_n`` over a
parameter interval (piecewise, when the construction demands it) together
with the coefficient path they induce through the product ``prod (z - x_k)``.
Presets cover the loop families used by the obstruction certificates plus a
few tracking workhorses.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .poly import InvalidInputError, from_roots, from_roots_grid
from .tracking import CoefficientPath

__all__ = [
    "BranchFamily",
    "PresetInfo",
    "load_preset",
    "preset_registry",
    "quad_complex_loop",
    "quartic_real_loop",
    "quintic_real_family",
    "constant_loop",
    "cubic_fold",
]

TWO_PI = 2.0 * math.pi

PieceFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class BranchFamily:
    """Closed-form branches over ``[t_start, t_end]`` with piece structure.

    ``branch_pieces[k][i]`` evaluates branch ``k`` on the ``i``-th piece
    interval; ``breakpoints`` are the interior junctions shared by all
    branches (empty for single-formula families).
    """

    name: str
    degree: int
    t_start: float
    t_end: float
    field_tag: str
    branch_pieces: tuple[tuple[PieceFn, ...], ...] = field(repr=False, compare=False)
    breakpoints: tuple[float, ...] = ()
    coeff_fn: Callable[[float], np.ndarray] | None = field(
        default=None, repr=False, compare=False
    )
    closed: bool = False

    def __post_init__(self) -> None:
        if len(self.branch_pieces) != self.degree:
            raise InvalidInputError("one branch per degree required")
        pieces = len(self.breakpoints) + 1
        if any(len(b) != pieces for b in self.branch_pieces):
            raise InvalidInputError("every branch needs one formula per piece")

    @property
    def piece_count(self) -> int:
        return len(self.breakpoints) + 1

    def piece_interval(self, index: int) -> tuple[float, float]:
        bounds = (self.t_start, *self.breakpoints, self.t_end)
        return bounds[index], bounds[index + 1]

    def _piece_index(self, t: float) -> int:
        return bisect_right(self.breakpoints, t)

    def branch_value(self, k: int, t: float) -> complex:
        return complex(self.branch_pieces[k][self._piece_index(t)](np.asarray(t, dtype=float)))

    def branch_value_piece(self, k: int, piece: int, t: float) -> complex:
        """Evaluate a specific piece formula (for one-sided junction limits)."""
        return complex(self.branch_pieces[k][piece](np.asarray(t, dtype=float)))

    def branch_values(self, t: np.ndarray | float) -> np.ndarray:
        """Branch values at ``t``; shape ``(n,)`` for scalars, ``(m, n)`` for arrays."""
        t_arr = np.asarray(t, dtype=float)
        scalar = t_arr.ndim == 0
        t_arr = np.atleast_1d(t_arr)
        out = np.empty((t_arr.size, self.degree), dtype=complex)
        masks = []
        lo = np.full(t_arr.shape, True)
        for bp in self.breakpoints:
            m = lo & (t_arr < bp)
            masks.append(m)
            lo = lo & ~m
        masks.append(lo)
        for k in range(self.degree):
            col = np.empty(t_arr.shape, dtype=complex)
            for piece, mask in enumerate(masks):
                if mask.any():
                    vals = np.asarray(self.branch_pieces[k][piece](t_arr[mask]), dtype=complex)
                    col[mask] = vals
            out[:, k] = col
        return out[0] if scalar else out

    def coefficients(self, t: np.ndarray | float) -> np.ndarray:
        """Coefficients induced by the branches, raw (no realification)."""
        values = self.branch_values(t)
        if values.ndim == 1:
            return from_roots_grid(values[None, :])[0]
        return from_roots_grid(values)

    def path(self) -> CoefficientPath:
        """Coefficient path of the family (closed form when available)."""
        if self.coeff_fn is not None:
            fn = self.coeff_fn
        else:
            fn = lambda t: np.asarray(from_roots(self.branch_values(t)).coeffs)  # noqa: E731
        return CoefficientPath.from_function(
            self.degree, self.t_start, self.t_end, fn, self.field_tag, f"preset:{self.name}"
        )

    def perturbed(self, branch: int, offset: complex) -> "BranchFamily":
        """Copy with ``offset`` added to every piece of one branch (0-based)."""
        if not 0 <= branch < self.degree:
            raise InvalidInputError("branch index out of range")
        offset = complex(offset)

        def shift(fn: PieceFn) -> PieceFn:
            return lambda t: np.asarray(fn(t), dtype=complex) + offset

        pieces = tuple(
            tuple(shift(f) for f in b) if k == branch else b
            for k, b in enumerate(self.branch_pieces)
        )
        return BranchFamily(
            name=f"{self.name}~x{branch + 1}",
            degree=self.degree,
            t_start=self.t_start,
            t_end=self.t_end,
            field_tag="complex",
            branch_pieces=pieces,
            breakpoints=self.breakpoints,
            coeff_fn=None,
            closed=self.closed,
        )


def _const(value: complex) -> PieceFn:
    return lambda t: np.full(np.shape(t), value, dtype=complex)


def _conj_of(fn: PieceFn) -> PieceFn:
    # Exact floating-point conjugation keeps conjugate-closed multisets exact.
    return lambda t: np.conj(fn(t))


def quad_complex_loop(turns: int = 1) -> BranchFamily:
    """Degree-2 complex loop ``a_0(t) = -e^{it}``, ``a_1 = 0``.

    Branches ``+/- e^{it/2}`` swap over one full turn.
    """
    if turns < 1:
        raise InvalidInputError("turns must be >= 1")
    x1: PieceFn = lambda t: np.exp(0.5j * t)
    x2: PieceFn = lambda t: -np.exp(0.5j * t)
    name = "quad_complex_loop" if turns == 1 else f"quad_complex_loop:{turns}"
    return BranchFamily(
        name=name,
        degree=2,
        t_start=0.0,
        t_end=TWO_PI * turns,
        field_tag="complex",
        branch_pieces=((x1,), (x2,)),
        coeff_fn=lambda t: np.array([-np.exp(1j * t), 0.0], dtype=complex),
        closed=True,
    )


def _upper_circle(t: np.ndarray) -> np.ndarray:
    return np.exp(1j * (t / 2.0 - math.pi / 2.0))


def quartic_real_loop() -> BranchFamily:
    """Degree-4 real loop with two conjugate circle pairs.

    Coefficients ``(2(1 - cos t), -4 sin t, 2(1 + cos t), 0)`` are 2pi-periodic
    while every branch trades places with its partner over the period.
    """
    x1: PieceFn = lambda t: 1j + _upper_circle(t)
    x2: PieceFn = lambda t: 1j - _upper_circle(t)
    x3 = _conj_of(x1)
    x4 = _conj_of(x2)

    def coeffs(t: float) -> np.ndarray:
        return np.array(
            [2.0 * (1.0 - math.cos(t)), -4.0 * math.sin(t), 2.0 * (1.0 + math.cos(t)), 0.0],
            dtype=complex,
        )

    return BranchFamily(
        name="quartic_real_loop",
        degree=4,
        t_start=0.0,
        t_end=TWO_PI,
        field_tag="real",
        branch_pieces=((x1,), (x2,), (x3,), (x4,)),
        coeff_fn=coeffs,
        closed=True,
    )


def quintic_real_family() -> BranchFamily:
    """Degree-5 real family on ``[0, 6pi]`` whose selector chain contradicts.

    Four circle branches trade places on the outer intervals while a fifth
    real branch slides between ``-2pi`` and ``+2pi`` across the middle one;
    the coefficients are periodic over each outer interval.
    """
    circ = _upper_circle
    x1 = (
        lambda t: 1j + circ(t),
        _const(2j),
        lambda t: 1j - circ(t),
    )
    x2 = (
        lambda t: 1j - circ(t),
        _const(0.0),
        lambda t: 1j + circ(t),
    )
    x3 = tuple(_conj_of(f) for f in x1)
    x4 = (
        _conj_of(x2[0]),
        lambda t: (t - TWO_PI).astype(complex) if hasattr(t, "astype") else complex(t - TWO_PI),
        _const(TWO_PI),
    )
    x5 = (
        _const(-TWO_PI),
        lambda t: (t - 2 * TWO_PI).astype(complex) if hasattr(t, "astype") else complex(t - 2 * TWO_PI),
        _conj_of(x2[2]),
    )
    return BranchFamily(
        name="quintic_real_family",
        degree=5,
        t_start=0.0,
        t_end=3.0 * TWO_PI,
        field_tag="real",
        branch_pieces=(x1, x2, x3, x4, x5),
        breakpoints=(TWO_PI, 2.0 * TWO_PI),
        coeff_fn=None,
        closed=False,
    )


def quintic_interval_coeff_formula(t: np.ndarray | float) -> np.ndarray:
    """Closed-form quintic coefficients, valid on ``[0,2pi]`` and ``[4pi,6pi]``.

    With ``b0 = 2(1-cos t)``, ``b1 = -4 sin t``, ``b2 = 2(1+cos t)`` and the
    slide sign ``s = +2pi`` (first interval) / ``-2pi`` (last interval):
    ``(s*b0, b0 + s*b1, b1 + s*b2, b2, s)``.
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    s = np.where(t_arr <= TWO_PI, TWO_PI, -TWO_PI)
    b0 = 2.0 * (1.0 - np.cos(t_arr))
    b1 = -4.0 * np.sin(t_arr)
    b2 = 2.0 * (1.0 + np.cos(t_arr))
    out = np.stack([s * b0, b0 + s * b1, b1 + s * b2, b2, s], axis=-1).astype(complex)
    return out[0] if np.ndim(t) == 0 else out


def constant_loop(degree: int = 2) -> BranchFamily:
    """Constant-coefficient loop ``z^n - 1`` on ``[0, 1]`` (simple roots)."""
    if degree < 1:
        raise InvalidInputError("degree must be >= 1")
    roots = [np.exp(2j * math.pi * k / degree) for k in range(degree)]
    coeffs = np.zeros(degree, dtype=complex)
    coeffs[0] = -1.0
    return BranchFamily(
        name=f"constant_loop:{degree}",
        degree=degree,
        t_start=0.0,
        t_end=1.0,
        field_tag="real",
        branch_pieces=tuple((_const(r),) for r in roots),
        coeff_fn=lambda t: coeffs.copy(),
        closed=True,
    )


def cubic_fold() -> BranchFamily:
    """Tracking example ``z^3 - t z`` on ``[0, 1]``: a triple root splitting."""
    x_zero = _const(0.0)
    x_plus: PieceFn = lambda t: np.sqrt(t).astype(complex) if hasattr(t, "astype") else complex(math.sqrt(t))
    x_minus: PieceFn = lambda t: -np.sqrt(t).astype(complex) if hasattr(t, "astype") else complex(-math.sqrt(t))
    return BranchFamily(
        name="cubic_fold",
        degree=3,
        t_start=0.0,
        t_end=1.0,
        field_tag="real",
        branch_pieces=((x_zero,), (x_plus,), (x_minus,)),
        coeff_fn=lambda t: np.array([0.0, -t, 0.0], dtype=complex),
        closed=False,
    )


@dataclass(frozen=True)
class PresetInfo:
    name: str
    degree: int
    t_start: float
    t_end: float
    field_tag: str
    closed: bool
    parameter: str | None
    summary: str

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "degree": self.degree,
            "t_start": self.t_start,
            "t_end": self.t_end,
            "field": self.field_tag,
            "closed": self.closed,
            "parameter": self.parameter,
            "summary": self.summary,
        }


_PRESETS: dict[str, tuple[Callable[..., BranchFamily], str | None, str]] = {
    "quad_complex_loop": (quad_complex_loop, "turns", "complex quadratic loop; branches swap per turn"),
    "quartic_real_loop": (quartic_real_loop, None, "real quartic loop; four branches trade places"),
    "quintic_real_family": (quintic_real_family, None, "real quintic with a sliding real branch"),
    "constant_loop": (constant_loop, "degree", "constant coefficients z^n - 1"),
    "cubic_fold": (cubic_fold, None, "z^3 - t z; triple root splitting at t = 0"),
}


def preset_registry() -> tuple[PresetInfo, ...]:
    """Immutable descriptors of every built-in family."""
    infos = []
    for name, (factory, parameter, summary) in _PRESETS.items():
        fam = factory()
        infos.append(
            PresetInfo(
                name=name,
                degree=fam.degree,
                t_start=fam.t_start,
                t_end=fam.t_end,
                field_tag=fam.field_tag,
                closed=fam.closed,
                parameter=parameter,
                summary=summary,
            )
        )
    return tuple(infos)


def load_preset(spec: str) -> BranchFamily:
    """Resolve ``"name"`` or ``"name:arg"`` to a family instance."""
    base, _, arg = spec.partition(":")
    if base not in _PRESETS:
        raise KeyError(f"unknown preset: {base!r}")
    factory, parameter, _ = _PRESETS[base]
    if not arg:
        return factory()
    if parameter is None:
        raise InvalidInputError(f"preset {base!r} takes no parameter")
    try:
        value = int(arg)
    except ValueError as exc:
        raise InvalidInputError(f"preset parameter must be an integer, got {arg!r}") from exc
    return factory(value)
