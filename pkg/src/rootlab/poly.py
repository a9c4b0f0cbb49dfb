"""Monic polynomials as ascending coefficient tuples.

A degree-``n`` monic polynomial ``z^n + a_{n-1} z^{n-1} + ... + a_1 z + a_0``
is identified with its coefficient tuple ``(a_0, ..., a_{n-1})``; the leading
coefficient is implicit and never stored.  Coefficient order is ascending
everywhere in this package, including on-disk formats.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "InvalidInputError",
    "MonicPoly",
    "RootMultiset",
    "REAL_PAIRING_TOL",
    "evaluate",
    "from_roots",
    "from_roots_grid",
    "residual",
]

# Absolute tolerance for conjugate-pair detection in from_roots.  Expansion
# noise for degree <= 8 double-precision products stays far below this.
REAL_PAIRING_TOL = 1e-12


class InvalidInputError(ValueError):
    """A public operation received non-finite or malformed input."""


def _as_complex(value: complex, what: str = "value") -> complex:
    z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise InvalidInputError(f"{what} must have finite components, got {z!r}")
    return z


@dataclass(frozen=True)
class MonicPoly:
    """Monic polynomial stored as the ascending tuple ``(a_0, ..., a_{n-1})``.

    ``field`` is ``"real"`` or ``"complex"``; a real polynomial must carry
    imaginary parts that are exactly zero, not merely small.
    """

    coeffs: tuple[complex, ...]
    field: str = "complex"

    def __post_init__(self) -> None:
        if len(self.coeffs) < 1:
            raise InvalidInputError("degree must be at least 1")
        coeffs = tuple(_as_complex(a, "coefficient") for a in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        if self.field not in ("real", "complex"):
            raise InvalidInputError(f"field must be 'real' or 'complex', got {self.field!r}")
        if self.field == "real" and any(a.imag != 0.0 for a in coeffs):
            raise InvalidInputError("real polynomial with nonzero imaginary coefficient part")

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def coeff_array(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=complex)

    def scale(self) -> float:
        """Normalizer ``1 + max_k |a_k|`` used by relative residuals."""
        return 1.0 + max(abs(a) for a in self.coeffs)


@dataclass(frozen=True)
class RootMultiset:
    """Unordered root collection with cluster annotations.

    ``clustered[k]`` is True when root ``k`` sits within ``cluster_radius`` of
    another root, i.e. it participates in a (numerically) multiple root.
    """

    roots: tuple[complex, ...]
    cluster_radius: float
    clustered: tuple[bool, ...]

    def __len__(self) -> int:
        return len(self.roots)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.roots, dtype=complex)

    def min_separation(self) -> float:
        rs = self.as_array()
        if rs.size < 2:
            return math.inf
        d = np.abs(rs[:, None] - rs[None, :])
        np.fill_diagonal(d, np.inf)
        return float(d.min())


def evaluate(p: MonicPoly, z: complex) -> complex:
    """Evaluate ``p`` at ``z`` by a single Horner pass."""
    z = _as_complex(z, "evaluation point")
    acc = complex(1.0)
    for a in reversed(p.coeffs):
        acc = acc * z + a
    return acc


def residual(p: MonicPoly, z: complex) -> float:
    """Relative residual ``|p(z)| / (1 + max_k |a_k|)``."""
    return abs(evaluate(p, z)) / p.scale()


def _conjugate_pairing(
    roots: Sequence[complex], tol: float
) -> tuple[list[float], list[complex]] | None:
    """Split ``roots`` into real values and conjugate-pair representatives.

    Returns ``None`` when the multiset is not conjugate-closed within ``tol``
    (absolute distance).
    """
    real_parts: list[float] = []
    pair_reps: list[complex] = []
    open_idx = [k for k, r in enumerate(roots) if abs(r.imag) > tol]
    for k, r in enumerate(roots):
        if abs(r.imag) <= tol:
            real_parts.append(r.real)
    while open_idx:
        i = open_idx.pop(0)
        target = roots[i].conjugate()
        best_j, best_d = -1, math.inf
        for pos, j in enumerate(open_idx):
            d = abs(roots[j] - target)
            if d < best_d:
                best_j, best_d = pos, d
        if best_j < 0 or best_d > tol:
            return None
        j = open_idx.pop(best_j)
        r1, r2 = roots[i], roots[j]
        # Average out the conjugation defect so the quadratic factor is exact.
        u = 0.5 * (r1.real + r2.real)
        v = 0.5 * (abs(r1.imag) + abs(r2.imag))
        pair_reps.append(complex(u, v))
    return real_parts, pair_reps


def from_roots(
    roots: Iterable[complex] | RootMultiset, pairing_tol: float = REAL_PAIRING_TOL
) -> MonicPoly:
    """Coefficients of ``prod_k (z - r_k)`` by incremental convolution.

    When the multiset is conjugate-closed within ``pairing_tol`` the product
    is assembled from real linear/quadratic factors, the result is tagged
    ``field="real"`` and every imaginary part is exactly zero.
    """
    if isinstance(roots, RootMultiset):
        roots = roots.roots
    rs = [_as_complex(r, "root") for r in roots]
    if not rs:
        raise InvalidInputError("from_roots requires at least one root")

    pairing = _conjugate_pairing(rs, pairing_tol)
    if pairing is not None:
        real_parts, pair_reps = pairing
        acc = np.array([1.0])
        for x in real_parts:
            nxt = np.zeros(acc.size + 1)
            nxt[1:] += acc
            nxt[:-1] -= x * acc
            acc = nxt
        for rep in pair_reps:
            u, v = rep.real, rep.imag
            nxt = np.zeros(acc.size + 2)
            nxt[2:] += acc
            nxt[1:-1] -= 2.0 * u * acc
            nxt[:-2] += (u * u + v * v) * acc
            acc = nxt
        coeffs = tuple(complex(c, 0.0) for c in acc[:-1])
        return MonicPoly(coeffs, field="real")

    acc_c = np.array([1.0 + 0.0j])
    for r in rs:
        nxt_c = np.zeros(acc_c.size + 1, dtype=complex)
        nxt_c[1:] += acc_c
        nxt_c[:-1] -= r * acc_c
        acc_c = nxt_c
    return MonicPoly(tuple(acc_c[:-1]), field="complex")


def from_roots_grid(roots: np.ndarray) -> np.ndarray:
    """Vectorized ``from_roots`` over a batch of root rows.

    ``roots`` has shape ``(m, n)``; the result has shape ``(m, n)`` and holds
    the ascending coefficients (leading 1 dropped) of ``prod_k (z - r[i, k])``
    for every row ``i``.  No conjugate pairing is attempted; real-closed rows
    come back with ~1 ulp imaginary noise.
    """
    roots = np.atleast_2d(np.asarray(roots, dtype=complex))
    m, n = roots.shape
    acc = np.ones((m, 1), dtype=complex)  # descending, leading first
    for k in range(n):
        r = roots[:, k : k + 1]
        nxt = np.zeros((m, acc.shape[1] + 1), dtype=complex)
        nxt[:, :-1] = acc
        nxt[:, 1:] -= r * acc
        acc = nxt
    return acc[:, :0:-1]
