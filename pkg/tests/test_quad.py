"""Selector atlas: region classification, the four continuous selectors,
custom-selector witnesses, and the square-root modulus scan."""
import math

import numpy as np
import pytest

from rootlab.poly import InvalidInputError
from rootlab.quad import (
    CustomSelector,
    FullRootSet,
    Region,
    Selector,
    classify,
    complement,
    continuity_scan,
    custom_root,
    discontinuity_witness,
    discriminant,
    enumerate_continuous,
    xi_root,
    xi_root_grid,
)


@pytest.mark.parametrize(
    "a0, a1, d", [(0.0, 0.0, 0.0), (-1.0, 0.0, 4.0), (1.0, 2.0, 0.0)]
)
def test_discriminant_examples(a0, a1, d):
    assert discriminant(a0, a1) == d


@pytest.mark.parametrize(
    "a0, a1, region",
    [
        (-1.0, 0.0, Region.PLUS),
        (1.0, 0.0, Region.MINUS),
        (1.0, 2.0, Region.PARABOLA),
    ],
)
def test_classify_examples(a0, a1, region):
    assert classify(a0, a1) is region


@pytest.mark.parametrize(
    "sel, a0, a1, expected",
    [
        (Selector.EMPTY, -1.0, 0.0, 1 + 0j),
        (Selector.FULL, -1.0, 0.0, -1 + 0j),
        (Selector.EMPTY, 1.0, 0.0, 1j),
        (Selector.PLUS, 0.0, -2.0, 0j),
        (Selector.EMPTY, 1.0, 2.0, -1 + 0j),  # parabola point: always -a1/2
    ],
)
def test_xi_root_examples(sel, a0, a1, expected):
    assert xi_root(sel, a0, a1) == pytest.approx(expected, abs=1e-15)


def test_xi_root_grid_matches_scalar():
    rng = np.random.default_rng(31)
    a0 = rng.uniform(-10, 10, 500)
    a1 = rng.uniform(-10, 10, 500)
    for sel in Selector:
        grid = xi_root_grid(sel, a0, a1)
        for k in (0, 100, 499):
            assert grid[k] == xi_root(sel, a0[k], a1[k])


def test_complement_pairs():
    assert complement(Selector.EMPTY) is Selector.FULL
    assert complement(Selector.FULL) is Selector.EMPTY
    assert complement(Selector.PLUS) is Selector.MINUS
    assert complement(Selector.MINUS) is Selector.PLUS


def test_enumerate_continuous():
    selectors, pairs = enumerate_continuous()
    assert set(selectors) == {Selector.EMPTY, Selector.FULL, Selector.PLUS, Selector.MINUS}
    assert len(selectors) == 4
    assert {frozenset((p.first, p.second)) for p in pairs} == {
        frozenset((Selector.EMPTY, Selector.FULL)),
        frozenset((Selector.PLUS, Selector.MINUS)),
    }


def test_full_root_set_requires_complement():
    with pytest.raises(InvalidInputError):
        FullRootSet(Selector.EMPTY, Selector.PLUS)


def test_vieta_and_disjointness():
    rng = np.random.default_rng(32)
    a0 = rng.uniform(-10, 10, 20000)
    a1 = rng.uniform(-10, 10, 20000)
    for first in (Selector.EMPTY, Selector.PLUS):
        r1 = xi_root_grid(first, a0, a1)
        r2 = xi_root_grid(complement(first), a0, a1)
        np.testing.assert_allclose(r1 + r2, -a1, atol=1e-9)
        np.testing.assert_allclose(r1 * r2, a0, atol=1e-9)
        d = a1 * a1 - 4.0 * a0
        np.testing.assert_allclose(np.abs(r1 - r2), np.sqrt(np.abs(d)), atol=1e-9)


def test_custom_member_set_example():
    sel = CustomSelector.from_member_set([(-1.0, 0.0)])
    assert custom_root(sel, -1.0, 0.0) == pytest.approx(-1 + 0j)
    assert custom_root(sel, -2.0, 0.0) == pytest.approx(complex(math.sqrt(2)), abs=1e-15)


def test_custom_table_undefined_point():
    sel = CustomSelector.from_table({(-1.0, 0.0): True})
    assert custom_root(sel, -1.0, 0.0) == pytest.approx(-1 + 0j)
    with pytest.raises(InvalidInputError):
        custom_root(sel, -2.0, 0.0)


def test_custom_canonical_equivalents_agree():
    rng = np.random.default_rng(33)
    pts = rng.uniform(-8, 8, (200, 2))
    for base in Selector:
        sel = CustomSelector.from_canonical(base)
        for a0, a1 in pts:
            if classify(a0, a1) is Region.PARABOLA:
                continue
            assert custom_root(sel, a0, a1) == xi_root(base, a0, a1)


def test_custom_halfplane_at_minus_region():
    sel = CustomSelector.from_canonical(Selector.PLUS)
    # (1, 0) lies in the conjugate-pair region, outside the Plus membership set
    assert custom_root(sel, 1.0, 0.0) == pytest.approx(1j)


def test_witness_split_membership_certifies():
    sel = CustomSelector.from_member_set([(-1.0, 0.0)])
    report = discontinuity_witness(sel, (-1.0, 0.0), (-2.0, 0.0))
    assert report.verdict == "Discontinuous"
    assert (report.sigma1, report.sigma2) == (-1, 1)


@pytest.mark.parametrize("base", [Selector.EMPTY, Selector.FULL])
def test_witness_canonical_inconclusive(base):
    sel = CustomSelector.from_canonical(base)
    report = discontinuity_witness(sel, (-1.0, 0.0), (-2.0, 0.0))
    assert report.verdict == "Inconclusive"
    assert report.sigma1 == report.sigma2 != 0


def test_witness_minus_region_split():
    # membership split inside the conjugate-pair region is caught by Im sign
    sel = CustomSelector.from_member_set([(1.0, 0.0)])
    report = discontinuity_witness(sel, (1.0, 0.0), (2.0, 0.0))
    assert report.region is Region.MINUS
    assert report.verdict == "Discontinuous"


def test_witness_rejects_parabola_and_mixed_regions():
    sel = CustomSelector.from_canonical(Selector.EMPTY)
    with pytest.raises(InvalidInputError):
        discontinuity_witness(sel, (1.0, 2.0), (-1.0, 0.0))
    with pytest.raises(InvalidInputError):
        discontinuity_witness(sel, (-1.0, 0.0), (1.0, 0.0))


def test_randomized_splits_always_certified():
    rng = np.random.default_rng(34)
    for _ in range(20):
        pts = rng.uniform(-10, 10, (300, 2))
        d = pts[:, 1] ** 2 - 4.0 * pts[:, 0]
        while True:
            c, cx, cy = rng.normal(size=3)
            sel = CustomSelector.from_halfplane(c, cx, cy)
            side = c + cx * pts[:, 0] + cy * pts[:, 1] > 0
            split_plus = side[d > 0].any() and (~side)[d > 0].any()
            split_minus = side[d < 0].any() and (~side)[d < 0].any()
            if split_plus or split_minus:
                break
        mask = (d > 0) if split_plus else (d < 0)
        members = pts[mask & side]
        nonmembers = pts[mask & ~side]
        report = discontinuity_witness(sel, tuple(members[0]), tuple(nonmembers[0]))
        assert report.verdict == "Discontinuous"


def test_continuity_scan_ray_constant():
    # approach (1, 2) along a1 = 2: the jump is exactly sqrt(distance)
    for delta in (1e-2, 1e-4, 1e-6):
        jump = abs(xi_root(Selector.EMPTY, 1.0 - delta, 2.0) - (-1.0))
        assert jump / math.sqrt(delta) == pytest.approx(1.0, abs=1e-9)


def test_continuity_scan_grid_stability():
    coarse = continuity_scan(Selector.EMPTY, (-4, 4, -4, 4), 200)
    fine = continuity_scan(Selector.EMPTY, (-4, 4, -4, 4), 400)
    assert coarse.constant > 0
    assert 0.5 <= coarse.constant / fine.constant <= 2.0


def test_parabola_point_jump_zero():
    assert xi_root(Selector.MINUS, 1.0, 2.0) == -1 + 0j
