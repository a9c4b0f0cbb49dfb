import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rootlab.poly import (
    InvalidInputError,
    MonicPoly,
    evaluate,
    from_roots,
    from_roots_grid,
    residual,
)


@pytest.mark.parametrize(
    "coeffs, z, expected",
    [
        ((-1 + 0j, 0j), 1 + 0j, 0j),  # z^2 - 1 at its root
        ((1 + 0j, 0j), 1j, 0j),  # z^2 + 1 at i
        ((0j, 0j, 4 + 0j, 0j), 2j, 0j),  # x^4 + 4x^2 at 2i
    ],
)
def test_evaluate_known_roots(coeffs, z, expected):
    assert evaluate(MonicPoly(coeffs), z) == expected


def test_evaluate_rejects_nonfinite():
    p = MonicPoly((1 + 0j, 0j))
    with pytest.raises(InvalidInputError):
        evaluate(p, complex(float("nan"), 0.0))
    with pytest.raises(InvalidInputError):
        MonicPoly((complex(float("inf"), 0.0),))


def test_from_roots_examples():
    p = from_roots([1, -1])
    assert p.coeffs == (-1 + 0j, 0j)
    assert p.field == "real"

    q = from_roots([1j, -1j])
    assert q.coeffs == (1 + 0j, 0j)
    assert q.field == "real"

    # (z^2)(z^2 + 4) = z^4 + 4 z^2, expanded by hand
    quartic = from_roots([0, 2j, 0, -2j])
    assert quartic.coeffs == (0j, 0j, 4 + 0j, 0j)
    assert quartic.field == "real"


def test_from_roots_complex_multiset_stays_complex():
    p = from_roots([1j, 2j])
    assert p.field == "complex"
    np.testing.assert_allclose(complex(p.coeffs[0]), -2 + 0j, atol=1e-15)


@pytest.mark.parametrize(
    "coeffs, z, expected",
    [
        ((-1 + 0j, 0j), 1 + 0j, 0.0),
        ((-1 + 0j, 0j), 0j, 0.5),
        ((1 + 0j, 0j), 1 + 0j, 1.0),
    ],
)
def test_residual_examples(coeffs, z, expected):
    assert residual(MonicPoly(coeffs), z) == pytest.approx(expected, abs=1e-15)


def test_real_field_requires_exact_zero_imag():
    with pytest.raises(InvalidInputError):
        MonicPoly((1e-17j,), field="real")


def test_degree_zero_rejected():
    with pytest.raises(InvalidInputError):
        MonicPoly(())


_complex_in_box = st.builds(
    complex,
    st.floats(-5.0, 5.0, allow_nan=False),
    st.floats(-5.0, 5.0, allow_nan=False),
)


@settings(max_examples=80, deadline=None, derandomize=True)
@given(st.lists(_complex_in_box, min_size=1, max_size=8))
def test_roundtrip_residual(roots):
    p = from_roots(roots)
    for r in roots:
        assert residual(p, r) <= 1e-10


@settings(max_examples=60, deadline=None, derandomize=True)
@given(st.lists(_complex_in_box, min_size=1, max_size=4))
def test_conjugate_closure_forces_real(half):
    closed = list(half) + [r.conjugate() for r in half]
    p = from_roots(closed)
    assert p.field == "real"
    assert all(c.imag == 0.0 for c in p.coeffs)


def test_evaluate_matches_direct_product():
    rng = np.random.default_rng(11)
    for _ in range(200):
        n = int(rng.integers(1, 9))
        roots = rng.uniform(-5, 5, n) + 1j * rng.uniform(-5, 5, n)
        p = from_roots(roots)
        z = complex(rng.uniform(-10, 10), rng.uniform(-10, 10))
        direct = np.prod([z - r for r in roots])
        scale = 1.0 + sum(abs(a) * abs(z) ** k for k, a in enumerate(p.coeffs)) + abs(z) ** n
        assert abs(evaluate(p, z) - direct) <= 1e-12 * scale


def test_from_roots_grid_matches_scalar():
    rng = np.random.default_rng(12)
    roots = rng.uniform(-3, 3, (50, 4)) + 1j * rng.uniform(-3, 3, (50, 4))
    batch = from_roots_grid(roots)
    for row, expected in zip(roots, batch):
        single = from_roots(row.tolist())
        np.testing.assert_allclose(np.asarray(single.coeffs), expected, atol=1e-12)
