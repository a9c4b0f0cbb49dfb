import math

import numpy as np
import pytest

from rootlab.poly import InvalidInputError, MonicPoly, from_roots
from rootlab.solver import NoConvergenceError, SolveControls, aberth_roots, polish, solve_all


def test_solve_quadratic_units():
    ms = solve_all(MonicPoly((1 + 0j, 0j)))
    np.testing.assert_allclose(ms.as_array(), [-1j, 1j], atol=1e-12)
    assert ms.clustered == (False, False)


def test_solve_rotated_quadratic_against_square_oracle():
    # roots of z^2 - e^{i pi/2}: squaring them must reproduce the constant
    a0 = -np.exp(1j * np.pi / 2)
    ms = solve_all(MonicPoly((a0, 0j)))
    for r in ms.roots:
        assert abs(r * r + a0) <= 1e-12
    assert abs(ms.roots[0] + ms.roots[1]) <= 1e-12


def test_double_root_flagged_clustered():
    ms = solve_all(MonicPoly((1 + 0j, -2 + 0j)))  # (z-1)^2
    assert ms.clustered == (True, True)
    np.testing.assert_allclose(ms.as_array(), [1, 1], atol=1e-5)


def test_roundtrip_against_coefficients():
    rng = np.random.default_rng(21)
    for trial in range(150):
        n = int(rng.integers(1, 7))
        if trial % 2 == 0:
            coeffs = tuple(complex(v) for v in rng.uniform(-3, 3, n))
        else:
            coeffs = tuple(complex(a, b) for a, b in rng.uniform(-3, 3, (n, 2)))
        p = MonicPoly(coeffs)
        ms = solve_all(p)
        rebuilt = from_roots(ms.roots)
        np.testing.assert_allclose(
            np.asarray(rebuilt.coeffs), np.asarray(coeffs), atol=1e-8
        )


def test_determinism_bit_identical():
    coeffs = np.array([[0.3 - 0.2j, -1.1 + 0.4j, 0.0, 2.0 + 0j]])
    first = aberth_roots(coeffs, SolveControls(seed=7))
    second = aberth_roots(coeffs, SolveControls(seed=7))
    assert first.tobytes() == second.tobytes()


def test_conjugate_closure_for_real_inputs():
    rng = np.random.default_rng(22)
    for _ in range(60):
        n = int(rng.integers(2, 7))
        p = MonicPoly(tuple(complex(v) for v in rng.uniform(-3, 3, n)), field="real")
        roots = solve_all(p).as_array()
        conj = np.conj(roots)
        for r in conj:
            assert np.abs(roots - r).min() <= 1e-9


def test_batch_rows_solved_independently():
    rng = np.random.default_rng(23)
    coeffs = rng.uniform(-2, 2, (40, 5)) + 1j * rng.uniform(-2, 2, (40, 5))
    batch = aberth_roots(coeffs)
    for k in (0, 13, 39):
        single = aberth_roots(coeffs[k : k + 1])
        np.testing.assert_allclose(batch[k], single[0], atol=1e-10)


def test_no_convergence_raises_with_diagnostics():
    controls = SolveControls(max_iter=1)
    with pytest.raises(NoConvergenceError) as info:
        solve_all(MonicPoly((1 + 0j, 2 + 0j, -3 + 0j, 0.5 + 0j, 1 + 0j)), controls)
    assert info.value.iterations == 1
    assert info.value.worst_residual > 0


def test_controls_validation():
    with pytest.raises(InvalidInputError):
        SolveControls(tol=1e-15)
    with pytest.raises(InvalidInputError):
        SolveControls(max_iter=0)


@pytest.mark.parametrize(
    "coeffs, z0, target",
    [
        ((-1 + 0j, 0j), 0.9 + 0j, 1 + 0j),
        ((1 + 0j, 0j), 0.1 + 0.9j, 1j),
    ],
)
def test_polish_simple_roots(coeffs, z0, target):
    z = polish(MonicPoly(coeffs), z0)
    assert abs(z - target) <= 1e-9


def test_polish_reaches_residual_target():
    p = MonicPoly((0j, 0j, 4 + 0j, 0j))  # x^4 + 4x^2
    controls = SolveControls()
    z = polish(p, 1.9j, controls)
    assert abs(z - 2j) <= 1e-9
    value = z**4 + 4 * z**2
    assert abs(value) / p.scale() <= controls.tol


def test_polish_rejects_nonfinite_start():
    with pytest.raises(InvalidInputError):
        polish(MonicPoly((1 + 0j, 0j)), complex(math.inf, 0))


def test_degree_one_closed_form():
    ms = solve_all(MonicPoly((3 - 2j,)))
    assert ms.roots == (-3 + 2j,)
