import numpy as np
import pytest

from rootlab.families import cubic_fold, quad_complex_loop
from rootlab.poly import InvalidInputError, from_roots
from rootlab.solver import SolveControls, aberth_roots
from rootlab.tracking import (
    CoefficientPath,
    StepUnderflowError,
    TrackControls,
    local_selection,
    match_roots,
    track,
)


def constant_path(coeffs, span=(0.0, 1.0), field="complex"):
    arr = np.asarray(coeffs, dtype=complex)
    return CoefficientPath.from_function(
        arr.size, span[0], span[1], lambda t: arr.copy(), field, "constant"
    )


def test_constant_path_constant_trajectories():
    bundle = track(constant_path([1.0, 0.0]))
    assert bundle.delta_max == 0.0
    np.testing.assert_allclose(bundle.values[0], [-1j, 1j], atol=1e-12)
    np.testing.assert_allclose(bundle.values[-1], bundle.values[0], atol=0)


def test_quad_loop_matches_closed_form():
    path = quad_complex_loop().path()
    bundle = track(path)
    # Each trajectory stays on one of +-e^{it/2}; fix the sign at the start.
    start = bundle.values[0]
    signs = np.where(np.abs(start - 1.0) < np.abs(start + 1.0), 1.0, -1.0)
    for t, row in zip(bundle.grid, bundle.values):
        expected = signs * np.exp(0.5j * t)
        np.testing.assert_allclose(row, expected, atol=1e-9)
    assert bundle.rho_max <= 1e-8
    assert bundle.s_min == pytest.approx(2.0, abs=1e-9)


def test_factorization_identity_along_track():
    path = quad_complex_loop().path()
    bundle = track(path)
    worst = 0.0
    for t, row in zip(bundle.grid, bundle.values):
        rebuilt = np.asarray(from_roots(row.tolist()).coeffs)
        worst = max(worst, float(np.abs(rebuilt - path.at(t)).max()))
    assert worst <= 1e-8


def test_cubic_fold_tracks_through_initial_triple_root():
    path = CoefficientPath.from_samples(
        [(0.0, [0j, 0j, 0j]), (1.0, [0j, -1 + 0j, 0j])], field_tag="real"
    )
    bundle = track(path)
    controls = SolveControls()
    for t, row in zip(bundle.grid, bundle.values):
        oracle = aberth_roots(path.at(t)[None, :], controls)[0]
        perm = match_roots(row, oracle)
        assert np.abs(row - oracle[perm]).max() <= 1e-8
    np.testing.assert_allclose(np.sort(bundle.values[-1].real), [-1, 0, 1], atol=1e-9)


def test_cubic_fold_preset_matches_sampled_file_form():
    bundle = track(cubic_fold().path())
    expected = {0.0, 1.0, -1.0}
    got = {round(z.real, 9) for z in bundle.values[-1]}
    assert got == expected


def test_endpoint_oracle_equivalence_and_reversal():
    path = CoefficientPath.from_samples(
        [(0.0, [0.5 + 0j, -1.5 + 0j, 0.25 + 0j]), (1.0, [0.8 + 0j, -1.2 + 0j, 0.5 + 0j])],
        field_tag="real",
    )
    fwd = track(path)
    oracle = aberth_roots(path.at(1.0)[None, :])[0]
    perm = match_roots(fwd.final(), oracle)
    assert np.abs(fwd.final() - oracle[perm]).max() <= 1e-8

    back = track(path.reversed(), initial_order=fwd.final())
    closing = match_roots(back.final(), fwd.initial())
    assert (closing == np.arange(path.degree)).all()
    assert np.abs(back.final()[closing] - fwd.initial()).max() <= 1e-8


def test_mid_path_collision_raises_step_underflow():
    path = CoefficientPath.from_samples(
        [(0.0, [-0.5 + 0j, 0j]), (1.0, [0.5 + 0j, 0j])], field_tag="real"
    )
    with pytest.raises(StepUnderflowError) as info:
        track(path)
    assert abs(info.value.t - 0.5) < 0.05


def test_continuity_gauge_respects_budget():
    path = quad_complex_loop().path()
    controls = TrackControls(eps_cont=0.02)
    bundle = track(path, controls)
    assert bundle.delta_max <= 0.02


def test_track_controls_validation():
    with pytest.raises(InvalidInputError):
        TrackControls(eps_cont=0.0)
    with pytest.raises(InvalidInputError):
        TrackControls(guard=1.0)
    with pytest.raises(InvalidInputError):
        TrackControls(h0=2.0, h_min=3.0).resolve_steps(1.0)


def test_sampled_path_validation():
    with pytest.raises(InvalidInputError):
        CoefficientPath.from_samples([(0.0, [1 + 0j])])
    with pytest.raises(InvalidInputError):
        CoefficientPath.from_samples([(0.0, [1 + 0j]), (0.0, [2 + 0j])])
    with pytest.raises(InvalidInputError):
        CoefficientPath.from_samples([(0.0, [1j]), (1.0, [2 + 0j])], field_tag="real")


def test_local_selection_simple_roots_ladder():
    report = local_selection([1 + 0j, 0j], radius=1e-3, samples=24)
    assert report.deltas[0] <= 1e-2
    for a, b in zip(report.deltas, report.deltas[1:]):
        assert b <= a * 1.5
    assert report.radii == (1e-3, 5e-4, 2.5e-4, 1.25e-4)


def test_local_selection_double_root_square_root_scaling():
    report = local_selection([0j, 0j], radius=1e-6, samples=32, ladder=1)
    assert 1e-4 <= report.deltas[0] <= 1e-2


def test_local_selection_zero_radius():
    report = local_selection([1 + 0j, 0j], radius=0.0, samples=4, ladder=1)
    assert report.deltas == (0.0,)


def test_match_roots_requires_equal_sizes():
    with pytest.raises(InvalidInputError):
        match_roots(np.array([1 + 0j]), np.array([1 + 0j, 2 + 0j]))
