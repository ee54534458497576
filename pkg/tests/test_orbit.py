import numpy as np
import pytest

from contradyn.dynamics import init_state, mass_center, run
from contradyn.errors import ConfigError, InvalidModelError
from contradyn.lattice import ConvolutionSet, GroupParams
from contradyn.orbit import (
    AttractorSample,
    OrbitModel,
    attractor_dimension,
    error_series,
    export_attractor_csv,
    export_error_csv,
    export_orbit_csv,
    fit_error_slope,
    fourier_transform,
    inverse_fourier_transform,
    sample_attractor,
)
from contradyn.spectrum import full_spectrum

BASIS2 = ((1, 0), (0, 1))
CROSS = ((1, 0), (0, 1), (-1, 0), (0, -1))
THREE = ((1, 0), (0, 1), (2, 3))


def model_for(n, offsets, p, d=2, seed=0):
    g = GroupParams(n, 2)
    rep = full_spectrum(g, ConvolutionSet(offsets, n), p)
    x0 = init_state(g, d, seed)
    return g, rep, x0, OrbitModel.build(rep, x0)


def test_fourier_round_trip():
    g = GroupParams(9, 2)
    x = init_state(g, 3, seed=1)
    z = fourier_transform(x, g)
    back = inverse_fourier_transform(z, g)
    assert np.max(np.abs(back.imag)) < 1e-12
    np.testing.assert_allclose(back.real, x, atol=1e-9)


def test_fourier_matches_character_sum():
    g = GroupParams(5, 2)
    x = init_state(g, 2, seed=2)
    z = fourier_transform(x, g)
    rng = np.random.default_rng(0)
    verts = g.vertices()
    for _ in range(6):
        h = tuple(int(a) for a in rng.integers(0, 5, size=2))
        w = np.exp(-2j * np.pi * ((verts @ np.array(h)) % 5) / 5)
        np.testing.assert_allclose(z[g.index_of(h)], w @ x, atol=1e-10)


def test_predict_matches_eigenprojection_form():
    # two distinct rotation numbers in W: the grouped-amplitude form and
    # the raw eigenmode sum must agree
    _, rep, _, model = model_for(29, THREE, 0.25, d=3, seed=4)
    assert len(model.thetas) == 2
    for t in (0, 1, 7, 50, 123):
        np.testing.assert_allclose(
            model.predict(t), model.eigenprojection_state(t), atol=1e-9
        )


def test_predict_zero_is_W_projection():
    g, rep, x0, model = model_for(7, BASIS2, 0.45)
    resid = (x0 - mass_center(x0)) - model.predict(0)
    zr = fourier_transform(resid, g)
    assert np.max(np.abs(zr[rep.W_idx])) < 1e-9


def test_scaled_run_converges_to_predicted_orbit():
    g, rep, x0, model = model_for(7, BASIS2, 0.45)
    traj = run(g, rep.conv, 0.45, x0, steps=600, scaling="inverse-lambda", lam=rep.lam)
    times, errs = error_series(traj, model)
    assert errs[-1] < 1e-6
    assert errs[-1] < errs[times.tolist().index(20)]


def test_error_slope_tracks_mu():
    g, rep, x0, model = model_for(7, BASIS2, 0.3)
    traj = run(g, rep.conv, 0.3, x0, steps=200, scaling="inverse-lambda", lam=rep.lam)
    times, errs = error_series(traj, model)
    slope = fit_error_slope(times, errs, 20, 200)
    assert slope == pytest.approx(np.log(rep.mu), rel=0.15)


def test_real_spectrum_orbit_is_constant():
    g, rep, x0, model = model_for(29, CROSS, 0.3)
    assert model.thetas == ()
    np.testing.assert_allclose(model.predict(17), model.predict(0), atol=1e-12)
    # long run lands on that constant configuration
    traj = run(g, rep.conv, 0.3, x0, steps=4000, scaling="inverse-lambda", lam=rep.lam)
    final = traj.final - mass_center(traj.final)
    np.testing.assert_allclose(final, model.predict(4000), atol=1e-5)


def test_alternating_mode_gives_period_two():
    g = GroupParams(4, 1)
    conv = ConvolutionSet(((1,), (3,)), 4)
    rep = full_spectrum(g, conv, 0.1)
    x0 = init_state(g, 2, seed=3)
    model = OrbitModel.build(rep, x0)
    np.testing.assert_allclose(model.predict(2), model.predict(0), atol=1e-12)
    delta = model.predict(1) - model.predict(0)
    assert np.linalg.norm(delta) > 1e-3  # the flip term is actually there
    np.testing.assert_allclose(model.predict(3), model.predict(1), atol=1e-12)


def test_orbit_model_linearity_in_initial_state():
    g = GroupParams(7, 2)
    rep = full_spectrum(g, ConvolutionSet(THREE, 7), 0.3)
    x = init_state(g, 2, seed=5)
    y = init_state(g, 2, seed=6)
    combo = OrbitModel.build(rep, 1.5 * x - 0.5 * y)
    mx = OrbitModel.build(rep, x)
    my = OrbitModel.build(rep, y)
    for t in (0, 3, 11):
        np.testing.assert_allclose(
            combo.predict(t), 1.5 * mx.predict(t) - 0.5 * my.predict(t), atol=1e-10
        )


def test_rejects_extra_unit_modes():
    g = GroupParams(7, 2)
    rep = full_spectrum(g, ConvolutionSet(BASIS2, 7), 0.0)
    with pytest.raises(InvalidModelError):
        OrbitModel.build(rep, init_state(g, 2, seed=0))


def test_attractor_dimension_examples():
    g29 = GroupParams(29, 2)
    assert attractor_dimension(full_spectrum(g29, ConvolutionSet(CROSS, 29), 0.3)) == 0
    assert attractor_dimension(full_spectrum(g29, ConvolutionSet(BASIS2, 29), 0.3)) == 1
    assert attractor_dimension(full_spectrum(g29, ConvolutionSet(BASIS2, 29), 0.5)) == 2
    assert attractor_dimension(full_spectrum(g29, ConvolutionSet(THREE, 29), 0.25)) == 2
    g4 = GroupParams(4, 1)
    assert attractor_dimension(full_spectrum(g4, ConvolutionSet(((1,), (3,)), 4), 0.1)) == 0


def test_sample_attractor_single_ellipse():
    _, rep, _, model = model_for(15, BASIS2, 0.3)
    sample = sample_attractor(model, resolution=64)
    assert sample.dimension == 1
    assert sample.points.shape == (64, 2)
    e = model.ellipses[0]
    want = np.outer(np.cos(sample.phases[:, 0]), e.a) + np.outer(np.sin(sample.phases[:, 0]), e.b)
    np.testing.assert_allclose(sample.points, want, atol=1e-12)


def test_sample_attractor_point_cap():
    _, rep, _, model = model_for(29, BASIS2, 0.5)  # two ellipses
    sample = sample_attractor(model, resolution=256, point_cap=10_000)
    assert sample.dimension == 2
    assert sample.points.shape[0] == sample.resolution ** 2
    assert sample.points.shape[0] <= 10_000


def test_predicted_orbit_lies_on_sampled_attractor():
    _, rep, _, model = model_for(15, BASIS2, 0.3)
    sample = sample_attractor(model, resolution=512)
    bound = sample.max_spacing_bound()
    for t in (0, 5, 31, 200):
        y = model.predict(t)
        for v in (0, 7, 100):
            dmin = np.min(np.linalg.norm(sample.points - y[v], axis=1))
            assert dmin <= bound + 1e-12


def test_empty_attractor_for_real_spectrum():
    _, rep, _, model = model_for(29, CROSS, 0.3)
    sample = sample_attractor(model)
    assert sample.dimension == 0
    assert sample.points.shape == (1, 2)


def test_error_series_requires_scaled_trajectory():
    g, rep, x0, model = model_for(7, BASIS2, 0.45)
    traj = run(g, rep.conv, 0.45, x0, steps=10)
    with pytest.raises(ConfigError):
        error_series(traj, model)


def test_exports(tmp_path):
    _, rep, _, model = model_for(15, BASIS2, 0.3)
    sample = sample_attractor(model, resolution=16)
    apath = tmp_path / "attractor.csv"
    export_attractor_csv(sample, apath)
    lines = apath.read_text().strip().split("\n")
    assert lines[0] == "phase_1,y_1,y_2"
    assert len(lines) == 17

    opath = tmp_path / "orbit.csv"
    export_orbit_csv(model, [0, 1, 2], opath, agent=(1, 0))
    olines = opath.read_text().strip().split("\n")
    assert olines[0] == "t,y_1,y_2"
    idx = model.report.g.index_of((1, 0))
    got = float(olines[1].split(",")[1])
    assert got == pytest.approx(model.predict(0)[idx, 0])

    epath = tmp_path / "error.csv"
    export_error_csv(np.array([0, 1]), np.array([0.5, 0.25]), epath)
    assert epath.read_text().startswith("t,rel_error\n0,0.5\n")
