import numpy as np
import pytest

from contradyn.dynamics import init_state, mass_center, run
from contradyn.errors import ConfigError, DegenerateMixtureError, InvalidModelError
from contradyn.lattice import ConvolutionSet, GroupParams
from contradyn.mixing import (
    MixtureSpec,
    cumulative_eigen,
    cumulative_log_angle,
    draw_index_sequence,
    find_transition_q,
    mixed_attractor_dimension,
    mixed_limit_state,
    mixed_run,
    mixed_spectrum,
    mixture_manifest,
    ratio_decay,
    sequence_digest,
)
from contradyn.orbit import attractor_dimension
from contradyn.spectrum import full_spectrum

BASIS = ((1, 0), (0, 1))
STRETCH = ((1, 0), (0, 2))
DOUBLED = ((2, 0), (0, 2))


def collapse_spec(seed=0, q=0.5):
    g = GroupParams(29, 2)
    return MixtureSpec.two_set(
        g, ConvolutionSet(BASIS, 29), ConvolutionSet(STRETCH, 29), p=0.5, q=q, seed=seed
    )


def test_spec_validation():
    g = GroupParams(29, 2)
    c = ConvolutionSet(BASIS, 29)
    with pytest.raises(ConfigError):
        MixtureSpec(g, (), (), 0.5)
    with pytest.raises(ConfigError):
        MixtureSpec(g, (c,), (0.7,), 0.5)
    with pytest.raises(ConfigError):
        MixtureSpec(g, (c, c), (0.8, -0.2), 0.5)  # negative weight (wrong sum too)
    with pytest.raises(ConfigError):
        MixtureSpec.two_set(g, c, c, 0.5, q=1.5)
    with pytest.raises(ConfigError):
        MixtureSpec(GroupParams(7, 2), (c,), (1.0,), 0.5)
    g6 = GroupParams(6, 2)
    with pytest.raises(InvalidModelError):
        MixtureSpec(g6, (ConvolutionSet(DOUBLED, 6),), (1.0,), 0.5)


def test_single_set_mixture_reduces_to_pure():
    g = GroupParams(7, 2)
    conv = ConvolutionSet(BASIS, 7)
    spec = MixtureSpec(g, (conv,), (1.0,), 0.45, seed=3)
    mix = mixed_spectrum(spec)
    rep = full_spectrum(g, conv, 0.45)
    np.testing.assert_allclose(mix.lambda_geo[1:], np.abs(rep.values[1:]), rtol=1e-12)
    assert mix.W == rep.W
    assert mix.lam == pytest.approx(rep.lam, rel=1e-12)

    x0 = init_state(g, 2, seed=5)
    mtraj = mixed_run(spec, x0, steps=120)
    ptraj = run(g, conv, 0.45, x0, steps=120, scaling="inverse-lambda", lam=mix.lam)
    np.testing.assert_allclose(mtraj.final, ptraj.final, atol=1e-10)


def test_collapse_mixture_dimensions():
    spec = collapse_spec()
    mix = mixed_spectrum(spec)
    pure_dims = [attractor_dimension(r) for r in mix.pure_reports]
    assert pure_dims == [2, 2]
    assert mix.W == ((1, 0), (28, 0))
    assert mixed_attractor_dimension(mix) == 1
    assert mix.lam == pytest.approx(0.9956067, abs=1e-6)
    assert mix.ratio_constant == pytest.approx(0.996697, abs=1e-5)


def test_weighted_geometric_mean_values():
    spec = collapse_spec(q=0.25)
    mix = mixed_spectrum(spec)
    g = spec.g
    a = abs(full_spectrum(g, spec.sets[0], 0.5).values[g.index_of((0, 1))])
    b = abs(full_spectrum(g, spec.sets[1], 0.5).values[g.index_of((0, 1))])
    want = a ** 0.75 * b ** 0.25
    assert mix.lambda_geo[g.index_of((0, 1))] == pytest.approx(want, rel=1e-12)


def test_draws_reproducible_and_digest_stable():
    spec = collapse_spec(seed=11)
    s1 = draw_index_sequence(spec, 500)
    s2 = draw_index_sequence(spec, 500)
    np.testing.assert_array_equal(s1, s2)
    assert set(np.unique(s1)) <= {0, 1}
    assert sequence_digest(s1) == sequence_digest(s2)
    assert sequence_digest(s1) != sequence_digest(np.asarray(s1[::-1]).copy()) or (s1 == s1[::-1]).all()
    # weights actually bias the draw
    lop = MixtureSpec.two_set(spec.g, spec.sets[0], spec.sets[1], 0.5, q=0.05, seed=1)
    frac = draw_index_sequence(lop, 2000).mean()
    assert frac < 0.12


def test_cumulative_eigen_matches_explicit_product():
    spec = collapse_spec(seed=7)
    mix = mixed_spectrum(spec)
    g = spec.g
    seq = draw_index_sequence(spec, 30)
    grids = [full_spectrum(g, c, 0.5).values for c in spec.sets]
    for u in ((1, 0), (3, 5), (0, 28)):
        want = 1.0 + 0.0j
        for j in seq:
            want *= grids[int(j)][g.index_of(u)]
        got = cumulative_eigen(mix, seq, u)
        assert got == pytest.approx(want, abs=1e-12)


def test_cumulative_log_angle_shapes():
    spec = collapse_spec(seed=2)
    mix = mixed_spectrum(spec)
    seq = draw_index_sequence(spec, 50)
    logs, angs = cumulative_log_angle(mix, seq, spec.g.index_of((1, 0)))
    assert logs.shape == (51,) and angs.shape == (51,)
    assert logs[0] == 0.0 and angs[0] == 0.0
    assert np.all(np.diff(logs) < 0)  # |lambda| < 1 on this mode for both sets


def test_mixed_run_conserves_mass_direction():
    spec = collapse_spec(seed=4)
    x0 = init_state(spec.g, 2, seed=4)
    traj = mixed_run(spec, x0, steps=300)
    # scaled runs inflate the (zero) mean; with centered x0 it stays zero
    assert np.max(np.abs(mass_center(traj.final))) < 1e-8


def test_mixed_limit_state_converges():
    spec = collapse_spec(seed=0)
    mix = mixed_spectrum(spec)
    devs = []
    for seed in range(10):
        s = collapse_spec(seed=seed)
        seq = draw_index_sequence(s, 2000)
        x0 = init_state(s.g, 2, seed=100 + seed)
        traj = mixed_run(s, x0, steps=2000, seq=seq, mix=mix)
        approx = mixed_limit_state(mix, x0, seq, 2000)
        devs.append(
            np.linalg.norm(traj.final - approx) / np.linalg.norm(approx)
        )
    assert np.median(devs) <= 1e-3


def test_mixed_limit_state_accuracy_improves_with_t():
    spec = collapse_spec(seed=1)
    mix = mixed_spectrum(spec)
    seq = draw_index_sequence(spec, 2000)
    x0 = init_state(spec.g, 2, seed=9)
    traj = mixed_run(spec, x0, steps=2000, seq=seq, mix=mix)
    def dev(t):
        y = traj.state_at(t)
        a = mixed_limit_state(mix, x0, seq, t)
        return np.linalg.norm(y - a) / np.linalg.norm(a)
    assert dev(2000) < dev(200) / 10


def test_ratio_decay_slope_bounded():
    spec = collapse_spec(seed=0)
    out = ratio_decay(spec, steps=1000)
    assert out.log_c == pytest.approx(np.log(0.996697), abs=1e-5)
    assert out.slope <= out.log_c + 0.1
    assert out.log_ratio.shape == (1000,)


def test_find_transition_q_doubled_vs_basis():
    g = GroupParams(29, 2)
    res = find_transition_q(
        g, ConvolutionSet(DOUBLED, 29), ConvolutionSet(BASIS, 29), p=0.9, tol=1e-6
    )
    assert res.q_star == pytest.approx(0.030762, abs=1e-4)
    assert res.W_low == ((0, 14), (0, 15), (14, 0), (15, 0))
    assert len(res.W_at_transition) > len(res.W_low)
    assert len(res.W_at_transition) == 8


def test_find_transition_requires_a_change():
    g = GroupParams(29, 2)
    c = ConvolutionSet(BASIS, 29)
    with pytest.raises(InvalidModelError):
        find_transition_q(g, c, c, p=0.9)


def test_degenerate_mixture_detected():
    g = GroupParams(2, 1)
    c = ConvolutionSet(((1,),), 2)
    spec = MixtureSpec(g, (c,), (1.0,), 0.5)
    with pytest.raises(DegenerateMixtureError):
        mixed_spectrum(spec)


def test_manifest_fields():
    spec = collapse_spec(seed=12)
    man = mixture_manifest(spec, steps=64)
    assert man["sets"] == ["(0,1);(1,0)", "(0,2);(1,0)"]
    assert man["weights"] == [0.5, 0.5]
    assert man["seed"] == 12 and man["steps"] == 64
    assert man["sequence_sha256"] == sequence_digest(draw_index_sequence(spec, 64))
