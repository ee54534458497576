"""Top-level acceptance gate: one verdict line per criterion.

Each test prints PASS/FAIL for its criterion and then asserts, so a bare
`pytest -v tests/test_acceptance.py` doubles as the checklist.
"""

import math
import time

import numpy as np
import pytest

from contradyn.cli import main as cli_main
from contradyn.dynamics import init_state, mass_center, run, step, step_direct
from contradyn.equidist import (
    empirical_discrepancy,
    etk_bound,
    monotonicity_scan,
    phase_sequence,
    rotation_vector,
)
from contradyn.lattice import ConvolutionSet, GroupParams
from contradyn.mixing import (
    MixtureSpec,
    draw_index_sequence,
    find_transition_q,
    mixed_attractor_dimension,
    mixed_spectrum,
    ratio_decay,
)
from contradyn.orbit import (
    OrbitModel,
    attractor_dimension,
    error_series,
    fit_error_slope,
)
from contradyn.spectrum import eigenvalue_grid, full_spectrum

from .oracles import assert_multiset_close, dense_eigenvalues

BASIS7 = ConvolutionSet.parse("(1,0);(0,1)", 7)
G7 = GroupParams(7, 2)
G29 = GroupParams(29, 2)


def _verdict(name: str, ok: bool, detail: str = "") -> None:
    tail = f"  [{detail}]" if detail else ""
    print(f"{'PASS' if ok else 'FAIL'}: {name}{tail}")
    assert ok, f"{name}{tail}"


def test_spectral_oracle_random_configs():
    rng = np.random.Generator(np.random.PCG64(2024))
    t0 = time.perf_counter()
    checked = 0
    for _ in range(25):
        m = int(rng.integers(1, 4))
        n_max = {1: 60, 2: 14, 3: 5}[m]
        n = int(rng.integers(2, n_max + 1))
        g = GroupParams(n, m)
        k = int(rng.integers(1, 5))
        offsets = set()
        while len(offsets) < k:
            c = tuple(int(x) for x in rng.integers(0, n, size=m))
            if any(c):
                offsets.add(c)
        conv = ConvolutionSet(tuple(sorted(offsets)), n)
        p = float(rng.uniform(0.0, 0.95))
        closed = eigenvalue_grid(g, conv, p).ravel()
        dense = dense_eigenvalues(g, conv, p)
        assert_multiset_close(closed, dense, atol=1e-9)
        checked += 1
    elapsed = time.perf_counter() - t0
    _verdict(
        "spectral oracle: closed form matches dense eigendecomposition",
        checked >= 25 and elapsed < 60.0,
        f"{checked} configs in {elapsed:.1f}s",
    )


def test_example_reproduction(tmp_path):
    codes = {}
    for ex in ("ex1", "ex2", "ex3"):
        codes[ex] = cli_main(["reproduce", ex, "--out-dir", str(tmp_path / ex)])
    _verdict(
        "example reproduction: ex1, ex2, ex3 all PASS via reproduce",
        all(c == 0 for c in codes.values()),
        f"exit codes {codes}",
    )


def test_attraction_rate_matches_log_mu():
    t0 = time.perf_counter()
    rep = full_spectrum(G7, BASIS7, 0.3)
    log_mu = math.log(rep.mu)
    hits = 0
    for seed in range(10):
        x0 = init_state(G7, 2, seed)
        traj = run(G7, BASIS7, 0.3, x0, 200, scaling="inverse-lambda", lam=rep.lam)
        model = OrbitModel.build(rep, x0)
        times, errs = error_series(traj, model)
        slope = fit_error_slope(times, errs, 20, 200)
        if abs(slope - log_mu) <= 0.15 * abs(log_mu):
            hits += 1
    elapsed = time.perf_counter() - t0
    _verdict(
        "attraction rate: error slope equals log mu within 15% for >= 9/10 seeds",
        hits >= 9 and elapsed < 30.0,
        f"{hits}/10 seeds in {elapsed:.1f}s",
    )


def test_conservation_suite():
    x = init_state(G7, 3, 5) + 0.75
    m0 = mass_center(x)
    y = x.copy()
    for _ in range(10_000):
        y = step(y, G7, BASIS7, 0.3)
    drift = float(np.max(np.abs(mass_center(y) - m0)))

    rng = np.random.Generator(np.random.PCG64(9))
    fft_gap = 0.0
    for conv_text, n, m in (("(1,0);(0,1)", 7, 2), ("(1);(3)", 12, 1), ("(1,1,0);(0,2,1)", 4, 3)):
        conv = ConvolutionSet.parse(conv_text, n)
        g = GroupParams(n, m)
        z = rng.standard_normal((g.size, 2))
        gap = np.max(np.abs(step(z, g, conv, 0.4) - step_direct(z, g, conv, 0.4)))
        fft_gap = max(fft_gap, float(gap))

    a = rng.standard_normal((G7.size, 3))
    b = rng.standard_normal((G7.size, 3))
    lin_gap = float(
        np.max(np.abs(step(2.5 * a - 1.25 * b, G7, BASIS7, 0.3)
                      - 2.5 * step(a, G7, BASIS7, 0.3) + 1.25 * step(b, G7, BASIS7, 0.3)))
    )
    _verdict(
        "conservation: mass drift <= 1e-9, fft-vs-direct <= 1e-10, linearity <= 1e-10",
        drift <= 1e-9 and fft_gap <= 1e-10 and lin_gap <= 1e-10,
        f"drift {drift:.2e}, fft {fft_gap:.2e}, lin {lin_gap:.2e}",
    )


def test_rotation_number_monotonicity_and_speed_floor():
    grid = [round(0.1 * k, 1) for k in range(10)]
    pts = monotonicity_scan(G7, BASIS7, grid)
    alphas = [sp.alpha for sp in pts]
    nonincreasing = all(a >= b for a, b in zip(alphas, alphas[1:]))
    N = G7.size
    floor_ok = all(
        math.log(sp.alpha) >= math.log1p(-sp.p) - math.log(G7.n) - N * math.log(2 * N)
        for sp in pts
    )
    _verdict(
        "rotation number: nonincreasing in p and above the universal floor",
        nonincreasing and floor_ok,
        f"alpha from {alphas[0]:.5f} to {alphas[-1]:.5f}",
    )


def test_mixture_dimension_collapse_and_growth():
    first = ConvolutionSet.parse("(1,0);(0,1)", 29)
    second = ConvolutionSet.parse("(1,0);(0,2)", 29)
    p = 0.5
    dims = (
        attractor_dimension(full_spectrum(G29, first, p)),
        attractor_dimension(full_spectrum(G29, second, p)),
    )
    mix = mixed_spectrum(MixtureSpec.two_set(G29, first, second, p, 0.5))
    collapse_ok = dims == (2, 2) and mixed_attractor_dimension(mix) == 1

    doubled = ConvolutionSet.parse("(2,0);(0,2)", 29)
    basis = ConvolutionSet.parse("(1,0);(0,1)", 29)
    res = find_transition_q(G29, doubled, basis, 0.9)
    growth_ok = abs(res.q_star - 0.0306) <= 1e-3 and len(res.W_at_transition) > len(res.W_low)
    _verdict(
        "mixture dimensions: collapse to 1 and growth at q* = 0.0306 +/- 1e-3",
        collapse_ok and growth_ok,
        f"pure {dims}, mixed {mixed_attractor_dimension(mix)}, q* {res.q_star:.6f}",
    )


def test_ratio_decay_monte_carlo():
    first = ConvolutionSet.parse("(1,0);(0,1)", 29)
    second = ConvolutionSet.parse("(1,0);(0,2)", 29)
    base = MixtureSpec.two_set(G29, first, second, 0.5, 0.5)
    mix = mixed_spectrum(base)
    bound = math.log(mix.ratio_constant) + 0.1
    hits = 0
    for seed in range(50):
        spec = MixtureSpec.two_set(G29, first, second, 0.5, 0.5, seed=seed)
        seq = draw_index_sequence(spec, 2000)
        rd = ratio_decay(spec, 2000, seq=seq, mix=mix)
        if rd.slope <= bound:
            hits += 1
    _verdict(
        "ratio decay: slope <= log c* + 0.1 in >= 95% of 50 seeds",
        hits >= 48,
        f"{hits}/50 seeds, log c* = {math.log(mix.ratio_constant):.6f}",
    )


def test_discrepancy_dominance_decay_plateau():
    t0 = time.perf_counter()
    rep3 = full_spectrum(G29, ConvolutionSet.parse("(1,0);(0,1);(2,3)", 29), 0.25)
    alpha3 = rotation_vector(rep3)
    alpha2 = rotation_vector(full_spectrum(G7, BASIS7, 0.3))

    cases = [
        (np.array([math.sqrt(2) - 1.0]), 500),
        (np.array([(math.sqrt(5) - 1) / 2]), 300),
        (np.array([1.0 / 3.0]), 300),
        (np.atleast_1d(alpha2), 400),
        (alpha3, 100),
        (alpha3, 1000),
    ]
    dominance = True
    for alpha, t in cases:
        emp = empirical_discrepancy(phase_sequence(alpha, t)).value
        if etk_bound(alpha, t, 16).value < emp:
            dominance = False

    ds = {t: empirical_discrepancy(phase_sequence(alpha3, t)).value for t in (100, 1000, 10000)}
    decay = ds[100] > ds[1000] > ds[10000] and ds[10000] < ds[100] / 3.0

    rational = np.array([1.0 / 3.0])
    dr = [empirical_discrepancy(phase_sequence(rational, t)).value for t in (300, 3000)]
    plateau = min(dr) > 0.1 and abs(dr[1] - dr[0]) < 1e-3

    elapsed = time.perf_counter() - t0
    _verdict(
        "discrepancy: ETK dominates, decays on the two-angle example, plateaus when rational",
        dominance and decay and plateau and elapsed < 120.0,
        f"D = {ds[100]:.4f}/{ds[1000]:.4f}/{ds[10000]:.5f} in {elapsed:.1f}s",
    )
