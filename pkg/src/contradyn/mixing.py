"""Randomly mixed networks: the neighbor set is redrawn every step.

With sets C_1..C_s drawn i.i.d. with weights w_j, the product of the
per-step operators is again diagonal in the character basis, so mode u
accumulates Lambda_u(t) = prod_k lambda_{j_k, u}.  By the law of large
numbers |Lambda_u(t)|^{1/t} concentrates on the weighted geometric mean

    lambda^x_u = prod_j |lambda_{j,u}|^{w_j},

which replaces the deterministic modulus everywhere: the mixed
subdominant set W is the argmax of lambda^x over u != 0, runs are scaled
by 1/lambda^x, and the mass outside W shrinks relative to W like c^t
with c = sqrt(lambda'/lambda) (worst ratio between a non-W mode and W).

Products are tracked as (log-magnitude, accumulated angle) pairs; the
magnitudes underflow floats after a few thousand steps otherwise.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .dynamics import StepOperator, Trajectory, snapshot_times
from .errors import ConfigError, DegenerateMixtureError, InvalidModelError
from .lattice import ConvolutionSet, GroupParams, Point, spans
from .spectrum import EPS_EQ, SpectrumReport, eigenvalue_grid, full_spectrum, theta_values


@dataclass(frozen=True)
class MixtureSpec:
    """Ensemble of neighbor sets with draw weights, self-weight p, seed."""

    g: GroupParams
    sets: tuple[ConvolutionSet, ...]
    weights: tuple[float, ...]
    p: float
    seed: int = 0

    def __post_init__(self) -> None:
        if len(self.sets) == 0:
            raise ConfigError("mixture needs at least one neighbor set")
        if len(self.weights) != len(self.sets):
            raise ConfigError("one weight per neighbor set required")
        if any(w < 0 for w in self.weights):
            raise ConfigError("weights must be nonnegative")
        if abs(sum(self.weights) - 1.0) > 1e-9:
            raise ConfigError(f"weights must sum to 1, got {sum(self.weights)}")
        if not 0.0 <= self.p < 1.0:
            raise ConfigError(f"need 0 <= p < 1, got p={self.p}")
        for conv in self.sets:
            if conv.n != self.g.n or conv.m != self.g.m:
                raise ConfigError("every neighbor set must live on the same torus")
            if not spans(conv, self.g):
                raise InvalidModelError(f"neighbor set {conv.to_string()} does not generate the torus")

    @classmethod
    def two_set(
        cls,
        g: GroupParams,
        first: ConvolutionSet,
        second: ConvolutionSet,
        p: float,
        q: float,
        seed: int = 0,
    ) -> "MixtureSpec":
        """Two-set mixture where q is the draw probability of `second`."""
        if not 0.0 <= q <= 1.0:
            raise ConfigError(f"need 0 <= q <= 1, got q={q}")
        return cls(g, (first, second), (1.0 - q, q), p, seed)


@dataclass
class MixedSpectrum:
    """Geometric-mean spectrum of a mixture and its subdominant structure."""

    spec: MixtureSpec
    log_moduli: np.ndarray          # (s, N) log |lambda_{j,u}|, -inf at zeros
    thetas: np.ndarray              # (s, N) rotation numbers theta_{j,u}
    lambda_geo: np.ndarray          # (N,) weighted geometric means
    lam: float
    W: tuple[Point, ...]
    W_idx: np.ndarray
    lam_prime: float
    W_prime_idx: np.ndarray
    pure_reports: tuple[SpectrumReport, ...]

    @property
    def ratio_constant(self) -> float:
        """c = sqrt(lambda'/lambda), the whp decay rate of non-W mass."""
        return float(np.sqrt(self.lam_prime / self.lam))


def mixed_spectrum(spec: MixtureSpec) -> MixedSpectrum:
    """Weighted geometric-mean spectrum; W is its argmax below unit scale.

    Raises DegenerateMixtureError when the geometric means vanish
    everywhere outside the consensus mode.
    """
    g = spec.g
    s = len(spec.sets)
    N = g.size
    grids = np.empty((s, N), dtype=np.complex128)
    for j, conv in enumerate(spec.sets):
        grids[j] = eigenvalue_grid(g, conv, spec.p).ravel()
    mods = np.abs(grids)
    with np.errstate(divide="ignore"):
        logm = np.log(mods)
    th = np.stack([theta_values(grids[j], g.n) for j in range(s)])

    w = np.asarray(spec.weights)[:, None]
    with np.errstate(invalid="ignore"):
        logg = np.sum(np.where(w > 0, logm * w, 0.0), axis=0)
    geo = np.exp(logg)
    geo[np.isnan(geo)] = 0.0

    unit_mask = geo >= 1.0 - EPS_EQ
    cand = geo.copy()
    cand[unit_mask] = -1.0
    lam = float(cand.max())
    # analytic zeros come out around 1e-16 through exp(i pi) roundoff
    if lam <= 1e-14:
        raise DegenerateMixtureError("geometric-mean spectrum vanishes outside consensus")
    W_mask = (~unit_mask) & (geo >= lam * (1.0 - EPS_EQ))
    W_idx = np.nonzero(W_mask)[0]
    prime_mask = (~unit_mask) & (~W_mask)
    prime_idx = np.nonzero(prime_mask)[0]
    lam_prime = float(geo[prime_idx].max()) if prime_idx.size else 0.0

    return MixedSpectrum(
        spec=spec,
        log_moduli=logm,
        thetas=th,
        lambda_geo=geo,
        lam=lam,
        W=tuple(sorted(g.point_at(int(i)) for i in W_idx)),
        W_idx=W_idx,
        lam_prime=lam_prime,
        W_prime_idx=prime_idx,
        pure_reports=tuple(full_spectrum(g, conv, spec.p) for conv in spec.sets),
    )


def draw_index_sequence(spec: MixtureSpec, steps: int) -> np.ndarray:
    """Seeded i.i.d. draws of set indices, one per step.

    Uses numpy Generator(PCG64(seed)).choice with the mixture weights;
    part of the reproducibility contract.
    """
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    return rng.choice(len(spec.sets), size=steps, p=np.asarray(spec.weights))


def sequence_digest(seq: np.ndarray) -> str:
    """Stable digest of a drawn index sequence for manifests."""
    return hashlib.sha256(np.ascontiguousarray(seq, dtype=np.int64).tobytes()).hexdigest()


def cumulative_log_angle(
    mix: MixedSpectrum, seq: np.ndarray, u_idx: int
) -> tuple[np.ndarray, np.ndarray]:
    """Running (log |Lambda_u|, accumulated theta_u) over a sequence.

    Entry k covers the product of the first k draws; index 0 is the empty
    product.  Angles are in torus units (theta, not radians): the phase
    of the product at step k is omega^{angle[k]}.
    """
    lm = mix.log_moduli[seq, u_idx]
    th = mix.thetas[seq, u_idx]
    return (
        np.concatenate([[0.0], np.cumsum(lm)]),
        np.concatenate([[0.0], np.cumsum(th)]),
    )


def cumulative_eigen(mix: MixedSpectrum, seq: np.ndarray, u: Sequence[int]) -> complex:
    """Final product Lambda_u over the sequence, reconstructed from the
    log-magnitude/angle tracking (0 when any factor vanished)."""
    idx = mix.spec.g.index_of(u)
    logs, angs = cumulative_log_angle(mix, seq, idx)
    if not np.isfinite(logs[-1]):
        return 0.0 + 0.0j
    return complex(np.exp(logs[-1]) * np.exp(2j * np.pi * angs[-1] / mix.spec.g.n))


def mixed_attractor_dimension(mix: MixedSpectrum) -> int:
    """Number of conjugate W pairs that actually rotate.

    A pair contributes a phase parameter when any positively weighted set
    gives it a nonreal eigenvalue; pairs real under every drawn set only
    shift agents.
    """
    g = mix.spec.g
    half = g.n * 0.5
    w = np.asarray(mix.spec.weights)
    seen: set[int] = set()
    count = 0
    for i in mix.W_idx:
        i = int(i)
        if i in seen:
            continue
        u = g.point_at(i)
        j = g.index_of(tuple(-c for c in u))
        seen.update((i, j))
        if i == j:
            continue
        th = mix.thetas[:, i]
        if np.any((w > 0) & (th != 0.0) & (th != half)):
            count += 1
    return count


@dataclass
class MixedTrajectory:
    """Scaled mixed run plus the realized draw sequence."""

    mix: MixedSpectrum
    seq: np.ndarray
    times: list[int]
    states: list[np.ndarray] = field(repr=False)

    @property
    def g(self) -> GroupParams:
        return self.mix.spec.g

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def state_at(self, t: int) -> np.ndarray:
        return self.states[self.times.index(t)]


def mixed_run(
    spec: MixtureSpec,
    x0: np.ndarray,
    steps: int,
    seq: Optional[np.ndarray] = None,
    stride: Optional[int] = None,
    mix: Optional[MixedSpectrum] = None,
) -> MixedTrajectory:
    """Iterate with a redrawn neighbor set each step, scaling by 1/lambda^x.

    The sequence is drawn from the spec's seed unless supplied.
    """
    g = spec.g
    if x0.ndim != 2 or x0.shape[0] != g.size:
        raise ConfigError("x0 must have shape (N, d)")
    if mix is None:
        mix = mixed_spectrum(spec)
    if seq is None:
        seq = draw_index_sequence(spec, steps)
    if len(seq) < steps:
        raise ConfigError("index sequence shorter than the requested run")
    ops = [StepOperator(g, conv, spec.p) for conv in spec.sets]
    times = snapshot_times(steps, stride)
    keep = set(times)
    x = x0.astype(float).copy()
    states = [x.copy()] if 0 in keep else []
    for t in range(1, steps + 1):
        x = ops[int(seq[t - 1])](x)
        x /= mix.lam
        if t in keep:
            states.append(x.copy())
    return MixedTrajectory(mix=mix, seq=np.asarray(seq[:steps]), times=times, states=states)


def mixed_limit_state(
    mix: MixedSpectrum, x0: np.ndarray, seq: np.ndarray, t: int
) -> np.ndarray:
    """Centered limiting state of the scaled mixed run at time t.

    Mode h in W contributes with the realized magnitude
    exp(sum log|lambda| - t log lambda) and phase advanced by the
    accumulated angles:

        (1/N) sum_{h in W} r_h(t) [ (a_h x) cos X_h + (b_h x) sin X_h ],
        X_h = (2 pi / n)(<h, v> + sum_k theta_{k,h}).
    """
    from .orbit import fourier_transform

    g = mix.spec.g
    n = g.n
    N = g.size
    z = fourier_transform(x0, g)
    verts = g.vertices()
    acc = np.zeros((N, x0.shape[1]), dtype=np.complex128)
    for i in mix.W_idx:
        logs, angs = cumulative_log_angle(mix, seq[:t], int(i))
        r = np.exp(logs[-1] - t * np.log(mix.lam))
        h = np.asarray(g.point_at(int(i)), dtype=np.int64)
        phase = np.exp(2j * np.pi * (((verts @ h) % n) + angs[-1]) / n)
        acc += r * phase[:, None] * z[int(i)][None, :]
    out = acc / N
    if np.max(np.abs(out.imag)) > 1e-8:
        raise AssertionError("mixed limit state accumulated imaginary residue")
    return out.real


def mixed_limit_orbit(
    mix: MixedSpectrum, x0: np.ndarray, seq: np.ndarray, v: Sequence[int], t: int
) -> np.ndarray:
    """Limiting value for one agent at one time."""
    return mixed_limit_state(mix, x0, seq, t)[mix.spec.g.index_of(v)]


@dataclass
class RatioDecay:
    """Realized log-ratio of non-W to W mode magnitudes over time."""

    times: np.ndarray
    log_ratio: np.ndarray
    slope: float
    log_c: float


def ratio_decay(
    spec: MixtureSpec,
    steps: int,
    seq: Optional[np.ndarray] = None,
    mix: Optional[MixedSpectrum] = None,
    fit_fraction: float = 0.1,
) -> RatioDecay:
    """Track max_{u not in W} log|Lambda_u| - min_{w in W} log|Lambda_w|.

    The slope is fit on the tail [fit_fraction * steps, steps]; the lemma
    predicts it stays at or below log c = log sqrt(lambda'/lambda) with
    high probability.
    """
    if mix is None:
        mix = mixed_spectrum(spec)
    if seq is None:
        seq = draw_index_sequence(spec, steps)
    lm = mix.log_moduli
    prime = mix.W_prime_idx
    if prime.size == 0:
        raise InvalidModelError("every non-consensus mode is in W; no ratio to track")
    cum_prime = np.cumsum(lm[seq[:, None], prime[None, :]], axis=0)
    cum_W = np.cumsum(lm[seq[:, None], mix.W_idx[None, :]], axis=0)
    log_ratio = cum_prime.max(axis=1) - cum_W.min(axis=1)
    times = np.arange(1, steps + 1)
    t0 = max(1, int(fit_fraction * steps))
    mask = times >= t0
    slope = float(np.polyfit(times[mask], log_ratio[mask], 1)[0])
    return RatioDecay(times=times, log_ratio=log_ratio, slope=slope, log_c=float(np.log(mix.ratio_constant)))


@dataclass
class TransitionResult:
    """Smallest second-set weight where the mixed W changes structure."""

    q_star: float
    bracket: tuple[float, float]
    W_low: tuple[Point, ...]
    W_at_transition: tuple[Point, ...]


def find_transition_q(
    g: GroupParams,
    first: ConvolutionSet,
    second: ConvolutionSet,
    p: float,
    lo: float = 0.0,
    hi: float = 1.0,
    tol: float = 1e-6,
) -> TransitionResult:
    """Bisect for the smallest q in [lo, hi] where W(q) leaves W(lo).

    W_at_transition is the union of W over the final bracket: exactly at
    the crossing the competing families tie, but the tie is invisible to
    the modulus tolerance at any representable q, so the union is what
    the enlarged set at q* means.
    """
    if not 0.0 <= lo < hi <= 1.0:
        raise ConfigError("need 0 <= lo < hi <= 1")

    def W_at(q: float) -> frozenset[int]:
        spec = MixtureSpec.two_set(g, first, second, p, q)
        return frozenset(int(i) for i in mixed_spectrum(spec).W_idx)

    W_lo = W_at(lo)
    if W_at(hi) == W_lo:
        raise InvalidModelError("W does not change over the bracket; no transition to find")
    a, b = lo, hi
    while b - a > tol:
        mid = 0.5 * (a + b)
        if W_at(mid) == W_lo:
            a = mid
        else:
            b = mid
    union = W_at(a) | W_at(b)
    to_pts = lambda s: tuple(sorted(g.point_at(i) for i in s))
    return TransitionResult(
        q_star=0.5 * (a + b),
        bracket=(a, b),
        W_low=to_pts(W_lo),
        W_at_transition=to_pts(union),
    )


def mixture_manifest(spec: MixtureSpec, steps: int, seq: Optional[np.ndarray] = None) -> dict:
    """Manifest fields identifying a mixed run for exact reproduction."""
    if seq is None:
        seq = draw_index_sequence(spec, steps)
    return {
        "n": spec.g.n,
        "m": spec.g.m,
        "sets": [conv.to_string() for conv in spec.sets],
        "weights": list(spec.weights),
        "p": spec.p,
        "seed": spec.seed,
        "steps": steps,
        "sequence_sha256": sequence_digest(np.asarray(seq)),
    }


def export_mixture_manifest(spec: MixtureSpec, steps: int, path, seq: Optional[np.ndarray] = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(mixture_manifest(spec, steps, seq), fh, indent=2, sort_keys=True)
        fh.write("\n")


__all__ = [
    "MixtureSpec",
    "MixedSpectrum",
    "mixed_spectrum",
    "mixed_attractor_dimension",
    "draw_index_sequence",
    "sequence_digest",
    "cumulative_log_angle",
    "cumulative_eigen",
    "MixedTrajectory",
    "mixed_run",
    "mixed_limit_state",
    "mixed_limit_orbit",
    "RatioDecay",
    "ratio_decay",
    "TransitionResult",
    "find_transition_q",
    "mixture_manifest",
    "export_mixture_manifest",
]
