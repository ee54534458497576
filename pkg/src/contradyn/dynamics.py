"""Simulation of the averaging dynamics.

States are (N, d) float arrays in lexicographic agent order; reshaping to
(n, ..., n, d) in C order recovers the torus layout, which is what the
FFT step relies on.  One step is

    x(t+1) = p x(t) + (1 - p)/|C| sum_c shift_c x(t),

a convolution, applied either directly (rolls, reference path) or in the
Fourier domain by multiplying with the eigenvalue grid (fast path).  The
two paths are pinned against each other by the tests at 1e-10.

Scaling modes for long runs:

* ``none``            raw dynamics, contracts to the mean;
* ``inverse-lambda``  divide by the subdominant modulus each step, which
                      keeps the deviation from the mean at unit scale and
                      reveals the limiting orbit;
* ``diameter``        divide by the max pairwise distance after each
                      step, so the diameter stays exactly 1.

Initial states are N(0, 1) iid per agent and coordinate, drawn from
``numpy.random.Generator(PCG64(seed))`` via ``standard_normal``, then
column-centered.  That contract (generator, draw order, centering) is
what makes seeds reproducible across machines, so it must not change.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConfigError, InvalidModelError
from .lattice import ConvolutionSet, GroupParams
from .spectrum import eigenvalue_grid, full_spectrum

SCALINGS = ("none", "inverse-lambda", "diameter")

# Column mass center after init must vanish to this absolute tolerance.
CENTER_TOL = 1e-10


def init_state(g: GroupParams, d: int, seed: int) -> np.ndarray:
    """Centered iid normal initial opinions, shape (N, d)."""
    if d < 1:
        raise ConfigError(f"need d >= 1, got d={d}")
    rng = np.random.Generator(np.random.PCG64(seed))
    x = rng.standard_normal((g.size, d))
    x -= x.mean(axis=0, keepdims=True)
    return x


def mass_center(state: np.ndarray) -> np.ndarray:
    return np.asarray(state).mean(axis=0)


def _grid(state: np.ndarray, g: GroupParams) -> np.ndarray:
    return state.reshape(g.shape + (state.shape[-1],))


def step_direct(state: np.ndarray, g: GroupParams, conv: ConvolutionSet, p: float) -> np.ndarray:
    """One update via explicit rolls; the slow reference path.

    np.roll(a, s)[i] = a[i - s], and the update reads x(v + c), so the
    shift is -c on each torus axis.  Offsets are accumulated in their
    sorted order to keep floating-point results deterministic.
    """
    xg = _grid(state, g)
    acc = np.zeros_like(xg)
    axes = tuple(range(g.m))
    for c in conv.offsets:
        acc += np.roll(xg, shift=tuple(-int(x) for x in c), axis=axes)
    out = p * xg + (1.0 - p) / len(conv) * acc
    return out.reshape(state.shape)


class StepOperator:
    """Precomputed Fourier multiplier for repeated stepping."""

    def __init__(self, g: GroupParams, conv: ConvolutionSet, p: float):
        if not 0.0 <= p < 1.0:
            raise ConfigError(f"need 0 <= p < 1, got p={p}")
        self.g = g
        self.conv = conv
        self.p = p
        self.multiplier = eigenvalue_grid(g, conv, p)[..., None]

    def __call__(self, state: np.ndarray) -> np.ndarray:
        g = self.g
        xg = _grid(state, g)
        axes = tuple(range(g.m))
        xh = np.fft.fftn(xg, axes=axes)
        yh = xh * self.multiplier
        y = np.fft.ifftn(yh, axes=axes).real
        return y.reshape(state.shape)


def step(state: np.ndarray, g: GroupParams, conv: ConvolutionSet, p: float) -> np.ndarray:
    """One update via FFT."""
    return StepOperator(g, conv, p)(state)


def hk_step(points: np.ndarray, radii) -> np.ndarray:
    """One bounded-confidence averaging step on free-floating agents.

    Each point moves to the mass center of every point (itself included)
    within its own Euclidean radius.  This is the nonlinear neighborhood
    rule the fixed-lattice model replaces with a constant offset set; it
    is kept as a compact reference, not used by the lattice dynamics.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    k = pts.shape[0]
    r = np.broadcast_to(np.asarray(radii, dtype=float), (k,))
    if np.any(r <= 0.0):
        raise ConfigError("radii must be positive")
    diff = pts[:, None, :] - pts[None, :, :]
    within = np.einsum("ijk,ijk->ij", diff, diff) <= r[:, None] ** 2
    counts = within.sum(axis=1).astype(float)
    return (within @ pts) / counts[:, None]


def diameter(state: np.ndarray) -> float:
    """Max pairwise Euclidean distance between agents, O(N^2) in blocks."""
    x = np.asarray(state)
    N = x.shape[0]
    best = 0.0
    block = max(1, int(2e6) // max(N, 1))
    sq = np.einsum("ij,ij->i", x, x)
    for i0 in range(0, N, block):
        xs = x[i0:i0 + block]
        d2 = sq[i0:i0 + block, None] + sq[None, :] - 2.0 * xs @ x.T
        m = float(d2.max())
        if m > best:
            best = m
    return float(np.sqrt(max(best, 0.0)))


def snapshot_times(steps: int, stride: Optional[int] = None) -> list[int]:
    """Times to record: every step through t=1000, then every 10th, plus
    the final time; or a fixed stride when given."""
    if steps < 0:
        raise ConfigError("steps must be >= 0")
    if stride is not None:
        if stride < 1:
            raise ConfigError("stride must be >= 1")
        times = list(range(0, steps + 1, stride))
    else:
        times = list(range(0, min(steps, 1000) + 1))
        times += list(range(1010, steps + 1, 10))
    if times[-1] != steps:
        times.append(steps)
    return times


@dataclass
class Trajectory:
    """Recorded run: snapshot times, snapshot states, and how it was scaled."""

    g: GroupParams
    conv: ConvolutionSet
    p: float
    scaling: str
    lam: Optional[float]
    times: list[int]
    states: list[np.ndarray] = field(repr=False)

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def state_at(self, t: int) -> np.ndarray:
        return self.states[self.times.index(t)]


def run(
    g: GroupParams,
    conv: ConvolutionSet,
    p: float,
    x0: np.ndarray,
    steps: int,
    scaling: str = "none",
    lam: Optional[float] = None,
    stride: Optional[int] = None,
    require_spanning: bool = True,
) -> Trajectory:
    """Iterate the dynamics with the chosen scaling and record snapshots.

    inverse-lambda needs the subdominant modulus; it is computed from the
    spectrum when not supplied.  Non-spanning offset sets are rejected
    because the dynamics then never contracts to consensus.
    """
    if scaling not in SCALINGS:
        raise ConfigError(f"unknown scaling {scaling!r}, expected one of {SCALINGS}")
    if x0.shape != (g.size, x0.shape[-1]) or x0.ndim != 2:
        raise ConfigError("x0 must have shape (N, d)")
    if require_spanning:
        from .lattice import spans

        if not spans(conv, g):
            raise InvalidModelError("neighbor offsets do not generate the torus")
    if scaling == "inverse-lambda" and lam is None:
        lam = full_spectrum(g, conv, p).lam

    op = StepOperator(g, conv, p)
    times = snapshot_times(steps, stride)
    keep = set(times)
    x = x0.astype(float).copy()
    states = [x.copy()] if 0 in keep else []
    for t in range(1, steps + 1):
        x = op(x)
        if scaling == "inverse-lambda":
            x /= lam
        elif scaling == "diameter":
            dia = diameter(x)
            if dia <= 0.0:
                raise InvalidModelError("diameter collapsed to zero; cannot rescale")
            x /= dia
        if t in keep:
            states.append(x.copy())
    return Trajectory(g=g, conv=conv, p=p, scaling=scaling, lam=lam, times=times, states=states)


# ---------------------------------------------------------------------------
# export

EXPORT_ROW_CAP = 1_000_000


def export_trajectory_csv(traj: Trajectory, path) -> None:
    """Rows (t, agent_index, y_1..y_d) for every recorded snapshot.

    If the full table would exceed EXPORT_ROW_CAP rows, snapshots are
    thinned evenly (always keeping the first and last) so it fits.
    """
    d = traj.states[0].shape[1]
    n_snap = len(traj.times)
    N = traj.g.size
    max_snaps = max(1, EXPORT_ROW_CAP // N)
    if n_snap > max_snaps:
        sel = np.unique(np.linspace(0, n_snap - 1, max_snaps).round().astype(int))
    else:
        sel = np.arange(n_snap)
    cols = ["t", "agent_index"] + [f"y_{k + 1}" for k in range(d)]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(cols) + "\n")
        for si in sel:
            t = traj.times[si]
            st = traj.states[si]
            for i in range(N):
                vals = ",".join(f"{v:.17g}" for v in st[i])
                fh.write(f"{t},{i},{vals}\n")


__all__ = [
    "SCALINGS",
    "CENTER_TOL",
    "EXPORT_ROW_CAP",
    "init_state",
    "mass_center",
    "step",
    "step_direct",
    "StepOperator",
    "hk_step",
    "diameter",
    "snapshot_times",
    "Trajectory",
    "run",
    "export_trajectory_csv",
]
