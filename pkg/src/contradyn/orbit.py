"""Closed-form limiting orbit and attractor of the scaled dynamics.

After dividing out the mean and the subdominant modulus, only the modes
in W survive: with z = Fourier transform of the initial state and
phi_hv = 2 pi <h, v> / n, agent v approaches

    y*_v(t) = c_v + (-1)^t d_v
            + sum_{theta} [ A_{v,theta} cos(2 pi theta t / n)
                          + B_{v,theta} sin(2 pi theta t / n) ],

where c collects the real-positive W modes, d the real-negative ones
(theta = n/2), and each positive rotation number theta pairs the
conjugate modes into an ellipse.  The amplitudes come from grouping the
eigenprojection (1/N) sum_{h in W} omega^{theta_h t} psi_h z_h into real
pairs; both forms are implemented and pinned against each other.

The attractor is the Minkowski sum of one origin-centered ellipse

    (2/N) [ (Re z_h) cos X + (-Im z_h) sin X ],  X in [0, 2 pi),

per conjugate pair with nonreal eigenvalue.  Real pairs only shift
individual agents (constant or alternating offsets), so the shared
sample excludes them; orbits of agents then live in translates of the
sampled set.  Everything here is centered: the conserved mass center is
removed before comparison, matching the scaled runs which would
otherwise blow the mean up by lambda^{-t}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .dynamics import Trajectory, mass_center
from .errors import ConfigError, InvalidModelError
from .lattice import GroupParams, Point
from .spectrum import SpectrumReport

# Imaginary residue allowed when a mathematically real quantity is
# assembled from conjugate pairs.
REALNESS_TOL = 1e-10

# Default per-dimension phase resolution and total point cap for samples.
PHASE_RESOLUTION = 256
SAMPLE_POINT_CAP = 1_000_000


def fourier_transform(state: np.ndarray, g: GroupParams) -> np.ndarray:
    """z[h] = sum_v omega^{-<h,v>} x[v], shape (N, d) complex."""
    d = state.shape[-1]
    grid = state.reshape(g.shape + (d,))
    return np.fft.fftn(grid, axes=tuple(range(g.m))).reshape(g.size, d)


def inverse_fourier_transform(z: np.ndarray, g: GroupParams) -> np.ndarray:
    """x[v] = (1/N) sum_h omega^{<h,v>} z[h]; inverse of fourier_transform."""
    d = z.shape[-1]
    grid = z.reshape(g.shape + (d,))
    return np.fft.ifftn(grid, axes=tuple(range(g.m))).reshape(g.size, d)


def _character_column(g: GroupParams, h_idx: int) -> np.ndarray:
    """omega^{<h, v>} for all v, shape (N,) complex."""
    h = np.asarray(g.point_at(h_idx), dtype=np.int64)
    k = (g.vertices() @ h) % g.n
    return np.exp(2j * np.pi * k / g.n)


@dataclass(frozen=True)
class EllipseTerm:
    """One conjugate W pair with nonreal eigenvalue.

    a and b are already scaled by 2/N, so the pair's contribution at
    phase X is a cos X + b sin X.
    """

    h: Point
    theta: float
    a: np.ndarray
    b: np.ndarray


def attractor_dimension(report: SpectrumReport) -> int:
    """Number of conjugate W pairs carrying a nonreal eigenvalue."""
    n2 = report.g.n * 0.5
    count = 0
    for i, _ in report.W_groups():
        if report.theta[i] != 0.0 and report.theta[i] != n2:
            count += 1
    return count


@dataclass
class OrbitModel:
    """Limiting orbit of one initial condition under one spectrum."""

    report: SpectrumReport
    d: int
    mean: np.ndarray
    c: np.ndarray
    flip: np.ndarray
    thetas: tuple[float, ...]
    cos_amp: list[np.ndarray] = field(repr=False)
    sin_amp: list[np.ndarray] = field(repr=False)
    ellipses: list[EllipseTerm] = field(repr=False)
    z: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, report: SpectrumReport, x0: np.ndarray) -> "OrbitModel":
        g = report.g
        if x0.ndim != 2 or x0.shape[0] != g.size:
            raise ConfigError("x0 must have shape (N, d)")
        if len(report.unit_idx) != 1:
            raise InvalidModelError(
                "limit orbit needs the consensus mode to be the only unit-modulus "
                f"eigenvalue; found {len(report.unit_idx)}"
            )
        N, d = x0.shape
        n = g.n
        z = fourier_transform(x0, g)
        theta = report.theta

        c_acc = np.zeros((N, d), dtype=np.complex128)
        f_acc = np.zeros((N, d), dtype=np.complex128)
        per_theta_cos: dict[float, np.ndarray] = {}
        per_theta_sin: dict[float, np.ndarray] = {}
        ellipses: list[EllipseTerm] = []

        half = n * 0.5
        for i, j in report.W_groups():
            th = float(theta[i])
            if th == 0.0 or th == half:
                for k in (i, j) if i != j else (i,):
                    col = _character_column(g, k)
                    target = c_acc if th == 0.0 else f_acc
                    target += col[:, None] * z[k][None, :]
            else:
                rep_idx = i if th > 0 else j
                th_pos = abs(th)
                a = (2.0 / N) * z[rep_idx].real
                b = -(2.0 / N) * z[rep_idx].imag
                ellipses.append(EllipseTerm(g.point_at(rep_idx), th_pos, a, b))
                col = _character_column(g, rep_idx)
                phi_cos, phi_sin = col.real, col.imag
                A = (2.0 / N) * (np.outer(phi_cos, z[rep_idx].real) + np.outer(phi_sin, -z[rep_idx].imag))
                B = (2.0 / N) * (np.outer(phi_cos, -z[rep_idx].imag) - np.outer(phi_sin, z[rep_idx].real))
                key = None
                for t0 in per_theta_cos:
                    if abs(t0 - th_pos) <= 1e-9 * n:
                        key = t0
                        break
                if key is None:
                    per_theta_cos[th_pos] = A
                    per_theta_sin[th_pos] = B
                else:
                    per_theta_cos[key] += A
                    per_theta_sin[key] += B

        c_x = c_acc / N
        f_x = f_acc / N
        for name, arr in (("c", c_x), ("d", f_x)):
            if arr.size and np.max(np.abs(arr.imag)) > REALNESS_TOL:
                raise AssertionError(f"{name} term has imaginary residue above {REALNESS_TOL}")

        thetas = tuple(sorted(per_theta_cos))
        return cls(
            report=report,
            d=d,
            mean=mass_center(x0),
            c=c_x.real.copy(),
            flip=f_x.real.copy(),
            thetas=thetas,
            cos_amp=[per_theta_cos[t] for t in thetas],
            sin_amp=[per_theta_sin[t] for t in thetas],
            ellipses=ellipses,
            z=z,
        )

    def predict(self, t: int) -> np.ndarray:
        """Centered limiting state y*(t), shape (N, d)."""
        n = self.report.g.n
        out = self.c + ((-1.0) ** (t % 2)) * self.flip
        for th, A, B in zip(self.thetas, self.cos_amp, self.sin_amp):
            w = 2.0 * np.pi * th * t / n
            out = out + A * np.cos(w) + B * np.sin(w)
        return out

    def predict_agent(self, v: Sequence[int], t: int) -> np.ndarray:
        return self.predict(t)[self.report.g.index_of(v)]

    def eigenprojection_state(self, t: int) -> np.ndarray:
        """Same orbit from the raw eigenmode sum; cross-check path."""
        g = self.report.g
        n = g.n
        acc = np.zeros((g.size, self.d), dtype=np.complex128)
        for i in self.report.W_idx:
            th = float(self.report.theta[int(i)])
            rot = np.exp(2j * np.pi * th * t / n)
            col = _character_column(g, int(i))
            acc += rot * col[:, None] * self.z[int(i)][None, :]
        out = acc / g.size
        if np.max(np.abs(out.imag)) > REALNESS_TOL:
            raise AssertionError("eigenprojection accumulated imaginary residue")
        return out.real


# ---------------------------------------------------------------------------
# attractor sampling


@dataclass
class AttractorSample:
    """Uniform phase-grid sample of the Minkowski sum of ellipses."""

    phases: np.ndarray
    points: np.ndarray
    terms: list[EllipseTerm]
    resolution: int

    @property
    def dimension(self) -> int:
        return len(self.terms)

    def max_spacing_bound(self) -> float:
        """Upper bound on the distance from any attractor point to the
        nearest sample point, from the phase-grid step size."""
        if not self.terms:
            return 0.0
        step = np.pi / self.resolution
        return step * sum(
            float(np.linalg.norm(e.a) + np.linalg.norm(e.b)) for e in self.terms
        )


def sample_attractor(
    model: OrbitModel,
    resolution: int = PHASE_RESOLUTION,
    point_cap: int = SAMPLE_POINT_CAP,
) -> AttractorSample:
    """Sample the attractor on a uniform phase grid.

    The grid uses `resolution` phases per ellipse, shrunk if needed so
    the total point count stays at or below point_cap.
    """
    terms = model.ellipses
    k = len(terms)
    if k == 0:
        return AttractorSample(
            phases=np.zeros((1, 0)), points=np.zeros((1, model.d)), terms=[], resolution=0
        )
    res = min(resolution, max(2, int(point_cap ** (1.0 / k))))
    axes = [np.linspace(0.0, 2.0 * np.pi, res, endpoint=False)] * k
    mesh = np.meshgrid(*axes, indexing="ij")
    phases = np.stack([a.ravel() for a in mesh], axis=1)
    pts = np.zeros((phases.shape[0], model.d))
    for col, e in enumerate(terms):
        x = phases[:, col]
        pts += np.outer(np.cos(x), e.a) + np.outer(np.sin(x), e.b)
    return AttractorSample(phases=phases, points=pts, terms=terms, resolution=res)


# ---------------------------------------------------------------------------
# approximation error of the limiting orbit


def error_series(traj: Trajectory, model: OrbitModel) -> tuple[np.ndarray, np.ndarray]:
    """Relative error ||y* - y|| / ||y*|| per recorded snapshot.

    The trajectory must be inverse-lambda scaled; each snapshot is
    centered before comparison, removing the mean mode which the scaling
    inflates.  The limiting orbit supplies the denominator: it has
    constant scale, so the log error decays at exactly the gap rate mu
    once the fast modes are gone.  Normalizing by the simulated state
    instead would mix the decaying residual into the denominator and
    flatten the early slope by Y^2/(Y^2 + R^2).
    """
    if traj.scaling != "inverse-lambda":
        raise ConfigError("error_series needs an inverse-lambda scaled trajectory")
    times = np.asarray(traj.times)
    errs = np.empty(len(times))
    for k, (t, state) in enumerate(zip(traj.times, traj.states)):
        y = state - mass_center(state)
        ystar = model.predict(t)
        denom = np.linalg.norm(ystar)
        errs[k] = np.linalg.norm(ystar - y) / denom if denom > 0 else np.inf
    return times, errs


def fit_error_slope(
    times: np.ndarray, errs: np.ndarray, t_min: int, t_max: int
) -> float:
    """Least-squares slope of log(err) vs t on the window [t_min, t_max]."""
    times = np.asarray(times)
    errs = np.asarray(errs)
    mask = (times >= t_min) & (times <= t_max) & (errs > 0) & np.isfinite(errs)
    if mask.sum() < 2:
        raise ConfigError("not enough points in the regression window")
    return float(np.polyfit(times[mask], np.log(errs[mask]), 1)[0])


# ---------------------------------------------------------------------------
# exports


def export_attractor_csv(sample: AttractorSample, path) -> None:
    """Rows (phase_1..phase_k, y_1..y_d) over the whole phase grid."""
    k = sample.phases.shape[1]
    d = sample.points.shape[1]
    cols = [f"phase_{i + 1}" for i in range(k)] + [f"y_{i + 1}" for i in range(d)]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(cols) + "\n")
        for ph, pt in zip(sample.phases, sample.points):
            row = [f"{v:.17g}" for v in ph] + [f"{v:.17g}" for v in pt]
            fh.write(",".join(row) + "\n")


def export_orbit_csv(model: OrbitModel, times: Sequence[int], path, agent: Sequence[int] | int = 0) -> None:
    """Predicted orbit of one agent: rows (t, y_1..y_d)."""
    g = model.report.g
    idx = agent if isinstance(agent, int) else g.index_of(agent)
    cols = ["t"] + [f"y_{i + 1}" for i in range(model.d)]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(cols) + "\n")
        for t in times:
            y = model.predict(int(t))[idx]
            fh.write(",".join([str(int(t))] + [f"{v:.17g}" for v in y]) + "\n")


def export_error_csv(times: np.ndarray, errs: np.ndarray, path) -> None:
    """Rows (t, rel_error)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("t,rel_error\n")
        for t, e in zip(times, errs):
            fh.write(f"{int(t)},{e:.17g}\n")


__all__ = [
    "REALNESS_TOL",
    "PHASE_RESOLUTION",
    "SAMPLE_POINT_CAP",
    "fourier_transform",
    "inverse_fourier_transform",
    "EllipseTerm",
    "attractor_dimension",
    "OrbitModel",
    "AttractorSample",
    "sample_attractor",
    "error_series",
    "fit_error_slope",
    "export_attractor_csv",
    "export_orbit_csv",
    "export_error_csv",
]
