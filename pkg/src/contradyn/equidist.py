"""Equidistribution diagnostics for the rotation phases of an orbit.

A quasi-periodic limiting orbit visits phases p_k = k alpha mod 1 on the
s-torus, s = |vartheta|, alpha_i = theta_i / n.  How uniformly the orbit
fills its attractor is quantified by the extreme box discrepancy

    D(S_t) = sup_B | #{k <= t : p_k in B} / t  -  vol(B) |,

the sup running over all axis-parallel boxes with open or closed sides.
Three engines compute or estimate it:

* s = 1: exact, two linear sweeps over the sorted points (closed
  intervals for overfull boxes, open intervals plus walls for underfull).
* s = 2: exact sup over the family of boxes whose sides sit at data
  coordinates (just below or just above) or walls.  That family contains
  the true maximizers, so the result is exact whenever every distinct
  coordinate fits in the cut budget; otherwise cuts are subsampled to
  quantiles and the value is a lower approximation, labeled cut-family.
* s >= 3: randomized corner sampling, a labeled lower estimate.

The Erdos-Turan-Koksma inequality bounds the same quantity from above:

    D(S_t) <= 2 s^2 3^{s+1} ( 1/L + sum_{0 < ||l||_inf <= L}
              (1 / r(l)) | (1/t) sum_{k<=t} gamma_l^k | ),

gamma_l = e^{2 pi i <l, alpha>}, r(l) = prod max(1, |l_i|).  The inner
geometric sums collapse to |sin(pi beta t)| / (t |sin(pi beta)|) with
beta = <l, alpha>; resonant vectors (gamma_l = 1, beta integral) make the
average 1 and are flagged, since they signal rational dependence and a
plateauing discrepancy.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigError
from .lattice import ConvolutionSet, GroupParams
from .spectrum import SpectrumReport, full_spectrum, regularity

# Side nudge distinguishing open from closed cuts; also the measure error
# ceiling of the cut-family engine (a few ulps, far below all tolerances).
_SIDE_EPS = 1e-12
# |<l, alpha> - nearest integer| below this counts as resonant.
RESONANT_TOL = 1e-12
DEFAULT_CUT_BUDGET = 512
DEFAULT_SAMPLE_BOXES = 50_000


def rotation_vector(report: SpectrumReport) -> np.ndarray:
    """alpha = vartheta / n for a computed spectrum."""
    if not report.vartheta:
        raise ConfigError("spectrum has no positive rotation numbers")
    return np.asarray(report.vartheta, dtype=float) / report.g.n


def rotation_angle(report: SpectrumReport):
    """Rotation number alpha = theta / n of the subdominant modes.

    None when every subdominant eigenvalue is real, a float when there is
    a single positive rotation angle, and a tuple when there are several.
    """
    if not report.vartheta:
        return None
    alphas = tuple(th / report.g.n for th in report.vartheta)
    return alphas[0] if len(alphas) == 1 else alphas


def speed_log_lower_bound(report: SpectrumReport) -> float:
    """log of the universal floor (1-p)/n * (1/(2N))^N on alpha.

    Evaluated in log space because (1/(2N))^N underflows for every
    nontrivial torus.  Asserts that each rotation number of the report
    clears the floor, which a correct spectrum always does.
    """
    if not report.vartheta:
        raise ConfigError("no rotation angles to bound")
    N = report.g.size
    log_bound = math.log1p(-report.p) - math.log(report.g.n) - N * math.log(2 * N)
    min_alpha = min(report.vartheta) / report.g.n
    assert math.log(min_alpha) >= log_bound
    return log_bound


@dataclass(frozen=True)
class ScanPoint:
    """One grid point of a rotation-number scan."""

    p: float
    alpha: float
    regular: bool


def monotonicity_scan(
    g: GroupParams, conv: ConvolutionSet, p_grid: Sequence[float]
) -> list[ScanPoint]:
    """Rotation number of one subdominant mode across a p grid.

    The subdominant set can switch families as p moves, so the scan fixes
    the tracked mode once, from the spectrum at the largest grid p, and
    follows that eigenvalue's angle downward.  Each eigenvalue is
    continuous in p, which makes the tracked alpha comparable across the
    grid; points where p sits on an excluded crossing are flagged as
    irregular and skipped by monotonicity checks.
    """
    grid = sorted(float(p) for p in p_grid)
    if not grid:
        raise ConfigError("empty p grid")
    top = full_spectrum(g, conv, grid[-1])
    mode = None
    for i, j in top.W_groups():
        th = float(top.theta[i])
        if 0.0 < th < g.n * 0.5:
            mode = i if th > 0 else j
            break
    if mode is None:
        raise ConfigError("subdominant modes at max p are all real")
    point = g.point_at(mode)
    out = []
    for p in grid:
        rep = full_spectrum(g, conv, p)
        alpha = abs(rep.theta_at(point)) / g.n
        verdict = regularity(g, conv, p)
        out.append(ScanPoint(p=p, alpha=alpha, regular=verdict.is_regular))
    return out


def phase_sequence(alpha: Sequence[float], t: int) -> np.ndarray:
    """Phases k * alpha mod 1 for k = 1..t, shape (t, s)."""
    a = np.atleast_1d(np.asarray(alpha, dtype=float))
    if t < 1:
        raise ConfigError("need t >= 1")
    k = np.arange(1, t + 1, dtype=float)[:, None]
    return (k * a[None, :]) % 1.0


@dataclass(frozen=True)
class DiscrepancyEstimate:
    """Discrepancy value plus how trustworthy it is.

    method is "exact" (true sup), "cut-family" (exact over a subsampled
    box family, a lower approximation), or "sampled" (randomized lower
    estimate).
    """

    value: float
    method: str

    def __float__(self) -> float:
        return self.value


def _exact_1d(x: np.ndarray) -> float:
    t = x.size
    xs = np.sort(x)
    idx = np.arange(t, dtype=float)
    # overfull: closed [x_i, x_j], value (j - i + 1)/t - (x_j - x_i)
    P = (idx + 1.0) / t - xs
    Q = xs - idx / t
    over = float(np.max(P + np.maximum.accumulate(Q)))
    # underfull: open (x_i, x_j) with wall sentinels at 0 and 1,
    # value (x_j - x_i) - (j - i - 1)/t over the extended sequence
    ext = np.concatenate([[0.0], xs, [1.0]])
    j = np.arange(t + 2, dtype=float)
    R = ext - (j - 1.0) / t
    S = j / t - ext
    Smax = np.maximum.accumulate(S)
    under = float(np.max(R[1:] + Smax[:-1]))
    return max(over, under, 0.0)


def _cut_positions(coords: np.ndarray, budget: int) -> tuple[np.ndarray, bool]:
    u = np.unique(coords)
    exact = u.size <= budget
    if not exact:
        sel = np.unique(np.linspace(0, u.size - 1, budget).round().astype(int))
        u = u[sel]
    cuts = np.unique(np.concatenate([[0.0, 1.0], u, np.minimum(u + _SIDE_EPS, 1.0)]))
    return cuts, exact


def _family_2d(pts: np.ndarray, budget: int) -> tuple[float, bool]:
    t = pts.shape[0]
    cx, exact_x = _cut_positions(pts[:, 0], budget)
    cy, exact_y = _cut_positions(pts[:, 1], budget)
    ix = np.searchsorted(cx, pts[:, 0], side="right") - 1
    iy = np.searchsorted(cy, pts[:, 1], side="right") - 1
    H = np.zeros((cy.size - 1, cx.size - 1))
    np.add.at(H, (iy, ix), 1.0)
    # padded 2-D prefix: counts in rows < yb, cols < xc
    P = np.zeros((cy.size, cx.size))
    P[1:, 1:] = np.cumsum(np.cumsum(H, axis=0), axis=1)
    best = 0.0
    for ya in range(cy.size - 1):
        dy = cy[ya + 1:] - cy[ya]
        A = (P[ya + 1:] - P[ya]) / t - dy[:, None] * cx[None, :]
        runmin = np.minimum.accumulate(A, axis=1)
        over = float(np.max(A[:, 1:] - runmin[:, :-1]))
        runmax = np.maximum.accumulate(A, axis=1)
        under = float(np.max(runmax[:, :-1] - A[:, 1:]))
        if over > best:
            best = over
        if under > best:
            best = under
    return max(best, 0.0), exact_x and exact_y


def _sampled_nd(pts: np.ndarray, boxes: int, seed: int) -> float:
    t, s = pts.shape
    rng = np.random.Generator(np.random.PCG64(seed))
    vals = [np.unique(np.concatenate([[0.0, 1.0], np.unique(pts[:, ax])])) for ax in range(s)]
    best = 0.0
    chunk = max(1, int(2e7) // max(t * s, 1))
    done = 0
    while done < boxes:
        b = min(chunk, boxes - done)
        lo = np.empty((b, s))
        hi = np.empty((b, s))
        for ax in range(s):
            picks = vals[ax][rng.integers(0, vals[ax].size, size=(b, 2))]
            lo[:, ax] = picks.min(axis=1)
            hi[:, ax] = picks.max(axis=1)
        closed_lo = rng.integers(0, 2, size=(b, s)).astype(bool)
        closed_hi = rng.integers(0, 2, size=(b, s)).astype(bool)
        a_eff = np.where(closed_lo, lo - _SIDE_EPS, lo + _SIDE_EPS)
        b_eff = np.where(closed_hi, hi + _SIDE_EPS, hi - _SIDE_EPS)
        inside = np.ones((b, t), dtype=bool)
        for ax in range(s):
            inside &= (pts[None, :, ax] > a_eff[:, ax, None]) & (pts[None, :, ax] < b_eff[:, ax, None])
        counts = inside.sum(axis=1) / t
        vol = np.prod(np.clip(hi - lo, 0.0, None), axis=1)
        cand = float(np.max(np.abs(counts - vol)))
        if cand > best:
            best = cand
        done += b
    return best


def empirical_discrepancy(
    points: np.ndarray,
    cut_budget: int = DEFAULT_CUT_BUDGET,
    sample_boxes: int = DEFAULT_SAMPLE_BOXES,
    seed: int = 0,
) -> DiscrepancyEstimate:
    """Extreme box discrepancy of a point set in [0, 1)^s."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.ndim != 2 or pts.shape[0] < 1:
        raise ConfigError("points must be a (t, s) array")
    if np.any(pts < 0.0) or np.any(pts >= 1.0 + 1e-12):
        raise ConfigError("points must lie in [0, 1)")
    s = pts.shape[1]
    if s == 1:
        return DiscrepancyEstimate(_exact_1d(pts[:, 0]), "exact")
    if s == 2:
        value, exact = _family_2d(pts, cut_budget)
        return DiscrepancyEstimate(value, "exact" if exact else "cut-family")
    return DiscrepancyEstimate(_sampled_nd(pts, sample_boxes, seed), "sampled")


# ---------------------------------------------------------------------------
# Erdos-Turan-Koksma machinery


def _lattice_vectors(s: int, L: int) -> np.ndarray:
    if L < 1:
        raise ConfigError("need L >= 1")
    axes = [np.arange(-L, L + 1)] * s
    mesh = np.meshgrid(*axes, indexing="ij")
    ells = np.stack([a.ravel() for a in mesh], axis=1)
    return ells[np.any(ells != 0, axis=1)]


def etk_constant(s: int) -> float:
    return 2.0 * s * s * 3.0 ** (s + 1)


@dataclass
class EtkBound:
    """One evaluation of the ETK upper bound."""

    value: float
    t: int
    L: int
    resonant: tuple[tuple[int, ...], ...]


def etk_bound(alpha: Sequence[float], t: int, L: int) -> EtkBound:
    """Upper bound on D(S_t) with frequency cutoff L.

    The character averages are evaluated in closed form; resonant l
    (integer <l, alpha>) contribute the worst-case average 1 and are
    reported so callers can detect rational dependence.
    """
    a = np.atleast_1d(np.asarray(alpha, dtype=float))
    s = a.size
    if t < 1:
        raise ConfigError("need t >= 1")
    ells = _lattice_vectors(s, L)
    beta = ells @ a
    frac = beta - np.round(beta)
    res_mask = np.abs(frac) < RESONANT_TOL
    avg = np.empty(beta.size)
    avg[res_mask] = 1.0
    nb = frac[~res_mask]
    num = np.abs(np.sin(np.pi * ((beta[~res_mask] * t) % 1.0)))
    den = t * np.abs(np.sin(np.pi * nb))
    avg[~res_mask] = num / den
    r = np.prod(np.maximum(1, np.abs(ells)), axis=1)
    total = etk_constant(s) * (1.0 / L + float(np.sum(avg / r)))
    resonant = tuple(tuple(int(c) for c in ells[k]) for k in np.nonzero(res_mask)[0])
    return EtkBound(value=float(total), t=t, L=L, resonant=resonant)


@dataclass
class EtkPlan:
    """Cutoff and horizon that force the ETK bound below delta."""

    delta: float
    L: int
    t_min: int
    resonant: tuple[tuple[int, ...], ...]


def etk_parameters(alpha: Sequence[float], delta: float, L_cap: int = 100_000) -> EtkPlan:
    """Choose L and a horizon with etk_bound <= delta for all t >= t_min.

    L = ceil(2 C / delta) kills the 1/L term at delta / (2 C); the tail
    sum is then forced below the same budget using
    |(1/t) sum gamma^k| <= 2 / (t |1 - gamma_l|).  Resonant vectors make
    delta unreachable and are reported instead of silently ignored.
    """
    a = np.atleast_1d(np.asarray(alpha, dtype=float))
    s = a.size
    if delta <= 0:
        raise ConfigError("need delta > 0")
    C = etk_constant(s)
    L = math.ceil(2.0 * C / delta)
    if L > L_cap:
        raise ConfigError(f"delta={delta} needs L={L} beyond cap {L_cap}")
    ells = _lattice_vectors(s, L)
    beta = ells @ a
    frac = beta - np.round(beta)
    res_mask = np.abs(frac) < RESONANT_TOL
    r = np.prod(np.maximum(1, np.abs(ells)), axis=1)
    inv_gap = 1.0 / (2.0 * np.abs(np.sin(np.pi * frac[~res_mask])))
    tail = float(np.sum(2.0 * inv_gap / r[~res_mask]))
    t_min = max(1, math.ceil(2.0 * C * tail / delta))
    resonant = tuple(tuple(int(c) for c in ells[k]) for k in np.nonzero(res_mask)[0])
    return EtkPlan(delta=delta, L=L, t_min=t_min, resonant=resonant)


@dataclass(frozen=True)
class Relation:
    """Integer relation <l, alpha> = l0 found within tolerance."""

    ell: tuple[int, ...]
    ell0: int
    residual: float


def dependence_scan(alpha: Sequence[float], L_max: int, tol: float = 1e-9) -> list[Relation]:
    """Search 0 < ||l||_inf <= L_max for integer relations in alpha.

    Only lexicographically positive l are reported (each relation once,
    not with its negation).
    """
    a = np.atleast_1d(np.asarray(alpha, dtype=float))
    ells = _lattice_vectors(a.size, L_max)
    # first nonzero coordinate positive
    lead = ells[np.arange(ells.shape[0]), np.argmax(ells != 0, axis=1)]
    ells = ells[lead > 0]
    beta = ells @ a
    near = np.round(beta)
    resid = beta - near
    hits = np.nonzero(np.abs(resid) < tol)[0]
    rels = [
        Relation(tuple(int(c) for c in ells[k]), int(near[k]), float(resid[k]))
        for k in hits
    ]
    rels.sort(key=lambda r: (max(abs(c) for c in r.ell), r.ell))
    return rels


# ---------------------------------------------------------------------------
# tables and exports


def discrepancy_table(
    alpha: Sequence[float],
    ts: Iterable[int],
    L: int = 32,
    cut_budget: int = DEFAULT_CUT_BUDGET,
) -> list[dict]:
    """Empirical discrepancy and ETK bound at each horizon."""
    rows = []
    for t in ts:
        pts = phase_sequence(alpha, int(t))
        emp = empirical_discrepancy(pts, cut_budget=cut_budget)
        bound = etk_bound(alpha, int(t), L)
        rows.append(
            {
                "t": int(t),
                "empirical_D": emp.value,
                "method": emp.method,
                "etk_bound": bound.value,
                "L": L,
            }
        )
    return rows


def export_discrepancy_csv(rows: list[dict], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("t,empirical_D,etk_bound,L\n")
        for r in rows:
            fh.write(f"{r['t']},{r['empirical_D']:.17g},{r['etk_bound']:.17g},{r['L']}\n")


def export_dependence_json(alpha: Sequence[float], L_max: int, tol: float, path) -> None:
    rels = dependence_scan(alpha, L_max, tol)
    payload = {
        "alpha": [float(x) for x in np.atleast_1d(alpha)],
        "L_max": int(L_max),
        "tol": float(tol),
        "relations": [
            {"ell": list(r.ell), "ell0": r.ell0, "residual": r.residual} for r in rels
        ],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


__all__ = [
    "RESONANT_TOL",
    "DEFAULT_CUT_BUDGET",
    "DEFAULT_SAMPLE_BOXES",
    "rotation_vector",
    "rotation_angle",
    "speed_log_lower_bound",
    "ScanPoint",
    "monotonicity_scan",
    "phase_sequence",
    "DiscrepancyEstimate",
    "empirical_discrepancy",
    "etk_constant",
    "EtkBound",
    "etk_bound",
    "EtkPlan",
    "etk_parameters",
    "Relation",
    "dependence_scan",
    "discrepancy_table",
    "export_discrepancy_csv",
    "export_dependence_json",
]
