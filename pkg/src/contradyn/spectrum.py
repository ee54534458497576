"""Closed-form spectrum of the contrarian averaging operator.

The update operator F acts on states x: V -> R^d by

    (F x)(v) = p * x(v) + (1 - p) / |C| * sum_{c in C} x(v + c).

F is a convolution on (Z/nZ)^m, so the characters psi_u(v) = omega^{<u,v>},
omega = exp(2 pi i / n), are a full eigenbasis with eigenvalues

    lambda_u = p + (1 - p) / |C| * sum_{c in C} omega^{<u,c>}.

This module evaluates that formula on the whole grid, extracts the
subdominant modulus lambda, the set W of eigenvalue indices achieving it,
their rotation numbers theta in (-n/2, n/2], the spectral gap ratio mu,
and the regularity verdict (whether the current p sits on a modulus
crossing between two eigenvalue families).

Tolerances used for tie detection are module constants and are pinned by
the test suite; change them there first.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigError, InvalidModelError
from .lattice import ConvolutionSet, GroupParams, Point

# Relative tolerance for "equal modulus" when forming W and vartheta.
EPS_EQ = 1e-9
# Absolute tolerance below which an imaginary part is treated as zero, so
# negative-real eigenvalues land at theta = n/2 instead of -n/2 + rounding.
REAL_SNAP = 1e-12
# Absolute tolerance for "p sits on an excluded crossing value".
EPS_REG = 1e-6
# Denominator floor in the crossing formula; below this the two families
# keep equal moduli for every p (conjugate-tied), which is not a crossing.
_DEN_FLOOR = 1e-12


def _check_p(p: float) -> float:
    p = float(p)
    if not 0.0 <= p < 1.0:
        raise ConfigError(f"need 0 <= p < 1, got p={p}")
    return p


def _check_pair(g: GroupParams, conv: ConvolutionSet) -> None:
    if conv.n != g.n or conv.m != g.m:
        raise ConfigError("neighbor set does not match group parameters")


def character_sum_grid(g: GroupParams, conv: ConvolutionSet) -> np.ndarray:
    """Grid of s_u = (1/|C|) sum_c omega^{<u,c>}, shape (n,)*m, complex."""
    _check_pair(g, conv)
    n, m = g.n, g.m
    axis_vals = np.arange(n, dtype=np.float64)
    acc = np.zeros(g.shape, dtype=np.complex128)
    for c in conv.offsets:
        phase = np.zeros(g.shape, dtype=np.float64)
        for ax, coord in enumerate(c):
            shape = [1] * m
            shape[ax] = n
            phase = phase + (axis_vals * coord).reshape(shape)
        acc = acc + np.exp(2j * np.pi * phase / n)
    return acc / len(conv)


def eigenvalue_grid(g: GroupParams, conv: ConvolutionSet, p: float) -> np.ndarray:
    """All eigenvalues lambda_u on the (n,)*m grid in lexicographic layout."""
    p = _check_p(p)
    return p + (1.0 - p) * character_sum_grid(g, conv)


def eigenvalue(g: GroupParams, conv: ConvolutionSet, p: float, u: Sequence[int]) -> complex:
    """Single eigenvalue lambda_u from the closed form."""
    p = _check_p(p)
    _check_pair(g, conv)
    uu = g.reduce(u)
    acc = 0j
    for c in conv.offsets:
        k = sum(a * b for a, b in zip(uu, c)) % g.n
        acc += np.exp(2j * np.pi * k / g.n)
    return complex(p + (1.0 - p) * acc / len(conv))


def theta_values(values: np.ndarray, n: int) -> np.ndarray:
    """Rotation numbers theta in (-n/2, n/2] with lambda = |lambda| omega^theta.

    Eigenvalues within REAL_SNAP of the real axis are snapped first; the
    boundary value n/2 is therefore produced exactly for negative reals.
    """
    re = values.real
    im = np.where(np.abs(values.imag) <= REAL_SNAP, 0.0, values.imag)
    theta = np.empty(values.shape, dtype=np.float64)
    real_mask = im == 0.0
    theta[real_mask & (re >= 0.0)] = 0.0
    theta[real_mask & (re < 0.0)] = n * 0.5
    cm = ~real_mask
    theta[cm] = n * np.arctan2(im[cm], re[cm]) / (2.0 * np.pi)
    return theta


@dataclass
class SpectrumReport:
    """Spectrum of F plus the derived subdominant structure.

    values, moduli, theta are length-N arrays in lexicographic agent
    order.  W is the set of indices u with |lambda_u| = lambda (the
    largest modulus strictly below 1), stored as sorted points.  vartheta
    collects the distinct rotation numbers of W in the open interval
    (0, n/2); 0 and n/2 belong to the constant and alternating parts of
    the limit orbit and are tracked by the bucket masks instead.
    """

    g: GroupParams
    conv: ConvolutionSet
    p: float
    values: np.ndarray
    moduli: np.ndarray
    theta: np.ndarray
    lam: float
    mu: float
    W: tuple[Point, ...]
    W_idx: np.ndarray
    vartheta: tuple[float, ...]
    unit_idx: np.ndarray
    multiplicity: dict[tuple[float, float], int]

    def value_at(self, u: Sequence[int]) -> complex:
        return complex(self.values[self.g.index_of(u)])

    def theta_at(self, u: Sequence[int]) -> float:
        return float(self.theta[self.g.index_of(u)])

    def in_W(self, u: Sequence[int]) -> bool:
        return self.g.reduce(u) in set(self.W)

    def W_groups(self) -> list[tuple[int, int]]:
        """W as conjugate pairs of flat indices (i, j) with -i = j mod n.

        Each unordered pair appears once; self-negating points (2u = 0)
        appear as (i, i).
        """
        n = self.g.n
        seen = set()
        out = []
        for i in self.W_idx:
            if int(i) in seen:
                continue
            u = self.g.point_at(int(i))
            j = self.g.index_of(tuple(-c for c in u))
            seen.add(int(i))
            seen.add(int(j))
            out.append((int(i), int(j)))
        return out


def _cluster_sorted(vals: np.ndarray, tol: float) -> list[float]:
    """Collapse a sorted 1-D array into cluster means with gap > tol."""
    out: list[float] = []
    start = 0
    for k in range(1, len(vals) + 1):
        if k == len(vals) or vals[k] - vals[k - 1] > tol:
            out.append(float(np.mean(vals[start:k])))
            start = k
    return out


def full_spectrum(g: GroupParams, conv: ConvolutionSet, p: float) -> SpectrumReport:
    """Spectrum plus subdominant structure (lambda, W, vartheta, mu).

    Unit-modulus eigenvalues (consensus mode; extra ones can appear when
    p = 0 or when the offsets do not generate the torus) are excluded
    from W.  Raises InvalidModelError when no eigenvalue has modulus
    strictly below 1, since then no subdominant scale exists.
    """
    p = _check_p(p)
    values = eigenvalue_grid(g, conv, p).ravel()
    moduli = np.abs(values)
    theta = theta_values(values, g.n)

    unit_mask = moduli >= 1.0 - EPS_EQ
    rest = moduli[~unit_mask]
    if rest.size == 0:
        raise InvalidModelError("every eigenvalue has unit modulus; no subdominant scale")
    lam = float(rest.max())
    W_mask = (~unit_mask) & (moduli >= lam * (1.0 - EPS_EQ))
    W_idx = np.nonzero(W_mask)[0]
    W = tuple(sorted(g.point_at(int(i)) for i in W_idx))

    below = moduli[(~unit_mask) & (moduli < lam * (1.0 - EPS_EQ))]
    mu = float(below.max() / lam) if below.size else 0.0

    th_W = theta[W_idx]
    pos = np.sort(th_W[(th_W > EPS_EQ * g.n) & (th_W < g.n * 0.5)])
    vartheta = tuple(_cluster_sorted(pos, EPS_EQ * g.n))

    mult: dict[tuple[float, float], int] = {}
    for z in values:
        key = (round(float(z.real), 9), round(float(z.imag), 9))
        mult[key] = mult.get(key, 0) + 1

    return SpectrumReport(
        g=g,
        conv=conv,
        p=p,
        values=values,
        moduli=moduli,
        theta=theta,
        lam=lam,
        mu=mu,
        W=W,
        W_idx=W_idx,
        vartheta=vartheta,
        unit_idx=np.nonzero(unit_mask)[0],
        multiplicity=mult,
    )


def perron_lower_bound(g: GroupParams, p: float) -> float:
    """(pN - 1)/(N - 1), a floor on the subdominant modulus."""
    N = g.size
    return (p * N - 1.0) / (N - 1.0)


@dataclass(frozen=True)
class RegularityVerdict:
    """Whether p avoids every modulus-crossing value.

    excluded_p keeps only crossings inside the admissible open interval
    (1/N, 1); distance measures to the nearest crossing anywhere, which
    is what decides regularity (a tie at p = 0 is still a tie).
    """

    is_regular: bool
    excluded_p: tuple[float, ...]
    nearest_excluded: Optional[float]
    distance: float


def crossing_values(g: GroupParams, conv: ConvolutionSet) -> np.ndarray:
    """All finite p where two eigenvalue families swap modulus order.

    For normalized character sums a = s_u, b = s_v the moduli of
    p + (1-p) a and p + (1-p) b coincide at

        p_{u,v} = (|a|^2 - |b|^2) / (2 Re(b - a) + |a|^2 - |b|^2).

    Pairs with denominator ~ 0 are skipped: those moduli agree for all p
    (conjugates and other exact symmetries), which is multiplicity, not a
    crossing.  O(N^2) pairs, evaluated in row blocks.
    """
    s = character_sum_grid(g, conv).ravel()
    N = s.size
    out: list[np.ndarray] = []
    block = max(1, int(4e6) // max(N, 1))
    for i0 in range(0, N, block):
        a = s[i0:i0 + block]
        # strict upper triangle: j > i
        num = (np.abs(a)[:, None] ** 2) - (np.abs(s)[None, :] ** 2)
        den = 2.0 * (s.real[None, :] - a.real[:, None]) + num
        jj = np.arange(N)[None, :]
        ii = np.arange(i0, i0 + a.size)[:, None]
        mask = (jj > ii) & (np.abs(den) > _DEN_FLOOR)
        if mask.any():
            out.append((num[mask] / den[mask]).ravel())
    if not out:
        return np.empty(0, dtype=np.float64)
    return np.concatenate(out)


def regularity(g: GroupParams, conv: ConvolutionSet, p: float) -> RegularityVerdict:
    """Verdict on whether p is regular for (g, C), at tolerance EPS_REG."""
    p = _check_p(p)
    cross = crossing_values(g, conv)
    cross = cross[np.isfinite(cross)]
    if cross.size == 0:
        return RegularityVerdict(True, (), None, math.inf)
    dist = float(np.min(np.abs(cross - p)))
    lo = 1.0 / g.size
    in_range = np.sort(cross[(cross > lo) & (cross < 1.0)])
    kept = tuple(_cluster_sorted(in_range, 1e-9)) if in_range.size else ()
    nearest = min(kept, key=lambda q: abs(q - p)) if kept else None
    return RegularityVerdict(dist > EPS_REG, kept, nearest, dist)


# ---------------------------------------------------------------------------
# exports


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def export_spectrum_csv(report: SpectrumReport, path) -> None:
    """Write one row per eigenvalue in lexicographic order.

    Columns: v_1..v_m, re, im, modulus, theta, in_W (0/1).
    """
    g = report.g
    wset = set(int(i) for i in report.W_idx)
    cols = [f"v_{k + 1}" for k in range(g.m)] + ["re", "im", "modulus", "theta", "in_W"]
    verts = g.vertices()
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(cols) + "\n")
        for i in range(g.size):
            z = report.values[i]
            row = [str(int(c)) for c in verts[i]]
            row += [_fmt(z.real), _fmt(z.imag), _fmt(report.moduli[i]),
                    _fmt(report.theta[i]), str(1 if i in wset else 0)]
            fh.write(",".join(row) + "\n")


def summary_dict(report: SpectrumReport, regular: Optional[bool] = None) -> dict:
    return {
        "n": report.g.n,
        "m": report.g.m,
        "C": [list(c) for c in report.conv.offsets],
        "p": report.p,
        "lambda": report.lam,
        "mu": report.mu,
        "W": [list(u) for u in report.W],
        "vartheta": [float(t) for t in report.vartheta],
        "regular": regular,
    }


def export_spectrum_json(report: SpectrumReport, path, regular: Optional[bool] = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(summary_dict(report, regular), fh, indent=2, sort_keys=True)
        fh.write("\n")


__all__ = [
    "EPS_EQ",
    "EPS_REG",
    "REAL_SNAP",
    "character_sum_grid",
    "eigenvalue_grid",
    "eigenvalue",
    "theta_values",
    "SpectrumReport",
    "full_spectrum",
    "perron_lower_bound",
    "RegularityVerdict",
    "crossing_values",
    "regularity",
    "export_spectrum_csv",
    "export_spectrum_json",
    "summary_dict",
]
