"""Waists, bulges and the equatorial spheres that bulges approximate.

Between consecutive minima of a sphere-factor radius the cylinder bulges
out; as tau -> 0 each bulge image hugs an equatorial special Legendrian
sphere obtained from the standard one by the accumulated diagonal
rotation (and, on odd bulges for p > 1, one antiholomorphic reflection).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..periods import PeriodData, period_ode
from ..twisted_curve import TwistParam, solve_w
from .symmetry import reflection_matrix, ttilde

__all__ = [
    "Waist", "Bulge", "MarkedSphere", "waists_and_bulges",
    "approximating_spheres", "sphere_distance", "bulge_sphere_distance",
]


@dataclass(frozen=True)
class Waist:
    """Meridian where one sphere-factor radius is minimal."""

    index: int
    t: float
    kind: int      # 1: first factor minimal (p > 1 only); 2: second factor


@dataclass(frozen=True)
class Bulge:
    """Component between the waists W[k] and W[k+1]."""

    index: int
    t_lo: float
    t_hi: float


@dataclass(frozen=True)
class MarkedSphere:
    """Equatorial sphere with marked set, positioned by a real-orthogonal frame.

    ``frame`` is the 2n x 2n real matrix of the (anti)unitary positioning
    map in stacked coordinates (Re z; Im z); ``antiholomorphic`` records
    whether it conjugates.  Index 0 is the standard real equator with the
    identity frame.
    """

    index: int
    frame: np.ndarray
    marked_set: dict
    antiholomorphic: bool = False


def _real_rep(U: np.ndarray, conjugates: bool) -> np.ndarray:
    """Real 2n x 2n matrix of z -> U z or z -> U conj(z) in stacked coords."""
    A, B = U.real, U.imag
    if not conjugates:
        return np.block([[A, -B], [B, A]])
    return np.block([[A, B], [B, -A]])


def waists_and_bulges(param: TwistParam, window,
                      data: PeriodData | None = None) -> tuple[list[Waist], list[Bulge]]:
    """All waists and bulges whose parameter times meet the window.

    p = 1: waists at (2k-1) p_tau, all of kind 2.  p > 1: kind-1 waists
    at 2l p_tau - p_minus and kind-2 waists at 2l p_tau + p_plus,
    alternating.
    """
    pair = param.pair
    if data is None:
        data = period_ode(param)
    t_lo, t_hi = float(window[0]), float(window[1])
    ptau = data.p_tau
    waists: list[Waist] = []
    bulges: list[Bulge] = []
    if pair.p == 1:
        k_lo = math.floor((t_lo / ptau + 1.0) / 2.0) - 1
        k_hi = math.ceil((t_hi / ptau + 1.0) / 2.0) + 1
        for k in range(k_lo, k_hi + 1):
            t = (2 * k - 1) * ptau
            if t_lo - 2 * ptau <= t <= t_hi + 2 * ptau:
                waists.append(Waist(index=k, t=t, kind=2))
        for k in range(k_lo, k_hi):
            lo, hi = (2 * k - 1) * ptau, (2 * k + 1) * ptau
            if hi >= t_lo and lo <= t_hi:
                bulges.append(Bulge(index=k, t_lo=lo, t_hi=hi))
    else:
        l_lo = math.floor(t_lo / (2 * ptau)) - 1
        l_hi = math.ceil(t_hi / (2 * ptau)) + 1
        for l in range(l_lo, l_hi + 1):
            t1 = 2 * l * ptau - data.p_minus
            t2 = 2 * l * ptau + data.p_plus
            if t_lo - 2 * ptau <= t1 <= t_hi + 2 * ptau:
                waists.append(Waist(index=2 * l, t=t1, kind=1))
            if t_lo - 2 * ptau <= t2 <= t_hi + 2 * ptau:
                waists.append(Waist(index=2 * l + 1, t=t2, kind=2))
        waists.sort(key=lambda w: w.t)
        for a, b in zip(waists, waists[1:]):
            if b.t >= t_lo and a.t <= t_hi:
                bulges.append(Bulge(index=a.index, t_lo=a.t, t_hi=b.t))
    return waists, bulges


def _marked_set(pair, frame: np.ndarray) -> dict:
    n = pair.n
    e1 = np.zeros(2 * n)
    e1[0] = 1.0
    if pair.p == 1:
        plus = frame @ e1
        return {"points": (plus[:n] + 1j * plus[n:],
                           -(plus[:n] + 1j * plus[n:]))}
    return {"subspheres": (f"frame . (S^{pair.p - 1} x 0)",
                           f"frame . (0 x S^{pair.q - 1})")}


def approximating_spheres(param: TwistParam, k_range,
                          data: PeriodData | None = None) -> list[MarkedSphere]:
    """The marked equatorial spheres approximating the requested bulges.

    p = 1: frame(k) = Ttilde(2 k pthat).  p > 1: even bulges get
    Ttilde(2 l pthat), odd bulges get Ttilde(2 l pthat) composed with
    the antiholomorphic reflection across the kind-2 waist.
    """
    pair = param.pair
    if data is None:
        data = period_ode(param)
    out = []
    for k in k_range:
        if pair.p == 1:
            U = ttilde(pair, 2.0 * k * data.pthat)
            frame = _real_rep(U, conjugates=False)
            anti = False
        else:
            l, odd = divmod(k, 2)
            U = ttilde(pair, 2.0 * l * data.pthat)
            if odd:
                small = reflection_matrix(param, data, "+")
                D = np.diag([small[0, 0]] * pair.p + [small[1, 1]] * pair.q)
                frame = _real_rep(U @ D, conjugates=True)
                anti = True
            else:
                frame = _real_rep(U, conjugates=False)
                anti = False
        if not np.allclose(frame @ frame.T, np.eye(2 * pair.n), atol=1e-12):
            raise AssertionError(f"frame for bulge {k} is not orthogonal")
        out.append(MarkedSphere(index=k, frame=frame,
                                marked_set=_marked_set(pair, frame),
                                antiholomorphic=anti))
    return out


def sphere_distance(sphere: MarkedSphere, z: np.ndarray) -> float:
    """Euclidean distance from z in C^n to the positioned real equator."""
    n = len(z)
    stacked = np.concatenate([np.real(z), np.imag(z)])
    u = sphere.frame.T @ stacked
    re, im = u[:n], u[n:]
    return float(math.sqrt(np.dot(im, im) + (np.linalg.norm(re) - 1.0) ** 2))


def bulge_sphere_distance(param: TwistParam, k: int, b: float,
                          data: PeriodData | None = None,
                          t_points: int = 40, mer_points: int = 24) -> float:
    """max distance from the k-th almost spherical region to its sphere.

    The region is the core [-b, b] of the k-th bulge (translated, and
    reflected for odd k when p > 1); the distance is sampled over a
    parameter grid of the immersion.
    """
    pair = param.pair
    if data is None:
        data = period_ode(param)
    sphere = approximating_spheres(param, [k], data)[0]
    if pair.p == 1:
        center = 2.0 * k * data.p_tau
        ts = np.linspace(center - b, center + b, t_points)
    else:
        l, odd = divmod(k, 2)
        if odd:
            ts = np.linspace(2 * l * data.p_tau + 2 * data.p_plus - b,
                             2 * l * data.p_tau + 2 * data.p_plus + b, t_points)
        else:
            ts = np.linspace(2 * l * data.p_tau - b, 2 * l * data.p_tau + b, t_points)
    traj = solve_w(param, (min(ts.min(), 0.0) - 1e-6, max(ts.max(), 0.0) + 1e-6))
    angles = np.linspace(0.0, 2.0 * math.pi, mer_points, endpoint=False)
    worst = 0.0
    for t in ts:
        w1, w2 = traj.w(t)
        for th in angles:
            if pair.p == 1:
                sigma = np.zeros(pair.n - 1)
                sigma[0], sigma[1] = math.cos(th), math.sin(th)
                z = np.concatenate([[w1], w2 * sigma])
            else:
                s1 = np.zeros(pair.p)
                s2 = np.zeros(pair.q)
                s1[0] = 1.0
                s2[0], s2[-1] = math.cos(th), math.sin(th)
                z = np.concatenate([w1 * s1, w2 * s2])
            worst = max(worst, sphere_distance(sphere, z))
    return worst
