"""Killing-field fluxes through meridians of the invariant cylinders.

The flux of a Killing field k through a meridian is homologically
invariant for a minimal immersion, linear in the conserved label tau on
diagonal directions of su(n), and zero on every off-diagonal direction.
Quadrature is product Gauss-Jacobi over the sphere factors, calibrated
so the exact quadratic sphere averages hold to 1e-12.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gamma as gamma_fn
from scipy.special import roots_jacobi

from ..twisted_curve import TwistParam, TwistTrajectory, solve_w

__all__ = [
    "SuBasisElement", "TorqueReport", "sphere_volume", "sphere_quadrature",
    "su_matrix", "t_generator", "diagonal_basis_element", "torque",
    "torque_closed_form", "su_basis",
]


def sphere_volume(m: int) -> float:
    """Volume (m-dimensional measure) of the unit sphere S^m."""
    return 2.0 * math.pi ** ((m + 1) / 2.0) / gamma_fn((m + 1) / 2.0)


@lru_cache(maxsize=None)
def sphere_quadrature(m: int, order: int = 24) -> tuple[np.ndarray, np.ndarray]:
    """Nodes (N x (m+1)) and weights integrating polynomials on S^m exactly.

    Polar layers use Gauss-Jacobi rules in u = cos(theta) with weight
    (1-u^2)^((m-i-1)/2), absorbing the sine factors of the volume element
    exactly; the azimuthal circle uses the uniform (trigonometrically
    exact) rule.
    """
    if m == 0:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    if m == 1:
        th = 2.0 * math.pi * np.arange(order) / order
        return (np.stack([np.cos(th), np.sin(th)], axis=1),
                np.full(order, 2.0 * math.pi / order))
    a = (m - 2) / 2.0
    u, wu = roots_jacobi(order // 2 + 4, a, a)
    sub_pts, sub_wts = sphere_quadrature(m - 1, order)
    pts = []
    wts = []
    for ui, wi in zip(u, wu):
        s = math.sqrt(max(1.0 - ui * ui, 0.0))
        for pt, w in zip(sub_pts, sub_wts):
            pts.append(np.concatenate([[ui], s * pt]))
            wts.append(wi * w)
    return np.array(pts), np.array(wts)


@dataclass(frozen=True)
class SuBasisElement:
    """A direction in su(n): traceless diagonal, rotation, or i*symmetric."""

    kind: str                              # 'diagonal' | 'rotation' | 'symmetric'
    entries: tuple | None = None           # diagonal entries (imaginary parts)
    indices: tuple[int, int] | None = None

    def __post_init__(self):
        if self.kind == "diagonal":
            if self.entries is None:
                raise ValueError("diagonal element needs entries")
            if abs(sum(self.entries)) > 1e-12:
                raise ValueError("diagonal entries must sum to zero (traceless)")
        elif self.kind in ("rotation", "symmetric"):
            if self.indices is None or self.indices[0] == self.indices[1]:
                raise ValueError(f"{self.kind} element needs distinct indices")
        else:
            raise ValueError(f"unknown kind {self.kind!r}")


def su_matrix(element: SuBasisElement, n: int) -> np.ndarray:
    """The complex n x n matrix of the basis element."""
    K = np.zeros((n, n), dtype=complex)
    if element.kind == "diagonal":
        if len(element.entries) != n:
            raise ValueError("diagonal length must equal n")
        np.fill_diagonal(K, 1j * np.asarray(element.entries, dtype=float))
    elif element.kind == "rotation":
        i, j = element.indices
        K[j, i] = 1.0
        K[i, j] = -1.0
    else:
        i, j = element.indices
        K[j, i] = 1j
        K[i, j] = 1j
    return K


def t_generator(pair) -> SuBasisElement:
    """Generator of the diagonal rotation family: i diag(1/p,...,-1/q,...)."""
    return SuBasisElement(kind="diagonal",
                          entries=(1.0 / pair.p,) * pair.p + (-1.0 / pair.q,) * pair.q)


def diagonal_basis_element(entries) -> SuBasisElement:
    return SuBasisElement(kind="diagonal", entries=tuple(entries))


def su_basis(n: int) -> list[SuBasisElement]:
    """A full basis of su(n): n-1 diagonal plus all R_ij and i S_ij."""
    out = []
    for i in range(n - 1):
        e = [0.0] * n
        e[i], e[i + 1] = 1.0, -1.0
        out.append(SuBasisElement(kind="diagonal", entries=tuple(e)))
    for i in range(n):
        for j in range(i + 1, n):
            out.append(SuBasisElement(kind="rotation", indices=(i, j)))
            out.append(SuBasisElement(kind="symmetric", indices=(i, j)))
    return out


@dataclass(frozen=True)
class TorqueReport:
    """Numeric vs closed-form meridian flux of one su(n) direction."""

    basis: SuBasisElement
    meridian_t: float
    numeric: float
    closed_form: float
    abs_error: float


def torque_closed_form(param: TwistParam, element: SuBasisElement) -> float:
    """Flux predicted by the invariant-theory formula.

    Diagonal i diag(lam, mu): 2 tau (mean lam - mean mu) Vol Vol for
    p > 1 and 2 tau (lam - mean mu) Vol(S^(n-2)) for p = 1; zero on
    off-diagonal directions.
    """
    pair, tau = param.pair, param.tau
    p, q, n = pair.p, pair.q, pair.n
    if element.kind != "diagonal":
        return 0.0
    lam = element.entries[:p]
    mu = element.entries[p:]
    mean_gap = sum(lam) / p - sum(mu) / q
    if p == 1:
        return 2.0 * tau * mean_gap * sphere_volume(n - 2)
    return 2.0 * tau * mean_gap * sphere_volume(p - 1) * sphere_volume(q - 1)


@lru_cache(maxsize=None)
def _meridian_nodes(p: int, q: int, order: int):
    """Stacked unit-sphere node blocks (sigma1 | sigma2) with product weights."""
    n = p + q
    if p == 1:
        pts, wts = sphere_quadrature(n - 2, order)
        ones = np.ones((len(wts), 1))
        return np.hstack([ones, pts]), wts, np.array([0] * 1 + [1] * (n - 1))
    pts1, wts1 = sphere_quadrature(p - 1, order)
    pts2, wts2 = sphere_quadrature(q - 1, order)
    N1, N2 = len(wts1), len(wts2)
    blocks = np.hstack([np.repeat(pts1, N2, axis=0), np.tile(pts2, (N1, 1))])
    wts = np.repeat(wts1, N2) * np.tile(wts2, N1)
    return blocks, wts, np.array([0] * p + [1] * q)


def torque(param: TwistParam, element: SuBasisElement, meridian_t: float = 0.0,
           traj: TwistTrajectory | None = None, order: int = 24) -> TorqueReport:
    """Numeric k-flux through the meridian at parameter time meridian_t.

    Integrates (K X . dX/dt / |dX/dt|) against the induced meridian
    volume |w1|^(p-1) |w2|^(q-1) dv dv by product sphere quadrature.
    """
    pair = param.pair
    p, q, n = pair.p, pair.q, pair.n
    if traj is None:
        span = (min(0.0, meridian_t) - 1e-6, max(0.0, meridian_t) + 1e-6)
        traj = solve_w(param, span)
    w1, w2 = traj.w(meridian_t)
    d1 = w1.conjugate() ** (p - 1) * w2.conjugate() ** q
    d2 = -(w1.conjugate() ** p) * w2.conjugate() ** (q - 1)
    K = su_matrix(element, n)
    sigma, wts, block = _meridian_nodes(p, q, order)
    factors = np.where(block == 0, w1, w2)
    dfactors = np.where(block == 0, d1, d2)
    X = sigma * factors                 # (N, n) complex meridian points
    dX = sigma * dfactors
    KX = X @ K.T
    pairing = np.sum(KX.real * dX.real + KX.imag * dX.imag, axis=1)
    speed = np.sqrt(np.sum(dX.real**2 + dX.imag**2, axis=1))
    density = abs(w1) ** (p - 1) * abs(w2) ** (q - 1)
    total = float(np.sum(wts * pairing / speed) * density)
    closed = torque_closed_form(param, element)
    return TorqueReport(basis=element, meridian_t=float(meridian_t),
                        numeric=total, closed_form=float(closed),
                        abs_error=float(abs(total - closed)))
